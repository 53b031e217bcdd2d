//! Triangles, the affine map `F : K → K̂` (physical to reference) and edge
//! frames.
//!
//! Edge `i` is the edge opposite local vertex `i`. Its tangent runs from the
//! endpoint with the lower global vertex number to the one with the higher,
//! and its normal is the tangent rotated by `R = [[0, 1], [-1, 0]]`, so two
//! cells sharing an edge agree on both vectors.

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, DenseMatrix};

pub type Point = [f64; 2];

/// Local vertex pairs for edges 0, 1, 2 (edge `i` is opposite vertex `i`),
/// listed in increasing local order.
pub const EDGE_VERTICES: [[usize; 2]; 3] = [[1, 2], [0, 2], [0, 1]];

/// Unit right triangle `(0,0), (1,0), (0,1)`.
pub const REFERENCE_VERTICES: [Point; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

const DEGENERACY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle {
    pub vertices: [Point; 3],
    /// Global vertex numbers; these fix the edge orientations.
    pub global: [usize; 3],
}

impl Triangle {
    /// A triangle whose global numbering equals its local numbering.
    pub fn new(vertices: [Point; 3]) -> Result<Self> {
        Self::with_global(vertices, [0, 1, 2])
    }

    pub fn with_global(vertices: [Point; 3], global: [usize; 3]) -> Result<Self> {
        let t = Self { vertices, global };
        let area2 = t.twice_signed_area();
        let diam = t.diameter();
        if !(area2.abs() > DEGENERACY_TOL * diam * diam) {
            return Err(Error::DegenerateTriangle(area2));
        }
        if global[0] == global[1] || global[1] == global[2] || global[0] == global[2] {
            return Err(Error::InvalidInput(format!("repeated global vertex in {global:?}")));
        }
        Ok(t)
    }

    pub fn reference() -> Self {
        Self {
            vertices: REFERENCE_VERTICES,
            global: [0, 1, 2],
        }
    }

    pub fn twice_signed_area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
    }

    pub fn area(&self) -> f64 {
        0.5 * self.twice_signed_area().abs()
    }

    /// Longest edge length.
    pub fn diameter(&self) -> f64 {
        EDGE_VERTICES
            .iter()
            .map(|&[a, b]| dist(self.vertices[a], self.vertices[b]))
            .fold(0.0, f64::max)
    }

    pub fn centroid(&self) -> Point {
        let [a, b, c] = self.vertices;
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    /// Point with barycentric coordinates `l` (weights of v1, v2, v3).
    pub fn barycentric_point(&self, l: [f64; 3]) -> Point {
        let mut p = [0.0; 2];
        for (w, v) in l.iter().zip(&self.vertices) {
            p[0] += w * v[0];
            p[1] += w * v[1];
        }
        p
    }
}

/// `x̂ = F(x) = A x + b`, mapping a physical cell onto a reference cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    /// Jacobian `J = ∂x̂/∂x`.
    pub a: [[f64; 2]; 2],
    pub b: [f64; 2],
}

impl AffineMap {
    pub fn identity() -> Self {
        Self {
            a: [[1.0, 0.0], [0.0, 1.0]],
            b: [0.0, 0.0],
        }
    }

    pub fn apply(&self, x: Point) -> Point {
        [
            self.a[0][0] * x[0] + self.a[0][1] * x[1] + self.b[0],
            self.a[1][0] * x[0] + self.a[1][1] * x[1] + self.b[1],
        ]
    }

    pub fn jacobian(&self) -> [[f64; 2]; 2] {
        self.a
    }

    pub fn det(&self) -> f64 {
        det2(&self.a)
    }

    /// `J⁻¹ = ∂x/∂x̂`.
    pub fn inverse_jacobian(&self) -> Result<[[f64; 2]; 2]> {
        inv2(&self.a)
    }

    /// `F⁻¹(x̂)`, the reference-to-physical direction used for quadrature points.
    pub fn inverse_apply(&self, xh: Point) -> Result<Point> {
        let inv = self.inverse_jacobian()?;
        let d = [xh[0] - self.b[0], xh[1] - self.b[1]];
        Ok(mat2_vec(&inv, d))
    }

    /// `x ↦ F₂(F₁(x))` where `self = F₁`.
    pub fn then(&self, next: &AffineMap) -> AffineMap {
        let a = mat2_mul(&next.a, &self.a);
        let b = mat2_vec(&next.a, self.b);
        AffineMap {
            a,
            b: [b[0] + next.b[0], b[1] + next.b[1]],
        }
    }
}

/// Solves for the affine map sending each vertex of `k` to the matching vertex
/// of `k_hat` (6×6 system in the entries of `A` and `b`).
pub fn affine_map(k: &Triangle, k_hat: &Triangle) -> Result<AffineMap> {
    for t in [k, k_hat] {
        let area2 = t.twice_signed_area();
        let diam = t.diameter();
        if !(area2.abs() > DEGENERACY_TOL * diam * diam) {
            return Err(Error::DegenerateTriangle(area2));
        }
    }
    // unknowns (a00, a01, a10, a11, b0, b1)
    let mut sys = DenseMatrix::zeros(6, 6);
    let mut rhs = vec![0.0; 6];
    for i in 0..3 {
        let [x, y] = k.vertices[i];
        let [xh, yh] = k_hat.vertices[i];
        let r = 2 * i;
        sys[(r, 0)] = x;
        sys[(r, 1)] = y;
        sys[(r, 4)] = 1.0;
        rhs[r] = xh;
        sys[(r + 1, 2)] = x;
        sys[(r + 1, 3)] = y;
        sys[(r + 1, 5)] = 1.0;
        rhs[r + 1] = yh;
    }
    let s = lu_solve(&sys, &rhs).map_err(|_| Error::DegenerateTriangle(k.twice_signed_area()))?;
    Ok(AffineMap {
        a: [[s[0], s[1]], [s[2], s[3]]],
        b: [s[4], s[5]],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeFrame {
    pub tangent: [f64; 2],
    pub normal: [f64; 2],
    pub length: f64,
    pub midpoint: Point,
    /// Local vertex where the tangent starts.
    pub start: usize,
    /// Local vertex where the tangent ends.
    pub end: usize,
}

impl EdgeFrame {
    /// `G = [n t]ᵀ`, normal and tangent in the rows.
    pub fn frame_matrix(&self) -> [[f64; 2]; 2] {
        [self.normal, self.tangent]
    }

    /// `τ = ((tˣ)², 2tˣtʸ, (tʸ)²)`, so that `τ·(∂xx, ∂xy, ∂yy)` is the second
    /// tangential derivative.
    pub fn tau(&self) -> [f64; 3] {
        let [tx, ty] = self.tangent;
        [tx * tx, 2.0 * tx * ty, ty * ty]
    }
}

/// Frames of the three edges of `k`, oriented by the global vertex numbers.
pub fn edge_frames(k: &Triangle) -> Result<[EdgeFrame; 3]> {
    let area2 = k.twice_signed_area();
    let diam = k.diameter();
    if !(area2.abs() > DEGENERACY_TOL * diam * diam) {
        return Err(Error::DegenerateTriangle(area2));
    }
    let frame = |i: usize| {
        let [p, q] = EDGE_VERTICES[i];
        let (start, end) = if k.global[p] < k.global[q] { (p, q) } else { (q, p) };
        let a = k.vertices[start];
        let b = k.vertices[end];
        let length = dist(a, b);
        let tangent = [(b[0] - a[0]) / length, (b[1] - a[1]) / length];
        EdgeFrame {
            tangent,
            normal: [tangent[1], -tangent[0]],
            length,
            midpoint: [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])],
            start,
            end,
        }
    };
    Ok([frame(0), frame(1), frame(2)])
}

/// A physical cell together with its derived geometric data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub triangle: Triangle,
    pub frames: [EdgeFrame; 3],
}

impl Cell {
    pub fn new(triangle: Triangle) -> Result<Self> {
        Ok(Self {
            frames: edge_frames(&triangle)?,
            triangle,
        })
    }

    pub fn reference() -> Self {
        Self::new(Triangle::reference()).expect("reference triangle is valid")
    }

    pub fn vertices(&self) -> &[Point; 3] {
        &self.triangle.vertices
    }

    /// Map from this cell onto `target`, matching local vertices.
    pub fn map_to(&self, target: &Cell) -> Result<AffineMap> {
        affine_map(&self.triangle, &target.triangle)
    }
}

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
}

pub(crate) fn det2(a: &[[f64; 2]; 2]) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub(crate) fn inv2(a: &[[f64; 2]; 2]) -> Result<[[f64; 2]; 2]> {
    let d = det2(a);
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(d.abs() > 1e-14 * scale * scale) {
        return Err(Error::SingularJacobian);
    }
    Ok([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]])
}

pub(crate) fn transpose2(a: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub(crate) fn mat2_mul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let mut c = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub(crate) fn mat2_vec(a: &[[f64; 2]; 2], x: [f64; 2]) -> [f64; 2] {
    [a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]]
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQ2: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn reference_to_reference_is_identity() {
        let k = Triangle::reference();
        let f = affine_map(&k, &k).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(f.a[i][j], if i == j { 1.0 } else { 0.0 }, 1e-15));
            }
            assert!(close(f.b[i], 0.0, 1e-15));
        }
    }

    #[test]
    fn half_size_triangle_scales_by_two() {
        let k = Triangle::new([[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]]).unwrap();
        let f = affine_map(&k, &Triangle::reference()).unwrap();
        assert!(close(f.a[0][0], 2.0, 1e-14) && close(f.a[1][1], 2.0, 1e-14));
        assert!(close(f.a[0][1], 0.0, 1e-14) && close(f.a[1][0], 0.0, 1e-14));
        assert!(close(f.b[0], 0.0, 1e-14) && close(f.b[1], 0.0, 1e-14));
    }

    #[test]
    fn generic_map_sends_vertices_to_reference() {
        let k = Triangle::new([[0.0, 0.0], [1.5, 0.5], [0.8, 1.2]]).unwrap();
        let kh = Triangle::reference();
        let f = affine_map(&k, &kh).unwrap();
        for i in 0..3 {
            let m = f.apply(k.vertices[i]);
            assert!(close(m[0], kh.vertices[i][0], 1e-12) && close(m[1], kh.vertices[i][1], 1e-12));
            let back = f.inverse_apply(kh.vertices[i]).unwrap();
            assert!(close(back[0], k.vertices[i][0], 1e-12) && close(back[1], k.vertices[i][1], 1e-12));
        }
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let r = Triangle::new([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]);
        assert!(matches!(r, Err(Error::DegenerateTriangle(_))));
    }

    #[test]
    fn reference_frames() {
        let f = edge_frames(&Triangle::reference()).unwrap();
        // hypotenuse runs from (1,0) to (0,1)
        assert!(close(f[0].tangent[0], -SQ2, 1e-15) && close(f[0].tangent[1], SQ2, 1e-15));
        assert!(close(f[0].normal[0], SQ2, 1e-15) && close(f[0].normal[1], SQ2, 1e-15));
        assert!(close(f[0].length, 2f64.sqrt(), 1e-15));
        assert_eq!(f[1].tangent, [0.0, 1.0]);
        assert_eq!(f[1].normal, [1.0, 0.0]);
        assert_eq!(f[2].tangent, [1.0, 0.0]);
        assert_eq!(f[2].normal, [0.0, -1.0]);
    }

    #[test]
    fn frames_match_vertex_differences() {
        let k = Triangle::new([[0.0, 0.0], [1.5, 0.5], [0.8, 1.2]]).unwrap();
        let f = edge_frames(&k).unwrap();
        for (i, &[a, b]) in EDGE_VERTICES.iter().enumerate() {
            let d = [k.vertices[b][0] - k.vertices[a][0], k.vertices[b][1] - k.vertices[a][1]];
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            assert!(close(f[i].length, len, 1e-14));
            assert!(close(f[i].tangent[0], d[0] / len, 1e-14));
            assert!(close(f[i].tangent[1], d[1] / len, 1e-14));
            let n = f[i].normal;
            let t = f[i].tangent;
            assert!(close(n[0], t[1], 0.0) && close(n[1], -t[0], 0.0));
            let g = f[i].frame_matrix();
            assert!(close(det2(&g).abs(), 1.0, 1e-12));
        }
    }

    #[test]
    fn global_numbering_flips_tangent() {
        let v = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let a = edge_frames(&Triangle::with_global(v, [3, 7, 9]).unwrap()).unwrap();
        let b = edge_frames(&Triangle::with_global(v, [3, 9, 7]).unwrap()).unwrap();
        assert_eq!(a[0].tangent, [-b[0].tangent[0], -b[0].tangent[1]]);
        assert_eq!(a[0].normal, [-b[0].normal[0], -b[0].normal[1]]);
        assert_eq!((a[0].start, a[0].end), (1, 2));
        assert_eq!((b[0].start, b[0].end), (2, 1));
    }

    #[test]
    fn neighbours_agree_on_shared_edge() {
        // two cells of a square sharing the diagonal 0-3
        let p = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        let lower = Triangle::with_global([p[0], p[1], p[3]], [0, 1, 3]).unwrap();
        let upper = Triangle::with_global([p[0], p[3], p[2]], [0, 3, 2]).unwrap();
        let fl = edge_frames(&lower).unwrap();
        let fu = edge_frames(&upper).unwrap();
        // shared edge is opposite local vertex 1 in `lower` and local vertex 2 in `upper`
        assert_eq!(fl[1].tangent, fu[2].tangent);
        assert_eq!(fl[1].normal, fu[2].normal);
    }

    #[test]
    fn composition_of_maps() {
        let k = Triangle::new([[0.1, 0.2], [1.5, 0.5], [0.8, 1.2]]).unwrap();
        let k2 = Triangle::new([[2.0, 1.0], [3.0, 1.5], [2.2, 2.4]]).unwrap();
        let f1 = affine_map(&k, &k2).unwrap();
        let f2 = affine_map(&k2, &Triangle::reference()).unwrap();
        let direct = affine_map(&k, &Triangle::reference()).unwrap();
        let composed = f1.then(&f2);
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(composed.a[i][j], direct.a[i][j], 1e-12));
            }
            assert!(close(composed.b[i], direct.b[i], 1e-12));
        }
    }
}
