use crate::geometry::{EdgeFrame, Point};
use crate::quadrature::gauss_interval;

use super::polynomial::{legendre_eval, Jet, PrimeBasis};

/// Gauss points used for edge moments (exact through degree 11).
pub const EDGE_MOMENT_POINTS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirectionKind {
    Normal,
    Tangent,
}

/// A node: a linear functional acting on `C²` functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    PointEval {
        point: Point,
    },
    PointDeriv {
        point: Point,
        direction: [f64; 2],
    },
    PointSecondDeriv {
        point: Point,
        first: [f64; 2],
        second: [f64; 2],
    },
    /// `∫_γ Lⁿ(s) (d · ∇u) ds` over the segment `start → end`, with the
    /// Legendre polynomial mapped from `[-1, 1]` in the same direction.
    EdgeDerivMoment {
        edge: usize,
        degree: usize,
        kind: DirectionKind,
        start: Point,
        end: Point,
        direction: [f64; 2],
    },
}

impl Functional {
    pub fn eval(point: Point) -> Self {
        Functional::PointEval { point }
    }

    pub fn deriv(point: Point, direction: [f64; 2]) -> Self {
        Functional::PointDeriv { point, direction }
    }

    pub fn second_deriv(point: Point, first: [f64; 2], second: [f64; 2]) -> Self {
        Functional::PointSecondDeriv {
            point,
            first,
            second,
        }
    }

    /// Legendre moment of the normal or tangential derivative along `frame`.
    pub fn edge_moment(edge: usize, frame: &EdgeFrame, vertices: &[Point; 3], degree: usize, kind: DirectionKind) -> Self {
        let direction = match kind {
            DirectionKind::Normal => frame.normal,
            DirectionKind::Tangent => frame.tangent,
        };
        Functional::EdgeDerivMoment {
            edge,
            degree,
            kind,
            start: vertices[frame.start],
            end: vertices[frame.end],
            direction,
        }
    }

    /// Points at which the functional needs function jets.
    pub fn sample_points(&self) -> Vec<Point> {
        match *self {
            Functional::PointEval { point }
            | Functional::PointDeriv { point, .. }
            | Functional::PointSecondDeriv { point, .. } => vec![point],
            Functional::EdgeDerivMoment { start, end, .. } => gauss_interval(EDGE_MOMENT_POINTS)
                .points
                .iter()
                .map(|&xi| edge_point(start, end, xi))
                .collect(),
        }
    }

    /// Applies the functional to every function in a family at once;
    /// `jets(p)` returns the jets of all family members at `p`.
    pub fn apply_all(&self, jets: &dyn Fn(Point) -> Vec<Jet>) -> Vec<f64> {
        match *self {
            Functional::PointEval { point } => jets(point).iter().map(|j| j.value).collect(),
            Functional::PointDeriv { point, direction } => {
                jets(point).iter().map(|j| j.directional(direction)).collect()
            }
            Functional::PointSecondDeriv {
                point,
                first,
                second,
            } => jets(point)
                .iter()
                .map(|j| j.second_directional(first, second))
                .collect(),
            Functional::EdgeDerivMoment {
                degree,
                start,
                end,
                direction,
                ..
            } => {
                let rule = gauss_interval(EDGE_MOMENT_POINTS);
                let half_length = 0.5 * crate::geometry::dist(start, end);
                let mut out: Vec<f64> = Vec::new();
                for (&xi, &w) in rule.points.iter().zip(&rule.weights) {
                    let weight = w * half_length * legendre_eval(degree, xi);
                    let js = jets(edge_point(start, end, xi));
                    if out.is_empty() {
                        out = vec![0.0; js.len()];
                    }
                    for (o, j) in out.iter_mut().zip(&js) {
                        *o += weight * j.directional(direction);
                    }
                }
                out
            }
        }
    }

    pub fn apply(&self, f: &dyn Fn(Point) -> Jet) -> f64 {
        self.apply_all(&|p| vec![f(p)])[0]
    }

    /// Action on the polynomial `Σ_j c_j φ_j` of a prime basis.
    pub fn apply_to_polynomial(&self, coefficients: &[f64], basis: &PrimeBasis) -> f64 {
        self.apply(&|p| basis.eval(coefficients, p))
    }
}

fn edge_point(start: Point, end: Point, xi: f64) -> Point {
    let s = 0.5 * (xi + 1.0);
    [start[0] + s * (end[0] - start[0]), start[1] + s * (end[1] - start[1])]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{edge_frames, Triangle};
    use crate::reference_element::polynomial::monomial_exponents;

    #[test]
    fn point_functionals_on_simple_polynomials() {
        let basis = PrimeBasis::orthonormal(1);
        let one = basis.from_monomial_coefficients(&[1.0, 0.0, 0.0]);
        let x = basis.from_monomial_coefficients(&[0.0, 1.0, 0.0]);
        assert!((Functional::eval([0.0, 0.0]).apply_to_polynomial(&one, &basis) - 1.0).abs() < 1e-13);
        assert!((Functional::deriv([0.0, 0.0], [1.0, 0.0]).apply_to_polynomial(&x, &basis) - 1.0).abs() < 1e-13);
        assert!(Functional::deriv([0.0, 0.0], [0.0, 1.0]).apply_to_polynomial(&x, &basis).abs() < 1e-13);
    }

    /// Composite 12-panel, 5-point Gauss rule along the edge: an independent
    /// route to the normal-derivative moment.
    fn composite_moment(f: &dyn Fn(Point) -> Jet, start: Point, end: Point, dir: [f64; 2], degree: usize) -> f64 {
        let panels = 12;
        let g = gauss_interval(5);
        let len = crate::geometry::dist(start, end);
        let mut total = 0.0;
        for k in 0..panels {
            let a = -1.0 + 2.0 * k as f64 / panels as f64;
            let b = a + 2.0 / panels as f64;
            for (&x, &w) in g.points.iter().zip(&g.weights) {
                let xi = 0.5 * (a + b) + 0.5 * (b - a) * x;
                let s = 0.5 * (xi + 1.0);
                let p = [start[0] + s * (end[0] - start[0]), start[1] + s * (end[1] - start[1])];
                total += w * 0.5 * (b - a) * legendre_eval(degree, xi) * f(p).directional(dir) * 0.5 * len;
            }
        }
        total
    }

    #[test]
    fn hypotenuse_l4_moment_matches_composite_rule() {
        let tri = Triangle::reference();
        let frames = edge_frames(&tri).unwrap();
        let basis = PrimeBasis::orthonormal(5);
        // a quintic with assorted monomial coefficients
        let mono: Vec<f64> = monomial_exponents(5)
            .iter()
            .enumerate()
            .map(|(k, _)| ((k as f64) * 0.91).sin() + 0.3)
            .collect();
        let coeffs = basis.from_monomial_coefficients(&mono);
        let node = Functional::edge_moment(0, &frames[0], &tri.vertices, 4, DirectionKind::Normal);
        let got = node.apply_to_polynomial(&coeffs, &basis);
        let oracle = composite_moment(&|p| basis.eval(&coeffs, p), tri.vertices[1], tri.vertices[2], frames[0].normal, 4);
        assert!((got - oracle).abs() < 1e-12 * (1.0 + oracle.abs()), "{got} vs {oracle}");
        assert!(got.abs() > 1e-6);
    }

    #[test]
    fn l4_moment_vanishes_on_quartics_in_normal_direction() {
        // normal derivative of a quartic is cubic along the edge
        let tri = Triangle::new([[0.2, 0.1], [1.3, 0.4], [0.5, 1.1]]).unwrap();
        let frames = edge_frames(&tri).unwrap();
        let basis = PrimeBasis::orthonormal(4);
        let coeffs: Vec<f64> = (0..basis.dim()).map(|k| (k as f64 + 1.0).recip()).collect();
        for (i, f) in frames.iter().enumerate() {
            let node = Functional::edge_moment(i, f, &tri.vertices, 4, DirectionKind::Normal);
            assert!(node.apply_to_polynomial(&coeffs, &basis).abs() < 1e-12);
        }
    }
}
