//! Closed-form transformation matrices `M` with `Ψ = M F*(Ψ̂)`, relating the
//! nodal basis on a physical cell to the pulled-back reference basis, and a
//! brute-force oracle computing the same matrix from node evaluations.
//!
//! Elements whose nodes are not affine-equivalent are handled through a
//! factorization `V = E V^c D` with `M = Vᵀ`: `D` completes the physical
//! nodes into a set that is closed under push-forward, `V^c` is the
//! block-diagonal change of variables on the completed set and `E` extracts
//! the reference nodes.

mod univariate;

pub use univariate::{
    derive_univariate_rule, quintic_endpoint_data, quintic_l4_moment_weights,
    quintic_midpoint_weights, EdgeRuleWeights, IntervalFunctional,
};

use crate::error::{Error, Result};
use crate::geometry::{inv2, mat2_mul, transpose2, Cell};
use crate::linalg::{invert, DenseMatrix};
use crate::reference_element::{build_nodal_basis, vandermonde, ElementFamily, FiniteElementDef, PrimeBasis};

/// The three factors of `V = E V^c D`.
#[derive(Debug, Clone)]
pub struct Factors {
    pub e: DenseMatrix,
    pub vc: DenseMatrix,
    pub d: DenseMatrix,
}

/// `M` for one cell, with the factors it was built from when available.
#[derive(Debug, Clone)]
pub struct TransformMatrix {
    pub m: DenseMatrix,
    pub factors: Option<Factors>,
}

impl TransformMatrix {
    fn from_v(v: DenseMatrix) -> Self {
        Self {
            m: v.transpose(),
            factors: None,
        }
    }

    fn from_factors(e: DenseMatrix, vc: DenseMatrix, d: DenseMatrix) -> Self {
        let v = e.matmul(&vc).matmul(&d);
        Self {
            m: v.transpose(),
            factors: Some(Factors { e, vc, d }),
        }
    }

    /// `V = Mᵀ`.
    pub fn v(&self) -> DenseMatrix {
        self.m.transpose()
    }

    pub fn dimension(&self) -> usize {
        self.m.rows()
    }
}

/// Second-derivative transfer `Θ(J)`: maps the Hessian triple
/// `(ĝ_x̂x̂, ĝ_x̂ŷ, ĝ_ŷŷ)` at `F(x)` to `(u_xx, u_xy, u_yy)` for `u = ĝ ∘ F`,
/// where `J = ∂x̂/∂x`.
pub fn theta_matrix(j: &[[f64; 2]; 2]) -> DenseMatrix {
    let (a, b, c, d) = (j[0][0], j[0][1], j[1][0], j[1][1]);
    DenseMatrix::from_rows(&[
        [a * a, 2.0 * a * c, c * c],
        [a * b, a * d + b * c, c * d],
        [b * b, 2.0 * b * d, d * d],
    ])
}

/// Edge block `B^i = Ĝ_i J^{-T} G_iᵀ` relating the pushed-forward reference
/// normal/tangent derivative pair to the physical one.
pub fn b_matrix(edge: usize, cell: &Cell, reference: &Cell, jinv: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let g_hat = reference.frames[edge].frame_matrix();
    let g = cell.frames[edge].frame_matrix();
    mat2_mul(&mat2_mul(&g_hat, &transpose2(jinv)), &transpose2(&g))
}

/// `J⁻¹` of the map from `cell` onto `reference`.
fn inverse_jacobian(cell: &Cell, reference: &Cell) -> Result<[[f64; 2]; 2]> {
    inv2(&cell.map_to(reference)?.jacobian())
}

/// Lagrange elements are affine-equivalent: `M = I`.
pub fn transform_lagrange(r: usize) -> TransformMatrix {
    TransformMatrix::from_v(DenseMatrix::identity(ElementFamily::Lagrange(r).dimension()))
}

/// Cubic Hermite: `V = diag(1, J^{-T}, 1, J^{-T}, 1, J^{-T}, 1)`.
pub fn transform_hermite(cell: &Cell, reference: &Cell) -> Result<TransformMatrix> {
    let jinv = inverse_jacobian(cell, reference)?;
    let jit = transpose2(&jinv);
    let mut v = DenseMatrix::zeros(10, 10);
    for k in 0..3 {
        let o = 3 * k;
        v[(o, o)] = 1.0;
        v.set_block(o + 1, o + 1, &DenseMatrix::from_rows(&jit));
    }
    v[(9, 9)] = 1.0;
    Ok(TransformMatrix::from_v(v))
}

/// Morley through the completed node set
/// `(δ_v1, δ_v2, δ_v3, ∂n_1, ∂t_1, ∂n_2, ∂t_2, ∂n_3, ∂t_3)` at edge midpoints.
pub fn transform_morley(cell: &Cell, reference: &Cell) -> Result<TransformMatrix> {
    let jinv = inverse_jacobian(cell, reference)?;
    let mut e = DenseMatrix::zeros(6, 9);
    let mut vc = DenseMatrix::zeros(9, 9);
    let mut d = DenseMatrix::zeros(9, 6);
    for k in 0..3 {
        e[(k, k)] = 1.0;
        vc[(k, k)] = 1.0;
        d[(k, k)] = 1.0;
    }
    for (i, frame) in cell.frames.iter().enumerate() {
        let r = 3 + 2 * i;
        e[(3 + i, r)] = 1.0;
        vc.set_block(r, r, &DenseMatrix::from_rows(&b_matrix(i, cell, reference, &jinv)));
        d[(r, 3 + i)] = 1.0;
        // midpoint tangential derivative of a quadratic
        d[(r + 1, frame.start)] = -1.0 / frame.length;
        d[(r + 1, frame.end)] = 1.0 / frame.length;
    }
    Ok(TransformMatrix::from_factors(e, vc, d))
}

/// Morley `V` written out entry by entry.
pub fn morley_explicit_v(cell: &Cell, reference: &Cell) -> Result<DenseMatrix> {
    let jinv = inverse_jacobian(cell, reference)?;
    let mut v = DenseMatrix::identity(6);
    for (i, frame) in cell.frames.iter().enumerate() {
        let b = b_matrix(i, cell, reference, &jinv);
        v[(3 + i, 3 + i)] = b[0][0];
        v[(3 + i, frame.start)] = -b[0][1] / frame.length;
        v[(3 + i, frame.end)] = b[0][1] / frame.length;
    }
    Ok(v)
}

/// Vertex blocks `(1, J^{-T}, Θ(J^{-1}))` shared by Argyris and Bell.
fn quintic_vertex_blocks(vc: &mut DenseMatrix, jinv: &[[f64; 2]; 2]) {
    let jit = DenseMatrix::from_rows(&transpose2(jinv));
    let theta_inv = theta_matrix(jinv);
    for k in 0..3 {
        let o = 6 * k;
        vc[(o, o)] = 1.0;
        vc.set_block(o + 1, o + 1, &jit);
        vc.set_block(o + 3, o + 3, &theta_inv);
    }
}

/// Writes `w.value (u_b − u_a) + w.first t·(∇u_a + ∇u_b) + w.second τ·(H_b − H_a)`
/// into row `row` of `d`, where vertex `k` owns columns `6k..6k+6`.
fn tangential_rule_row(d: &mut DenseMatrix, row: usize, frame: &crate::geometry::EdgeFrame, w: EdgeRuleWeights) {
    let t = frame.tangent;
    let tau = frame.tau();
    for (vertex, sign) in [(frame.start, -1.0), (frame.end, 1.0)] {
        let o = 6 * vertex;
        d[(row, o)] = sign * w.value;
        d[(row, o + 1)] = w.first * t[0];
        d[(row, o + 2)] = w.first * t[1];
        for k in 0..3 {
            d[(row, o + 3 + k)] = sign * w.second * tau[k];
        }
    }
}

/// Shared construction for Argyris (midpoint normal derivatives) and the
/// extended Bell element (normal `L⁴` moments).
fn quintic_transform(cell: &Cell, reference: &Cell, bell: bool) -> Result<TransformMatrix> {
    let jinv = inverse_jacobian(cell, reference)?;
    let mut e = DenseMatrix::zeros(21, 24);
    let mut vc = DenseMatrix::zeros(24, 24);
    let mut d = DenseMatrix::zeros(24, 21);
    for k in 0..18 {
        e[(k, k)] = 1.0;
        d[(k, k)] = 1.0;
    }
    quintic_vertex_blocks(&mut vc, &jinv);
    for (i, frame) in cell.frames.iter().enumerate() {
        let r = 18 + 2 * i;
        e[(18 + i, r)] = 1.0;
        let b = b_matrix(i, cell, reference, &jinv);
        // moments pick up the ratio of edge lengths from the arc-length measure
        let s = if bell {
            reference.frames[i].length / frame.length
        } else {
            1.0
        };
        vc.set_block(r, r, &DenseMatrix::from_rows(&b).scaled(s));
        d[(r, 18 + i)] = 1.0;
        let w = if bell {
            quintic_l4_moment_weights(frame.length)
        } else {
            quintic_midpoint_weights(frame.length)
        };
        tangential_rule_row(&mut d, r + 1, frame, w);
    }
    Ok(TransformMatrix::from_factors(e, vc, d))
}

pub fn transform_argyris(cell: &Cell, reference: &Cell) -> Result<TransformMatrix> {
    quintic_transform(cell, reference, false)
}

/// Transform of the extended Bell element `(P_5, [N; L])`, 21×21. The
/// physical Bell basis is given by its first 18 rows.
pub fn transform_bell(cell: &Cell, reference: &Cell) -> Result<TransformMatrix> {
    quintic_transform(cell, reference, true)
}

/// Closed-form transform for `family` (the extended one for Bell).
pub fn transform_for(family: ElementFamily, cell: &Cell, reference: &Cell) -> Result<TransformMatrix> {
    match family {
        ElementFamily::Lagrange(r) => Ok(transform_lagrange(r)),
        ElementFamily::Hermite => transform_hermite(cell, reference),
        ElementFamily::Morley => transform_morley(cell, reference),
        ElementFamily::Argyris => transform_argyris(cell, reference),
        ElementFamily::Bell => transform_bell(cell, reference),
    }
}

/// The `ν × ν̃` block of `M` producing the physical basis from the extended
/// pulled-back reference basis.
pub fn local_transform(family: ElementFamily, cell: &Cell, reference: &Cell) -> Result<DenseMatrix> {
    let t = transform_for(family, cell, reference)?;
    Ok(if family == ElementFamily::Bell {
        t.m.row_slice(0, family.dimension())
    } else {
        t.m
    })
}

/// `B_ij = n_i(ψ̂_j ∘ F)` for the (extended) elements of `family` on `cell`
/// and `reference`.
pub fn oracle_b_matrix(family: ElementFamily, cell: &Cell, reference: &Cell) -> Result<DenseMatrix> {
    let physical = FiniteElementDef::on_cell(family, cell).extended();
    let ref_el = FiniteElementDef::on_cell(family, reference).extended();
    let ref_basis = build_nodal_basis(&ref_el, &PrimeBasis::orthonormal(family.degree()))?;
    let map = cell.map_to(reference)?;
    let j = map.jacobian();
    Ok(vandermonde(&physical.nodes, &|x| {
        ref_basis.jets(map.apply(x)).iter().map(|jet| jet.pull_back(&j)).collect()
    }))
}

/// Transform computed without any closed form: `M = B^{-T}`.
pub fn oracle_transform(family: ElementFamily, cell: &Cell, reference: &Cell) -> Result<TransformMatrix> {
    let b = oracle_b_matrix(family, cell, reference)?;
    let v = invert(&b).map_err(|_| Error::SingularB)?;
    Ok(TransformMatrix::from_v(v))
}
