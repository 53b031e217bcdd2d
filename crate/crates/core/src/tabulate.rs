//! Reference tabulation, pushing tables to a physical cell, local element
//! matrices and the congruence and coefficient transforms.

use crate::error::{Error, Result};
use crate::geometry::{AffineMap, Cell, Point};
use crate::linalg::DenseMatrix;
use crate::quadrature::TriangleRule;
use crate::reference_element::{reference_nodal_basis, ElementFamily, FiniteElementDef, NodalBasis};
use crate::transform::local_transform;

/// Basis values and derivatives at quadrature points. Each matrix is `ν × Q`;
/// gradients are stored per component (x, y) and second derivatives as
/// (xx, xy, yy).
#[derive(Debug, Clone)]
pub struct BasisTable {
    pub values: DenseMatrix,
    pub gradients: [DenseMatrix; 2],
    pub second: [DenseMatrix; 3],
    pub max_deriv: usize,
}

impl BasisTable {
    pub fn dimension(&self) -> usize {
        self.values.rows()
    }

    pub fn num_points(&self) -> usize {
        self.values.cols()
    }
}

/// Tabulates the nodal basis of a reference element (its extension, for
/// constrained elements, so that all `ν̃` functions are available).
pub fn tabulate_reference(el: &FiniteElementDef, rule: &TriangleRule, max_deriv: usize) -> Result<BasisTable> {
    if max_deriv > 2 {
        return Err(Error::InvalidInput(format!("derivatives of order {max_deriv} are not tabulated")));
    }
    let basis = reference_nodal_basis(&el.extended())?;
    Ok(tabulate_basis(&basis, &rule.points, max_deriv))
}

/// Tabulates the reference basis for `family` (extended for Bell).
pub fn tabulate_family(family: ElementFamily, rule: &TriangleRule, max_deriv: usize) -> Result<BasisTable> {
    tabulate_reference(&FiniteElementDef::reference(family), rule, max_deriv)
}

pub fn tabulate_basis(basis: &NodalBasis, points: &[Point], max_deriv: usize) -> BasisTable {
    let n = basis.dimension();
    let q = points.len();
    let mut values = DenseMatrix::zeros(n, q);
    let mut gradients = [DenseMatrix::zeros(n, q), DenseMatrix::zeros(n, q)];
    let mut second = [DenseMatrix::zeros(n, q), DenseMatrix::zeros(n, q), DenseMatrix::zeros(n, q)];
    for (k, &p) in points.iter().enumerate() {
        for (i, jet) in basis.jets(p).iter().enumerate() {
            values[(i, k)] = jet.value;
            if max_deriv >= 1 {
                gradients[0][(i, k)] = jet.grad[0];
                gradients[1][(i, k)] = jet.grad[1];
            }
            if max_deriv >= 2 {
                for (s, h) in second.iter_mut().zip(jet.hess) {
                    s[(i, k)] = h;
                }
            }
        }
    }
    BasisTable {
        values,
        gradients,
        second,
        max_deriv,
    }
}

/// `ψ_i(ξ_q) = Σ_k M_ik Ψ̂_kq`.
pub fn push_values(m: &DenseMatrix, table: &BasisTable) -> DenseMatrix {
    m.matmul(&table.values)
}

/// Applies `Jᵀ` to gradient components: `out_a = Σ_c J_ca g_c`.
fn chain_gradients(j: &[[f64; 2]; 2], g: &[DenseMatrix; 2]) -> [DenseMatrix; 2] {
    let comb = |a: usize| g[0].scaled(j[0][a]).add(&g[1].scaled(j[1][a]));
    [comb(0), comb(1)]
}

/// Applies `Θ(J)` to Hessian components.
fn chain_second(j: &[[f64; 2]; 2], h: &[DenseMatrix; 3]) -> [DenseMatrix; 3] {
    let theta = crate::transform::theta_matrix(j);
    let comb = |r: usize| {
        h[0].scaled(theta[(r, 0)])
            .add(&h[1].scaled(theta[(r, 1)]))
            .add(&h[2].scaled(theta[(r, 2)]))
    };
    [comb(0), comb(1), comb(2)]
}

/// Physical gradients: contraction with `M`, then the chain rule with `Jᵀ`.
pub fn push_gradients(m: &DenseMatrix, j: &[[f64; 2]; 2], table: &BasisTable) -> [DenseMatrix; 2] {
    let mg = [m.matmul(&table.gradients[0]), m.matmul(&table.gradients[1])];
    chain_gradients(j, &mg)
}

/// Physical gradients with the chain rule applied before `M`.
pub fn push_gradients_chain_first(m: &DenseMatrix, j: &[[f64; 2]; 2], table: &BasisTable) -> [DenseMatrix; 2] {
    let g = chain_gradients(j, &table.gradients);
    [m.matmul(&g[0]), m.matmul(&g[1])]
}

/// Physical second derivatives `(xx, xy, yy)`: `M` then `Jᵀ Ĥ J`.
pub fn push_second_derivs(m: &DenseMatrix, j: &[[f64; 2]; 2], table: &BasisTable) -> [DenseMatrix; 3] {
    let mh = [
        m.matmul(&table.second[0]),
        m.matmul(&table.second[1]),
        m.matmul(&table.second[2]),
    ];
    chain_second(j, &mh)
}

/// Physical second derivatives with the chain rule applied before `M`.
pub fn push_second_derivs_chain_first(m: &DenseMatrix, j: &[[f64; 2]; 2], table: &BasisTable) -> [DenseMatrix; 3] {
    let h = chain_second(j, &table.second);
    [m.matmul(&h[0]), m.matmul(&h[1]), m.matmul(&h[2])]
}

/// Pushes a whole table through `M` and the map `F`.
pub fn push_table(m: &DenseMatrix, map: &AffineMap, table: &BasisTable) -> BasisTable {
    let j = map.jacobian();
    BasisTable {
        values: push_values(m, table),
        gradients: if table.max_deriv >= 1 {
            push_gradients(m, &j, table)
        } else {
            [DenseMatrix::zeros(m.rows(), table.num_points()), DenseMatrix::zeros(m.rows(), table.num_points())]
        },
        second: if table.max_deriv >= 2 {
            push_second_derivs(m, &j, table)
        } else {
            let z = DenseMatrix::zeros(m.rows(), table.num_points());
            [z.clone(), z.clone(), z]
        },
        max_deriv: table.max_deriv,
    }
}

/// Physical quadrature points `F⁻¹(ξ̂_q)` and weights `ŵ_q / |det J|`.
pub fn physical_rule(map: &AffineMap, rule: &TriangleRule) -> Result<(Vec<Point>, Vec<f64>)> {
    let scale = 1.0 / map.det().abs();
    let points = rule
        .points
        .iter()
        .map(|&p| map.inverse_apply(p))
        .collect::<Result<Vec<_>>>()?;
    Ok((points, rule.weights.iter().map(|w| w * scale).collect()))
}

/// Bilinear forms available for local matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Form {
    Mass,
    Stiffness,
    /// Plate bending form with the given Poisson ratio.
    Plate(f64),
}

impl Form {
    /// Derivative order needed in tables.
    pub fn derivative_order(&self) -> usize {
        match self {
            Form::Mass => 0,
            Form::Stiffness => 1,
            Form::Plate(_) => 2,
        }
    }

    /// Smallest quadrature exactness integrating the form exactly for
    /// polynomials of the given degree on affine cells.
    pub fn required_degree(&self, degree: usize) -> usize {
        2 * degree.saturating_sub(self.derivative_order())
    }
}

/// Integrates `form` on a physical table with physical weights.
pub fn integrate_form(form: Form, table: &BasisTable, weights: &[f64]) -> DenseMatrix {
    let n = table.dimension();
    let mut a = DenseMatrix::zeros(n, n);
    for (q, &w) in weights.iter().enumerate() {
        for i in 0..n {
            for k in i..n {
                let v = match form {
                    Form::Mass => table.values[(i, q)] * table.values[(k, q)],
                    Form::Stiffness => {
                        table.gradients[0][(i, q)] * table.gradients[0][(k, q)]
                            + table.gradients[1][(i, q)] * table.gradients[1][(k, q)]
                    }
                    Form::Plate(nu) => {
                        let s = &table.second;
                        let (uxx, uxy, uyy) = (s[0][(i, q)], s[1][(i, q)], s[2][(i, q)]);
                        let (vxx, vxy, vyy) = (s[0][(k, q)], s[1][(k, q)], s[2][(k, q)]);
                        (uxx + uyy) * (vxx + vyy)
                            - (1.0 - nu) * (2.0 * uxx * vyy + 2.0 * uyy * vxx - 4.0 * uxy * vxy)
                    }
                };
                a[(i, k)] += w * v;
            }
        }
    }
    for i in 0..n {
        for k in 0..i {
            a[(i, k)] = a[(k, i)];
        }
    }
    a
}

/// Local matrix of `form` for the physical basis on `cell`, assembled from
/// the pushed table. `table` must be the reference table of `family` on the
/// reference cell at the points of `rule`.
pub fn local_matrix(
    family: ElementFamily,
    cell: &Cell,
    form: Form,
    rule: &TriangleRule,
    table: &BasisTable,
) -> Result<DenseMatrix> {
    let reference = Cell::reference();
    let map = cell.map_to(&reference)?;
    let m = local_transform(family, cell, &reference)?;
    let (_, weights) = physical_rule(&map, rule)?;
    Ok(integrate_form(form, &push_table(&m, &map, table), &weights))
}

/// `Ã`: the local matrix of the pulled-back reference basis (`M = I`).
pub fn pulled_back_matrix(cell: &Cell, form: Form, rule: &TriangleRule, table: &BasisTable) -> Result<DenseMatrix> {
    let map = cell.map_to(&Cell::reference())?;
    let (_, weights) = physical_rule(&map, rule)?;
    let id = DenseMatrix::identity(table.dimension());
    Ok(integrate_form(form, &push_table(&id, &map, table), &weights))
}

/// `M Ã Mᵀ`.
pub fn congruence_transform(m: &DenseMatrix, a_tilde: &DenseMatrix) -> DenseMatrix {
    m.matmul(a_tilde).matmul(&m.transpose())
}

/// Coefficients with respect to the pulled-back reference basis: `Σ_j c_j ψ_j
/// = Σ_k (Mᵀc)_k F*(ψ̂_k)`, i.e. `V c` when `M` is square.
pub fn transform_coefficients(m: &DenseMatrix, c: &[f64]) -> Vec<f64> {
    m.tr_mul_vec(c)
}
