//! Structured meshes of the unit square, global DOF maps, DOF scaling,
//! boundary conditions and sparse global assembly.

mod dofmap;
mod mesh;

pub use dofmap::{build_dofmap, entity_dofs, DofKind, DofMap};
pub use mesh::{build_mesh, Side, StructuredMesh};

use crate::error::{Error, Result};
use crate::geometry::{AffineMap, Cell, Point};
use crate::linalg::{DenseMatrix, SparseMatrix, TripletBuilder};
use crate::quadrature::{triangle_rule, TriangleRule};
use crate::reference_element::{reference_nodal_basis, ElementFamily, FiniteElementDef, Jet, NodalBasis};
use crate::tabulate::{congruence_transform, integrate_form, push_table, tabulate_basis, transform_coefficients, Form};
use crate::transform::local_transform;

/// Positive per-DOF node scales `s`: the scaled nodes are `s_g n_g`, so the
/// scaled basis functions are `ψ_g / s_g`. With `S = diag(s)` the scaled
/// system is `S⁻¹ A S⁻¹ ũ = S⁻¹ b` and `u = S⁻¹ ũ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector(pub Vec<f64>);

impl ScalingVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Factors `1/s_g` multiplying the basis functions.
    pub fn basis_factors(&self) -> Vec<f64> {
        self.0.iter().map(|s| 1.0 / s).collect()
    }

    /// `S⁻¹ v`: scaled load from a plain one, or plain coefficients from
    /// scaled ones.
    pub fn apply_inverse(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.0).map(|(a, s)| a / s).collect()
    }
}

/// Boundary conditions on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySpec {
    /// `u = 0`.
    Dirichlet,
    /// `u = ∂u/∂n = 0`.
    Clamped,
}

/// Per-cell geometry and transform.
#[derive(Debug, Clone)]
pub struct CellData {
    pub cell: Cell,
    pub map: AffineMap,
    /// `ν × ν̃` block of the transformation matrix.
    pub m: DenseMatrix,
}

/// A finite element space on a structured mesh.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub family: ElementFamily,
    pub mesh: StructuredMesh,
    pub dofmap: DofMap,
    pub cells: Vec<CellData>,
    /// Reference nodal basis (extended for constrained elements).
    pub basis: NodalBasis,
}

impl Discretization {
    pub fn new(family: ElementFamily, n: usize) -> Result<Self> {
        let mesh = build_mesh(n)?;
        let dofmap = build_dofmap(family, &mesh)?;
        let reference = Cell::reference();
        let cells = (0..mesh.num_cells())
            .map(|k| {
                let cell = mesh.cell(k)?;
                Ok(CellData {
                    map: cell.map_to(&reference)?,
                    m: local_transform(family, &cell, &reference)?,
                    cell,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = reference_nodal_basis(&FiniteElementDef::reference(family).extended())?;
        Ok(Self {
            family,
            mesh,
            dofmap,
            cells,
            basis,
        })
    }

    pub fn num_dofs(&self) -> usize {
        self.dofmap.num_dofs
    }

    fn rule_for(&self, degree: usize) -> Result<TriangleRule> {
        triangle_rule(degree.min(crate::quadrature::MAX_TRIANGLE_DEGREE))
    }

    /// Local matrices of `form` for every cell (congruence path).
    pub fn local_matrices(&self, form: Form) -> Result<Vec<DenseMatrix>> {
        let rule = self.rule_for(form.required_degree(self.family.degree()).max(1))?;
        let table = tabulate_basis(&self.basis, &rule.points, form.derivative_order());
        let id = DenseMatrix::identity(self.basis.dimension());
        self.cells
            .iter()
            .map(|cd| {
                let weights: Vec<f64> = rule.weights.iter().map(|w| w / cd.map.det().abs()).collect();
                let a_tilde = integrate_form(form, &push_table(&id, &cd.map, &table), &weights);
                Ok(congruence_transform(&cd.m, &a_tilde))
            })
            .collect()
    }

    /// Global matrix of `form`, optionally scaled to `S⁻¹ A S⁻¹`.
    pub fn assemble(&self, form: Form, scaling: Option<&ScalingVector>) -> Result<SparseMatrix> {
        let nu = self.family.dimension();
        let mut builder = TripletBuilder::with_capacity(self.num_dofs(), self.cells.len() * nu * nu);
        for (dofs, a) in self.dofmap.cell_dofs.iter().zip(self.local_matrices(form)?) {
            for (i, &gi) in dofs.iter().enumerate() {
                for (k, &gk) in dofs.iter().enumerate() {
                    builder.push(gi, gk, a[(i, k)]);
                }
            }
        }
        let a = builder.build();
        Ok(match scaling {
            Some(s) => a.scale_symmetric(&s.basis_factors()),
            None => a,
        })
    }

    /// `b_i = ∫ f ψ_i`, optionally scaled to `S⁻¹ b`.
    pub fn assemble_load(&self, f: &dyn Fn(Point) -> f64, degree: usize, scaling: Option<&ScalingVector>) -> Result<Vec<f64>> {
        let rule = self.rule_for(degree)?;
        let table = tabulate_basis(&self.basis, &rule.points, 0);
        let mut b = vec![0.0; self.num_dofs()];
        for (cd, dofs) in self.cells.iter().zip(&self.dofmap.cell_dofs) {
            let scale = 1.0 / cd.map.det().abs();
            let fw = rule
                .points
                .iter()
                .zip(&rule.weights)
                .map(|(&p, w)| Ok(w * scale * f(cd.map.inverse_apply(p)?)))
                .collect::<Result<Vec<_>>>()?;
            let local = cd.m.mul_vec(&table.values.mul_vec(&fw));
            for (&g, v) in dofs.iter().zip(local) {
                b[g] += v;
            }
        }
        Ok(match scaling {
            Some(s) => s.apply_inverse(&b),
            None => b,
        })
    }

    /// Node scaling: 1 for values, `h_v` for first and `h_v²` for second
    /// derivatives, `h_e` for edge normal derivatives.
    pub fn scaling(&self) -> Result<ScalingVector> {
        let hv = self.mesh.vertex_sizes()?;
        Ok(ScalingVector(
            self.dofmap
                .kinds
                .iter()
                .map(|k| match *k {
                    DofKind::VertexDx(v) | DofKind::VertexDy(v) => hv[v],
                    DofKind::VertexDxx(v) | DofKind::VertexDxy(v) | DofKind::VertexDyy(v) => hv[v] * hv[v],
                    DofKind::EdgeNormal(e) => self.mesh.edge_length(e),
                    DofKind::VertexValue(_) | DofKind::EdgePoint(_) | DofKind::CellInterior(_) => 1.0,
                })
                .collect(),
        ))
    }

    /// DOFs fixed to zero by the boundary condition.
    pub fn constrained_dofs(&self, bc: BoundarySpec) -> Vec<bool> {
        let sides: Vec<Vec<Side>> = (0..self.mesh.num_vertices()).map(|v| self.mesh.vertex_sides(v)).collect();
        let horizontal = |v: usize| sides[v].iter().any(|s| s.is_horizontal());
        let vertical = |v: usize| sides[v].iter().any(|s| !s.is_horizontal());
        self.dofmap
            .kinds
            .iter()
            .map(|k| match (*k, bc) {
                (DofKind::VertexValue(v), _) => !sides[v].is_empty(),
                (DofKind::VertexDx(v), BoundarySpec::Dirichlet) | (DofKind::VertexDxx(v), BoundarySpec::Dirichlet) => {
                    horizontal(v)
                }
                (DofKind::VertexDy(v), BoundarySpec::Dirichlet) | (DofKind::VertexDyy(v), BoundarySpec::Dirichlet) => {
                    vertical(v)
                }
                (DofKind::VertexDxy(_), BoundarySpec::Dirichlet) => false,
                (DofKind::VertexDx(v), BoundarySpec::Clamped)
                | (DofKind::VertexDy(v), BoundarySpec::Clamped)
                | (DofKind::VertexDxy(v), BoundarySpec::Clamped) => !sides[v].is_empty(),
                (DofKind::VertexDxx(v), BoundarySpec::Clamped) => horizontal(v),
                (DofKind::VertexDyy(v), BoundarySpec::Clamped) => vertical(v),
                (DofKind::EdgePoint(e), _) => self.mesh.edge_side(e).is_some(),
                (DofKind::EdgeNormal(e), BoundarySpec::Clamped) => self.mesh.edge_side(e).is_some(),
                (DofKind::EdgeNormal(_), BoundarySpec::Dirichlet) => false,
                (DofKind::CellInterior(_), _) => false,
            })
            .collect()
    }

    /// Global nodal interpolant: every global node applied to `f`.
    pub fn interpolate(&self, f: &dyn Fn(Point) -> Jet) -> Vec<f64> {
        let mut u = vec![0.0; self.num_dofs()];
        for (cd, dofs) in self.cells.iter().zip(&self.dofmap.cell_dofs) {
            let el = FiniteElementDef::on_cell(self.family, &cd.cell);
            for (node, &g) in el.nodes.iter().zip(dofs) {
                u[g] = node.apply(f);
            }
        }
        u
    }

    /// Jet of the global function with coefficients `u` restricted to cell `k`,
    /// at physical point `x`.
    pub fn evaluate(&self, u: &[f64], k: usize, x: Point) -> Jet {
        let cd = &self.cells[k];
        let local: Vec<f64> = self.dofmap.cell_dofs[k].iter().map(|&g| u[g]).collect();
        let coeffs = transform_coefficients(&cd.m, &local);
        let j = cd.map.jacobian();
        let mut out = Jet::default();
        for (c, jet) in coeffs.iter().zip(self.basis.jets(cd.map.apply(x))) {
            out.add_scaled(*c, &jet.pull_back(&j));
        }
        out
    }

    /// `‖u_h − u‖_{L²}` with a rule of the given exactness on every cell.
    pub fn l2_error(&self, u: &[f64], exact: &dyn Fn(Point) -> f64, degree: usize) -> Result<f64> {
        let rule = self.rule_for(degree)?;
        let table = tabulate_basis(&self.basis, &rule.points, 0);
        let mut total = 0.0;
        for (cd, dofs) in self.cells.iter().zip(&self.dofmap.cell_dofs) {
            let local: Vec<f64> = dofs.iter().map(|&g| u[g]).collect();
            let uh = table.values.tr_mul_vec(&transform_coefficients(&cd.m, &local));
            let scale = 1.0 / cd.map.det().abs();
            for ((&p, w), v) in rule.points.iter().zip(&rule.weights).zip(uh) {
                let d = v - exact(cd.map.inverse_apply(p)?);
                total += w * scale * d * d;
            }
        }
        Ok(total.sqrt())
    }
}

/// Global matrix of `form` for `family` on `mesh`.
pub fn assemble(family: ElementFamily, n: usize, form: Form, scaling: bool) -> Result<SparseMatrix> {
    let disc = Discretization::new(family, n)?;
    let s = if scaling { Some(disc.scaling()?) } else { None };
    disc.assemble(form, s.as_ref())
}

/// Symmetric elimination of homogeneous constraints: zero rows and columns,
/// unit diagonal, zero right-hand side.
pub fn apply_dirichlet(a: &mut SparseMatrix, b: &mut [f64], constrained: &[bool]) -> Result<()> {
    if constrained.len() != a.dim() || b.len() != a.dim() {
        return Err(Error::DimensionMismatch(format!(
            "system of size {} with {} constraint flags and rhs of length {}",
            a.dim(),
            constrained.len(),
            b.len()
        )));
    }
    for i in 0..a.dim() {
        let (cols, vals) = a.row_mut(i);
        for (v, &j) in vals.iter_mut().zip(cols) {
            if constrained[i] || constrained[j] {
                *v = if i == j { 1.0 } else { 0.0 };
            }
        }
        if constrained[i] {
            if !cols.contains(&i) {
                return Err(Error::InvalidInput(format!("row {i} has no diagonal entry")));
            }
            b[i] = 0.0;
        }
    }
    Ok(())
}

/// Largest jumps of a global function across interior edges, sampled at
/// `samples` points per edge (endpoints excluded).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ContinuityReport {
    pub value_jump: f64,
    pub gradient_jump: f64,
    /// Jump of the normal derivative at edge midpoints.
    pub midpoint_normal_jump: f64,
    /// Jump of the value at the edge endpoints.
    pub vertex_value_jump: f64,
}

pub fn continuity_probe(disc: &Discretization, u: &[f64], samples: usize) -> ContinuityReport {
    let mut report = ContinuityReport::default();
    for (e, cells) in disc.mesh.edge_cells().iter().enumerate() {
        let [k1, k2] = match cells.as_slice() {
            [a, b] => [*a, *b],
            _ => continue,
        };
        let [a, b] = disc.mesh.edges[e];
        let (pa, pb) = (disc.mesh.vertices[a], disc.mesh.vertices[b]);
        let at = |s: f64| [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
        for q in 1..=samples {
            let x = at(q as f64 / (samples + 1) as f64);
            let (j1, j2) = (disc.evaluate(u, k1, x), disc.evaluate(u, k2, x));
            report.value_jump = report.value_jump.max((j1.value - j2.value).abs());
            let g = ((j1.grad[0] - j2.grad[0]).powi(2) + (j1.grad[1] - j2.grad[1]).powi(2)).sqrt();
            report.gradient_jump = report.gradient_jump.max(g);
        }
        for x in [pa, pb] {
            let d = (disc.evaluate(u, k1, x).value - disc.evaluate(u, k2, x).value).abs();
            report.vertex_value_jump = report.vertex_value_jump.max(d);
        }
        let len = disc.mesh.edge_length(e);
        let n = [(pb[1] - pa[1]) / len, -(pb[0] - pa[0]) / len];
        let mid = at(0.5);
        let d = disc.evaluate(u, k1, mid).directional(n) - disc.evaluate(u, k2, mid).directional(n);
        report.midpoint_normal_jump = report.midpoint_normal_jump.max(d.abs());
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lu_solve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mesh_counts() {
        let m1 = build_mesh(1).unwrap();
        assert_eq!((m1.num_cells(), m1.num_vertices(), m1.num_edges()), (2, 4, 5));
        let m2 = build_mesh(2).unwrap();
        assert_eq!((m2.num_cells(), m2.num_vertices(), m2.num_edges()), (8, 9, 16));
        let area: f64 = (0..m2.num_cells())
            .map(|k| 1.0 / m2.cell(k).unwrap().map_to(&Cell::reference()).unwrap().det().abs() * 0.5)
            .sum();
        assert!((area - 1.0).abs() < 1e-14);
        for k in 0..m2.num_cells() {
            assert!(m2.cell(k).unwrap().triangle.twice_signed_area() > 0.0);
        }
        assert!(build_mesh(0).is_err());
    }

    #[test]
    fn interior_edges_have_two_cells() {
        let m = build_mesh(3).unwrap();
        for (e, cells) in m.edge_cells().iter().enumerate() {
            let expected = if m.edge_side(e).is_some() { 1 } else { 2 };
            assert_eq!(cells.len(), expected);
        }
    }

    #[test]
    fn dof_counts() {
        let m1 = build_mesh(1).unwrap();
        assert_eq!(build_dofmap(ElementFamily::Hermite, &m1).unwrap().num_dofs, 14);
        assert_eq!(build_dofmap(ElementFamily::Morley, &m1).unwrap().num_dofs, 9);
        let m2 = build_mesh(2).unwrap();
        assert_eq!(build_dofmap(ElementFamily::Argyris, &m2).unwrap().num_dofs, 70);
        assert_eq!(build_dofmap(ElementFamily::Bell, &m2).unwrap().num_dofs, 54);
        assert_eq!(build_dofmap(ElementFamily::Lagrange(3), &m2).unwrap().num_dofs, 49);
        for f in [ElementFamily::Lagrange(3), ElementFamily::Hermite, ElementFamily::Argyris] {
            let d = build_dofmap(f, &m2).unwrap();
            let mut seen = vec![false; d.num_dofs];
            d.cell_dofs.iter().flatten().for_each(|&g| seen[g] = true);
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn lagrange_edge_points_are_shared() {
        // the nodal points of the shared DOF must coincide from both cells
        let disc = Discretization::new(ElementFamily::Lagrange(3), 2).unwrap();
        let mut point_of = vec![None; disc.num_dofs()];
        for (cd, dofs) in disc.cells.iter().zip(&disc.dofmap.cell_dofs) {
            let pts = crate::reference_element::lagrange_points(&cd.cell, 3);
            for (p, &g) in pts.iter().zip(dofs) {
                match point_of[g] {
                    None => point_of[g] = Some(*p),
                    Some(q) => assert!(crate::geometry::dist(*p, q) < 1e-14),
                }
            }
        }
    }

    #[test]
    fn unit_mass() {
        let disc = Discretization::new(ElementFamily::Lagrange(3), 3).unwrap();
        let a = disc.assemble(Form::Mass, None).unwrap();
        let one = disc.interpolate(&|_| Jet {
            value: 1.0,
            ..Jet::default()
        });
        let m1 = a.mul_vec(&one);
        let total: f64 = one.iter().zip(&m1).map(|(a, b)| a * b).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(a.asymmetry() < 1e-12);
    }

    #[test]
    fn hermite_stiffness_kills_constants() {
        let disc = Discretization::new(ElementFamily::Hermite, 2).unwrap();
        let a = disc.assemble(Form::Stiffness, None).unwrap();
        let one = disc.interpolate(&|_| Jet {
            value: 1.0,
            ..Jet::default()
        });
        assert!(a.mul_vec(&one).iter().all(|v| v.abs() < 1e-11));
    }

    #[test]
    fn scaling_is_positive_and_vertex_consistent() {
        let disc = Discretization::new(ElementFamily::Argyris, 2).unwrap();
        let s = disc.scaling().unwrap();
        assert!(s.0.iter().all(|&v| v > 0.0));
        let hv = disc.mesh.vertex_sizes().unwrap();
        for (k, kind) in disc.dofmap.kinds.iter().enumerate() {
            if let DofKind::VertexDxy(v) = kind {
                assert!((s.0[k] - hv[*v] * hv[*v]).abs() < 1e-15);
            }
        }
    }

    fn project(disc: &Discretization, f: &dyn Fn(Point) -> f64, scaled: bool) -> Vec<f64> {
        let s = if scaled { Some(disc.scaling().unwrap()) } else { None };
        let a = disc.assemble(Form::Mass, s.as_ref()).unwrap();
        let b = disc.assemble_load(f, 2 * disc.family.degree() + 2, s.as_ref()).unwrap();
        let x = lu_solve(&a.to_dense(), &b).unwrap();
        match s {
            Some(s) => s.apply_inverse(&x),
            None => x,
        }
    }

    #[test]
    fn projection_reproduces_polynomials() {
        let cases: [(ElementFamily, fn(Point) -> f64); 5] = [
            (ElementFamily::Lagrange(3), |p| p[0].powi(3) - 2.0 * p[0] * p[1] * p[1] + 1.0),
            (ElementFamily::Hermite, |p| p[0].powi(3) - 2.0 * p[0] * p[1] * p[1] + 1.0),
            (ElementFamily::Morley, |p| p[0] * p[1] - 0.5 * p[1] * p[1] + p[0]),
            (ElementFamily::Argyris, |p| p[0].powi(5) - 3.0 * p[0] * p[1].powi(4) + p[1]),
            (ElementFamily::Bell, |p| p[0].powi(3) + p[1].powi(3)),
        ];
        for (f, u) in cases {
            let disc = Discretization::new(f, 2).unwrap();
            let uh = project(&disc, &u, false);
            let err = disc.l2_error(&uh, &u, 2 * f.degree() + 2).unwrap();
            assert!(err < 1e-9, "{f}: {err}");
        }
    }

    #[test]
    fn scaling_is_a_congruence() {
        let u = |p: Point| (3.0 * p[0]).sin() * (2.0 * p[1]).cos();
        for f in [ElementFamily::Hermite, ElementFamily::Argyris] {
            let disc = Discretization::new(f, 2).unwrap();
            let a = project(&disc, &u, false);
            let b = project(&disc, &u, true);
            let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9 * scale), "{f}");
        }
    }

    #[test]
    fn continuity_across_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for f in [
            ElementFamily::Lagrange(3),
            ElementFamily::Hermite,
            ElementFamily::Morley,
            ElementFamily::Argyris,
            ElementFamily::Bell,
        ] {
            let disc = Discretization::new(f, 2).unwrap();
            let u: Vec<f64> = (0..disc.num_dofs()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let r = continuity_probe(&disc, &u, 5);
            match f {
                ElementFamily::Argyris | ElementFamily::Bell => {
                    assert!(r.value_jump < 1e-9 && r.gradient_jump < 1e-9, "{f}: {r:?}")
                }
                ElementFamily::Morley => {
                    assert!(r.midpoint_normal_jump < 1e-9 && r.vertex_value_jump < 1e-9, "{r:?}");
                    assert!(r.value_jump > 1e-6);
                }
                _ => {
                    assert!(r.value_jump < 1e-9, "{f}: {r:?}");
                    assert!(r.gradient_jump > 1e-6);
                }
            }
        }
    }

    #[test]
    fn dirichlet_sets() {
        let disc = Discretization::new(ElementFamily::Hermite, 2).unwrap();
        let c = disc.constrained_dofs(BoundarySpec::Dirichlet);
        // vertex 1 = (0.5, 0) on the bottom edge: value and x-derivative only
        assert_eq!(&c[3..6], &[true, true, false]);
        // centre vertex 4 is free
        assert_eq!(&c[12..15], &[false, false, false]);
        let argyris = Discretization::new(ElementFamily::Argyris, 2).unwrap();
        let d = argyris.constrained_dofs(BoundarySpec::Dirichlet);
        // corner vertex 0: everything except u_xy
        assert_eq!(&d[0..6], &[true, true, true, true, false, true]);
        let cl = argyris.constrained_dofs(BoundarySpec::Clamped);
        assert!(cl[0..6].iter().all(|&b| b));
        // bottom-edge vertex 1: clamped leaves only u_yy free
        assert_eq!(&cl[6..12], &[true, true, true, true, true, false]);
        let lag = Discretization::new(ElementFamily::Lagrange(3), 2).unwrap();
        let l = lag.constrained_dofs(BoundarySpec::Dirichlet);
        let boundary_count = l.iter().filter(|&&b| b).count();
        // 8 boundary vertices and 8 boundary edges with 2 points each
        assert_eq!(boundary_count, 8 + 16);
    }

    #[test]
    fn elimination_is_symmetric() {
        let disc = Discretization::new(ElementFamily::Hermite, 2).unwrap();
        let mut a = disc.assemble(Form::Stiffness, None).unwrap();
        let mut b = vec![1.0; disc.num_dofs()];
        let c = disc.constrained_dofs(BoundarySpec::Dirichlet);
        apply_dirichlet(&mut a, &mut b, &c).unwrap();
        assert!(a.asymmetry() < 1e-14);
        for (i, &ci) in c.iter().enumerate() {
            if ci {
                assert_eq!(b[i], 0.0);
                assert_eq!(a.get(i, i), 1.0);
                assert!(a.row(i).all(|(j, v)| j == i || v == 0.0));
            }
        }
        assert!(apply_dirichlet(&mut a, &mut b[..3].to_vec(), &c).is_err());
    }
}
