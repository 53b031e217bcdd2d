//! Prime polynomial bases, node functionals, element definitions and nodal
//! bases via the generalized Vandermonde matrix.

mod element;
mod functional;
mod polynomial;

pub use element::{
    build_nodal_basis, lagrange_points, reference_nodal_basis, vandermonde, ElementFamily,
    FiniteElementDef, NodalBasis, Space,
};
pub use functional::{DirectionKind, Functional, EDGE_MOMENT_POINTS};
pub use polynomial::{
    legendre_eval, monomial_exponents, monomial_jets, polynomial_dimension, Jet, PrimeBasis,
};

/// Applies a node set to a family of functions: `N(Φ)_ij = n_i(φ_j)`.
pub fn apply_nodes(nodes: &[Functional], jets: &dyn Fn(crate::geometry::Point) -> Vec<Jet>) -> crate::linalg::DenseMatrix {
    vandermonde(nodes, jets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Cell, Triangle};
    use crate::linalg::DenseMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ALL: [ElementFamily; 7] = [
        ElementFamily::Lagrange(1),
        ElementFamily::Lagrange(2),
        ElementFamily::Lagrange(3),
        ElementFamily::Hermite,
        ElementFamily::Morley,
        ElementFamily::Argyris,
        ElementFamily::Bell,
    ];

    #[test]
    fn node_counts() {
        assert_eq!(FiniteElementDef::lagrange(3).dimension(), 10);
        assert_eq!(FiniteElementDef::cubic_hermite().dimension(), 10);
        assert_eq!(FiniteElementDef::morley().dimension(), 6);
        assert_eq!(FiniteElementDef::argyris().dimension(), 21);
        let bell = FiniteElementDef::bell();
        assert_eq!(bell.dimension(), 18);
        assert_eq!(bell.constraint_count(), 3);
        assert_eq!(FiniteElementDef::bell_extended().dimension(), 21);
        for f in ALL {
            assert_eq!(FiniteElementDef::reference(f).dimension(), f.dimension());
        }
    }

    #[test]
    fn kronecker_property_on_reference() {
        for f in ALL {
            let el = FiniteElementDef::reference(f);
            let basis = reference_nodal_basis(&el).unwrap();
            let n = apply_nodes(&el.nodes, &|p| basis.jets(p));
            let err = n.sub(&DenseMatrix::identity(el.dimension())).max_abs();
            assert!(err < 1e-10, "{f}: {err}");
        }
    }

    #[test]
    fn kronecker_property_on_physical_cell() {
        let cell = Cell::new(Triangle::with_global([[0.3, 0.1], [1.4, 0.6], [0.7, 1.3]], [5, 2, 9]).unwrap()).unwrap();
        for f in ALL {
            let el = FiniteElementDef::on_cell(f, &cell);
            let basis = build_nodal_basis(&el, &PrimeBasis::orthonormal(f.degree())).unwrap();
            let n = apply_nodes(&el.nodes, &|p| basis.jets(p));
            let err = n.sub(&DenseMatrix::identity(el.dimension())).max_abs();
            assert!(err < 1e-9, "{f}: {err}");
        }
    }

    #[test]
    fn linear_lagrange_is_barycentric() {
        let basis = reference_nodal_basis(&FiniteElementDef::lagrange(1)).unwrap();
        let p = [0.2, 0.3];
        let j = basis.jets(p);
        assert!((j[0].value - 0.5).abs() < 1e-13);
        assert!((j[1].value - 0.2).abs() < 1e-13);
        assert!((j[2].value - 0.3).abs() < 1e-13);
        assert!((basis.jets([0.0, 0.0])[0].value - 1.0).abs() < 1e-13);
        assert!(basis.jets([1.0, 0.0])[0].value.abs() < 1e-13);
    }

    #[test]
    fn lagrange_partition_of_unity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for r in 1..=3 {
            let basis = reference_nodal_basis(&FiniteElementDef::lagrange(r)).unwrap();
            for _ in 0..10 {
                let x: f64 = rng.gen();
                let y: f64 = rng.gen::<f64>() * (1.0 - x);
                let s: f64 = basis.jets([x, y]).iter().map(|j| j.value).sum();
                assert!((s - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn outer_product_lemma() {
        // N(MΨ) = N(Ψ) Mᵀ
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in [ElementFamily::Hermite, ElementFamily::Morley, ElementFamily::Argyris] {
            let el = FiniteElementDef::reference(f);
            let basis = reference_nodal_basis(&el).unwrap();
            let nu = el.dimension();
            let m = DenseMatrix::from_fn(nu, nu, |_, _| rng.gen_range(-1.0..1.0));
            let mixed = |p| {
                let js = basis.jets(p);
                (0..nu)
                    .map(|i| {
                        let mut out = Jet::default();
                        for (k, jk) in js.iter().enumerate() {
                            out.add_scaled(m[(i, k)], jk);
                        }
                        out
                    })
                    .collect::<Vec<_>>()
            };
            let lhs = apply_nodes(&el.nodes, &mixed);
            let rhs = apply_nodes(&el.nodes, &|p| basis.jets(p)).matmul(&m.transpose());
            assert!(lhs.sub(&rhs).max_abs() < 1e-10);
        }
    }

    #[test]
    fn bell_basis_satisfies_constraints() {
        let el = FiniteElementDef::bell();
        let basis = reference_nodal_basis(&el).unwrap();
        assert_eq!(basis.dimension(), 18);
        let l = apply_nodes(&el.constraints, &|p| basis.jets(p));
        assert!(l.max_abs() < 1e-9, "{}", l.max_abs());
        // the extended basis is a genuine 21x21 nodal basis
        let ext = FiniteElementDef::bell_extended();
        let ext_basis = reference_nodal_basis(&ext).unwrap();
        let n = apply_nodes(&ext.nodes, &|p| ext_basis.jets(p));
        assert!(n.sub(&DenseMatrix::identity(21)).max_abs() < 1e-9);
    }

    #[test]
    fn hermite_node_order() {
        let el = FiniteElementDef::cubic_hermite();
        assert!(matches!(el.nodes[0], Functional::PointEval { point } if point == [0.0, 0.0]));
        assert!(matches!(el.nodes[1], Functional::PointDeriv { direction, .. } if direction == [1.0, 0.0]));
        assert!(matches!(el.nodes[2], Functional::PointDeriv { direction, .. } if direction == [0.0, 1.0]));
        assert!(matches!(el.nodes[3], Functional::PointEval { point } if point == [1.0, 0.0]));
        match el.nodes[9] {
            Functional::PointEval { point } => {
                assert!((point[0] - 1.0 / 3.0).abs() < 1e-15 && (point[1] - 1.0 / 3.0).abs() < 1e-15)
            }
            other => panic!("unexpected barycenter node {other:?}"),
        }
    }

    #[test]
    fn singular_node_set_is_detected() {
        let mut el = FiniteElementDef::lagrange(1);
        el.nodes[2] = el.nodes[1];
        assert!(matches!(
            reference_nodal_basis(&el),
            Err(crate::Error::SingularVandermonde)
        ));
    }

    #[test]
    fn family_parsing() {
        assert_eq!("lagrange3".parse::<ElementFamily>().unwrap(), ElementFamily::Lagrange(3));
        assert_eq!("Argyris".parse::<ElementFamily>().unwrap(), ElementFamily::Argyris);
        assert!("serendipity".parse::<ElementFamily>().is_err());
    }
}
