#![allow(dead_code)]

use fetransform::geometry::{Cell, Point, Triangle};
use fetransform::linalg::DenseMatrix;
use fetransform::reference_element::{reference_nodal_basis, ElementFamily, FiniteElementDef, Jet};
use fetransform::transform::local_transform;
use rand::Rng;

/// Longest edge over shortest altitude.
pub fn aspect_ratio(t: &Triangle) -> f64 {
    let d = t.diameter();
    d * d / (2.0 * t.area())
}

/// A random triangle in `[-2, 2]²` with aspect ratio at most `max_aspect`
/// and a random global vertex numbering.
pub fn random_cell<R: Rng>(rng: &mut R, max_aspect: f64) -> Cell {
    loop {
        let mut v = [[0.0; 2]; 3];
        for p in v.iter_mut() {
            *p = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        }
        let mut g = [0usize, 1, 2];
        for k in (1..3).rev() {
            g.swap(k, rng.gen_range(0..=k));
        }
        if let Ok(tri) = Triangle::with_global(v, g) {
            if aspect_ratio(&tri) <= max_aspect {
                if let Ok(cell) = Cell::new(tri) {
                    return cell;
                }
            }
        }
    }
}

/// Jets of the physical basis `M F*(Ψ̂)` of `family` on `cell`.
pub fn mapped_basis(family: ElementFamily, cell: &Cell) -> impl Fn(Point) -> Vec<Jet> {
    let reference = Cell::reference();
    let basis = reference_nodal_basis(&FiniteElementDef::reference(family).extended()).unwrap();
    let m: DenseMatrix = local_transform(family, cell, &reference).unwrap();
    let map = cell.map_to(&reference).unwrap();
    move |x| {
        let j = map.jacobian();
        let pulled: Vec<Jet> = basis.jets(map.apply(x)).iter().map(|q| q.pull_back(&j)).collect();
        (0..m.rows())
            .map(|i| {
                let mut out = Jet::default();
                for (k, q) in pulled.iter().enumerate() {
                    out.add_scaled(m[(i, k)], q);
                }
                out
            })
            .collect()
    }
}
