use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{AffineMap, Cell, Point, EDGE_VERTICES};
use crate::linalg::{invert, DenseMatrix};

use super::functional::{DirectionKind, Functional};
use super::polynomial::{polynomial_dimension, Jet, PrimeBasis};

const EX: [f64; 2] = [1.0, 0.0];
const EY: [f64; 2] = [0.0, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementFamily {
    Lagrange(usize),
    Hermite,
    Morley,
    Argyris,
    Bell,
}

impl ElementFamily {
    /// Polynomial degree of the (possibly constrained) space.
    pub fn degree(&self) -> usize {
        match *self {
            ElementFamily::Lagrange(r) => r,
            ElementFamily::Hermite => 3,
            ElementFamily::Morley => 2,
            ElementFamily::Argyris | ElementFamily::Bell => 5,
        }
    }

    /// Number of nodes `ν`.
    pub fn dimension(&self) -> usize {
        match *self {
            ElementFamily::Bell => 18,
            other => polynomial_dimension(other.degree()),
        }
    }

    /// Number of constraint functionals `κ` (nonzero only for Bell).
    pub fn constraint_count(&self) -> usize {
        match self {
            ElementFamily::Bell => 3,
            _ => 0,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ElementFamily::Lagrange(r) => format!("lagrange{r}"),
            ElementFamily::Hermite => "hermite".into(),
            ElementFamily::Morley => "morley".into(),
            ElementFamily::Argyris => "argyris".into(),
            ElementFamily::Bell => "bell".into(),
        }
    }
}

impl fmt::Display for ElementFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ElementFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermite" => Ok(ElementFamily::Hermite),
            "morley" => Ok(ElementFamily::Morley),
            "argyris" => Ok(ElementFamily::Argyris),
            "bell" => Ok(ElementFamily::Bell),
            other => other
                .strip_prefix("lagrange")
                .and_then(|r| r.parse::<usize>().ok())
                .filter(|&r| (1..=5).contains(&r))
                .map(ElementFamily::Lagrange)
                .ok_or_else(|| Error::InvalidInput(format!("unknown element family '{s}'"))),
        }
    }
}

/// Polynomial space of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    /// All of `P_r`.
    Full(usize),
    /// Quintics whose normal derivative is cubic on every edge.
    ConstrainedQuintic,
}

/// A finite element `(K, P, N)` on a concrete cell, plus the constraint
/// functionals cutting `P` out of the full polynomial space (Bell only).
#[derive(Debug, Clone)]
pub struct FiniteElementDef {
    pub family: ElementFamily,
    pub cell: Cell,
    pub space: Space,
    pub nodes: Vec<Functional>,
    pub constraints: Vec<Functional>,
}

impl FiniteElementDef {
    /// The element of `family` on `cell`, with nodes in the canonical order.
    pub fn on_cell(family: ElementFamily, cell: &Cell) -> Self {
        let v = cell.vertices();
        let mut nodes = Vec::new();
        let mut constraints = Vec::new();
        let space = match family {
            ElementFamily::Bell => Space::ConstrainedQuintic,
            other => Space::Full(other.degree()),
        };
        match family {
            ElementFamily::Lagrange(r) => {
                nodes.extend(lagrange_points(cell, r).into_iter().map(Functional::eval));
            }
            ElementFamily::Hermite => {
                for &p in v {
                    nodes.push(Functional::eval(p));
                    nodes.push(Functional::deriv(p, EX));
                    nodes.push(Functional::deriv(p, EY));
                }
                nodes.push(Functional::eval(cell.triangle.centroid()));
            }
            ElementFamily::Morley => {
                nodes.extend(v.iter().map(|&p| Functional::eval(p)));
                nodes.extend(cell.frames.iter().map(|f| Functional::deriv(f.midpoint, f.normal)));
            }
            ElementFamily::Argyris | ElementFamily::Bell => {
                for &p in v {
                    nodes.push(Functional::eval(p));
                    nodes.push(Functional::deriv(p, EX));
                    nodes.push(Functional::deriv(p, EY));
                    nodes.push(Functional::second_deriv(p, EX, EX));
                    nodes.push(Functional::second_deriv(p, EX, EY));
                    nodes.push(Functional::second_deriv(p, EY, EY));
                }
                if family == ElementFamily::Argyris {
                    nodes.extend(cell.frames.iter().map(|f| Functional::deriv(f.midpoint, f.normal)));
                } else {
                    constraints.extend(cell.frames.iter().enumerate().map(|(i, f)| {
                        Functional::edge_moment(i, f, v, 4, DirectionKind::Normal)
                    }));
                }
            }
        }
        Self {
            family,
            cell: *cell,
            space,
            nodes,
            constraints,
        }
    }

    pub fn reference(family: ElementFamily) -> Self {
        Self::on_cell(family, &Cell::reference())
    }

    pub fn lagrange(r: usize) -> Self {
        Self::reference(ElementFamily::Lagrange(r))
    }

    pub fn cubic_hermite() -> Self {
        Self::reference(ElementFamily::Hermite)
    }

    pub fn morley() -> Self {
        Self::reference(ElementFamily::Morley)
    }

    pub fn argyris() -> Self {
        Self::reference(ElementFamily::Argyris)
    }

    pub fn bell() -> Self {
        Self::reference(ElementFamily::Bell)
    }

    /// Reference Bell element extended by its constraint functionals.
    pub fn bell_extended() -> Self {
        Self::bell().extended()
    }

    /// `(K, P̃, Ñ)` with `Ñ = [N; L]` over the full polynomial space. Identity
    /// for unconstrained elements.
    pub fn extended(&self) -> Self {
        let mut nodes = self.nodes.clone();
        nodes.extend_from_slice(&self.constraints);
        Self {
            family: self.family,
            cell: self.cell,
            space: Space::Full(self.family.degree()),
            nodes,
            constraints: Vec::new(),
        }
    }

    /// `ν`.
    pub fn dimension(&self) -> usize {
        self.nodes.len()
    }

    /// `κ`.
    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn degree(&self) -> usize {
        self.family.degree()
    }
}

/// Lattice points of `P_r` Lagrange: vertices, then edge points (edge `i`
/// opposite vertex `i`, from its lower to its higher local vertex), then
/// interior points.
pub fn lagrange_points(cell: &Cell, r: usize) -> Vec<Point> {
    assert!(r >= 1);
    let tri = &cell.triangle;
    let rf = r as f64;
    let mut pts: Vec<Point> = tri.vertices.to_vec();
    for [a, b] in EDGE_VERTICES {
        for k in 1..r {
            let mut l = [0.0; 3];
            l[a] = (r - k) as f64 / rf;
            l[b] = k as f64 / rf;
            pts.push(tri.barycentric_point(l));
        }
    }
    for j in 1..r {
        for k in 1..(r - j) {
            let i = r - j - k;
            pts.push(tri.barycentric_point([i as f64 / rf, j as f64 / rf, k as f64 / rf]));
        }
    }
    pts
}

/// Nodal basis expressed in a prime basis: `ψ_k = Σ_j C_kj (φ_j ∘ F)`, where
/// `F` maps the element's cell onto the reference cell on which the prime
/// basis lives (the identity for reference elements).
#[derive(Debug, Clone)]
pub struct NodalBasis {
    pub coeffs: DenseMatrix,
    pub prime: PrimeBasis,
    pub map: AffineMap,
}

impl NodalBasis {
    pub fn dimension(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn jets(&self, p: Point) -> Vec<Jet> {
        let j = self.map.jacobian();
        let prime: Vec<Jet> = self.prime.jets(self.map.apply(p)).iter().map(|q| q.pull_back(&j)).collect();
        (0..self.coeffs.rows())
            .map(|k| {
                let mut jet = Jet::default();
                for (c, pj) in self.coeffs.row(k).iter().zip(&prime) {
                    jet.add_scaled(*c, pj);
                }
                jet
            })
            .collect()
    }

    /// Keeps the first `n` basis functions.
    pub fn truncated(&self, n: usize) -> NodalBasis {
        NodalBasis {
            coeffs: self.coeffs.row_slice(0, n),
            prime: self.prime.clone(),
            map: self.map,
        }
    }
}

/// Generalized Vandermonde matrix `A_ij = n_i(φ_j)`.
pub fn vandermonde(nodes: &[Functional], jets: &dyn Fn(Point) -> Vec<Jet>) -> DenseMatrix {
    let rows: Vec<Vec<f64>> = nodes.iter().map(|n| n.apply_all(jets)).collect();
    DenseMatrix::from_rows(&rows)
}

/// Builds `C = A^{-T}`. Constrained elements are built through their
/// extension and truncated to the first `ν` functions.
pub fn build_nodal_basis(el: &FiniteElementDef, basis: &PrimeBasis) -> Result<NodalBasis> {
    let extended = el.extended();
    if polynomial_dimension(basis.degree()) != extended.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "{} nodes for a prime basis of dimension {}",
            extended.dimension(),
            basis.dim()
        )));
    }
    // prime basis is defined on the reference cell; map physical points there
    let map = el.cell.map_to(&Cell::reference())?;
    let j = map.jacobian();
    let a = vandermonde(&extended.nodes, &|p| {
        basis.jets(map.apply(p)).iter().map(|jet| jet.pull_back(&j)).collect()
    });
    let inv = invert(&a).map_err(|_| Error::SingularVandermonde)?;
    let full = NodalBasis {
        coeffs: inv.transpose(),
        prime: basis.clone(),
        map,
    };
    Ok(if el.constraint_count() > 0 {
        full.truncated(el.dimension())
    } else {
        full
    })
}

/// Nodal basis on the reference cell using the orthonormal prime basis.
pub fn reference_nodal_basis(el: &FiniteElementDef) -> Result<NodalBasis> {
    build_nodal_basis(el, &PrimeBasis::orthonormal(el.degree()))
}
