//! Nodal bases and basis transformations for triangular finite elements that
//! are not affine equivalent to their reference element (cubic Hermite,
//! Morley, quintic Argyris and Bell), with cubic Lagrange as the baseline.
//!
//! The central object is the per-cell matrix `M = Vᵀ` relating the physical
//! nodal basis to the affine pull-back of the reference nodal basis,
//! `Ψ = M F*(Ψ̂)`. For elements whose node sets are not preserved under
//! push-forward, `V` is assembled in factored form `V = E·Vᶜ·D` from a
//! compatible nodal completion.
//!
//! Module map:
//! - [`linalg`]: dense/sparse kernels (LU, Jacobi eigenvalues, CG, envelope Cholesky, Lanczos)
//! - [`geometry`]: triangles, affine maps, edge frames
//! - [`quadrature`]: Gauss–Legendre and collapsed triangle rules
//! - [`reference_element`]: prime bases, node functionals, element definitions, nodal bases
//! - [`transform`]: closed-form and brute-force construction of `M`
//! - [`tabulate`]: tabulation, push-forward of tables, local matrices
//! - [`mesh_assembly`]: structured meshes, DOF maps, scaling, boundary conditions, assembly
//! - [`experiments`]: conditioning and convergence studies with CSV output

pub mod error;
pub mod experiments;
pub mod geometry;
pub mod linalg;
pub mod mesh_assembly;
pub mod quadrature;
pub mod reference_element;
pub mod tabulate;
pub mod transform;

pub use error::{Error, Result};
