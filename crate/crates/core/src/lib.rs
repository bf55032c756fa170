//! Computational convex geometry over `R^d` with a complex structure on `R^{2m}`.
//!
//! The crate builds convex hulls, Minkowski sums, mixed volumes and surface
//! area measures of polytopes exactly (up to floating-point roundoff), and on
//! top of that constructs complex projection bodies: for a convex body
//! `C ⊂ C` (identified with a planar convex set) and a polytope `K ⊂ C^m`,
//! the body `Π_C K` is defined by its support function
//!
//! ```text
//! h(Π_C K, w) = V(K, …, K, C·w),      C·w = {c·w : c ∈ C} ⊂ C^m,
//! ```
//!
//! the mixed volume of `2m−1` copies of `K` with the planar body `C·w`.
//! For polytopes this support function is a finite sum over facet data, which
//! makes the construction exact: `Π_C K = (1/2m) Σ_i a_i (C̄·u_i)` where
//! `(u_i, a_i)` runs over the facet normals and areas of `K`.
//!
//! The higher-level modules certify the properties that make these bodies
//! interesting: the valuation property, `SL(m,C)` contravariance, conjugation
//! symmetry, isoperimetric-type inequalities for quermassintegrals, and the
//! solution of the discrete Minkowski problem used to realize measures as
//! polytopes.
//!
//! All randomized entry points take explicit seeds and produce identical
//! results across runs; parallel code paths reduce in a fixed order.

pub mod checks;
pub mod complexes;
pub mod diagnostics;
pub mod dim2;
pub mod error;
pub mod hull;
pub mod inequalities;
pub mod linalg;
pub mod measure;
pub mod mixed;
pub mod polytope;
pub mod projection;
pub mod report;
pub mod sample;
pub mod solver;
pub mod tol;

pub use error::{Error, Result};
pub use measure::DiscreteMeasure;
pub use polytope::{Facet, Polytope};

/// Column vector in ambient coordinates. Dimension is dynamic; the crate is
/// exercised up to `d = 8`.
pub type Vector = nalgebra::DVector<f64>;

/// Dense square matrix acting on ambient coordinates.
pub type Matrix = nalgebra::DMatrix<f64>;

pub fn vector(coords: &[f64]) -> Vector {
    Vector::from_column_slice(coords)
}
