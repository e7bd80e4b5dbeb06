//! Numerical weighted Brunn-Minkowski theory.
//!
//! The crate evaluates weighted surface area measures, mixed measures
//! `μ(K;L)` and second mixed measures `μ(A;B,C)` for concrete convex bodies
//! and densities, and turns the known inequalities between them into slack
//! computations with explicit error budgets.
//!
//! Modules, bottom up:
//!
//! - [`sphere_quadrature`]: integration rules on the unit sphere and on angle intervals.
//! - [`bodies`]: convex bodies as support-function trees, 2D polygons, 3D polytopes.
//! - [`measures`]: densities, `μ(K)`, radial integrals, concavity profiles.
//! - [`surface_measures`]: `S_K`, `S_{μ,K}` and the signed measure `S^μ_{A;B}`.
//! - [`mixed`]: mixed volumes, mixed measures and finite-difference oracles.
//! - [`inequalities`]: slack reports and seeded ensembles.

// `!(x > 0.0)` is used on purpose so that NaN fails argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bodies;
pub mod error;
pub mod estimate;
pub mod inequalities;
pub mod measures;
pub mod mixed;
pub mod output;
pub mod sphere_quadrature;
pub mod surface_measures;

mod linalg;

pub use error::{Error, Result};
pub use estimate::Estimate;
