//! Minimal graphs over the unit disk built from Beltrami and Weierstrass data.
//!
//! The pipeline: a dilatation `ω` (in particular the family `μ_k(·; w)`) is fed
//! to a fixed-point solver for the harmonic self-map `f = z·exp(Pφ)` of the disk
//! ([`beltrami`]), whose Weierstrass data `(p, q) = (f_z, √ω)` give a minimal
//! graph and its Gaussian curvature ([`weierstrass`]). Scherk-type step maps
//! onto bicentric quadrilaterals give the extremal `k → 1` limit directly
//! ([`scherk`]), and [`bounds`] evaluates the closed-form curvature bounds.

// `!(x < y)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beltrami;
pub mod bounds;
pub mod cli;
pub mod diskfield;
mod error;
pub mod quadrature;
pub mod scherk;
pub mod transforms;
pub mod weierstrass;

pub use error::{Error, Result};
pub use num_complex::Complex64;
