//! Executable checks for time analyticity of parabolic equations.
//!
//! The crate builds Taylor-in-time jets for the heat, biharmonic heat and
//! Schrödinger-type heat equations on a periodic spectral grid, fits
//! coefficient-growth certificates, decides backward solvability, certifies
//! Gaussian heat-kernel derivative bounds, and verifies a gallery of explicit
//! solutions and counterexamples together with the exact combinatorial
//! identities behind the nonlinear theory.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod exact;
pub mod gallery;
pub mod kernel;
pub mod nonlinear;
pub mod numerics;
pub mod spectral;
pub mod taylor;

mod serde_ext;
