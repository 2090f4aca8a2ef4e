//! Exact symbolic verification of the two non-standard quantum deformations
//! of the (1+1) Schrodinger algebra, together with a numeric validator for
//! the associated space- and time-discretized Schrodinger equations on
//! uniform grids.
//!
//! The crate is organized around a small exact computer-algebra core:
//!
//! - [`scalar`]: exact rational-function coefficients over formal symbols.
//! - [`opalg`]: normal-ordered differential-difference operators and the
//!   polynomial action oracle.
//! - [`tables`]: generator sets, realizations, commutation tables,
//!   coproducts, Casimirs and symmetry factors for every algebra case.
//! - [`hopf`]: tensor-leg expressions and the Hopf-axiom checks
//!   (homomorphism, coassociativity, group-like laws, composed systems).
//! - [`maps`]: the nonlinear basis maps that classicalize the commutators
//!   while deforming the coproduct, including the jordanian sl(2) map.
//! - [`bialg`]: finite-dimensional Lie bialgebra layer with classical
//!   r-matrices, Schouten brackets and cocommutators.
//! - [`lattice`]: grid functions, dispersion solutions and numeric symmetry
//!   checks for the discrete equations.
//! - [`cli`]: the expression parser, check-suite runners and the JSON
//!   report emitted by the `qschrod` binary.
//!
//! The accompanying guide under `book/` walks through each layer; its code
//! blocks are doc-tested via the [`book`] module.

pub mod bialg;
pub mod book;
pub mod cli;
pub mod hopf;
pub mod lattice;
pub mod maps;
pub mod opalg;
pub mod scalar;
pub mod tables;

pub use opalg::{OperatorExpr, PolyFunction};
pub use scalar::{Scalar, ScalarError, Symbol};
pub use tables::{AlgCase, GenName};
