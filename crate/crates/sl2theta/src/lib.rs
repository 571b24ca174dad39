//! Exact computations for the simple 2-representations of categorified
//! quantum sl2: affine nil Hecke algebras in canonical form, graded bimodule
//! complexes, and machine verification of the structure of the Rickard
//! complex on those representations.

pub mod error;
pub mod field;
pub mod gradedcx;
pub mod linalg;
pub mod nilhecke;
pub mod polyring;
pub mod qcalc;
pub mod rickard;
pub mod simple2rep;
pub mod suites;
pub mod symgrp;

pub use error::Error;
pub use field::{Fp, Rat, Scalar};
pub use qcalc::LaurentSeries;
pub use symgrp::Perm;
