//! Numerical laboratory for Bernstein-type inequalities of complex polynomials
//! on the unit circle.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] : dense complex polynomials and their structural transforms
//!   (derivative, conjugate reciprocal, Blaschke flip, self-inversive test).
//! * [`roots`] : Aberth-Ehrlich root finding and zero-location classification.
//! * [`norms`] : `L_p` norms for `0 < p < ∞`, the sup norm and the Mahler
//!   measure, each with an independent cross-check path.
//! * [`operators`] : the coefficient-multiplier operators `zP' - αP` and its
//!   second-order composition, plus the conjugate-side images.
//! * [`inequalities`] : evaluation of each inequality on a concrete instance,
//!   with hypothesis gating and a verdict.
//! * [`explore`] : seeded fuzzing, α-plane maps and extremal search.

pub mod error;
pub mod explore;
pub mod inequalities;
pub mod norms;
pub mod operators;
pub mod poly;
pub mod roots;

pub use error::{LabError, Result};
pub use inequalities::{CheckParams, CheckReport, GateStatus, InequalityId, Verdict};
pub use norms::{NormExponent, NormValue};
pub use operators::OperatorParams;
pub use poly::{Poly, RootMultiset};
pub use roots::{RootReport, ZeroLocation, ZeroStatus};

pub use num_complex::Complex64;
