//! Spectra of parameterized families of self-adjoint operators.
//!
//! A field `t ↦ A_t` is sampled on a metric grid, each spectrum is stored as a
//! [`CompactSet`], and the analysis layer tracks gaps, finds gap tips and checks
//! the Hölder-type bounds that link `t ↦ ‖p(A_t)‖` (degree ≤ 2) to the
//! Hausdorff motion of the spectrum.
//!
//! Modules, bottom-up: [`hyperspace`] (interval unions), [`operators`],
//! [`models`] (built-in fields and parameter spaces), [`analysis`] and [`cli`].

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod hyperspace;
pub mod models;
pub mod operators;

pub use error::{Error, Result};
pub use hyperspace::{CompactSet, Gap, HitAndMissNbhd};
pub use operators::{Operator, Poly2};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
