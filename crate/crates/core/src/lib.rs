//! Exact multi-brackets of differential operators and the compatibility test
//! for overdetermined PDE systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`jetcalc`] differential polynomials on jet space, total derivatives,
//!   linearization;
//! * [`diffops`] linear operators, the column-ordered determinant `Ndet`,
//!   linear multi-brackets;
//! * [`brackets`] non-linear multi-brackets (linearization based and
//!   coordinate forms, Mayer bracket);
//! * [`idealmod`] prolonged ideals `J_s`, Gröbner normal forms, reduced
//!   brackets, the compatibility verdict and first syzygies;
//! * [`symbolic`] symbols at a generic point, `dim g_i`, Spencer cohomology,
//!   Hilbert data, the complete-intersection test, Buchsbaum-Rim exactness;
//! * [`cli`] the system-file language, commands and the fixture library.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod brackets;
pub mod cli;
pub mod diffops;
pub mod error;
pub mod idealmod;
pub mod jetcalc;
pub mod symbolic;
pub mod system;

pub use error::{Error, Result};
pub use system::PdeSystem;

/// Exact rational scalars used everywhere.
pub type Q = num_rational::BigRational;
