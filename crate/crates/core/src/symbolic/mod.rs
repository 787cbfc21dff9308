//! Symbol-level linear algebra at a generic point: prolonged symbols `g_i`,
//! Spencer δ-cohomology, Hilbert polynomial, the GCI test and graded
//! exactness of the Buchsbaum–Rim complex.

mod gci;
pub mod linalg;
mod point;
mod rim;
mod rows;
mod spencer;
pub mod xi;

pub use gci::{dimension, gci_check, GciSummary};
pub use point::EvalPoint;
pub use rim::{buchsbaum_rim_check, BrReport, NodeCheck};
pub use rows::{generic_symbols, symbols_at, SymbolRows};
pub use spencer::{
    elementary_symmetric, hilbert_data, hilbert_from_dims, interpolate, spencer_cohomology, theorem_b_expected,
    theorem_c_expected, ExpectedB, HilbertData, SpencerTable,
};
