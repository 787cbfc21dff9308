//! Ring kernel: multi-indices, jet variables, differential polynomials with
//! exact rational coefficients, total derivatives and linearization.

mod deriv;
mod multi_index;
mod poly;
mod universe;

pub use deriv::{q, qf};
pub use multi_index::{binom, MultiIndex, MAX_DIM};
pub use poly::{display_terms, terms_add, terms_const, terms_mul, terms_scale, terms_var, DiffPoly, Mono, Terms};
pub use universe::{JetVar, SymbolDecl, SymbolKind, Universe, UniverseBuilder, Var, DEFAULT_DEPTH_CAP};

use std::collections::BTreeMap;

use crate::diffops::{LinDiffOp, VectorDiffOp};

/// Universal linearization `ℓ_j(F) = Σ_σ ∂F/∂p^j_σ · D_σ`, one entry per unknown.
pub fn linearize(f: &DiffPoly) -> VectorDiffOp {
    let uni = f.universe();
    let jets = f.jet_vars();
    let ord = f.order_or_zero();
    let row = (0..uni.m())
        .map(|j| {
            let coeffs: BTreeMap<MultiIndex, DiffPoly> = jets
                .iter()
                .filter(|v| v.sym as usize == j)
                .map(|v| (v.idx, f.partial(&Var::Jet(*v))))
                .collect();
            LinDiffOp::from_coeffs(uni, coeffs)
                .with_declared_order(ord)
                .expect("partials stay within the order of f")
        })
        .collect();
    VectorDiffOp::new(row)
}
