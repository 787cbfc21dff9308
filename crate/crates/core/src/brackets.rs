//! Multi-brackets of non-linear operators.
//!
//! Sign convention: `{F_1,…,F_{m+1}} = Σ_k (−1)^k Ndet[ℓ_{F_i}]_{i≠k}(F_k)`
//! with 1-based `k`. The coordinate forms are normalized to the same sign, so
//! for m = 1 every bracket here starts with `ℓ_F(G) − ℓ_G(F)`.

use std::collections::BTreeMap;

use num_traits::One;

use crate::diffops::{ndet, xi_det, XiPoly};
use crate::error::{Error, Result};
use crate::jetcalc::{linearize, DiffPoly, MultiIndex, Var};
use crate::Q;

/// Which τ enter the coordinate bracket's symbol rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordinateVariant {
    /// All τ: the Jacobian-determinant representative.
    Jacobian,
    /// Only `|τ| = l(i)`: the calculational bracket (Mayer bracket for m = 1).
    Calculational,
}

#[derive(Clone, Debug)]
pub struct BracketResult {
    pub value: DiffPoly,
    /// `l(i_1)+…+l(i_{m+1}) − 1`
    pub nominal_order: usize,
    pub inputs: Vec<usize>,
}

fn arity(fs: &[DiffPoly]) -> Result<usize> {
    let Some(f0) = fs.first() else {
        return Err(Error::Shape("no operators".into()));
    };
    let m = f0.universe().m();
    if fs.len() != m + 1 {
        return Err(Error::Shape(format!("{} operators given, a bracket in {m} unknowns takes {}", fs.len(), m + 1)));
    }
    for f in fs {
        if f.universe().id() != f0.universe().id() {
            return Err(Error::UniverseMismatch);
        }
    }
    Ok(m)
}

fn sign(k: usize) -> Q {
    // (−1)^k for 1-based k = index+1
    if k % 2 == 0 {
        -Q::one()
    } else {
        Q::one()
    }
}

/// Linearization-based multi-bracket.
pub fn multibracket(fs: &[DiffPoly]) -> Result<DiffPoly> {
    let m = arity(fs)?;
    let lin: Vec<_> = fs.iter().map(linearize).collect();
    let mut acc = DiffPoly::zero(fs[0].universe());
    for k in 0..=m {
        let minor: Vec<Vec<_>> = lin
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, r)| r.row.clone())
            .collect();
        let op = ndet(&minor)?;
        acc = &acc + &op.apply(&fs[k])?.scale(&sign(k));
    }
    Ok(acc)
}

/// Row of ξ-symbols `L_{i,j} = Σ_τ ∂F/∂p^j_τ ξ^τ`.
pub fn symbol_row(f: &DiffPoly, variant: CoordinateVariant) -> Vec<XiPoly> {
    let uni = f.universe();
    let top = f.order_or_zero();
    (0..uni.m())
        .map(|j| {
            let t: BTreeMap<MultiIndex, DiffPoly> = f
                .jet_vars()
                .into_iter()
                .filter(|v| v.sym as usize == j)
                .filter(|v| variant == CoordinateVariant::Jacobian || v.idx.order() == top)
                .map(|v| (v.idx, f.partial(&Var::Jet(v))))
                .collect();
            XiPoly::from_map(uni, t)
        })
        .collect()
}

/// Coordinate representative `[F_1,…,F_{m+1}]′`, computed as
/// `Σ_k (−1)^k det(L_{i≠k})(ξ→D) F_k`; the `1/m!` of the permutation form
/// cancels against the m! orderings of the remaining rows.
pub fn coordinate_multibracket(fs: &[DiffPoly], variant: CoordinateVariant) -> Result<DiffPoly> {
    let m = arity(fs)?;
    let uni = fs[0].universe().clone();
    let rows: Vec<Vec<XiPoly>> = fs.iter().map(|f| symbol_row(f, variant)).collect();
    let mut acc = DiffPoly::zero(&uni);
    for k in 0..=m {
        let minor: Vec<Vec<XiPoly>> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, r)| r.clone())
            .collect();
        let d = xi_det(&minor, &uni)?;
        acc = &acc + &d.apply_as_operator(&fs[k])?.scale(&sign(k));
    }
    Ok(acc)
}

/// Bracket of two scalar operators.
pub fn mayer_bracket(f: &DiffPoly, g: &DiffPoly) -> Result<DiffPoly> {
    if f.universe().m() != 1 {
        return Err(Error::Shape(format!("Mayer bracket needs m = 1, got m = {}", f.universe().m())));
    }
    multibracket(&[f.clone(), g.clone()])
}

/// Bracket of the selected equations with its nominal order.
pub fn bracket_of(fs: &[DiffPoly], inputs: &[usize], variant: CoordinateVariant) -> Result<BracketResult> {
    let sel: Vec<DiffPoly> = inputs.iter().map(|&i| fs[i].clone()).collect();
    let value = coordinate_multibracket(&sel, variant)?;
    let l: usize = sel.iter().map(DiffPoly::order_or_zero).sum();
    Ok(BracketResult { value, nominal_order: l.saturating_sub(1), inputs: inputs.to_vec() })
}
