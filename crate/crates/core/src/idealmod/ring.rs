use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::groebner::{BlockOrder, Poly};
use crate::error::{Error, Result};
use crate::jetcalc::{DiffPoly, JetVar, Mono, MultiIndex, Terms, Universe, Var};

/// Polynomial ring of the jets of order ≤ s, plus the base variables,
/// parameter jets and inverse symbols that actually occur.
///
/// Monomial order: one grevlex block per unknown-jet order, highest order
/// first, then a block of inverse symbols, then base variables and parameter
/// jets. Leading terms are therefore always top-order unknown jets, which is
/// what makes reduction behave like solving for the highest derivatives.
#[derive(Clone, Debug)]
pub struct TruncatedRing {
    uni: Arc<Universe>,
    s: usize,
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
    order: BlockOrder,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Block {
    // smaller sorts first = more significant
    Jet(std::cmp::Reverse<usize>),
    Inv,
    Rest,
}

fn block_of(uni: &Universe, v: &Var) -> Block {
    match v {
        Var::Jet(j) if uni.is_unknown(j.sym) => Block::Jet(std::cmp::Reverse(j.idx.order())),
        Var::Inv(_) => Block::Inv,
        _ => Block::Rest,
    }
}

impl TruncatedRing {
    /// All unknown jets of order ≤ s, all inverse symbols, and `extra`.
    pub fn new(uni: &Arc<Universe>, s: usize, extra: impl IntoIterator<Item = Var>) -> Self {
        let mut set: BTreeSet<Var> = BTreeSet::new();
        for sym in 0..uni.m() {
            for idx in MultiIndex::all_up_to(uni.n(), s) {
                set.insert(Var::Jet(JetVar { sym: sym as u16, idx }));
            }
        }
        for q in 0..uni.invertibles().len() {
            set.insert(Var::Inv(q as u16));
        }
        set.extend(extra);
        Self::from_vars(uni, s, set)
    }

    fn from_vars(uni: &Arc<Universe>, s: usize, set: BTreeSet<Var>) -> Self {
        let mut vars: Vec<Var> = set.into_iter().collect();
        vars.sort_by_key(|v| (block_of(uni, v), *v));
        let mut blocks: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for i in 1..=vars.len() {
            if i == vars.len() || block_of(uni, &vars[i]) != block_of(uni, &vars[start]) {
                if i > start {
                    blocks.push((start, i));
                }
                start = i;
            }
        }
        let index = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        TruncatedRing { uni: uni.clone(), s, order: BlockOrder { nvars: vars.len(), blocks }, vars, index }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.uni
    }

    pub fn max_order(&self) -> usize {
        self.s
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn order(&self) -> &BlockOrder {
        &self.order
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.index.contains_key(v)
    }

    /// Same ring with more variables; the order restricted to the old ones is
    /// unchanged, so a Gröbner basis stays one.
    pub fn extended(&self, more: impl IntoIterator<Item = Var>) -> Self {
        let mut set: BTreeSet<Var> = self.vars.iter().copied().collect();
        set.extend(more);
        Self::from_vars(&self.uni, self.s, set)
    }

    pub fn to_poly(&self, f: &DiffPoly) -> Result<Poly> {
        if f.universe().id() != self.uni.id() {
            return Err(Error::UniverseMismatch);
        }
        let mut terms = Vec::with_capacity(f.len());
        for (m, c) in f.terms() {
            let mut e = vec![0u16; self.vars.len()];
            for (v, k) in m.vars() {
                let i = *self
                    .index
                    .get(v)
                    .ok_or_else(|| Error::Invalid(format!("variable {} outside the ring", self.uni.var_name(v))))?;
                e[i] = u16::try_from(*k).map_err(|_| Error::Budget("exponent overflow".into()))?;
            }
            terms.push((e, c.clone()));
        }
        Ok(Poly::from_terms(terms, &self.order))
    }

    pub fn from_poly(&self, p: &Poly) -> DiffPoly {
        let mut t = Terms::new();
        for (e, c) in &p.terms {
            let pairs: Vec<(Var, u32)> =
                e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (self.vars[i], k as u32)).collect();
            t.insert(Mono::from_pairs(pairs), c.clone());
        }
        DiffPoly::from_terms(&self.uni, t)
    }

    /// Rewrites a polynomial of `other` (a sub-ring) into this ring.
    pub fn transfer(&self, other: &TruncatedRing, p: &Poly) -> Poly {
        let map: Vec<usize> = other.vars.iter().map(|v| self.index[v]).collect();
        let terms = p
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0u16; self.vars.len()];
                for (i, &k) in e.iter().enumerate() {
                    ne[map[i]] = k;
                }
                (ne, c.clone())
            })
            .collect();
        Poly::from_terms(terms, &self.order)
    }

    /// `t_q·d_q − 1` for every declared invertible.
    pub fn inverse_relations(&self) -> Vec<DiffPoly> {
        inverse_relations(&self.uni)
    }
}

pub fn inverse_relations(uni: &Arc<Universe>) -> Vec<DiffPoly> {
    uni.invertibles()
        .iter()
        .enumerate()
        .map(|(q, d)| {
            let d = DiffPoly::from_terms(uni, d.clone());
            &(&d * &DiffPoly::inv(uni, q)) - &DiffPoly::one(uni)
        })
        .collect()
}
