use std::collections::HashMap;

use num_traits::One;

use super::multi_index::MultiIndex;
use super::poly::{terms_add_into, DiffPoly, Mono, Terms};
use super::universe::{JetVar, SymbolKind, Var};
use crate::error::{Error, Result};
use crate::Q;

impl DiffPoly {
    /// Formal partial derivative `∂f/∂v`.
    pub fn partial(&self, v: &Var) -> DiffPoly {
        let mut out = Terms::new();
        for (m, c) in self.terms() {
            let e = m.exponent(v);
            if e > 0 {
                terms_add_into(&mut out, m.div_var(v), c * Q::from_integer(e.into()));
            }
        }
        DiffPoly::from_terms(self.universe(), out)
    }

    /// Total derivative `D_i` (0-based direction).
    pub fn total_derivative(&self, i: usize) -> Result<DiffPoly> {
        let n = self.universe().n();
        if i >= n {
            return Err(Error::Direction(i, n));
        }
        self.total_derivative_at(i, 0)
    }

    pub(crate) fn total_derivative_at(&self, i: usize, depth: usize) -> Result<DiffPoly> {
        let mut cache: HashMap<Var, DiffPoly> = HashMap::new();
        let mut out = Terms::new();
        for (m, c) in self.terms() {
            for &(v, e) in m.vars() {
                if !cache.contains_key(&v) {
                    let d = self.var_derivative(&v, i, depth)?;
                    cache.insert(v, d);
                }
                let dv = &cache[&v];
                if dv.is_zero() {
                    continue;
                }
                let rest = m.div_var(&v);
                let k = c * Q::from_integer(e.into());
                for (mv, cv) in dv.terms() {
                    terms_add_into(&mut out, rest.mul(mv), &k * cv);
                }
            }
        }
        Ok(DiffPoly::from_terms(self.universe(), out))
    }

    fn var_derivative(&self, v: &Var, i: usize, depth: usize) -> Result<DiffPoly> {
        let uni = self.universe();
        Ok(match v {
            Var::Base(k) => {
                if *k as usize == i {
                    DiffPoly::one(uni)
                } else {
                    DiffPoly::zero(uni)
                }
            }
            Var::Jet(j) => {
                if uni.symbol(j.sym).kind == SymbolKind::Unknown {
                    DiffPoly::var(uni, Var::Jet(JetVar { sym: j.sym, idx: j.idx.inc(i) }))
                } else {
                    expand_param_jet(uni, j.sym, j.idx.inc(i), depth + 1)?
                }
            }
            Var::Inv(q) => {
                // D_i(t) = -t^2 D_i(d)
                let d = DiffPoly::from_terms(uni, uni.invertibles()[*q as usize].clone());
                let dd = d.total_derivative_at(i, depth + 1)?;
                let t2 = Mono::pow(*v, 2);
                dd.mul_mono(&t2, &-Q::one())
            }
        })
    }

    /// Iterated total derivative `D_τ`.
    pub fn total_derivative_multi(&self, tau: &MultiIndex) -> Result<DiffPoly> {
        let mut f = self.clone();
        for i in 0..tau.dim() {
            for _ in 0..tau.get(i) {
                f = f.total_derivative(i)?;
            }
        }
        Ok(f)
    }

    /// Highest `|σ|` over unknown jets; parameter jets do not count.
    pub fn order(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::UndefinedOrder);
        }
        Ok(self.order_or_zero())
    }

    /// `order`, with 0 for the zero polynomial.
    pub fn order_or_zero(&self) -> usize {
        let uni = self.universe();
        self.jet_vars()
            .into_iter()
            .filter(|j| uni.is_unknown(j.sym))
            .map(|j| j.idx.order())
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `v^e` after collecting by powers of `v`.
    pub fn coefficient_of(&self, v: &Var, e: u32) -> DiffPoly {
        let mut out = Terms::new();
        for (m, c) in self.terms() {
            if m.exponent(v) == e {
                let rest = Mono(m.0.iter().filter(|p| p.0 != *v).cloned().collect());
                terms_add_into(&mut out, rest, c.clone());
            }
        }
        DiffPoly::from_terms(self.universe(), out)
    }
}

/// The value of `P[τ]` for a parameter `P`: a formal jet unless a rule covers
/// one of τ's directions, in which case `D_{τ-1_k}(rule_k)`.
pub(crate) fn expand_param_jet(
    uni: &std::sync::Arc<super::universe::Universe>,
    sym: u16,
    tau: MultiIndex,
    depth: usize,
) -> Result<DiffPoly> {
    let decl = uni.symbol(sym);
    if depth > uni.depth_cap() {
        return Err(Error::RuleCycle(decl.name.clone(), uni.depth_cap()));
    }
    let dir = (0..tau.dim()).find(|&k| tau.get(k) > 0 && decl.rules.contains_key(&k));
    let Some(k) = dir else {
        return Ok(DiffPoly::var(uni, Var::Jet(JetVar { sym, idx: tau })));
    };
    let mut f = DiffPoly::from_terms(uni, decl.rules[&k].clone());
    let rest = tau.dec(k).expect("direction present");
    for i in 0..rest.dim() {
        for _ in 0..rest.get(i) {
            f = f.total_derivative_at(i, depth + 1)?;
        }
    }
    Ok(f)
}

impl DiffPoly {
    /// Jet `P[τ]` with parameter rules applied; plain jet for unknowns.
    pub fn jet_expanded(uni: &std::sync::Arc<super::universe::Universe>, sym: usize, idx: &[u32]) -> Result<DiffPoly> {
        let tau = MultiIndex::from_slice(idx);
        if uni.is_unknown(sym as u16) {
            return Ok(DiffPoly::jet(uni, sym, idx));
        }
        expand_param_jet(uni, sym as u16, tau, 0)
    }

    /// Replaces every parameter jet covered by a rule with its expansion.
    pub fn expand_rules(&self) -> Result<DiffPoly> {
        let uni = self.universe().clone();
        let mut subst: Vec<(Var, DiffPoly)> = Vec::new();
        for j in self.jet_vars() {
            if uni.is_unknown(j.sym) || j.idx.is_zero() {
                continue;
            }
            let e = expand_param_jet(&uni, j.sym, j.idx, 0)?;
            if e != DiffPoly::var(&uni, Var::Jet(j)) {
                subst.push((Var::Jet(j), e));
            }
        }
        let mut f = self.clone();
        for (v, by) in subst {
            f = f.substitute(&v, &by);
        }
        Ok(f)
    }
}

/// `c` as a rational.
pub fn q(c: i64) -> Q {
    Q::from_integer(c.into())
}

pub fn qf(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}
