//! Prolonged ideals `J_s`, Gröbner normal forms in the truncated jet ring,
//! reduced brackets, the compatibility verdict and first syzygies.

mod compat;
pub mod groebner;
mod ring;
mod syzygy;

use std::collections::{BTreeMap, BTreeSet};

pub use compat::{check_compatibility, check_compatibility_with, CompatOptions, CompatReport, SubsetResult, Verdict};
pub use groebner::{BlockOrder, Budget, Poly};
pub use ring::{inverse_relations, TruncatedRing};
pub use syzygy::{first_syzygy_operator, SyzygyOptions, SyzygyResult};

use crate::brackets::{coordinate_multibracket, CoordinateVariant};
use crate::error::{Error, Result};
use crate::jetcalc::{DiffPoly, MultiIndex, Var};
use crate::system::PdeSystem;

/// `{D_τ F_i : l(i)+|τ| ≤ s}` in canonical form, deduplicated, in
/// (equation, τ) order.
pub fn generate_js(system: &PdeSystem, s: usize) -> Result<Vec<DiffPoly>> {
    let n = system.n();
    let mut out: Vec<DiffPoly> = Vec::new();
    for eq in &system.equations {
        let l = eq.expr.order_or_zero();
        if l > s {
            continue;
        }
        let mut derived: BTreeMap<MultiIndex, DiffPoly> = BTreeMap::new();
        derived.insert(MultiIndex::zero(n), eq.expr.clone());
        for tau in MultiIndex::all_up_to(n, s - l) {
            if tau.is_zero() {
                continue;
            }
            let i = tau.first_direction().expect("non-zero");
            let prev = tau.dec(i).expect("entry present");
            let d = derived[&prev].total_derivative(i)?;
            derived.insert(tau, d);
        }
        for (_, d) in derived {
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Reduced Gröbner basis of an ideal in a [`TruncatedRing`].
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: TruncatedRing,
    polys: Vec<Poly>,
}

impl GroebnerBasis {
    pub fn ring(&self) -> &TruncatedRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn generators(&self) -> Vec<DiffPoly> {
        self.polys.iter().map(|p| self.ring.from_poly(p)).collect()
    }

    /// The ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p.terms.len() == 1 && p.lm().iter().all(|&e| e == 0))
    }

    /// Canonical remainder; zero iff `f` lies in the ideal.
    pub fn normal_form(&self, f: &DiffPoly) -> Result<DiffPoly> {
        let missing: BTreeSet<Var> = f.vars().into_iter().filter(|v| !self.ring.contains(v)).collect();
        if missing.is_empty() {
            let p = self.ring.to_poly(f)?;
            let r = groebner::reduce(&p, &self.polys, self.ring.order());
            return Ok(self.ring.from_poly(&r));
        }
        let big = self.ring.extended(missing);
        let basis: Vec<Poly> = self.polys.iter().map(|p| big.transfer(&self.ring, p)).collect();
        let p = big.to_poly(f)?;
        let r = groebner::reduce(&p, &basis, big.order());
        Ok(big.from_poly(&r))
    }

    pub fn contains(&self, f: &DiffPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

/// Gröbner basis of `gens` in the ring of jets of order ≤ s.
pub fn groebner(gens: &[DiffPoly], s: usize, budget: Budget) -> Result<GroebnerBasis> {
    let Some(g0) = gens.first() else {
        return Err(Error::Invalid("no generators".into()));
    };
    let uni = g0.universe().clone();
    let extra: BTreeSet<Var> = gens.iter().flat_map(|g| g.vars()).collect();
    let ring = TruncatedRing::new(&uni, s, extra);
    groebner_in(gens, ring, budget)
}

/// Gröbner basis in a given ring.
pub fn groebner_in(gens: &[DiffPoly], ring: TruncatedRing, budget: Budget) -> Result<GroebnerBasis> {
    let missing: BTreeSet<Var> = gens.iter().flat_map(|g| g.vars()).filter(|v| !ring.contains(v)).collect();
    let ring = if missing.is_empty() { ring } else { ring.extended(missing) };
    let polys: Vec<Poly> = gens.iter().map(|g| ring.to_poly(g)).collect::<Result<_>>()?;
    let g = groebner::groebner(&polys, ring.order(), budget)?;
    Ok(GroebnerBasis { ring, polys: g })
}

/// Basis of `J_s` of the full system together with the inverse relations.
pub fn groebner_js(system: &PdeSystem, s: usize, budget: Budget) -> Result<GroebnerBasis> {
    let mut gens = generate_js(system, s)?;
    gens.extend(inverse_relations(&system.uni));
    if gens.is_empty() {
        gens.push(DiffPoly::zero(&system.uni));
    }
    groebner(&gens, s, budget)
}

/// `[F_{i_1},…,F_{i_{m+1}}]_E`: the calculational bracket reduced modulo
/// `J_{Σl−1}` of the whole system.
pub fn reduced_bracket(system: &PdeSystem, subset: &[usize], budget: Budget) -> Result<DiffPoly> {
    reduced_bracket_with(system, subset, CoordinateVariant::Calculational, budget)
}

pub fn reduced_bracket_with(
    system: &PdeSystem,
    subset: &[usize],
    variant: CoordinateVariant,
    budget: Budget,
) -> Result<DiffPoly> {
    check_subset(system, subset)?;
    let fs: Vec<DiffPoly> = subset.iter().map(|&i| system.equations[i].expr.clone()).collect();
    let l: usize = fs.iter().map(DiffPoly::order_or_zero).sum();
    let b = coordinate_multibracket(&fs, variant)?;
    let gb = groebner_js(system, l.saturating_sub(1), budget)?;
    gb.normal_form(&b)
}

pub(crate) fn check_subset(system: &PdeSystem, subset: &[usize]) -> Result<()> {
    let m = system.m();
    if subset.len() != m + 1 {
        return Err(Error::Shape(format!("subset has {} indices, need m+1 = {}", subset.len(), m + 1)));
    }
    let mut seen = BTreeSet::new();
    for &i in subset {
        if i >= system.r() || !seen.insert(i) {
            return Err(Error::Shape(format!("invalid subset {subset:?} for {} equations", system.r())));
        }
    }
    Ok(())
}

/// All k-element subsets of `0..r`, lexicographic.
pub fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            go(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, r, k, &mut Vec::new(), &mut out);
    out
}
