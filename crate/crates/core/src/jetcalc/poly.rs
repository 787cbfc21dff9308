use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::universe::{JetVar, Universe, Var};
use crate::error::{Error, Result};
use crate::Q;

/// Monomial: variables ascending in the fixed ranking, positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub(crate) Vec<(Var, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        out.retain(|p| p.1 > 0);
        Mono(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|p| p.0.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = &(Var, u32)> {
        self.0.iter()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Mono(out)
    }

    /// `self / v`, assuming `v` divides `self`.
    pub fn div_var(&self, v: &Var) -> Mono {
        let mut out = self.0.clone();
        let i = out.binary_search_by(|p| p.0.cmp(v)).expect("variable not present");
        if out[i].1 == 1 {
            out.remove(i);
        } else {
            out[i].1 -= 1;
        }
        Mono(out)
    }
}

/// Graded reverse lexicographic over the variable ranking.
impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        let d = self.degree().cmp(&o.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &o.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (va, ea) = a[i - 1];
            let (vb, eb) = b[j - 1];
            match va.cmp(&vb) {
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i -= 1;
                    j -= 1;
                }
            }
        }
        // equal degree and equal tails: both sides are exhausted together
        i.cmp(&j)
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Sparse coefficient map without a universe handle; used for rules and by
/// the universe itself.
pub type Terms = BTreeMap<Mono, Q>;

pub(crate) fn terms_add_into(acc: &mut Terms, m: Mono, c: Q) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn terms_add(a: &Terms, b: &Terms) -> Terms {
    let mut out = a.clone();
    for (m, c) in b {
        terms_add_into(&mut out, m.clone(), c.clone());
    }
    out
}

pub fn terms_scale(a: &Terms, c: &Q) -> Terms {
    if c.is_zero() {
        return Terms::new();
    }
    a.iter().map(|(m, x)| (m.clone(), x * c)).collect()
}

pub fn terms_mul(a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            terms_add_into(&mut out, ma.mul(mb), ca * cb);
        }
    }
    out
}

pub fn terms_mul_mono(a: &Terms, m: &Mono, c: &Q) -> Terms {
    a.iter().map(|(ma, x)| (ma.mul(m), x * c)).collect()
}

pub fn terms_const(c: Q) -> Terms {
    let mut t = Terms::new();
    terms_add_into(&mut t, Mono::one(), c);
    t
}

pub fn terms_var(v: Var) -> Terms {
    let mut t = Terms::new();
    t.insert(Mono::var(v), Q::one());
    t
}

/// Differential polynomial over a fixed variable universe.
#[derive(Clone)]
pub struct DiffPoly {
    uni: Arc<Universe>,
    terms: Terms,
}

impl PartialEq for DiffPoly {
    fn eq(&self, o: &Self) -> bool {
        self.uni.id() == o.uni.id() && self.terms == o.terms
    }
}

impl Eq for DiffPoly {}

impl DiffPoly {
    pub fn from_terms(uni: &Arc<Universe>, terms: Terms) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        DiffPoly { uni: uni.clone(), terms }
    }

    pub fn zero(uni: &Arc<Universe>) -> Self {
        Self::from_terms(uni, Terms::new())
    }

    pub fn one(uni: &Arc<Universe>) -> Self {
        Self::constant(uni, Q::one())
    }

    pub fn constant(uni: &Arc<Universe>, c: Q) -> Self {
        Self::from_terms(uni, terms_const(c))
    }

    pub fn int(uni: &Arc<Universe>, c: i64) -> Self {
        Self::constant(uni, Q::from_integer(c.into()))
    }

    pub fn var(uni: &Arc<Universe>, v: Var) -> Self {
        Self::from_terms(uni, terms_var(v))
    }

    pub fn base(uni: &Arc<Universe>, i: usize) -> Self {
        Self::var(uni, Var::Base(i as u16))
    }

    /// Jet of symbol `sym` (unknowns first, then parameters).
    pub fn jet(uni: &Arc<Universe>, sym: usize, idx: &[u32]) -> Self {
        Self::var(uni, uni.jet(sym as u16, idx))
    }

    /// Jet of a symbol looked up by name; panics on unknown names.
    pub fn named(uni: &Arc<Universe>, name: &str, idx: &[u32]) -> Self {
        if let Some(b) = uni.base_index(name) {
            assert!(idx.iter().all(|&e| e == 0));
            return Self::base(uni, b as usize);
        }
        let s = uni.symbol_index(name).unwrap_or_else(|| panic!("undeclared `{name}`"));
        let idx = if idx.is_empty() { vec![0; uni.n()] } else { idx.to_vec() };
        Self::jet(uni, s as usize, &idx)
    }

    /// Inverse symbol of the q-th declared invertible.
    pub fn inv(uni: &Arc<Universe>, q: usize) -> Self {
        assert!(q < uni.invertibles().len());
        Self::var(uni, Var::Inv(q as u16))
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.uni
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn into_terms(self) -> Terms {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    fn check(&self, o: &DiffPoly) -> Result<()> {
        if self.uni.id() == o.uni.id() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn checked_add(&self, o: &DiffPoly) -> Result<DiffPoly> {
        self.check(o)?;
        Ok(Self::from_terms(&self.uni, terms_add(&self.terms, &o.terms)))
    }

    pub fn checked_sub(&self, o: &DiffPoly) -> Result<DiffPoly> {
        self.check(o)?;
        Ok(Self::from_terms(&self.uni, terms_add(&self.terms, &terms_scale(&o.terms, &-Q::one()))))
    }

    pub fn checked_mul(&self, o: &DiffPoly) -> Result<DiffPoly> {
        self.check(o)?;
        Ok(Self::from_terms(&self.uni, terms_mul(&self.terms, &o.terms)))
    }

    pub fn scale(&self, c: &Q) -> DiffPoly {
        Self::from_terms(&self.uni, terms_scale(&self.terms, c))
    }

    pub fn scale_int(&self, c: i64) -> DiffPoly {
        self.scale(&Q::from_integer(c.into()))
    }

    pub fn mul_mono(&self, m: &Mono, c: &Q) -> DiffPoly {
        Self::from_terms(&self.uni, terms_mul_mono(&self.terms, m, c))
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut acc = DiffPoly::one(&self.uni);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// All variables occurring in the polynomial.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.0.iter().map(|p| p.0)).collect()
    }

    pub fn jet_vars(&self) -> BTreeSet<JetVar> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Jet(j) => Some(j),
                _ => None,
            })
            .collect()
    }

    /// Total degree (0 for constants and the zero polynomial).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    /// Exact evaluation; `f` supplies each variable's value.
    pub fn eval(&self, f: &mut impl FnMut(&Var) -> Q) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = f(v);
                for _ in 0..*e {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `v := by` everywhere.
    pub fn substitute(&self, v: &Var, by: &DiffPoly) -> DiffPoly {
        let mut acc = Terms::new();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                terms_add_into(&mut acc, m.clone(), c.clone());
                continue;
            }
            let rest = Mono(m.0.iter().filter(|p| p.0 != *v).cloned().collect());
            let p = by.pow(e);
            for (mp, cp) in p.terms {
                terms_add_into(&mut acc, mp.mul(&rest), cp * c);
            }
        }
        Self::from_terms(&self.uni, acc)
    }

    /// Moves the polynomial into another universe whose variable ids agree.
    pub fn rehome(&self, uni: &Arc<Universe>) -> DiffPoly {
        Self::from_terms(uni, self.terms.clone())
    }

    /// Drops a common rational factor so the leading coefficient is 1.
    pub fn monic(&self) -> DiffPoly {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Q::one() / c)),
        }
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, uni: &Universe, terms: &Terms) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (m, c)) in terms.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        let mut parts = Vec::new();
        if !a.is_one() || m.is_one() {
            parts.push(a.to_string());
        }
        for (v, e) in &m.0 {
            let name = uni.var_name(v);
            parts.push(if *e == 1 { name } else { format!("{name}^{e}") });
        }
        write!(f, "{}", parts.join("*"))?;
    }
    Ok(())
}

/// Formats raw terms against a universe (rules, invertibles).
pub fn display_terms(uni: &Universe, terms: &Terms) -> String {
    struct W<'a>(&'a Universe, &'a Terms);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt_terms(f, self.0, self.1)
        }
    }
    W(uni, terms).to_string()
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.uni, &self.terms)
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffPoly({self})")
    }
}

// Operator sugar for same-universe arithmetic; mixing universes is a
// programming error here, use the `checked_*` methods to get a `Result`.
impl<'a> Add<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: &DiffPoly) -> DiffPoly {
        self.checked_add(o).expect("universe mismatch")
    }
}

impl<'a> Sub<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: &DiffPoly) -> DiffPoly {
        self.checked_sub(o).expect("universe mismatch")
    }
}

impl<'a> Mul<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: &DiffPoly) -> DiffPoly {
        self.checked_mul(o).expect("universe mismatch")
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&-Q::one())
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: DiffPoly) -> DiffPoly {
        &self + &o
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: DiffPoly) -> DiffPoly {
        &self - &o
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: DiffPoly) -> DiffPoly {
        &self * &o
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}
