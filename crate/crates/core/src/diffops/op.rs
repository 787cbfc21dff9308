use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jetcalc::{DiffPoly, MultiIndex, Universe};
use crate::Q;

/// Scalar linear differential operator `Σ a_σ D_σ`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinDiffOp {
    uni: Arc<Universe>,
    coeffs: BTreeMap<MultiIndex, DiffPoly>,
    declared_order: usize,
}

impl LinDiffOp {
    pub fn zero(uni: &Arc<Universe>) -> Self {
        LinDiffOp { uni: uni.clone(), coeffs: BTreeMap::new(), declared_order: 0 }
    }

    /// Multiplication by `a` (order 0).
    pub fn mul_by(a: &DiffPoly) -> Self {
        Self::term(a, &a.universe().zero_index())
    }

    pub fn identity(uni: &Arc<Universe>) -> Self {
        Self::mul_by(&DiffPoly::one(uni))
    }

    /// `D_σ`.
    pub fn d(uni: &Arc<Universe>, sigma: &[u32]) -> Self {
        Self::term(&DiffPoly::one(uni), &MultiIndex::from_slice(sigma))
    }

    /// `D_i` for a 0-based direction.
    pub fn d_dir(uni: &Arc<Universe>, i: usize) -> Self {
        Self::term(&DiffPoly::one(uni), &MultiIndex::unit(uni.n(), i))
    }

    /// `a · D_σ`.
    pub fn term(a: &DiffPoly, sigma: &MultiIndex) -> Self {
        let mut coeffs = BTreeMap::new();
        if !a.is_zero() {
            coeffs.insert(*sigma, a.clone());
        }
        LinDiffOp { uni: a.universe().clone(), coeffs, declared_order: sigma.order() }
    }

    pub fn from_coeffs(uni: &Arc<Universe>, coeffs: BTreeMap<MultiIndex, DiffPoly>) -> Self {
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let declared_order = coeffs.keys().map(|s| s.order()).max().unwrap_or(0);
        LinDiffOp { uni: uni.clone(), coeffs, declared_order }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.uni
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, DiffPoly> {
        &self.coeffs
    }

    pub fn coeff(&self, sigma: &MultiIndex) -> DiffPoly {
        self.coeffs.get(sigma).cloned().unwrap_or_else(|| DiffPoly::zero(&self.uni))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest `|σ|` carrying a coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.keys().map(|s| s.order()).max().unwrap_or(0)
    }

    pub fn declared_order(&self) -> usize {
        self.declared_order
    }

    /// Raises the filtration level; lowering below the actual order is refused.
    pub fn with_declared_order(mut self, k: usize) -> Result<Self> {
        if k < self.order() {
            return Err(Error::Filtration { requested: k, actual: self.order() });
        }
        self.declared_order = k;
        Ok(self)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.uni.id() == o.uni.id() {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut c = self.coeffs.clone();
        for (s, a) in &o.coeffs {
            let v = match c.get(s) {
                Some(x) => x + a,
                None => a.clone(),
            };
            if v.is_zero() {
                c.remove(s);
            } else {
                c.insert(*s, v);
            }
        }
        Ok(LinDiffOp { uni: self.uni.clone(), coeffs: c, declared_order: self.declared_order.max(o.declared_order) })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::from_integer(1.into()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(s, a)| (*s, a.scale(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        LinDiffOp { uni: self.uni.clone(), coeffs, declared_order: self.declared_order }
    }

    /// `a ∘ self` for a multiplication operator `a`.
    pub fn left_mul(&self, a: &DiffPoly) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(s, c)| (*s, a * c))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LinDiffOp { uni: self.uni.clone(), coeffs, declared_order: self.declared_order }
    }

    /// `self ∘ o`, expanded by `D_σ∘(b D_τ) = Σ_{ρ≤σ} C(σ,ρ) D_ρ(b) D_{σ−ρ+τ}`.
    pub fn compose(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out: BTreeMap<MultiIndex, DiffPoly> = BTreeMap::new();
        // derivative cache per right-hand coefficient
        let mut cache: HashMap<(MultiIndex, MultiIndex), DiffPoly> = HashMap::new();
        for (sigma, a) in &self.coeffs {
            for rho in sigma.sub_indices() {
                let binom = Q::from_integer(sigma.binomial(&rho).into());
                let rest = sigma.checked_sub(&rho).expect("ρ ≤ σ");
                for (tau, b) in &o.coeffs {
                    let key = (*tau, rho);
                    if !cache.contains_key(&key) {
                        cache.insert(key, b.total_derivative_multi(&rho)?);
                    }
                    let db = &cache[&key];
                    if db.is_zero() {
                        continue;
                    }
                    let c = (a * db).scale(&binom);
                    let idx = rest.add(tau);
                    let v = match out.remove(&idx) {
                        Some(x) => &x + &c,
                        None => c,
                    };
                    if !v.is_zero() {
                        out.insert(idx, v);
                    }
                }
            }
        }
        let mut r = LinDiffOp::from_coeffs(&self.uni, out);
        r.declared_order = self.declared_order + o.declared_order;
        Ok(r)
    }

    /// `Σ a_σ D_σ(f)`.
    pub fn apply(&self, f: &DiffPoly) -> Result<DiffPoly> {
        let mut acc = DiffPoly::zero(&self.uni);
        for (s, a) in &self.coeffs {
            acc = &acc + &(a * &f.total_derivative_multi(s)?);
        }
        Ok(acc)
    }

    /// Degree-k part `Σ_{|σ|=k} a_σ ξ^σ`.
    pub fn symbol(&self, k: usize) -> Result<XiPoly> {
        if k < self.order() {
            return Err(Error::Filtration { requested: k, actual: self.order() });
        }
        Ok(XiPoly::from_map(
            &self.uni,
            self.coeffs.iter().filter(|(s, _)| s.order() == k).map(|(s, a)| (*s, a.clone())).collect(),
        ))
    }
}

impl fmt::Display for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(s, a)| {
                let c = if a.len() > 1 { format!("({a})") } else { a.to_string() };
                if s.is_zero() {
                    c
                } else if c == "1" {
                    format!("D{s}")
                } else if c == "-1" {
                    format!("-D{s}")
                } else {
                    format!("{c}*D{s}")
                }
            })
            .collect();
        for (k, p) in parts.iter().enumerate() {
            match (k, p.strip_prefix('-')) {
                (0, _) => write!(f, "{p}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {p}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinDiffOp({self})")
    }
}

/// Row `(∇_1, …, ∇_m)` acting on m-tuples of functions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VectorDiffOp {
    pub row: Vec<LinDiffOp>,
    pub declared_order: usize,
}

impl VectorDiffOp {
    pub fn new(row: Vec<LinDiffOp>) -> Self {
        let declared_order = row.iter().map(|o| o.declared_order()).max().unwrap_or(0);
        VectorDiffOp { row, declared_order }
    }

    pub fn zero(uni: &Arc<Universe>, m: usize) -> Self {
        Self::new(vec![LinDiffOp::zero(uni); m])
    }

    pub fn len(&self) -> usize {
        self.row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.row.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.row.iter().all(LinDiffOp::is_zero)
    }

    pub fn order(&self) -> usize {
        self.row.iter().map(LinDiffOp::order).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.len() != o.len() {
            return Err(Error::Shape(format!("row lengths {} and {}", self.len(), o.len())));
        }
        let row = self.row.iter().zip(&o.row).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(VectorDiffOp::new(row))
    }

    pub fn scale(&self, c: &Q) -> Self {
        VectorDiffOp::new(self.row.iter().map(|a| a.scale(c)).collect())
    }

    /// `A ∘ self`, componentwise.
    pub fn left_compose(&self, a: &LinDiffOp) -> Result<Self> {
        Ok(VectorDiffOp::new(self.row.iter().map(|b| a.compose(b)).collect::<Result<_>>()?))
    }

    /// `self ∘ A`, componentwise.
    pub fn right_compose(&self, a: &LinDiffOp) -> Result<Self> {
        Ok(VectorDiffOp::new(self.row.iter().map(|b| b.compose(a)).collect::<Result<_>>()?))
    }

    /// `Σ_j ∇_j(f_j)`.
    pub fn apply(&self, f: &[DiffPoly]) -> Result<DiffPoly> {
        if f.len() != self.len() {
            return Err(Error::Shape(format!("{} operators applied to {} functions", self.len(), f.len())));
        }
        let mut acc: Option<DiffPoly> = None;
        for (op, g) in self.row.iter().zip(f) {
            let v = op.apply(g)?;
            acc = Some(match acc {
                Some(a) => &a + &v,
                None => v,
            });
        }
        acc.ok_or_else(|| Error::Shape("empty row".into()))
    }
}

impl fmt::Display for VectorDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.row.iter().map(|o| o.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Homogeneous-or-not polynomial in `ξ_1..ξ_n` with `DiffPoly` coefficients;
/// exponents are stored as multi-indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XiPoly {
    uni: Arc<Universe>,
    pub terms: BTreeMap<MultiIndex, DiffPoly>,
}

impl XiPoly {
    pub fn from_map(uni: &Arc<Universe>, terms: BTreeMap<MultiIndex, DiffPoly>) -> Self {
        XiPoly { uni: uni.clone(), terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn zero(uni: &Arc<Universe>) -> Self {
        Self::from_map(uni, BTreeMap::new())
    }

    pub fn one(uni: &Arc<Universe>) -> Self {
        let mut t = BTreeMap::new();
        t.insert(uni.zero_index(), DiffPoly::one(uni));
        Self::from_map(uni, t)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut t = self.terms.clone();
        for (s, c) in &o.terms {
            let v = match t.remove(s) {
                Some(x) => &x + c,
                None => c.clone(),
            };
            if !v.is_zero() {
                t.insert(*s, v);
            }
        }
        XiPoly { uni: self.uni.clone(), terms: t }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_map(&self.uni, self.terms.iter().map(|(s, a)| (*s, a.scale(c))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut acc = Self::zero(&self.uni);
        for (s, a) in &self.terms {
            let part: BTreeMap<_, _> = o.terms.iter().map(|(t, b)| (s.add(t), a * b)).collect();
            acc = acc.add(&Self::from_map(&self.uni, part));
        }
        acc
    }

    /// Replaces `ξ^α` by `D_α` and applies to `f`.
    pub fn apply_as_operator(&self, f: &DiffPoly) -> Result<DiffPoly> {
        LinDiffOp::from_coeffs(&self.uni, self.terms.clone()).apply(f)
    }
}

impl fmt::Display for XiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(s, a)| format!("({a})*xi{s}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
