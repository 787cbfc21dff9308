use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::linalg::{Echelon, SparseRow};
use super::rows::SymbolRows;
use super::xi;
use crate::error::{Error, Result};
use crate::idealmod::subsets;
use crate::jetcalc::{binom, q};
use crate::Q;

/// Spencer δ-cohomology dimensions and the symbol dimensions they came from.
#[derive(Clone, Debug, Serialize)]
pub struct SpencerTable {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub orders: Vec<usize>,
    /// `dim g_i` for `i = 0..=cap+1`
    pub dims_g: Vec<usize>,
    /// non-zero `h^{i,j}` only, keyed by `(i, j)`
    #[serde(serialize_with = "ser_h")]
    pub h: BTreeMap<(usize, usize), usize>,
    pub cap: usize,
    /// the two top rows `i = cap−1, cap` vanish
    pub stabilized: bool,
    /// `Σ_i h^{i,1}`, the formal codimension
    pub formal_codim: usize,
    pub notes: Vec<String>,
}

fn ser_h<S: serde::Serializer>(h: &BTreeMap<(usize, usize), usize>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(h.len()))?;
    for ((i, j), v) in h {
        seq.serialize_element(&[*i, *j, *v])?;
    }
    seq.end()
}

impl SpencerTable {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.h.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `Σ_i h^{i,j}`
    pub fn total(&self, j: usize) -> usize {
        self.h.iter().filter(|((_, jj), _)| *jj == j).map(|(_, v)| v).sum()
    }

    /// `Σ_j (−1)^j h^{*,j}`
    pub fn euler(&self) -> i64 {
        (0..=self.n).map(|j| if j % 2 == 0 { self.total(j) as i64 } else { -(self.total(j) as i64) }).sum()
    }
}

/// Coordinates of `S^i ⊗ R^m ⊗ Λ^j`: (subset, unknown, monomial).
struct Ambient {
    mono: Vec<crate::jetcalc::MultiIndex>,
    subsets: Vec<Vec<usize>>,
    m: usize,
}

impl Ambient {
    fn new(n: usize, m: usize, i: usize, j: usize) -> Self {
        Ambient { mono: xi::monomials(n, i), subsets: subsets(n, j), m }
    }

    fn index(&self, subset: usize, unknown: usize, mono: usize) -> usize {
        (subset * self.m + unknown) * self.mono.len() + mono
    }
}

/// Images `δ(b ⊗ dx^J)` for a basis `b` of `g_i` and all j-subsets J.
fn delta_images(n: usize, m: usize, basis: &[Vec<Q>], i: usize, j: usize) -> Vec<SparseRow> {
    if i == 0 || j >= n {
        return Vec::new();
    }
    let src = xi::monomials(n, i);
    let tgt = Ambient::new(n, m, i - 1, j + 1);
    let ns = src.len();
    let mut out = Vec::new();
    for b in basis {
        for jset in subsets(n, j) {
            let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
            for (pos, c) in b.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (u, a) = (pos / ns, pos % ns);
                let alpha = src[a];
                for k in 0..n {
                    if jset.contains(&k) {
                        continue;
                    }
                    let Some(lower) = alpha.dec(k) else { continue };
                    let sign = if jset.iter().filter(|&&t| t < k).count() % 2 == 0 { 1 } else { -1 };
                    let mut new: Vec<usize> = jset.clone();
                    new.push(k);
                    new.sort_unstable();
                    let sidx = tgt.subsets.binary_search(&new).expect("subset");
                    let idx = tgt.index(sidx, u, xi::position(&tgt.mono, &lower));
                    *acc.entry(idx).or_insert_with(Q::zero) += c * q(sign * alpha.get(k) as i64);
                }
            }
            out.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
    }
    out
}

fn rank(rows: Vec<SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// `h^{i,j}` for `0 ≤ i ≤ cap`, `0 ≤ j ≤ n`, from exact ranks of δ on
/// `g_i ⊗ Λ^j`.
pub fn spencer_cohomology(rows: &SymbolRows, cap: usize) -> SpencerTable {
    let (n, m) = (rows.n, rows.m);
    let bases: Vec<Vec<Vec<Q>>> = (0..=cap + 1).map(|i| rows.g_basis(i)).collect();
    let dims_g: Vec<usize> = bases.iter().map(Vec::len).collect();
    // rank of δ : g_i ⊗ Λ^j → g_{i−1} ⊗ Λ^{j+1}
    let mut rk: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, b) in bases.iter().enumerate() {
        for j in 0..=n {
            rk.insert((i, j), rank(delta_images(n, m, b, i, j)));
        }
    }
    let mut h = BTreeMap::new();
    for i in 0..=cap {
        for j in 0..=n {
            let dim = dims_g[i] * binom(n as u64, j as u64) as usize;
            let incoming = if j == 0 { 0 } else { rk[&(i + 1, j - 1)] };
            let v = dim - rk[&(i, j)] - incoming;
            if v > 0 {
                h.insert((i, j), v);
            }
        }
    }
    let stabilized = cap >= 1 && !h.keys().any(|(i, _)| *i + 1 >= cap);
    let formal_codim = h.iter().filter(|((_, j), _)| *j == 1).map(|(_, v)| v).sum();
    let mut notes = Vec::new();
    if !stabilized {
        notes.push(format!("cohomology still non-zero near the cap {cap}; increase --cap"));
    }
    if formal_codim != rows.r() {
        notes.push(format!("formal codimension Σh^(*,1) = {formal_codim} differs from the equation count {}", rows.r()));
    }
    SpencerTable { n, m, r: rows.r(), orders: rows.orders.clone(), dims_g, h, cap, stabilized, formal_codim, notes }
}

/// Eventual polynomial `i ↦ dim g_i` and the functional dimension and rank.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HilbertData {
    /// coefficients in t, constant term first; empty for finite type
    #[serde(serialize_with = "ser_q_vec")]
    pub poly: Vec<Q>,
    /// functional dimension
    pub p: usize,
    /// functional rank
    pub d: u64,
    pub dims: Vec<usize>,
    /// first i from which `dim g_i` equals the polynomial
    pub stable_from: usize,
}

fn ser_q_vec<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl HilbertData {
    pub fn finite_type(&self) -> bool {
        self.p == 0
    }

    pub fn eval(&self, t: usize) -> Q {
        let mut acc = Q::zero();
        for c in self.poly.iter().rev() {
            acc = acc * q(t as i64) + c;
        }
        acc
    }
}

fn poly_mul_linear(p: &[Q], a: &Q) -> Vec<Q> {
    // p · (t − a)
    let mut out = vec![Q::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k + 1] += c;
        out[k] -= c * a;
    }
    out
}

/// Lagrange interpolation through `(x_k, y_k)`.
pub fn interpolate(pts: &[(i64, Q)]) -> Vec<Q> {
    let mut out = vec![Q::zero(); pts.len()];
    for (k, (xk, yk)) in pts.iter().enumerate() {
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for (l, (xl, _)) in pts.iter().enumerate() {
            if l != k {
                basis = poly_mul_linear(&basis, &q(*xl));
                denom *= q(xk - xl);
            }
        }
        for (c, b) in out.iter_mut().zip(basis) {
            *c += b * yk / &denom;
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Interpolates the eventual Hilbert polynomial from `dim g_0..=dim g_cap`.
/// A degree-e candidate through the last e+1 values is accepted once it also
/// matches the three values before them.
pub fn hilbert_data(rows: &SymbolRows, cap: usize) -> Result<HilbertData> {
    let mut dims = Vec::new();
    for i in 0..=cap {
        let d = rows.dim_g(i);
        dims.push(d);
        // g_{i+1} sits inside the prolongation of g_i, so zero stays zero
        if d == 0 {
            dims.resize(cap.max(i + 3) + 1, 0);
            break;
        }
    }
    hilbert_from_dims(&dims, rows.n)
}

pub fn hilbert_from_dims(dims: &[usize], n: usize) -> Result<HilbertData> {
    let cap = dims.len() - 1;
    for e in 0..n.max(1) {
        if cap < e + 3 {
            break;
        }
        let pts: Vec<(i64, Q)> = (cap - e..=cap).map(|i| (i as i64, q(dims[i] as i64))).collect();
        let poly = interpolate(&pts);
        let matches = |i: usize| {
            let mut acc = Q::zero();
            for c in poly.iter().rev() {
                acc = acc * q(i as i64) + c;
            }
            acc == q(dims[i] as i64)
        };
        if (cap - e - 3..cap - e).all(matches) {
            let stable_from = (0..=cap).rev().take_while(|&i| matches(i)).last().unwrap_or(cap);
            let (p, d) = if poly.is_empty() {
                (0, dims.iter().sum::<usize>() as u64)
            } else {
                let deg = poly.len() - 1;
                let fact: i64 = (1..=deg as i64).product();
                let d = poly[deg].clone() * q(fact);
                if !d.is_integer() {
                    return Err(Error::Invalid(format!("non-integral leading coefficient {}", poly[deg])));
                }
                (deg + 1, d.to_integer().to_u64().unwrap_or(0))
            };
            return Ok(HilbertData { poly, p, d, dims: dims.to_vec(), stable_from });
        }
    }
    Err(Error::NoStabilization(cap))
}

/// Closed-form Spencer table of a generalized complete intersection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedB {
    /// `(j, Σ_i h^{i,j})` for every j with a non-zero total
    pub totals: Vec<(usize, usize)>,
    /// bigrade `(i, j)` for pure order k, if the orders are all equal
    pub placement: Option<Vec<(usize, usize)>>,
}

fn check_range(n: usize, m: usize, r: usize) -> Result<()> {
    if !(m < r && r < n + m) {
        return Err(Error::Range(format!("need m < r < n+m, got n={n} m={m} r={r}")));
    }
    Ok(())
}

pub fn theorem_b_expected(n: usize, m: usize, r: usize, orders: &[usize]) -> Result<ExpectedB> {
    check_range(n, m, r)?;
    let mut totals = vec![(0, m), (1, r)];
    for j in 2..=r + 1 - m {
        let v = binom((m + j - 3) as u64, (j - 2) as u64) * binom(r as u64, (m + j - 1) as u64);
        totals.push((j, v as usize));
    }
    let placement = match orders.first() {
        Some(&k) if orders.iter().all(|&l| l == k) && k > 0 => Some(
            totals
                .iter()
                .map(|&(j, _)| match j {
                    0 => (0, 0),
                    1 => (k - 1, 1),
                    _ => (k * m + k * j - j - k, j),
                })
                .collect(),
        ),
        _ => None,
    };
    Ok(ExpectedB { totals, placement })
}

/// Elementary symmetric polynomial `S_k`.
pub fn elementary_symmetric(k: usize, xs: &[usize]) -> u64 {
    let mut e = vec![0u64; k + 1];
    e[0] = 1;
    for &x in xs {
        for t in (1..=k).rev() {
            e[t] += e[t - 1] * x as u64;
        }
    }
    e[k]
}

/// `(p, d) = (m+n−r−1, S_{r−m+1}(orders))`.
pub fn theorem_c_expected(n: usize, m: usize, r: usize, orders: &[usize]) -> Result<(usize, u64)> {
    if r != m {
        check_range(n, m, r)?;
    }
    if orders.len() != r {
        return Err(Error::Shape(format!("{} orders for r={r}", orders.len())));
    }
    Ok((m + n - r - 1, elementary_symmetric(r - m + 1, orders)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_recovers_quadratic() {
        let pts: Vec<(i64, Q)> = (0..3).map(|i| (i, q(i * i + 1))).collect();
        assert_eq!(interpolate(&pts), vec![q(1), q(0), q(1)]);
    }

    #[test]
    fn symmetric_functions() {
        assert_eq!(elementary_symmetric(2, &[2, 3]), 6);
        assert_eq!(elementary_symmetric(1, &[1, 1]), 2);
        assert_eq!(elementary_symmetric(3, &[1, 1, 1, 1]), 4);
    }

    #[test]
    fn expected_tables() {
        let b = theorem_b_expected(2, 1, 2, &[2, 2]).unwrap();
        assert_eq!(b.totals, vec![(0, 1), (1, 2), (2, 1)]);
        assert_eq!(b.placement.unwrap(), vec![(0, 0), (1, 1), (2, 2)]);
        let b = theorem_b_expected(3, 2, 4, &[1; 4]).unwrap();
        assert_eq!(b.totals, vec![(0, 2), (1, 4), (2, 4), (3, 2)]);
        assert!(theorem_b_expected(2, 2, 2, &[1, 1]).is_err());
        assert_eq!(theorem_c_expected(3, 1, 2, &[1, 1]).unwrap(), (1, 1));
    }
}
