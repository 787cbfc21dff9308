//! Commutative polynomials over Q in the covector variables ξ_1..ξ_n.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::diffops::permutations;
use crate::idealmod::{BlockOrder, Poly};
use crate::jetcalc::{q, MultiIndex};
use crate::Q;

pub type XiQ = BTreeMap<MultiIndex, Q>;

pub fn add_into(acc: &mut XiQ, p: &XiQ, c: &Q) {
    for (m, v) in p {
        let e = acc.entry(*m).or_insert_with(Q::zero);
        *e += v * c;
        if e.is_zero() {
            acc.remove(m);
        }
    }
}

pub fn mul(a: &XiQ, b: &XiQ) -> XiQ {
    let mut out = XiQ::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.add(mb);
            let e = out.entry(m).or_insert_with(Q::zero);
            *e += ca * cb;
            if e.is_zero() {
                out.remove(&m);
            }
        }
    }
    out
}

pub fn one(n: usize) -> XiQ {
    XiQ::from([(MultiIndex::zero(n), q(1))])
}

/// Determinant of a square matrix with commuting entries.
pub fn det(rows: &[Vec<&XiQ>], n: usize) -> XiQ {
    let k = rows.len();
    let mut out = XiQ::new();
    for (perm, sign) in permutations(k) {
        let mut t = one(n);
        for (i, &j) in perm.iter().enumerate() {
            t = mul(&t, rows[i][j]);
            if t.is_empty() {
                break;
            }
        }
        add_into(&mut out, &t, &q(sign));
    }
    out
}

pub fn to_poly(p: &XiQ, n: usize, ord: &BlockOrder) -> Poly {
    let terms = p
        .iter()
        .map(|(m, c)| ((0..n).map(|i| m.get(i) as u16).collect::<Vec<u16>>(), c.clone()))
        .collect();
    Poly::from_terms(terms, ord)
}

/// Monomials of degree d, in the sorted order used for coordinates.
pub fn monomials(n: usize, d: usize) -> Vec<MultiIndex> {
    MultiIndex::all_of_order(n, d)
}

pub fn position(basis: &[MultiIndex], m: &MultiIndex) -> usize {
    basis.binary_search(m).expect("monomial of the right degree")
}

/// `α!/(α−β)!`, the coefficient of `∂^β x^α`.
pub fn falling(alpha: &MultiIndex, beta: &MultiIndex) -> Q {
    let mut c: u64 = 1;
    for i in 0..alpha.dim() {
        let (a, b) = (alpha.get(i) as u64, beta.get(i) as u64);
        for t in 0..b {
            c *= a - t;
        }
    }
    q(c as i64)
}

pub fn display(p: &XiQ) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.iter().rev().enumerate() {
        let neg = c < &Q::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        if k == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for i in 0..m.dim() {
            match m.get(i) {
                0 => {}
                1 => factors.push(format!("xi{}", i + 1)),
                e => factors.push(format!("xi{}^{e}", i + 1)),
            }
        }
        if factors.is_empty() || a != q(1) {
            factors.insert(0, a.to_string());
        }
        s.push_str(&factors.join("*"));
    }
    s
}
