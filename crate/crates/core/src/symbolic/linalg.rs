//! Exact sparse Gaussian elimination over Q.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

/// Sparse row: strictly increasing column indices, no zero entries.
pub type SparseRow = Vec<(usize, Q)>;

pub fn sparse(dense: &[Q]) -> SparseRow {
    dense.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// `a − c·b`
fn axpy(a: &SparseRow, c: &Q, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

type IntRow = Vec<(usize, BigInt)>;

fn primitive(mut row: IntRow) -> IntRow {
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row.first().is_some_and(|(_, v)| v.is_negative()) {
        g = -g;
    }
    if !g.is_one() && !g.is_zero() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    row
}

fn to_int(row: SparseRow) -> IntRow {
    let l = row.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    primitive(row.into_iter().map(|(i, v)| (i, (v * Q::from_integer(l.clone())).to_integer())).collect())
}

/// `a·x − b·y` for rows x, y.
fn combine(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if i == x.len() || y[j].0 < x[i].0 {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form built incrementally, fraction-free: rows are kept as
/// primitive integer vectors.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds a row; true if the rank grew.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let r = self.reduce_head(to_int(row));
        match r.first() {
            None => false,
            Some((c, _)) => {
                self.pivots.insert(*c, r);
                true
            }
        }
    }

    // only clears the leading entries, which is all insertion needs
    fn reduce_head(&self, mut row: IntRow) -> IntRow {
        while let Some((c, v)) = row.first() {
            match self.pivots.get(c) {
                Some(p) => {
                    let g = v.gcd(&p[0].1);
                    let (a, b) = (&p[0].1 / &g, v / &g);
                    row = primitive(combine(&a, &row, &b, p));
                }
                None => break,
            }
        }
        row
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce_head(to_int(row)).is_empty()
    }

    /// Basis of the null space of the inserted rows, as dense vectors of
    /// length `ncols`.
    pub fn kernel(&self, ncols: usize) -> Vec<Vec<Q>> {
        // back substitution to reduced form
        let cols: Vec<usize> = self.pivots.keys().copied().collect();
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for &c in cols.iter().rev() {
            let p = &self.pivots[&c];
            let lead = Q::from_integer(p[0].1.clone());
            let mut row: SparseRow = p.iter().map(|(i, v)| (*i, Q::from_integer(v.clone()) / &lead)).collect();
            let mut k = 1;
            while k < row.len() {
                let col = row[k].0;
                if let Some(p) = reduced.get(&col) {
                    let v = row[k].1.clone();
                    row = axpy(&row, &v, p);
                } else {
                    k += 1;
                }
            }
            reduced.insert(c, row);
        }
        let mut out = Vec::new();
        for f in (0..ncols).filter(|c| !reduced.contains_key(c)) {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (&p, row) in &reduced {
                if let Ok(k) = row.binary_search_by_key(&f, |e| e.0) {
                    v[p] = -row[k].1.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn kernel(rows: impl IntoIterator<Item = SparseRow>, ncols: usize) -> Vec<Vec<Q>> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.kernel(ncols)
}
