use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{Echelon, SparseRow};
use super::point::EvalPoint;
use super::xi::{self, XiQ};
use crate::error::{Error, Result};
use crate::jetcalc::{linearize, q, MultiIndex};
use crate::system::PdeSystem;
use crate::Q;

/// Dual symbols `f_s ∈ Q[ξ]^m`, row s homogeneous of degree `orders[s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolRows {
    pub n: usize,
    pub m: usize,
    pub orders: Vec<usize>,
    pub rows: Vec<Vec<XiQ>>,
}

impl SymbolRows {
    pub fn new(n: usize, m: usize, orders: Vec<usize>, rows: Vec<Vec<XiQ>>) -> Result<Self> {
        if rows.len() != orders.len() {
            return Err(Error::Shape(format!("{} rows but {} orders", rows.len(), orders.len())));
        }
        for (s, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Shape(format!("row {s} has {} entries, expected {m}", row.len())));
            }
            for p in row {
                if p.keys().any(|e| e.dim() != n || e.order() != orders[s]) {
                    return Err(Error::Shape(format!("row {s} is not homogeneous of degree {}", orders[s])));
                }
            }
            if row.iter().all(|p| p.is_empty()) {
                return Err(Error::DegeneratePoint(s));
            }
        }
        Ok(SymbolRows { n, m, orders, rows })
    }

    /// Random integer rows of the given orders.
    pub fn generic(n: usize, m: usize, orders: &[usize], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = orders
            .iter()
            .map(|&l| {
                (0..m)
                    .map(|_| {
                        MultiIndex::all_of_order(n, l)
                            .into_iter()
                            .filter_map(|e| {
                                let c: i64 = rng.gen_range(-9..=9);
                                (c != 0).then(|| (e, q(c)))
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        SymbolRows::new(n, m, orders.to_vec(), rows).expect("random rows are well formed")
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    /// Map `S^i ⊗ R^m → ⊕_s S^{i−l(s)}`, `v ↦ (Σ_j f_s^j(∂) v^j)_s`, as
    /// sparse rows over the coordinates `(j, α)` of the source.
    fn constraint_rows(&self, i: usize) -> Vec<SparseRow> {
        let src = xi::monomials(self.n, i);
        let ns = src.len();
        let mut out = Vec::new();
        for (s, row) in self.rows.iter().enumerate() {
            let l = self.orders[s];
            if l > i {
                continue;
            }
            for gamma in xi::monomials(self.n, i - l) {
                let mut r: SparseRow = Vec::new();
                for (j, f) in row.iter().enumerate() {
                    for (beta, c) in f {
                        let alpha = gamma.add(beta);
                        r.push((j * ns + xi::position(&src, &alpha), c * xi::falling(&alpha, beta)));
                    }
                }
                r.sort_by_key(|e| e.0);
                r.retain(|e| !e.1.is_zero());
                if !r.is_empty() {
                    out.push(r);
                }
            }
        }
        out
    }

    /// Basis of `g_i` in coordinates `(j, α)`, `|α| = i`.
    pub fn g_basis(&self, i: usize) -> Vec<Vec<Q>> {
        let ns = xi::monomials(self.n, i).len();
        let mut e = Echelon::new();
        for r in self.constraint_rows(i) {
            e.insert(r);
        }
        e.kernel(self.m * ns)
    }

    pub fn dim_g(&self, i: usize) -> usize {
        let ns = xi::monomials(self.n, i).len();
        let mut e = Echelon::new();
        for r in self.constraint_rows(i) {
            e.insert(r);
        }
        self.m * ns - e.rank()
    }

    /// The m×m minors (or any k×k) of the r×m symbol matrix.
    pub fn minors(&self, k: usize) -> Vec<XiQ> {
        let mut out = Vec::new();
        for rs in crate::idealmod::subsets(self.r(), k) {
            for cs in crate::idealmod::subsets(self.m, k) {
                let sub: Vec<Vec<&XiQ>> = rs.iter().map(|&s| cs.iter().map(|&j| &self.rows[s][j]).collect()).collect();
                let d = xi::det(&sub, self.n);
                if !d.is_empty() {
                    out.push(d);
                }
            }
        }
        out
    }
}

impl fmt::Display for SymbolRows {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, row) in self.rows.iter().enumerate() {
            let parts: Vec<String> = row.iter().map(xi::display).collect();
            writeln!(f, "f{} = ({})", s + 1, parts.join(", "))?;
        }
        Ok(())
    }
}

/// Top-degree symbols of the linearized equations, evaluated at `point`.
pub fn symbols_at(system: &PdeSystem, point: &EvalPoint) -> Result<SymbolRows> {
    let n = system.n();
    let mut orders = Vec::new();
    let mut rows = Vec::new();
    for eq in &system.equations {
        let l = eq.expr.order_or_zero();
        let lin = linearize(&eq.expr);
        let mut row = Vec::new();
        for op in &lin.row {
            let sym = op.symbol(l)?;
            let mut p = XiQ::new();
            for (e, c) in &sym.terms {
                let v = point.eval(c)?;
                if !v.is_zero() {
                    p.insert(*e, v);
                }
            }
            row.push(p);
        }
        orders.push(l);
        rows.push(row);
    }
    SymbolRows::new(n, system.m(), orders, rows)
}

/// Symbols at `seed`, plus a note when a second seed gives different
/// `dim g_i` for small i (the first point was not generic).
pub fn generic_symbols(system: &PdeSystem, seed: u64) -> Result<(SymbolRows, Option<String>)> {
    let p1 = EvalPoint::new(&system.uni, seed)?;
    let rows = symbols_at(system, &p1)?;
    let p2 = EvalPoint::new(&system.uni, seed.wrapping_add(0x9e37_79b9))?;
    let note = match symbols_at(system, &p2) {
        Ok(rows2) => {
            let top = rows.orders.iter().copied().max().unwrap_or(0) + 2;
            let d1: Vec<usize> = (0..=top).map(|i| rows.dim_g(i)).collect();
            let d2: Vec<usize> = (0..=top).map(|i| rows2.dim_g(i)).collect();
            (d1 != d2).then(|| format!("dim g differs between seeds {} and {}: {d1:?} vs {d2:?}", p1.seed(), p2.seed()))
        }
        Err(e) => Some(format!("second seed {}: {e}", p2.seed())),
    };
    Ok((rows, note))
}
