//! Weyl-algebra layer: linear operators with polynomial coefficients,
//! composition, the column-ordered determinant and linear multi-brackets.

mod op;

use std::sync::Arc;

pub use op::{LinDiffOp, VectorDiffOp, XiPoly};

use crate::error::{Error, Result};
use crate::jetcalc::Universe;
use crate::Q;

/// All permutations of `0..k` with their signs, in lexicographic order.
pub fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, i64)>) {
        let k = used.len();
        if prefix.len() == k {
            let mut inv = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn check_square<T>(m: &[Vec<T>]) -> Result<usize> {
    let k = m.len();
    if m.iter().any(|r| r.len() != k) {
        return Err(Error::Shape(format!("{k}-row matrix is not square")));
    }
    Ok(k)
}

/// `Σ_α (−1)^α M[α(1)][1] ∘ ⋯ ∘ M[α(m)][m]`, factors in column order.
pub fn ndet(m: &[Vec<LinDiffOp>]) -> Result<LinDiffOp> {
    let k = check_square(m)?;
    if k == 0 {
        return Err(Error::Shape("empty matrix".into()));
    }
    let rows: Vec<usize> = (0..k).collect();
    ndet_rows(m, &rows, 0)
}

// Expansion along the leftmost remaining column; the factor from that column
// goes first in every product.
fn ndet_rows(m: &[Vec<LinDiffOp>], rows: &[usize], col: usize) -> Result<LinDiffOp> {
    if rows.len() == 1 {
        return Ok(m[rows[0]][col].clone());
    }
    let uni = m[rows[0]][col].universe().clone();
    let mut acc = LinDiffOp::zero(&uni);
    for (pos, &r) in rows.iter().enumerate() {
        let entry = &m[r][col];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let minor = ndet_rows(m, &rest, col + 1)?;
        let t = entry.compose(&minor)?;
        acc = if pos % 2 == 0 { acc.add(&t)? } else { acc.sub(&t)? };
    }
    Ok(acc)
}

/// Ordinary determinant of a matrix of commuting ξ-polynomials.
pub fn xi_det(m: &[Vec<XiPoly>], uni: &Arc<Universe>) -> Result<XiPoly> {
    let k = check_square(m)?;
    let mut acc = XiPoly::zero(uni);
    for (p, s) in permutations(k) {
        let mut t = XiPoly::one(uni);
        for (col, &row) in p.iter().enumerate() {
            t = t.mul(&m[row][col]);
            if t.is_zero() {
                break;
            }
        }
        acc = acc.add(&t.scale(&Q::from_integer(s.into())));
    }
    Ok(acc)
}

fn check_rows(rows: &[VectorDiffOp]) -> Result<usize> {
    let k = rows.len();
    if k < 2 {
        return Err(Error::Shape(format!("need m+1 ≥ 2 rows, got {k}")));
    }
    let m = k - 1;
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Shape(format!("{k} rows must each have length {m}")));
    }
    Ok(m)
}

fn minor_without(rows: &[VectorDiffOp], k: usize) -> Vec<Vec<LinDiffOp>> {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, r)| r.row.clone())
        .collect()
}

/// `{∇_1,…,∇_{m+1}} = Σ_k (−1)^k Ndet[∇_i]_{i≠k} ∘ ∇_k` (k 1-based).
pub fn multibracket_linear(rows: &[VectorDiffOp]) -> Result<VectorDiffOp> {
    let m = check_rows(rows)?;
    let uni = rows[0].row[0].universe().clone();
    let mut acc = VectorDiffOp::zero(&uni, m);
    for k in 0..=m {
        let nd = ndet(&minor_without(rows, k))?;
        let t = rows[k].left_compose(&nd)?;
        // 1-based k+1: sign (−1)^{k+1}
        let sign = if k % 2 == 0 { -1 } else { 1 };
        acc = acc.add(&t.scale(&Q::from_integer(sign.into())))?;
    }
    Ok(acc)
}

/// Place-holder in the first column: `Σ_k (−1)^{k+1} ∇_k ∘ Ndet[∇_i]_{i≠k}`,
/// the plain first-column expansion. It agrees with [`multibracket_linear`]
/// when m = 1; for commuting entries and m ≥ 2 it is its negative.
pub fn opposite_multibracket_linear(rows: &[VectorDiffOp]) -> Result<VectorDiffOp> {
    let m = check_rows(rows)?;
    let uni = rows[0].row[0].universe().clone();
    let mut acc = VectorDiffOp::zero(&uni, m);
    for k in 0..=m {
        let nd = ndet(&minor_without(rows, k))?;
        let t = rows[k].right_compose(&nd)?;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        acc = acc.add(&t.scale(&Q::from_integer(sign.into())))?;
    }
    Ok(acc)
}
