use serde::Serialize;

use super::rows::SymbolRows;
use super::xi;
use crate::error::Result;
use crate::idealmod::{groebner::groebner as buchberger, BlockOrder, Budget, Poly};

/// Outcome of the generalized-complete-intersection test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GciSummary {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    /// `m < r < n+m`
    pub range_ok: bool,
    /// affine dimension of `V(J_m)`, the cone over the characteristic variety
    pub char_dim: Option<i64>,
    pub expected_char_dim: i64,
    /// affine dimension of `V(J_{m−1})`; `None` for m = 1
    pub fiber_dim: Option<i64>,
    /// `J_{m−1}` is a proper ideal with a zero-dimensional cone: the rank
    /// drop is at most one away from the origin, but possibly only
    /// scheme-theoretically
    pub fiber_flag: bool,
    pub is_gci: bool,
    /// Set when a Gröbner computation ran out of budget.
    pub inconclusive: Option<String>,
    pub reasons: Vec<String>,
}

/// Krull dimension of `Q[ξ]/I` from the leading monomials of a Gröbner basis:
/// the largest set of variables containing the support of no leading monomial.
pub fn dimension(gens: &[xi::XiQ], n: usize, budget: Budget) -> Result<i64> {
    let ord = BlockOrder::grevlex(n);
    let polys: Vec<Poly> = gens.iter().filter(|g| !g.is_empty()).map(|g| xi::to_poly(g, n, &ord)).collect();
    if polys.is_empty() {
        return Ok(n as i64);
    }
    let gb = buchberger(&polys, &ord, budget)?;
    let supports: Vec<u32> = gb
        .iter()
        .map(|p| p.lm().iter().enumerate().filter(|(_, &e)| e > 0).fold(0u32, |acc, (i, _)| acc | 1 << i))
        .collect();
    if supports.contains(&0) {
        return Ok(-1);
    }
    let mut best = 0;
    for set in 0u32..(1 << n) {
        if supports.iter().all(|&s| s & !set != 0) {
            best = best.max(set.count_ones() as i64);
        }
    }
    Ok(best)
}

/// Definition-1 test on symbol rows evaluated at a generic point.
pub fn gci_check(rows: &SymbolRows, budget: Budget) -> GciSummary {
    let (n, m, r) = (rows.n, rows.m, rows.r());
    let expected = n as i64 + m as i64 - r as i64 - 1;
    let mut s = GciSummary {
        n,
        m,
        r,
        range_ok: m < r && r < n + m,
        char_dim: None,
        expected_char_dim: expected,
        fiber_dim: None,
        fiber_flag: false,
        is_gci: false,
        inconclusive: None,
        reasons: Vec::new(),
    };
    if !s.range_ok {
        s.reasons.push(format!("r = {r} outside m < r < n+m"));
    }
    match dimension(&rows.minors(m), n, budget) {
        Ok(d) => {
            s.char_dim = Some(d);
            if d != expected {
                s.reasons.push(format!("dim V(J_m) = {d}, expected n+m-r-1 = {expected}"));
            }
        }
        Err(e) => s.inconclusive = Some(format!("J_m: {e}")),
    }
    if m >= 2 {
        match dimension(&rows.minors(m - 1), n, budget) {
            Ok(d) => {
                s.fiber_dim = Some(d);
                if d > 0 {
                    s.reasons.push(format!("rank drops by two on a cone of dimension {d}"));
                } else if d == 0 {
                    s.fiber_flag = true;
                }
            }
            Err(e) => s.inconclusive = Some(format!("J_(m-1): {e}")),
        }
    }
    s.is_gci = s.inconclusive.is_none() && s.reasons.is_empty();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_of_simple_ideals() {
        let b = Budget::default();
        // (ξ1) in Q[ξ1, ξ2]: a line
        let x1 = xi::XiQ::from([(crate::jetcalc::MultiIndex::from_slice(&[1, 0]), crate::jetcalc::q(1))]);
        assert_eq!(dimension(&[x1.clone()], 2, b).unwrap(), 1);
        assert_eq!(dimension(&[], 2, b).unwrap(), 2);
        assert_eq!(dimension(&[xi::one(2)], 2, b).unwrap(), -1);
    }
}
