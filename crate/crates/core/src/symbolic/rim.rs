//! Graded pieces of the Buchsbaum–Rim complex
//! `0 → S^{r−m−1}V*⊗Λ^r U → … → V*⊗Λ^{m+2}U → Λ^{m+1}U → U → V`
//! with `U = ⊕ R e_s` (e_s of weight l_s), `V = R^m`, `φ(e_s) = f_s`.

use std::collections::HashMap;

use num_traits::Zero;
use serde::Serialize;

use super::linalg::{rank, SparseRow};
use super::rows::SymbolRows;
use super::xi::{self, XiQ};
use crate::idealmod::subsets;
use crate::jetcalc::{q, MultiIndex};
use crate::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    /// `S^a V* ⊗ Λ^{m+1+a} U`
    C(usize),
    U,
    V,
}

/// (ξ-monomial, y-monomial, wedge indices or single slot)
type Key = (MultiIndex, MultiIndex, Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCheck {
    pub node: String,
    pub degree: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub orders: Vec<usize>,
    pub degree_cap: usize,
    pub nodes: Vec<String>,
    /// every pair of consecutive maps composes to zero in every degree
    pub complex_ok: bool,
    pub checks: Vec<NodeCheck>,
    pub exact: bool,
    /// (node, degree) of the first non-exact slot, scanning degrees upward
    pub first_failure: Option<(String, usize)>,
}

struct Complex<'a> {
    rows: &'a SymbolRows,
}

impl Complex<'_> {
    fn name(&self, node: Node) -> String {
        match node {
            Node::C(0) => format!("L^{} U", self.rows.m + 1),
            Node::C(1) => format!("V* (x) L^{} U", self.rows.m + 2),
            Node::C(a) => format!("S^{a} V* (x) L^{} U", self.rows.m + 1 + a),
            Node::U => "U".into(),
            Node::V => "V".into(),
        }
    }

    fn weight(&self, idx: &[usize]) -> usize {
        idx.iter().map(|&s| self.rows.orders[s]).sum()
    }

    fn basis(&self, node: Node, d: usize) -> Vec<Key> {
        let (n, m, r) = (self.rows.n, self.rows.m, self.rows.r());
        let mut out = Vec::new();
        match node {
            Node::C(a) => {
                for idx in subsets(r, m + 1 + a) {
                    let w = self.weight(&idx);
                    if w > d {
                        continue;
                    }
                    for alpha in xi::monomials(m, a) {
                        for beta in xi::monomials(n, d - w) {
                            out.push((beta, alpha, idx.clone()));
                        }
                    }
                }
            }
            Node::U => {
                for s in 0..r {
                    let w = self.rows.orders[s];
                    if w <= d {
                        for beta in xi::monomials(n, d - w) {
                            out.push((beta, MultiIndex::zero(0), vec![s]));
                        }
                    }
                }
            }
            Node::V => {
                for j in 0..m {
                    for beta in xi::monomials(n, d) {
                        out.push((beta, MultiIndex::zero(0), vec![j]));
                    }
                }
            }
        }
        out
    }

    /// Image of one generator (ignoring its ξ-monomial) as (coefficient, y, index) terms.
    fn image(&self, node: Node, alpha: &MultiIndex, idx: &[usize]) -> Vec<(XiQ, MultiIndex, Vec<usize>)> {
        let f = &self.rows.rows;
        let m = self.rows.m;
        let n = self.rows.n;
        let mut out = Vec::new();
        match node {
            Node::C(0) => {
                // ε(e_I) = Σ_k (−1)^k det(f_{I∖i_k}) e_{i_k}
                for (k, &ik) in idx.iter().enumerate() {
                    let rest: Vec<Vec<&XiQ>> =
                        idx.iter().filter(|&&s| s != ik).map(|&s| f[s].iter().collect()).collect();
                    let mut d = xi::det(&rest, n);
                    if k % 2 == 1 {
                        d.values_mut().for_each(|c| *c = -c.clone());
                    }
                    out.push((d, MultiIndex::zero(0), vec![ik]));
                }
            }
            Node::C(_) => {
                // ∂(y^α ⊗ e_I) = Σ_j α_j y^{α−1_j} ⊗ Σ_t (−1)^t f^j_{i_t} e_{I∖i_t}
                for j in 0..m {
                    let aj = alpha.get(j);
                    let Some(lower) = alpha.dec(j) else { continue };
                    for (t, &it) in idx.iter().enumerate() {
                        let sign = if t % 2 == 0 { aj as i64 } else { -(aj as i64) };
                        let mut c = XiQ::new();
                        xi::add_into(&mut c, &f[it][j], &q(sign));
                        let rest: Vec<usize> = idx.iter().copied().filter(|&s| s != it).collect();
                        out.push((c, lower.clone(), rest));
                    }
                }
            }
            Node::U => {
                let s = idx[0];
                for j in 0..m {
                    out.push((f[s][j].clone(), MultiIndex::zero(0), vec![j]));
                }
            }
            Node::V => {}
        }
        out
    }

    fn matrix(&self, src: Node, dst: Node, d: usize) -> (Vec<SparseRow>, usize) {
        let target = self.basis(dst, d);
        let pos: HashMap<&Key, usize> = target.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut rows = Vec::new();
        for (beta, alpha, idx) in self.basis(src, d) {
            let mut acc: HashMap<usize, Q> = HashMap::new();
            for (c, y, tidx) in self.image(src, &alpha, &idx) {
                for (g, v) in &c {
                    let key = (beta.add(g), y.clone(), tidx.clone());
                    let i = pos[&key];
                    *acc.entry(i).or_insert_with(Q::zero) += v;
                }
            }
            let mut row: SparseRow = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            row.sort_by_key(|e| e.0);
            rows.push(row);
        }
        (rows, target.len())
    }
}

fn compose_is_zero(a: &[SparseRow], b: &[SparseRow]) -> bool {
    a.iter().all(|row| {
        let mut acc: HashMap<usize, Q> = HashMap::new();
        for (i, c) in row {
            for (j, v) in &b[*i] {
                *acc.entry(*j).or_insert_with(Q::zero) += c * v;
            }
        }
        acc.values().all(|v| v.is_zero())
    })
}

/// Rank–nullity exactness at every node except `V`, in each weighted degree
/// `0..=degree_cap`. At `U` this is `im ε = ker φ`; at the left end it is
/// injectivity.
pub fn buchsbaum_rim_check(rows: &SymbolRows, degree_cap: usize) -> BrReport {
    let (m, r) = (rows.m, rows.r());
    let cx = Complex { rows };
    let mut nodes: Vec<Node> = (0..r.saturating_sub(m)).rev().map(Node::C).collect();
    nodes.push(Node::U);
    nodes.push(Node::V);
    let mut checks = Vec::new();
    let mut complex_ok = true;
    let mut first_failure = None;
    for d in 0..=degree_cap {
        let maps: Vec<(Vec<SparseRow>, usize)> = nodes.windows(2).map(|w| cx.matrix(w[0], w[1], d)).collect();
        for w in maps.windows(2) {
            complex_ok &= compose_is_zero(&w[0].0, &w[1].0);
        }
        for (k, &node) in nodes.iter().enumerate().take(nodes.len() - 1) {
            let dim = maps[k].0.len();
            let rank_out = rank(maps[k].0.iter().cloned());
            let rank_in = if k == 0 { 0 } else { rank(maps[k - 1].0.iter().cloned()) };
            let exact = rank_in + rank_out == dim;
            if !exact && first_failure.is_none() {
                first_failure = Some((cx.name(node), d));
            }
            checks.push(NodeCheck { node: cx.name(node), degree: d, dim, rank_in, rank_out, exact });
        }
    }
    BrReport {
        n: rows.n,
        m,
        r,
        orders: rows.orders.clone(),
        degree_cap,
        nodes: nodes.iter().map(|&nd| cx.name(nd)).collect(),
        complex_ok,
        exact: complex_ok && first_failure.is_none(),
        checks,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_case_is_exact() {
        let rows = SymbolRows::generic(3, 1, &[1, 2, 2], 7);
        let rep = buchsbaum_rim_check(&rows, 6);
        assert!(rep.complex_ok);
        assert!(rep.exact, "{:?}", rep.first_failure);
    }

    #[test]
    fn hilbert_burch_case_is_exact() {
        let rows = SymbolRows::generic(2, 2, &[1, 1, 1], 3);
        let rep = buchsbaum_rim_check(&rows, 5);
        assert!(rep.complex_ok);
        assert!(rep.exact, "{:?}", rep.first_failure);
    }

    #[test]
    fn repeated_row_fails_at_u() {
        let mut rows = SymbolRows::generic(2, 2, &[1, 1, 1], 3);
        rows.rows[2] = rows.rows[0].clone();
        let rep = buchsbaum_rim_check(&rows, 4);
        assert_eq!(rep.first_failure, Some(("U".to_string(), 1)));
    }
}
