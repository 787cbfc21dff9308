use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use super::{groebner, inverse_relations, subsets, Budget, GroebnerBasis};
use crate::diffops::{multibracket_linear, ndet, LinDiffOp, VectorDiffOp};
use crate::error::{Error, Result};
use crate::jetcalc::{linearize, DiffPoly, Mono, MultiIndex, Terms, Var};
use crate::symbolic::linalg::{Echelon, SparseRow};
use crate::system::PdeSystem;
use crate::Q;

#[derive(Clone, Copy, Debug)]
pub struct SyzygyOptions {
    /// largest coefficient degree tried in the ansatz
    pub max_degree: usize,
    pub budget: Budget,
}

impl Default for SyzygyOptions {
    fn default() -> Self {
        SyzygyOptions { max_degree: 4, budget: Budget::default() }
    }
}

/// First syzygy for one (m+1)-subset τ: `{Δ_τ} = Σ_j B^j ∘ Δ_j` and
/// `∇_τ(f) = Σ_k (−1)^k Ndet[Δ_{i_s}]_{s≠k} f_{i_k} − Σ_j B^j f_j`.
#[derive(Clone, Debug)]
pub struct SyzygyResult {
    pub subset: Vec<usize>,
    pub bracket: VectorDiffOp,
    /// `B^j`, one per equation
    pub tails: Vec<LinDiffOp>,
    /// `∇_τ` as a row acting on `(f_1,…,f_r)`
    pub nabla: Vec<LinDiffOp>,
    /// coefficient degree at which the ansatz first became solvable
    pub degree: usize,
    /// `∇_τ ∘ Δ = 0` modulo the inverse relations
    pub verified: bool,
}

impl fmt::Display for SyzygyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.subset.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(f, "subset {{{}}}", idx.join(","))?;
        writeln!(f, "  bracket = {}", self.bracket)?;
        for (j, b) in self.tails.iter().enumerate() {
            if !b.is_zero() {
                writeln!(f, "  B^{} = {b}", j + 1)?;
            }
        }
        let parts: Vec<String> = self
            .nabla
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(j, o)| format!("({o})[f{}]", j + 1))
            .collect();
        write!(f, "  nabla = {}", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

struct Reducer(Option<GroebnerBasis>);

impl Reducer {
    fn nf(&self, p: &DiffPoly) -> Result<DiffPoly> {
        match &self.0 {
            Some(gb) => gb.normal_form(p),
            None => Ok(p.clone()),
        }
    }

    fn op(&self, o: &LinDiffOp) -> Result<LinDiffOp> {
        let mut c = BTreeMap::new();
        for (s, a) in o.coeffs() {
            c.insert(*s, self.nf(a)?);
        }
        Ok(LinDiffOp::from_coeffs(o.universe(), c))
    }
}

fn operator_rows(system: &PdeSystem) -> Result<Vec<VectorDiffOp>> {
    let uni = &system.uni;
    let mut out = Vec::new();
    for (i, eq) in system.equations.iter().enumerate() {
        let lin = linearize(&eq.expr);
        let nonlinear = lin.row.iter().flat_map(|o| o.coeffs().values()).any(|a| {
            a.vars().iter().any(|v| matches!(v, Var::Jet(j) if uni.is_unknown(j.sym)))
        });
        if nonlinear {
            return Err(Error::Invalid(format!("equation {} is not linear in the unknowns", i + 1)));
        }
        out.push(lin);
    }
    Ok(out)
}

fn monomials_up_to(vars: &[Var], d: usize) -> Vec<Mono> {
    fn go(vars: &[Var], start: usize, left: usize, cur: &mut Vec<(Var, u32)>, out: &mut Vec<Mono>) {
        out.push(Mono::from_pairs(cur.clone()));
        if left == 0 {
            return;
        }
        for k in start..vars.len() {
            match cur.last_mut() {
                Some(last) if last.0 == vars[k] => {
                    last.1 += 1;
                    go(vars, k, left - 1, cur, out);
                    cur.last_mut().expect("present").1 -= 1;
                }
                _ => {
                    cur.push((vars[k], 1));
                    go(vars, k, left - 1, cur, out);
                    cur.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(vars, 0, d, &mut Vec::new(), &mut out);
    out
}

type EqKey = (usize, MultiIndex, Mono);

fn coefficient_map(row: &VectorDiffOp) -> BTreeMap<EqKey, Q> {
    let mut out = BTreeMap::new();
    for (col, op) in row.row.iter().enumerate() {
        for (s, a) in op.coeffs() {
            for (m, c) in a.terms() {
                out.insert((col, *s, m.clone()), c.clone());
            }
        }
    }
    out
}

/// Solves for the tails of every (m+1)-subset of a linear system.
pub fn first_syzygy_operator(system: &PdeSystem, opts: &SyzygyOptions) -> Result<Vec<SyzygyResult>> {
    let (m, r) = (system.m(), system.r());
    let uni = system.uni.clone();
    let rows = operator_rows(system)?;
    let rel = inverse_relations(&uni);
    let red = Reducer(if rel.is_empty() { None } else { Some(groebner(&rel, 0, opts.budget)?) });

    // coefficient variables: everything but unknown jets, plus base variables
    let mut coeff_vars: BTreeSet<Var> = (0..uni.n() as u16).map(Var::Base).collect();
    for row in &rows {
        for op in &row.row {
            for a in op.coeffs().values() {
                coeff_vars.extend(a.vars());
            }
        }
    }
    for q in 0..uni.invertibles().len() {
        coeff_vars.insert(Var::Inv(q as u16));
    }
    coeff_vars.retain(|v| !matches!(v, Var::Jet(j) if uni.is_unknown(j.sym)));
    let coeff_vars: Vec<Var> = coeff_vars.into_iter().collect();

    let orders: Vec<usize> = rows.iter().map(VectorDiffOp::order).collect();
    let mut out = Vec::new();
    for tau in subsets(r, m + 1) {
        let picked: Vec<VectorDiffOp> = tau.iter().map(|&i| rows[i].clone()).collect();
        let bracket = multibracket_linear(&picked)?;
        let bracket = VectorDiffOp::new(bracket.row.iter().map(|o| red.op(o)).collect::<Result<_>>()?);
        let total: usize = tau.iter().map(|&i| orders[i]).sum();
        let target = coefficient_map(&bracket);

        let mut found = None;
        for deg in 0..=opts.max_degree {
            let monos = monomials_up_to(&coeff_vars, deg);
            // unknown c_(j,σ,μ) multiplies μ·D_σ ∘ Δ_j
            let mut cols: Vec<(usize, MultiIndex, Mono)> = Vec::new();
            let mut images: Vec<BTreeMap<EqKey, Q>> = Vec::new();
            for j in 0..r {
                let Some(bound) = total.checked_sub(orders[j] + 1) else { continue };
                for sigma in MultiIndex::all_up_to(uni.n(), bound) {
                    for mu in &monos {
                        let mut t = Terms::new();
                        t.insert(mu.clone(), Q::from_integer(1.into()));
                        let b = LinDiffOp::term(&DiffPoly::from_terms(&uni, t), &sigma);
                        let comp = VectorDiffOp::new(
                            rows[j].row.iter().map(|o| b.compose(o).and_then(|c| red.op(&c))).collect::<Result<_>>()?,
                        );
                        cols.push((j, sigma, mu.clone()));
                        images.push(coefficient_map(&comp));
                    }
                }
            }
            // equations: Σ_k c_k image_k − target = 0; last column is the target
            let keys: BTreeSet<&EqKey> = images.iter().flat_map(|m| m.keys()).chain(target.keys()).collect();
            let key_pos: BTreeMap<&EqKey, usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
            let mut eq_rows: Vec<SparseRow> = vec![Vec::new(); keys.len()];
            for (k, img) in images.iter().enumerate() {
                for (key, c) in img {
                    eq_rows[key_pos[key]].push((k, c.clone()));
                }
            }
            let nk = images.len();
            for (key, c) in &target {
                eq_rows[key_pos[key]].push((nk, -c.clone()));
            }
            let mut e = Echelon::new();
            for row in eq_rows {
                e.insert(row);
            }
            let sol = e.kernel(nk + 1).into_iter().find(|v| !v[nk].is_zero());
            if let Some(v) = sol {
                let scale = v[nk].clone();
                let mut tails: Vec<BTreeMap<MultiIndex, DiffPoly>> = vec![BTreeMap::new(); r];
                for (k, (j, sigma, mu)) in cols.iter().enumerate() {
                    let c = &v[k] / &scale;
                    if c.is_zero() {
                        continue;
                    }
                    let mut t = Terms::new();
                    t.insert(mu.clone(), c);
                    let add = DiffPoly::from_terms(&uni, t);
                    let e = tails[*j].entry(*sigma).or_insert_with(|| DiffPoly::zero(&uni));
                    *e = &*e + &add;
                }
                found = Some((deg, tails.into_iter().map(|c| LinDiffOp::from_coeffs(&uni, c)).collect::<Vec<_>>()));
                break;
            }
        }
        let Some((degree, tails)) = found else {
            let min = tau.iter().map(|&i| orders[i]).min().unwrap_or(0);
            return Err(Error::SyzygyNotFound { order: total.saturating_sub(min + 1), degree: opts.max_degree });
        };

        let mut nabla: Vec<LinDiffOp> = tails.iter().map(LinDiffOp::neg).collect();
        for (k, &ik) in tau.iter().enumerate() {
            let minor: Vec<Vec<LinDiffOp>> =
                picked.iter().enumerate().filter(|(s, _)| *s != k).map(|(_, p)| p.row.clone()).collect();
            let nd = ndet(&minor)?;
            // (−1)^k with k 1-based, matching the bracket's sign
            let nd = if k % 2 == 0 { nd.neg() } else { nd };
            nabla[ik] = nabla[ik].add(&nd)?;
        }
        let nabla: Vec<LinDiffOp> = nabla.iter().map(|o| red.op(o)).collect::<Result<_>>()?;
        let mut check = VectorDiffOp::zero(&uni, m);
        for (j, op) in nabla.iter().enumerate() {
            check = check.add(&rows[j].left_compose(op)?)?;
        }
        let verified = check.row.iter().map(|o| red.op(o)).collect::<Result<Vec<_>>>()?.iter().all(LinDiffOp::is_zero);
        out.push(SyzygyResult { subset: tau, bracket, tails, nabla, degree, verified });
    }
    Ok(out)
}
