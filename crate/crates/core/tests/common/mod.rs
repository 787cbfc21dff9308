#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use jetbracket::diffops::{permutations, LinDiffOp, VectorDiffOp};
use jetbracket::jetcalc::{q, DiffPoly, MultiIndex, Universe, UniverseBuilder, Var};
use jetbracket::Q;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `x y` with unknowns `u` (and `v` when m = 2).
pub fn plane(m: usize) -> Arc<Universe> {
    let unknowns: Vec<&str> = ["u", "v", "w"][..m].to_vec();
    UniverseBuilder::new(&["x", "y"], &unknowns, &[] as &[&str]).unwrap().build()
}

/// Random polynomial in base variables and unknown jets of order ≤ `max_order`.
pub fn random_poly(uni: &Arc<Universe>, r: &mut ChaCha8Rng, max_order: usize, terms: usize, max_deg: u32) -> DiffPoly {
    let n = uni.n();
    let mut vars: Vec<Var> = (0..n as u16).map(Var::Base).collect();
    for sym in 0..uni.m() {
        for idx in MultiIndex::all_up_to(n, max_order) {
            vars.push(uni.jet(sym as u16, &idx.to_vec()));
        }
    }
    let mut acc = DiffPoly::zero(uni);
    for _ in 0..terms {
        let mut t = DiffPoly::int(uni, r.gen_range(-5..=5));
        let deg = r.gen_range(0..=max_deg);
        for _ in 0..deg {
            let v = vars[r.gen_range(0..vars.len())];
            t = &t * &DiffPoly::var(uni, v);
        }
        acc = &acc + &t;
    }
    acc
}

/// Random coefficient of degree ≤ 1 in the base variables.
pub fn random_affine(uni: &Arc<Universe>, r: &mut ChaCha8Rng) -> DiffPoly {
    let mut acc = DiffPoly::int(uni, r.gen_range(-3..=3));
    for i in 0..uni.n() {
        let c = r.gen_range(-2..=2);
        acc = &acc + &(&DiffPoly::base(uni, i) * &DiffPoly::int(uni, c));
    }
    acc
}

pub fn random_op(uni: &Arc<Universe>, r: &mut ChaCha8Rng, order: usize, constant: bool) -> LinDiffOp {
    let mut coeffs = BTreeMap::new();
    for s in MultiIndex::all_up_to(uni.n(), order) {
        if r.gen_bool(0.6) {
            let c = if constant { DiffPoly::int(uni, r.gen_range(-3..=3)) } else { random_affine(uni, r) };
            coeffs.insert(s, c);
        }
    }
    LinDiffOp::from_coeffs(uni, coeffs)
}

pub fn random_row(uni: &Arc<Universe>, r: &mut ChaCha8Rng, order: usize, constant: bool) -> VectorDiffOp {
    VectorDiffOp::new((0..uni.m()).map(|_| random_op(uni, r, order, constant)).collect())
}

/// Random linear equation `Σ a_σ(x) u^j_σ` of exact order `order`.
pub fn random_linear_eq(uni: &Arc<Universe>, r: &mut ChaCha8Rng, order: usize) -> DiffPoly {
    loop {
        let row = random_row(uni, r, order, false);
        let us: Vec<DiffPoly> = (0..uni.m()).map(|j| DiffPoly::jet(uni, j, &vec![0; uni.n()])).collect();
        let f = row.apply(&us).unwrap();
        if f.order_or_zero() == order {
            return f;
        }
    }
}

/// Literal permutation form of the coordinate bracket:
/// `(1/m!) Σ_ζ sgn ζ Σ_τ det[∂F_{ζ(j)}/∂p^k_{τ_j}] D_{τ_1+…+τ_m} F_{ζ(m+1)}`,
/// with τ_j running over the jets of F_{ζ(j)} (all of them, or only the top
/// order ones when `top_only`).
pub fn coordinate_oracle(fs: &[DiffPoly], top_only: bool) -> DiffPoly {
    let uni = fs[0].universe().clone();
    let m = uni.m();
    let jets = |f: &DiffPoly| -> Vec<MultiIndex> {
        let l = f.order_or_zero();
        let mut v: Vec<MultiIndex> = f.jet_vars().into_iter().map(|j| j.idx).filter(|i| !top_only || i.order() == l).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut acc = DiffPoly::zero(&uni);
    for (zeta, sgn) in permutations(m + 1) {
        let rows: Vec<&DiffPoly> = zeta[..m].iter().map(|&i| &fs[i]).collect();
        let last = &fs[zeta[m]];
        let choices: Vec<Vec<MultiIndex>> = rows.iter().map(|f| jets(f)).collect();
        let mut pick = vec![0usize; m];
        'outer: loop {
            if choices.iter().all(|c| !c.is_empty()) {
                let taus: Vec<MultiIndex> = (0..m).map(|j| choices[j][pick[j]]).collect();
                // det over (row j, unknown k)
                let mut det = DiffPoly::zero(&uni);
                for (perm, s) in permutations(m) {
                    let mut t = DiffPoly::int(&uni, s);
                    for j in 0..m {
                        let v = uni.jet(perm[j] as u16, &taus[j].to_vec());
                        t = &t * &rows[j].partial(&v);
                    }
                    det = &det + &t;
                }
                if !det.is_zero() {
                    let total = taus.iter().fold(MultiIndex::zero(uni.n()), |a, t| a.add(t));
                    let d = last.total_derivative_multi(&total).unwrap();
                    acc = &acc + &(&det * &d).scale_int(sgn);
                }
            } else {
                break;
            }
            for j in 0..m {
                pick[j] += 1;
                if pick[j] < choices[j].len() {
                    continue 'outer;
                }
                pick[j] = 0;
            }
            break;
        }
    }
    let fact: i64 = (1..=m as i64).product();
    acc.scale(&(Q::from_integer(1.into()) / q(fact)))
}

/// `c` with `a = c·b`, if one exists and is nonzero.
pub fn proportional(a: &DiffPoly, b: &DiffPoly) -> Option<Q> {
    let (m, cb) = b.terms().iter().next()?;
    let ca = a.terms().get(m)?;
    let c = ca / cb;
    (*a == b.scale(&c)).then_some(c)
}

pub fn load_fixture(name: &str) -> jetbracket::PdeSystem {
    let f = jetbracket::cli::fixture(name).expect("known fixture");
    let inv: Vec<String> = f.invertible.iter().map(|s| s.to_string()).collect();
    jetbracket::cli::load(f.text, &inv).expect("fixture loads").1
}

pub fn system_from(text: &str) -> jetbracket::PdeSystem {
    jetbracket::cli::parse(text).expect("parses").to_system().expect("builds")
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn dense_rank(mut a: Vec<Vec<Q>>) -> usize {
    use num_traits::Zero;
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let piv = a[rank][c].clone();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &piv;
                for k in c..cols {
                    let t = &a[rank][k] * &f;
                    a[r][k] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim g_i` as `m·dim S^i` minus the rank of `⊕_s S^{i−l_s} → S^i ⊗ R^m`,
/// `h ↦ (h f_s)_j`, built densely.
pub fn dim_g_oracle(rows: &jetbracket::symbolic::SymbolRows, i: usize) -> usize {
    use num_traits::Zero;
    let n = rows.n;
    let target = MultiIndex::all_of_order(n, i);
    let width = rows.m * target.len();
    let mut mat = Vec::new();
    for (s, row) in rows.rows.iter().enumerate() {
        let Some(d) = i.checked_sub(rows.orders[s]) else { continue };
        for h in MultiIndex::all_of_order(n, d) {
            let mut v = vec![Q::zero(); width];
            for (j, p) in row.iter().enumerate() {
                for (e, c) in p {
                    let pos = target.iter().position(|t| *t == h.add(e)).unwrap();
                    v[j * target.len() + pos] += c;
                }
            }
            mat.push(v);
        }
    }
    width - if mat.is_empty() { 0 } else { dense_rank(mat) }
}

/// Dimension formula for n = 2, r = m + 1, orders sorted ascending.
pub fn dim_g_plane(m: usize, ks: &[usize], i: usize) -> usize {
    let total: usize = ks.iter().sum();
    let r = ks.len();
    if i < ks[0] {
        return m * (i + 1);
    }
    if i >= ks[r - 1] {
        return if i < total { total - 1 - i } else { 0 };
    }
    let j = (1..r).rev().find(|&j| ks[j - 1] <= i).unwrap();
    (m - j) * (i + 1) + ks[..j].iter().sum::<usize>()
}
