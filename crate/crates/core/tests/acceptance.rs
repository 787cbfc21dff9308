//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::process::{Command as Proc, ExitCode};
use std::time::Instant;

use common::*;
use jetbracket::brackets::{coordinate_multibracket, multibracket, CoordinateVariant};
use jetbracket::cli::parser::expr;
use jetbracket::cli::{fixture, parse, FIXTURES};
use jetbracket::diffops::{multibracket_linear, ndet, opposite_multibracket_linear, xi_det, LinDiffOp, VectorDiffOp};
use jetbracket::idealmod::{check_compatibility, groebner_js, reduced_bracket, Budget, Verdict};
use jetbracket::jetcalc::{q, qf, DiffPoly};
use jetbracket::symbolic::{
    buchsbaum_rim_check, gci_check, generic_symbols, hilbert_data, spencer_cohomology, theorem_b_expected,
    theorem_c_expected, SymbolRows,
};
use jetbracket::PdeSystem;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// 1 ---------------------------------------------------------------------------

fn omit(rs: &[VectorDiffOp], k: usize) -> Vec<VectorDiffOp> {
    rs.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, r)| r.clone()).collect()
}

fn identities() -> Check {
    let minus = q(-1);
    // skew-symmetry, linear and non-linear
    for seed in 0..40u64 {
        let m = 1 + seed as usize % 2;
        let uni = plane(m);
        let mut r = rng(seed);
        let rows: Vec<VectorDiffOp> = (0..=m).map(|_| random_row(&uni, &mut r, 2, false)).collect();
        let mut sw = rows.clone();
        sw.swap(0, m);
        ensure(multibracket_linear(&sw).map_err(err)? == multibracket_linear(&rows).map_err(err)?.scale(&minus), format!("linear skew, seed {seed}"))?;
        let fs: Vec<DiffPoly> = (0..=m).map(|_| &random_linear_eq(&uni, &mut r, 1) + &random_poly(&uni, &mut r, 0, 2, 2)).collect();
        let mut fsw = fs.clone();
        fsw.swap(0, m);
        ensure(multibracket(&fsw).map_err(err)? == multibracket(&fs).map_err(err)?.scale(&minus), format!("bracket skew, seed {seed}"))?;
        for v in [CoordinateVariant::Calculational, CoordinateVariant::Jacobian] {
            let a = coordinate_multibracket(&fsw, v).map_err(err)?;
            ensure(a == coordinate_multibracket(&fs, v).map_err(err)?.scale(&minus), format!("coordinate skew, seed {seed}"))?;
        }
    }
    // σ(Ndet) = det σ
    for seed in 0..40u64 {
        let uni = plane(1);
        let mut r = rng(seed);
        let k = 2 + seed as usize % 2;
        let cols: Vec<usize> = (0..k).map(|j| 1 + j % 2).collect();
        let mat: Vec<Vec<LinDiffOp>> = (0..k).map(|_| cols.iter().map(|&c| random_op(&uni, &mut r, c, false)).collect()).collect();
        let sym: Vec<Vec<_>> = mat.iter().map(|row| row.iter().zip(&cols).map(|(o, &c)| o.symbol(c).unwrap()).collect()).collect();
        let total: usize = cols.iter().sum();
        ensure(ndet(&mat).map_err(err)?.symbol(total).map_err(err)? == xi_det(&sym, &uni).map_err(err)?, format!("sigma(Ndet), seed {seed}"))?;
    }
    // Plücker
    let mut plucker = 0;
    for seed in 0..80u64 {
        for m in 1..=2 {
            let uni = plane(m);
            let mut r = rng(seed * 7 + m as u64);
            let order = 1 + seed as usize % 2;
            let rs: Vec<VectorDiffOp> = (0..m + 2).map(|_| random_row(&uni, &mut r, order, false)).collect();
            for i in 0..m {
                let mut lhs = VectorDiffOp::zero(&uni, m);
                let mut rhs = VectorDiffOp::zero(&uni, m);
                for k in 0..m + 2 {
                    let s = q(if k % 2 == 0 { -1 } else { 1 });
                    let rest = omit(&rs, k);
                    let opp = opposite_multibracket_linear(&rest).map_err(err)?;
                    let br = multibracket_linear(&rest).map_err(err)?;
                    lhs = lhs.add(&rs[k].left_compose(&opp.row[i]).map_err(err)?.scale(&s)).map_err(err)?;
                    rhs = rhs.add(&br.left_compose(&rs[k].row[i]).map_err(err)?.scale(&s)).map_err(err)?;
                }
                ensure(lhs == rhs, format!("Plücker, seed {seed} m {m} i {i}"))?;
                plucker += 1;
            }
        }
    }
    // Jacobi for commutators
    for seed in 0..40u64 {
        let uni = plane(1);
        let mut r = rng(seed);
        let rs: Vec<VectorDiffOp> = (0..3).map(|_| random_row(&uni, &mut r, 2, false)).collect();
        let b = |p: &VectorDiffOp, q: &VectorDiffOp| multibracket_linear(&[p.clone(), q.clone()]).unwrap();
        let s = b(&rs[0], &b(&rs[1], &rs[2])).add(&b(&rs[1], &b(&rs[2], &rs[0]))).and_then(|t| t.add(&b(&rs[2], &b(&rs[0], &rs[1])))).map_err(err)?;
        ensure(s.is_zero(), format!("Jacobi, seed {seed}"))?;
    }
    Ok(format!("skew 40x4, sigma(Ndet) 40, Plücker {plucker}, Jacobi 40"))
}

// 2 ---------------------------------------------------------------------------

fn cauchy_riemann() -> Check {
    let cases = [
        ("cr_jacobian_const", true, "G = 1"),
        ("cr_jacobian_G_u", false, "G = u"),
        ("cr_jacobian_exp", true, "G = e^u"),
        ("cr_jacobian_exp_u2", false, "G = e^(u^2)"),
        ("cr_jacobian_r2", true, "G = u^2 + v^2"),
        ("cr_jacobian_u2", false, "G = u^2"),
    ];
    let mut shown = Vec::new();
    for (name, zero, label) in cases {
        let nf = reduced_bracket(&load_fixture(name), &[0, 1, 2], Budget::default()).map_err(err)?;
        ensure(nf.is_zero() == zero, format!("{label}: normal form {nf}"))?;
        shown.push(format!("{label} -> {}", if zero { "0".to_string() } else { nf.to_string() }));
    }
    for (name, want) in [("cr_jacobian_const", Verdict::CompatibleCertified), ("cr_jacobian_G_u", Verdict::Obstructed)] {
        let v = check_compatibility(&load_fixture(name)).map_err(err)?.verdict;
        ensure(v == want, format!("{name}: {v}"))?;
        shown.push(format!("{name} -> {v}"));
    }
    let s = load_fixture("cr_jacobian_generic");
    let nf = reduced_bracket(&s, &[0, 1, 2], Budget::default()).map_err(err)?;
    let rel = expr(&s, "G*Guu + G*Gvv - Gu^2 - Gv^2").map_err(err)?;
    let c = proportional(&nf, &rel).ok_or(format!("generic G: {nf}"))?;
    shown.push(format!("generic G -> {c}*(G*lap G - |grad G|^2)"));
    Ok(shown.join("; "))
}

// 3 ---------------------------------------------------------------------------

/// `K = −Δλ/(2E)` for the metric `E(dx² + dy²)`, with `t = 1/E`.
fn curvature(s: &PdeSystem) -> Result<DiffPoly, String> {
    let t = DiffPoly::inv(&s.uni, 0);
    Ok((&t * &expr(s, "lam[2,0] + lam[0,2]").map_err(err)?).scale(&qf(-1, 2)))
}

fn killing() -> Check {
    let s = load_fixture("killing");
    let nf = reduced_bracket(&s, &[0, 1, 2], Budget::default()).map_err(err)?;
    let k = curvature(&s)?;
    let (kx, ky) = (k.total_derivative(0).map_err(err)?, k.total_derivative(1).map_err(err)?);
    let e4 = expr(&s, "4*E^4").map_err(err)?;
    let target = &e4 * &(&(&kx * &expr(&s, "u").map_err(err)?) + &(&ky * &expr(&s, "v").map_err(err)?));
    let gb = groebner_js(&s, 2, Budget::default()).map_err(err)?;
    let target = gb.normal_form(&target).map_err(err)?;
    ensure(!target.is_zero(), "4E^4(K_x u + K_y v) reduces to zero")?;
    let c = proportional(&nf, &target).ok_or(format!("bracket {nf} is not a multiple of {target}"))?;
    let flat = check_compatibility(&load_fixture("killing_flat")).map_err(err)?.verdict;
    let x2 = check_compatibility(&load_fixture("killing_x2")).map_err(err)?.verdict;
    ensure(flat == Verdict::CompatibleCertified, format!("flat metric: {flat}"))?;
    ensure(x2 == Verdict::Obstructed, format!("lambda = x^2: {x2}"))?;
    Ok(format!("c = {c}; flat -> {flat}; lambda = x^2 -> {x2}"))
}

// 4 ---------------------------------------------------------------------------

fn quadratic_integrals() -> Check {
    let s = load_fixture("quadratic_integrals");
    let nf = reduced_bracket(&s, &[0, 1, 2, 3], Budget::default()).map_err(err)?;
    let e = |t: &str| expr(&s, t).map_err(err);
    let k = curvature(&s)?;
    let d = |p: &DiffPoly, i: usize| p.total_derivative(i).map_err(err);
    let (kx, ky) = (d(&k, 0)?, d(&k, 1)?);
    let (kxx, kxy, kyy) = (d(&kx, 0)?, d(&kx, 1)?, d(&ky, 1)?);
    let (lx, ly) = (e("lam[1,0]")?, e("lam[0,1]")?);
    let c1 = &(&kxy + &(&ly * &kx).scale_int(2)) + &(&lx * &ky).scale_int(2);
    let c2 = &(&(&kxx - &kyy) + &(&lx * &kx).scale_int(4)) - &(&ly * &ky).scale_int(4);
    let first = &(&kx * &e("v[1,0]")?).scale_int(5) - &(&ky * &e("v[0,1]")?).scale_int(5);
    let e5 = &(&first - &(&c1 * &e("u - w")?)) + &(&c2 * &e("v")?);
    let gb = groebner_js(&s, 3, Budget::default()).map_err(err)?;
    // the bracket carries one power of E from the cleared denominators
    let target = gb.normal_form(&(&e("E")? * &e5)).map_err(err)?;
    ensure(!target.is_zero(), "E*E5 reduces to zero")?;
    let c = proportional(&nf, &target).ok_or(format!("bracket {nf} is not a multiple of E*E5"))?;
    Ok(format!("NF = c*NF(E*E5), c = {c}"))
}

// 5 ---------------------------------------------------------------------------

fn minimal_surface() -> Check {
    let s = load_fixture("minimal_surface");
    let nf = reduced_bracket(&s, &[0, 1], Budget::default()).map_err(err)?;
    let e = |t: &str| expr(&s, t).map_err(err);
    let tk = DiffPoly::inv(&s.uni, 0);
    let (kx, ky) = (e("K[1,0]")?, e("K[0,1]")?);
    let t2 = &tk * &tk;
    // second derivatives of ln K
    let lxx = &(&e("K[2,0]")? * &tk) - &(&(&kx * &kx) * &t2);
    let lyy = &(&e("K[0,2]")? * &tk) - &(&(&ky * &ky) * &t2);
    let lxy = &(&e("K[1,1]")? * &tk) - &(&(&kx * &ky) * &t2);
    let (k2, k3) = (e("K^2")?, e("4*K^3")?);
    let a11 = &(&k2 * &lyy) - &k3;
    let a12 = (&k2 * &lxy).scale_int(-1);
    let a22 = &(&k2 * &lxx) - &k3;
    let b = &(&k2 * &(&lxx + &lyy)) - &k3;
    let f3 = &(&(&(&a11 * &e("u[1,0]^2")?) + &(&a12 * &e("2*u[1,0]*u[0,1]")?)) + &(&a22 * &e("u[0,1]^2")?)) + &b;
    let gb = groebner_js(&s, 3, Budget::default()).map_err(err)?;
    // the bracket carries (1 + |∇u|²)² and 1/K from the cleared denominators
    let sq = e("1 + u[1,0]^2 + u[0,1]^2")?;
    let target = gb.normal_form(&(&(&(&sq * &sq) * &tk) * &f3)).map_err(err)?;
    ensure(!target.is_zero(), "F3 reduces to zero")?;
    let c = proportional(&nf, &target).ok_or(format!("bracket {nf} is not a multiple of F3"))?;
    Ok(format!("NF = c*NF((1 + |grad u|^2)^2 F3/K), c = {c}"))
}

// 6, 7 ------------------------------------------------------------------------

const FAMILY: [(usize, usize, usize); 6] = [(2, 1, 2), (3, 1, 2), (3, 1, 3), (2, 2, 3), (3, 2, 3), (3, 2, 4)];

fn spencer_family() -> Check {
    let mut n_ok = 0;
    for (n, m, r) in FAMILY {
        for k in 1..=2 {
            let orders = vec![k; r];
            let t = spencer_cohomology(&SymbolRows::generic(n, m, &orders, 11), orders.iter().sum::<usize>() + 2);
            let want = theorem_b_expected(n, m, r, &orders).map_err(err)?;
            let totals: Vec<(usize, usize)> = (0..=n).map(|j| (j, t.total(j))).filter(|p| p.1 > 0).collect();
            let mut placed = want.placement.clone().unwrap_or_default();
            placed.sort();
            let got: Vec<(usize, usize)> = t.h.keys().copied().collect();
            ensure(totals == want.totals && got == placed, format!("({n},{m},{r}) k={k}: {:?} vs {:?}", t.h, want))?;
            n_ok += 1;
        }
    }
    Ok(format!("{n_ok} cases, totals and bigrades"))
}

fn dimension_family() -> Check {
    let mut cases: Vec<(usize, usize, usize, Vec<usize>)> = Vec::new();
    for (n, m, r) in FAMILY {
        for k in 1..=2 {
            cases.push((n, m, r, vec![k; r]));
        }
    }
    cases.push((2, 1, 2, vec![2, 3]));
    let mut shown = Vec::new();
    for (n, m, r, orders) in cases {
        let h = hilbert_data(&SymbolRows::generic(n, m, &orders, 5), 12.max(orders.iter().sum::<usize>() + 6)).map_err(err)?;
        let want = theorem_c_expected(n, m, r, &orders).map_err(err)?;
        ensure((h.p, h.d) == want, format!("({n},{m},{r}) {orders:?}: got ({}, {}), want {want:?}", h.p, h.d))?;
        if h.finite_type() {
            ensure(h.dims.iter().sum::<usize>() as u64 == h.d, format!("({n},{m},{r}) {orders:?}: sum of dim g"))?;
        }
        if orders == [2, 3] {
            shown.push(format!("orders (2,3): dims {:?}, d = {}", &h.dims[..5], h.d));
        }
    }
    Ok(format!("13 cases; {}", shown.join("")))
}

// 8, 9 ------------------------------------------------------------------------

fn buchsbaum_rim() -> Check {
    for (n, m, r) in [(2, 2, 3), (3, 2, 4)] {
        let rep = buchsbaum_rim_check(&SymbolRows::generic(n, m, &vec![1; r], 9), 6);
        ensure(rep.complex_ok && rep.exact, format!("({n},{m},{r}) fails at {:?}", rep.first_failure))?;
    }
    let mut dep = SymbolRows::generic(2, 2, &[1, 1, 1], 9);
    dep.rows[2] = dep.rows[0].clone();
    let rep = buchsbaum_rim_check(&dep, 6);
    ensure(!rep.exact, "dependent rows look exact")?;
    let (node, deg) = rep.first_failure.ok_or("no failure reported")?;
    Ok(format!("exact to degree 6 for (2,2,3), (3,2,4); dependent witness fails at {node}, degree {deg}"))
}

fn gci() -> Check {
    let b = Budget::default();
    for (n, m, r) in FAMILY {
        for k in 1..=2 {
            let g = gci_check(&SymbolRows::generic(n, m, &vec![k; r], 3), b);
            ensure(g.is_gci, format!("({n},{m},{r}) k={k} rejected: {:?}", g.reasons))?;
        }
    }
    for name in ["conics", "cr_jacobian_const", "killing_flat", "grad", "minimal_surface"] {
        let rows = generic_symbols(&load_fixture(name), 1).map_err(err)?.0;
        ensure(gci_check(&rows, b).is_gci, format!("{name} rejected"))?;
    }
    let mut rep = SymbolRows::generic(3, 1, &[1, 1], 4);
    rep.rows[1] = rep.rows[0].clone();
    ensure(!gci_check(&rep, b).is_gci, "repeated equation accepted")?;
    let flat = SymbolRows::generic(2, 2, &[1, 1, 1], 4);
    let rows: Vec<Vec<_>> = flat
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| p.iter().map(|(e, c)| (jetbracket::jetcalc::MultiIndex::from_slice(&[e.get(0), e.get(1), 0]), c.clone())).collect())
                .collect()
        })
        .collect();
    let g = gci_check(&SymbolRows::new(3, 2, vec![1, 1, 1], rows).map_err(err)?, b);
    ensure(!g.is_gci, "rank-drop-two witness accepted")?;
    Ok(format!("12 generic + 5 fixtures accepted; 2 witnesses rejected (fiber dim {:?})", g.fiber_dim))
}

// 10 --------------------------------------------------------------------------

fn cli() -> Check {
    for f in FIXTURES {
        let a = parse(f.text).map_err(|d| format!("{}: {d}", f.name))?;
        let b = parse(&a.to_string()).map_err(|d| format!("{} reprint: {d}", f.name))?;
        ensure(a == b && a.to_string() == b.to_string(), format!("{} does not round-trip", f.name))?;
    }
    let path = |n: &str| format!("{}/fixtures/{n}.jb", env!("CARGO_MANIFEST_DIR"));
    let mut shown = Vec::new();
    for (name, extra, want) in [("cr", None, 0), ("cr_jacobian_G_u", Some("u"), 1), ("flows", None, 2)] {
        let mut cmd = Proc::new(env!("CARGO_BIN_EXE_jetbracket"));
        cmd.args(["compat", &path(name)]);
        if let Some(e) = extra {
            cmd.args(["--invertible", e]);
        }
        let code = cmd.output().map_err(err)?.status.code().unwrap_or(-1);
        ensure(code == want, format!("{name}: exit {code}, want {want}"))?;
        shown.push(format!("{name} -> {code}"));
        ensure(fixture(name).is_some(), format!("{name} missing from the library"))?;
    }
    Ok(format!("{} fixtures round-trip; {}", FIXTURES.len(), shown.join(", ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("multi-bracket identities", identities),
        ("Cauchy-Riemann + Jacobian", cauchy_riemann),
        ("Killing equations", killing),
        ("quadratic integrals", quadratic_integrals),
        ("minimal surface", minimal_surface),
        ("Spencer cohomology of GCI", spencer_family),
        ("functional dimension and rank", dimension_family),
        ("Buchsbaum-Rim exactness", buchsbaum_rim),
        ("GCI detection", gci),
        ("CLI contract", cli),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let res = f();
        let secs = t0.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {id:>2} {name} [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name} [{secs:.1}s]: {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
