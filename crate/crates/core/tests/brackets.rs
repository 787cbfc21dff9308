mod common;

use std::sync::Arc;

use common::*;
use jetbracket::brackets::{coordinate_multibracket, mayer_bracket, multibracket, CoordinateVariant};
use jetbracket::diffops::multibracket_linear;
use jetbracket::idealmod::{groebner_js, Budget};
use jetbracket::jetcalc::{linearize, q, DiffPoly, Universe};
use jetbracket::{Error, PdeSystem};
use proptest::prelude::*;

fn u(uni: &Arc<Universe>, j: usize, idx: &[u32]) -> DiffPoly {
    DiffPoly::jet(uni, j, idx)
}

fn system(uni: &Arc<Universe>, fs: &[DiffPoly]) -> PdeSystem {
    PdeSystem::new("t", uni, fs.iter().enumerate().map(|(i, f)| (format!("F{}", i + 1), f.clone())).collect()).unwrap()
}

/// Nonlinear operator: a random linear part of exact order `order` plus a
/// product of lower jets.
fn random_nonlinear(uni: &Arc<Universe>, seed: u64, order: usize) -> DiffPoly {
    let mut r = rng(seed);
    let lin = random_linear_eq(uni, &mut r, order);
    let extra = random_poly(uni, &mut r, order - 1, 2, 2);
    &lin + &extra
}

#[test]
fn examples() {
    let uni = plane(1);
    let x = DiffPoly::base(&uni, 0);
    let f = u(&uni, 0, &[1, 0]);
    let g = &x * &u(&uni, 0, &[0, 1]);
    assert_eq!(multibracket(&[f.clone(), g.clone()]).unwrap(), u(&uni, 0, &[0, 1]));
    assert!(multibracket(&[g.clone(), g.clone()]).unwrap().is_zero());
    assert!(mayer_bracket(&u(&uni, 0, &[1, 0]), &u(&uni, 0, &[0, 1])).unwrap().is_zero());
    let heat = &u(&uni, 0, &[0, 1]) - &u(&uni, 0, &[2, 0]);
    assert!(mayer_bracket(&heat, &heat).unwrap().is_zero());
    // the m = 1 coordinate bracket ignores the x-dependence of the symbol
    // only through lower order terms; here it is exact
    assert_eq!(coordinate_multibracket(&[f.clone(), g.clone()], CoordinateVariant::Calculational).unwrap(), u(&uni, 0, &[0, 1]));
    let c1 = &u(&uni, 0, &[1, 0]) + &u(&uni, 0, &[0, 1]).scale_int(3);
    let c2 = &u(&uni, 0, &[2, 0]) - &u(&uni, 0, &[0, 0]);
    assert!(coordinate_multibracket(&[c1, c2], CoordinateVariant::Jacobian).unwrap().is_zero());

    let uni2 = plane(2);
    let fs = [u(&uni2, 0, &[1, 0]), u(&uni2, 1, &[0, 1]), &u(&uni2, 0, &[0, 0]) + &u(&uni2, 1, &[0, 0])];
    assert!(multibracket(&fs).unwrap().is_zero());
    assert!(matches!(multibracket(&fs[..2]), Err(Error::Shape(_))));
    assert!(matches!(mayer_bracket(&fs[0], &fs[1]), Err(Error::Shape(_))));
}

#[test]
fn coordinate_bracket_matches_permutation_formula() {
    for seed in 0..12u64 {
        for m in 1..=2 {
            let uni = plane(m);
            let fs: Vec<DiffPoly> = (0..=m).map(|i| random_nonlinear(&uni, seed * 10 + i as u64, 1 + (i + seed as usize) % 2)).collect();
            // the permutation form carries the opposite sign for even m
            let s = q(if m % 2 == 0 { -1 } else { 1 });
            let calc = coordinate_multibracket(&fs, CoordinateVariant::Calculational).unwrap();
            assert_eq!(calc, coordinate_oracle(&fs, true).scale(&s), "seed {seed} m {m}");
            let jac = coordinate_multibracket(&fs, CoordinateVariant::Jacobian).unwrap();
            assert_eq!(jac, coordinate_oracle(&fs, false).scale(&s), "seed {seed} m {m}");
        }
    }
}

/// `p_σ − P(x, u)` with P of degree ≤ 2: solved forms keep the bases small.
fn solved(uni: &Arc<Universe>, seed: u64, j: usize, sigma: &[u32]) -> DiffPoly {
    let mut r = rng(seed);
    &u(uni, j, sigma) - &random_poly(uni, &mut r, 0, 3, 2)
}

#[test]
fn coordinate_and_linearized_brackets_agree_modulo_j() {
    let budget = Budget::default();
    for seed in 0..10u64 {
        for m in 1..=2 {
            let uni = plane(m);
            let lead: [(usize, [u32; 2]); 3] = [(0, [1, 0]), (m - 1, [0, 1]), (0, [0, 1])];
            let fs: Vec<DiffPoly> = (0..=m).map(|i| solved(&uni, seed * 31 + i as u64, lead[i].0, &lead[i].1)).collect();
            let l: usize = fs.iter().map(DiffPoly::order_or_zero).sum();
            let gb = groebner_js(&system(&uni, &fs), l - 1, budget).unwrap();
            assert!(!gb.is_unit());
            let full = multibracket(&fs).unwrap();
            for v in [CoordinateVariant::Calculational, CoordinateVariant::Jacobian] {
                let c = coordinate_multibracket(&fs, v).unwrap();
                assert!(gb.contains(&(&c - &full)).unwrap(), "seed {seed} m {m} {v:?}");
            }
        }
    }
}

#[test]
fn jacobi_identity_modulo_j() {
    // Σ_cyc {F,{G,H}} lies in J of the three operators
    let uni = plane(1);
    for seed in 0..8u64 {
        let mut fs = vec![solved(&uni, seed * 5, 0, &[1, 0]), solved(&uni, seed * 5 + 1, 0, &[0, 1])];
        fs.push(&(&u(&uni, 0, &[0, 0]) * &fs[0]) + &fs[1].scale_int(2));
        let b = |a: &DiffPoly, c: &DiffPoly| mayer_bracket(a, c).unwrap();
        let s = &(&b(&fs[0], &b(&fs[1], &fs[2])) + &b(&fs[1], &b(&fs[2], &fs[0]))) + &b(&fs[2], &b(&fs[0], &fs[1]));
        // exact for the linearization bracket
        assert!(s.is_zero(), "seed {seed}");
        let gb = groebner_js(&system(&uni, &fs), 2, Budget::default()).unwrap();
        assert!(!gb.is_unit(), "seed {seed}");
        let c = |a: &DiffPoly, d: &DiffPoly| coordinate_multibracket(&[a.clone(), d.clone()], CoordinateVariant::Calculational).unwrap();
        let sc = &(&c(&fs[0], &c(&fs[1], &fs[2])) + &c(&fs[1], &c(&fs[2], &fs[0]))) + &c(&fs[2], &c(&fs[0], &fs[1]));
        assert!(gb.contains(&sc).unwrap(), "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn brackets_are_skew(seed in any::<u64>(), m in 1usize..3) {
        let uni = plane(m);
        let fs: Vec<DiffPoly> = (0..=m).map(|i| random_nonlinear(&uni, seed.wrapping_add(i as u64), 1 + i % 2)).collect();
        let mut sw = fs.clone();
        sw.swap(0, m);
        let neg = |p: DiffPoly| p.scale_int(-1);
        prop_assert_eq!(multibracket(&sw).unwrap(), neg(multibracket(&fs).unwrap()));
        for v in [CoordinateVariant::Calculational, CoordinateVariant::Jacobian] {
            prop_assert_eq!(coordinate_multibracket(&sw, v).unwrap(), neg(coordinate_multibracket(&fs, v).unwrap()));
        }
    }

    #[test]
    fn linearization_commutes_with_bracket(seed in any::<u64>(), m in 1usize..3) {
        let uni = plane(m);
        let mut r = rng(seed);
        let fs: Vec<DiffPoly> = (0..=m).map(|i| random_linear_eq(&uni, &mut r, 1 + i % 2)).collect();
        let lhs = linearize(&multibracket(&fs).unwrap());
        let rhs = multibracket_linear(&fs.iter().map(linearize).collect::<Vec<_>>()).unwrap();
        for (a, b) in lhs.row.iter().zip(&rhs.row) {
            prop_assert!(a.sub(b).unwrap().is_zero());
        }
    }
}
