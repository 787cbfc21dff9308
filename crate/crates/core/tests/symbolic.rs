mod common;

use common::*;
use jetbracket::idealmod::Budget;
use jetbracket::jetcalc::{q, MultiIndex};
use jetbracket::symbolic::{
    buchsbaum_rim_check, gci_check, generic_symbols, hilbert_data, spencer_cohomology, theorem_b_expected,
    theorem_c_expected, SymbolRows,
};
use proptest::prelude::*;

const FAMILY: [(usize, usize, usize); 6] = [(2, 1, 2), (3, 1, 2), (3, 1, 3), (2, 2, 3), (3, 2, 3), (3, 2, 4)];

fn rows_of(name: &str) -> SymbolRows {
    generic_symbols(&load_fixture(name), 1).unwrap().0
}

#[test]
fn symbol_examples() {
    let cr = system_from("system cr\nbase x y\nunknown u v\neq A = u[1,0] - v[0,1]\neq B = u[0,1] + v[1,0]\n");
    let rows = generic_symbols(&cr, 1).unwrap().0;
    let xi = |a: u32, b: u32, c: i64| (MultiIndex::from_slice(&[a, b]), q(c));
    assert_eq!(rows.rows[0], vec![[xi(1, 0, 1)].into(), [xi(0, 1, -1)].into()]);
    assert_eq!(rows.rows[1], vec![[xi(0, 1, 1)].into(), [xi(1, 0, 1)].into()]);
    assert!((0..8).all(|i| rows.dim_g(i) == 2));
    let conics = rows_of("conics");
    assert_eq!(conics.rows[0], vec![[xi(2, 0, 1), xi(0, 2, -1)].into()]);
    assert_eq!((0..6).map(|i| conics.dim_g(i)).collect::<Vec<_>>(), vec![1, 2, 1, 0, 0, 0]);
}

#[test]
fn full_jet_space() {
    for (n, m) in [(2, 1), (3, 2)] {
        let rows = SymbolRows::new(n, m, vec![], vec![]).unwrap();
        for i in 0..5 {
            let want = m * MultiIndex::all_of_order(n, i).len();
            assert_eq!(rows.dim_g(i), want);
        }
        let t = spencer_cohomology(&rows, 4);
        assert_eq!(t.h.iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>(), vec![((0, 0), m)]);
        if m == 1 {
            let h = hilbert_data(&rows, 12).unwrap();
            assert_eq!((h.p, h.d), (n, 1));
        }
    }
}

#[test]
fn dim_g_matches_dense_oracle() {
    for (seed, (n, m, r)) in FAMILY.iter().enumerate() {
        for k in 1..=2 {
            let rows = SymbolRows::generic(*n, *m, &vec![k; *r], seed as u64);
            for i in 0..=4 {
                assert_eq!(rows.dim_g(i), dim_g_oracle(&rows, i), "{n} {m} {r} k={k} i={i}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn plane_dimension_formula(seed in any::<u64>(), m in 1usize..3, raw in proptest::collection::vec(1usize..5, 3)) {
        let mut ks = raw[..m + 1].to_vec();
        ks.sort();
        let rows = SymbolRows::generic(2, m, &ks, seed);
        let total: usize = ks.iter().sum();
        for i in 0..=total + 1 {
            prop_assert_eq!(rows.dim_g(i), dim_g_plane(m, &ks, i), "orders {:?} i {}", ks, i);
        }
    }
}

#[test]
fn spencer_table_matches_closed_form() {
    for (n, m, r) in FAMILY {
        for k in 1..=2 {
            let orders = vec![k; r];
            let rows = SymbolRows::generic(n, m, &orders, 11);
            let cap = orders.iter().sum::<usize>() + 2;
            let t = spencer_cohomology(&rows, cap);
            let want = theorem_b_expected(n, m, r, &orders).unwrap();
            let got: Vec<(usize, usize)> = (0..=n).map(|j| (j, t.total(j))).filter(|p| p.1 > 0).collect();
            assert_eq!(got, want.totals, "({n},{m},{r}) k={k}");
            let placed: Vec<(usize, usize)> = t.h.keys().copied().collect();
            let mut expect = want.placement.unwrap();
            expect.sort_by_key(|&(i, j)| (i, j));
            assert_eq!(placed, expect, "({n},{m},{r}) k={k}");
            assert_eq!(t.euler(), 0);
            assert_eq!(t.formal_codim, r);
        }
    }
}

#[test]
fn functional_dimension_family() {
    for (n, m, r) in FAMILY {
        for k in 1..=2 {
            let orders = vec![k; r];
            let rows = SymbolRows::generic(n, m, &orders, 5);
            let cap = 12.max(orders.iter().sum::<usize>() + 6);
            let h = hilbert_data(&rows, cap).unwrap();
            assert_eq!((h.p, h.d), theorem_c_expected(n, m, r, &orders).unwrap(), "({n},{m},{r}) k={k}");
            if h.finite_type() {
                assert_eq!(h.dims.iter().sum::<usize>() as u64, h.d);
            }
        }
    }
    let rows = SymbolRows::generic(2, 1, &[2, 3], 5);
    let h = hilbert_data(&rows, 12).unwrap();
    assert_eq!(&h.dims[..5], &[1, 2, 2, 1, 0]);
    assert_eq!((h.p, h.d), (0, 6));
    assert_eq!(theorem_c_expected(2, 1, 2, &[2, 3]).unwrap(), (0, 6));
    assert_eq!(theorem_c_expected(3, 1, 2, &[1, 1]).unwrap(), (1, 1));
}

#[test]
fn spencer_examples() {
    let t = spencer_cohomology(&rows_of("conics"), 6);
    assert_eq!(t.h.iter().map(|(k, v)| (*k, *v)).collect::<Vec<_>>(), vec![((0, 0), 1), ((1, 1), 2), ((2, 2), 1)]);
    let t = spencer_cohomology(&SymbolRows::generic(3, 2, &[1, 1, 1, 1], 2), 6);
    assert_eq!((t.total(2), t.total(3)), (4, 2));
    let b = theorem_b_expected(2, 1, 2, &[2, 2]).unwrap();
    assert_eq!(b.totals, vec![(0, 1), (1, 2), (2, 1)]);
    let b = theorem_b_expected(3, 2, 4, &[1; 4]).unwrap();
    assert_eq!(&b.totals[2..], &[(2, 4), (3, 2)]);
    assert!(theorem_b_expected(2, 2, 4, &[1; 4]).is_err());
}

#[test]
fn fixture_dimensions() {
    let cr = hilbert_data(&rows_of("cr"), 12).unwrap();
    assert_eq!((cr.p, cr.d), (1, 2));
    let crj = hilbert_data(&rows_of("cr_jacobian_const"), 12).unwrap();
    assert_eq!((crj.p, crj.d), (0, 3));
    assert_eq!((crj.p, crj.d), theorem_c_expected(2, 2, 3, &[1, 1, 1]).unwrap());
}

#[test]
fn gci_detection() {
    let b = Budget::default();
    for (n, m, r) in FAMILY {
        let g = gci_check(&SymbolRows::generic(n, m, &vec![1; r], 3), b);
        assert!(g.is_gci, "({n},{m},{r}) {:?}", g.reasons);
        assert_eq!(g.char_dim, Some((n + m) as i64 - r as i64 - 1));
    }
    for name in ["conics", "cr_jacobian_const", "killing_flat", "grad"] {
        assert!(gci_check(&rows_of(name), b).is_gci, "{name}");
    }
    // same equation twice
    let mut rep = SymbolRows::generic(3, 1, &[1, 1], 4);
    rep.rows[1] = rep.rows[0].clone();
    let g = gci_check(&rep, b);
    assert!(!g.is_gci);
    assert_eq!(g.char_dim, Some(2));
    // m = 2 rows without ξ_3: every entry vanishes along the ξ_3 axis
    let flat = SymbolRows::generic(2, 2, &[1, 1, 1], 4);
    let lift = |p: &jetbracket::symbolic::xi::XiQ| p.iter().map(|(e, c)| (MultiIndex::from_slice(&[e.get(0), e.get(1), 0]), c.clone())).collect();
    let rows: Vec<Vec<_>> = flat.rows.iter().map(|row| row.iter().map(lift).collect()).collect();
    let g = gci_check(&SymbolRows::new(3, 2, vec![1, 1, 1], rows).unwrap(), b);
    assert!(!g.is_gci);
    assert_eq!(g.fiber_dim, Some(1));
    // too many equations
    assert!(!gci_check(&rows_of("flows"), b).is_gci);
}

#[test]
fn buchsbaum_rim_exactness() {
    for (n, m, r) in [(2, 2, 3), (3, 2, 4)] {
        let rep = buchsbaum_rim_check(&SymbolRows::generic(n, m, &vec![1; r], 9), 6);
        assert!(rep.complex_ok && rep.exact, "({n},{m},{r}) {:?}", rep.first_failure);
        assert!(rep.checks.iter().all(|c| c.degree <= 6));
    }
    let koszul = buchsbaum_rim_check(&SymbolRows::generic(3, 1, &[1, 1, 1], 9), 6);
    assert!(koszul.exact);
    let mut dep = SymbolRows::generic(2, 2, &[1, 1, 1], 9);
    dep.rows[2] = dep.rows[0].clone();
    let rep = buchsbaum_rim_check(&dep, 6);
    assert!(rep.complex_ok && !rep.exact);
    assert_eq!(rep.first_failure, Some(("U".to_string(), 1)));
}
