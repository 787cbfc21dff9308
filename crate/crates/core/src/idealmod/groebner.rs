//! Buchberger's algorithm over exponent vectors with a block order.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Q;

pub type Exp = Vec<u16>;

/// Product of grevlex blocks. Blocks are contiguous index ranges listed from
/// most to least significant; inside a block a lower index is the larger
/// variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockOrder {
    pub nvars: usize,
    pub blocks: Vec<(usize, usize)>,
}

impl BlockOrder {
    pub fn grevlex(nvars: usize) -> Self {
        BlockOrder { nvars, blocks: vec![(0, nvars)] }
    }

    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        for &(lo, hi) in &self.blocks {
            let da: u32 = a[lo..hi].iter().map(|&x| x as u32).sum();
            let db: u32 = b[lo..hi].iter().map(|&x| x as u32).sum();
            if da != db {
                return da.cmp(&db);
            }
            for i in (lo..hi).rev() {
                if a[i] != b[i] {
                    return b[i].cmp(&a[i]);
                }
            }
        }
        Ordering::Equal
    }
}

/// Polynomial with terms sorted by decreasing monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub terms: Vec<(Exp, Q)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn from_terms(mut terms: Vec<(Exp, Q)>, ord: &BlockOrder) -> Self {
        terms.retain(|t| !t.1.is_zero());
        terms.sort_by(|a, b| ord.cmp(&b.0, &a.0));
        let mut out: Vec<(Exp, Q)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Poly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Exp {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &Q {
        &self.terms[0].1
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| deg(&t.0)).max().unwrap_or(0)
    }

    pub fn monic(mut self) -> Self {
        if let Some(c) = self.terms.first().map(|t| t.1.clone()) {
            if !c.is_one() {
                let inv = Q::one() / c;
                for t in &mut self.terms {
                    t.1 *= &inv;
                }
            }
        }
        self
    }

    /// `self − c·x^m·g`
    fn sub_mul(&self, c: &Q, m: &[u16], g: &Poly, ord: &BlockOrder) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let (a, b) = (&self.terms, &g.terms);
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Exp> = b.first().map(|t| mul_exp(&t.0, m));
        while i < a.len() || j < b.len() {
            let o = match (i < a.len(), &bj) {
                (true, Some(e)) => ord.cmp(&a[i].0, e),
                (true, None) => Ordering::Greater,
                (false, _) => Ordering::Less,
            };
            match o {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bj.take().unwrap(), -(c * &b[j].1)));
                    j += 1;
                    bj = b.get(j).map(|t| mul_exp(&t.0, m));
                }
                Ordering::Equal => {
                    let v = &a[i].1 - c * &b[j].1;
                    if !v.is_zero() {
                        out.push((bj.take().unwrap(), v));
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|t| mul_exp(&t.0, m));
                }
            }
        }
        Poly { terms: out }
    }
}

pub fn deg(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

fn mul_exp(a: &[u16], b: &[u16]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn quot(b: &[u16], a: &[u16]) -> Exp {
    b.iter().zip(a).map(|(y, x)| y - x).collect()
}

fn lcm(a: &[u16], b: &[u16]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_degree: 24, max_terms: 200_000 }
    }
}

/// Bit mask of the variables present in an exponent vector, for quick
/// non-divisibility rejection.
fn mask(e: &[u16]) -> u128 {
    let mut m = 0u128;
    for (i, &x) in e.iter().enumerate() {
        if x > 0 {
            m |= 1u128 << (i % 128);
        }
    }
    m
}

/// Divisor set: leading monomials with masks.
struct Divisors<'a> {
    polys: &'a [Poly],
    masks: Vec<u128>,
}

impl<'a> Divisors<'a> {
    fn new(polys: &'a [Poly]) -> Self {
        let masks = polys.iter().map(|p| mask(p.lm())).collect();
        Divisors { polys, masks }
    }

    fn find(&self, e: &[u16]) -> Option<&'a Poly> {
        let me = mask(e);
        for (k, p) in self.polys.iter().enumerate() {
            if self.masks[k] & !me == 0 && divides(p.lm(), e) {
                return Some(p);
            }
        }
        None
    }
}

/// Full reduction by monic divisors.
pub fn reduce(p: &Poly, basis: &[Poly], ord: &BlockOrder) -> Poly {
    let div = Divisors::new(basis);
    let mut rem: Vec<(Exp, Q)> = Vec::new();
    let mut cur = p.clone();
    while let Some((e, c)) = cur.terms.first().cloned() {
        match div.find(&e) {
            Some(g) => {
                let m = quot(&e, g.lm());
                let k = &c / g.lc();
                cur = cur.sub_mul(&k, &m, g, ord);
            }
            None => {
                rem.push((e, c));
                cur.terms.remove(0);
            }
        }
    }
    Poly { terms: rem }
}

/// Reduction of the leading term only (stops at the first irreducible head).
fn top_reduce(p: &Poly, basis: &[Poly], ord: &BlockOrder) -> Poly {
    let div = Divisors::new(basis);
    let mut cur = p.clone();
    while let Some((e, c)) = cur.terms.first().cloned() {
        match div.find(&e) {
            Some(g) => {
                let m = quot(&e, g.lm());
                let k = &c / g.lc();
                cur = cur.sub_mul(&k, &m, g, ord);
            }
            None => break,
        }
    }
    cur
}

fn spoly(f: &Poly, g: &Poly, ord: &BlockOrder) -> Poly {
    let l = lcm(f.lm(), g.lm());
    let mf = quot(&l, f.lm());
    let mg = quot(&l, g.lm());
    let a = Poly::zero().sub_mul(&-(Q::one() / f.lc()), &mf, f, ord);
    a.sub_mul(&(Q::one() / g.lc()), &mg, g, ord)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
}

/// Reduced Gröbner basis (monic, sorted by increasing leading monomial).
pub fn groebner(gens: &[Poly], ord: &BlockOrder, budget: Budget) -> Result<Vec<Poly>> {
    let mut store: Vec<Poly> = Vec::new();
    let mut basis: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // interreduce the input first; cheap and keeps the pair set small
    let mut input: Vec<Poly> = gens.iter().filter(|p| !p.is_zero()).cloned().map(Poly::monic).collect();
    input.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    for p in input {
        let active: Vec<Poly> = basis.iter().map(|&k| store[k].clone()).collect();
        let h = reduce(&p, &active, ord);
        if h.is_zero() {
            continue;
        }
        insert(&mut store, &mut basis, &mut pairs, h.monic(), budget)?;
    }

    while !pairs.is_empty() {
        // normal selection strategy with degree first
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| deg(&a.lcm).cmp(&deg(&b.lcm)).then_with(|| ord.cmp(&a.lcm, &b.lcm)))
            .expect("non-empty");
        let pr = pairs.swap_remove(best);
        let s = spoly(&store[pr.i], &store[pr.j], ord);
        let active: Vec<Poly> = basis.iter().map(|&k| store[k].clone()).collect();
        let h = top_reduce(&s, &active, ord);
        if h.is_zero() {
            continue;
        }
        let h = reduce(&h, &active, ord).monic();
        insert(&mut store, &mut basis, &mut pairs, h, budget)?;
    }

    // final interreduction
    let mut g: Vec<Poly> = basis.iter().map(|&k| store[k].clone()).collect();
    g.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    let mut out: Vec<Poly> = Vec::with_capacity(g.len());
    for k in 0..g.len() {
        let others: Vec<Poly> = g.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, p)| p.clone()).collect();
        let r = reduce(&g[k], &others, ord).monic();
        if !r.is_zero() {
            out.push(r);
        }
    }
    out.sort_by(|a, b| ord.cmp(a.lm(), b.lm()));
    Ok(out)
}

// Gebauer–Möller update.
fn insert(
    store: &mut Vec<Poly>,
    basis: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: Poly,
    budget: Budget,
) -> Result<()> {
    if h.degree() > budget.max_degree {
        return Err(Error::Budget(format!("basis element of degree {} exceeds {}", h.degree(), budget.max_degree)));
    }
    let hi = store.len();
    let hl = h.lm().clone();
    store.push(h);
    let total: usize = basis.iter().map(|&k| store[k].terms.len()).sum::<usize>() + store[hi].terms.len();
    if total > budget.max_terms {
        return Err(Error::Budget(format!("basis holds {total} terms, cap {}", budget.max_terms)));
    }
    // a constant ends everything
    if hl.iter().all(|&x| x == 0) {
        basis.clear();
        basis.push(hi);
        pairs.clear();
        return Ok(());
    }

    let cand: Vec<(usize, Exp, bool)> = basis
        .iter()
        .map(|&g| (g, lcm(&hl, store[g].lm()), coprime(&hl, store[g].lm())))
        .collect();
    let mut keep: Vec<bool> = vec![true; cand.len()];
    // chain criterion within the new pairs
    for a in 0..cand.len() {
        for b in 0..cand.len() {
            if a == b || !keep[b] {
                continue;
            }
            let (la, lb) = (&cand[a].1, &cand[b].1);
            if divides(lb, la) && (lb != la || b < a) {
                keep[a] = false;
                break;
            }
        }
    }
    // old pairs made redundant by h
    pairs.retain(|p| {
        let li = lcm(&hl, store[p.i].lm());
        let lj = lcm(&hl, store[p.j].lm());
        !(divides(&hl, &p.lcm) && li != p.lcm && lj != p.lcm)
    });
    for (k, (g, l, cop)) in cand.into_iter().enumerate() {
        if keep[k] && !cop {
            pairs.push(Pair { i: g, j: hi, lcm: l });
        }
    }
    basis.retain(|&g| !divides(&hl, store[g].lm()));
    basis.push(hi);
    Ok(())
}
