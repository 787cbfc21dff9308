use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::jetcalc::{DiffPoly, Universe, Var};
use crate::Q;

/// Seeded generic point of jet space. Every base, jet and parameter variable
/// gets a small non-zero integer drawn from a stream keyed by (seed, variable),
/// so the value of a variable does not depend on which others were asked for.
#[derive(Clone, Debug)]
pub struct EvalPoint {
    uni: Arc<Universe>,
    seed: u64,
    inverses: Vec<Q>,
}

const MAX_RESEED: u64 = 32;

fn var_key(v: &Var) -> u64 {
    let mut h: u64 = match v {
        Var::Base(i) => 0x1000 + *i as u64,
        Var::Jet(j) => {
            let mut k = 0x2000_0000 + j.sym as u64;
            for e in j.idx.entries() {
                k = k.wrapping_mul(257).wrapping_add(e as u64 + 1);
            }
            k
        }
        Var::Inv(q) => 0x3000 + *q as u64,
    };
    // splitmix64 finaliser
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

fn raw(seed: u64, v: &Var) -> Q {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ var_key(v));
    let k: i64 = rng.gen_range(1..=40);
    let s = if rng.gen_bool(0.5) { -1 } else { 1 };
    Q::from_integer((s * k).into())
}

impl EvalPoint {
    /// The first seed `≥ seed` at which every declared invertible is non-zero.
    pub fn new(uni: &Arc<Universe>, seed: u64) -> Result<Self> {
        for s in seed..seed + MAX_RESEED {
            let mut inverses = Vec::new();
            for d in uni.invertibles() {
                let d = DiffPoly::from_terms(uni, d.clone());
                let v = d.eval(&mut |v| raw(s, v));
                if v.is_zero() {
                    break;
                }
                inverses.push(Q::one() / v);
            }
            if inverses.len() == uni.invertibles().len() {
                return Ok(EvalPoint { uni: uni.clone(), seed: s, inverses });
            }
        }
        Err(Error::Invalid(format!("declared invertibles vanish at seeds {seed}..{}", seed + MAX_RESEED)))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn value(&self, v: &Var) -> Q {
        match v {
            Var::Inv(q) => self.inverses[*q as usize].clone(),
            _ => raw(self.seed, v),
        }
    }

    pub fn eval(&self, f: &DiffPoly) -> Result<Q> {
        if f.universe().id() != self.uni.id() {
            return Err(Error::UniverseMismatch);
        }
        Ok(f.eval(&mut |v| self.value(v)))
    }

    /// Explicit assignment for a set of variables.
    pub fn assignments(&self, vars: impl IntoIterator<Item = Var>) -> BTreeMap<Var, Q> {
        vars.into_iter().map(|v| (v, self.value(&v))).collect()
    }
}
