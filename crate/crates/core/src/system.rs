use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jetcalc::{DiffPoly, Terms, Universe};

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub name: String,
    pub expr: DiffPoly,
}

/// A system `F_1 = … = F_r = 0` over one variable universe.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeSystem {
    pub name: String,
    pub uni: Arc<Universe>,
    pub equations: Vec<Equation>,
}

impl PdeSystem {
    pub fn new(name: &str, uni: &Arc<Universe>, equations: Vec<(String, DiffPoly)>) -> Result<Self> {
        for (n, e) in &equations {
            if e.universe().id() != uni.id() {
                return Err(Error::UniverseMismatch);
            }
            if e.is_zero() {
                return Err(Error::Invalid(format!("equation `{n}` is identically zero")));
            }
        }
        Ok(PdeSystem {
            name: name.to_string(),
            uni: uni.clone(),
            equations: equations.into_iter().map(|(name, expr)| Equation { name, expr }).collect(),
        })
    }

    /// Base dimension.
    pub fn n(&self) -> usize {
        self.uni.n()
    }

    /// Number of unknowns.
    pub fn m(&self) -> usize {
        self.uni.m()
    }

    /// Number of equations.
    pub fn r(&self) -> usize {
        self.equations.len()
    }

    pub fn exprs(&self) -> Vec<DiffPoly> {
        self.equations.iter().map(|e| e.expr.clone()).collect()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.equations.iter().map(|e| e.expr.order_or_zero()).collect()
    }

    /// Same system with one more declared invertible.
    pub fn with_invertible(&self, d: Terms) -> PdeSystem {
        let uni = self.uni.with_invertible(d);
        PdeSystem {
            name: self.name.clone(),
            equations: self
                .equations
                .iter()
                .map(|e| Equation { name: e.name.clone(), expr: e.expr.rehome(&uni) })
                .collect(),
            uni,
        }
    }

    /// Restriction to a subset of equations (0-based indices).
    pub fn subsystem(&self, idx: &[usize]) -> PdeSystem {
        PdeSystem {
            name: self.name.clone(),
            uni: self.uni.clone(),
            equations: idx.iter().map(|&i| self.equations[i].clone()).collect(),
        }
    }
}
