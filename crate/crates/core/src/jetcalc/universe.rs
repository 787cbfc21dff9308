use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use super::multi_index::{MultiIndex, MAX_DIM};
use super::poly::Terms;
use crate::error::{Error, Result};

/// Jet coordinate `p^sym_σ` of an unknown or a parameter function.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub sym: u16,
    pub idx: MultiIndex,
}

/// A ring variable. The derived order is the fixed variable ranking: base
/// variables, then jets by (symbol, graded-lex index), then inverse symbols.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    Base(u16),
    Jet(JetVar),
    /// Fresh symbol `t_q` standing for `1/d_q` of the q-th declared invertible.
    Inv(u16),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SymbolKind {
    Unknown,
    Param,
}

#[derive(Clone, Debug)]
pub struct SymbolDecl {
    pub name: String,
    pub kind: SymbolKind,
    /// direction → value of `D_dir` applied to the bare symbol
    pub rules: BTreeMap<usize, Terms>,
}

/// The variable universe shared by every polynomial of one system.
#[derive(Debug)]
pub struct Universe {
    id: u64,
    base: Vec<String>,
    symbols: Vec<SymbolDecl>,
    unknowns: usize,
    invertibles: Vec<Terms>,
    depth_cap: usize,
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub const DEFAULT_DEPTH_CAP: usize = 64;

impl Universe {
    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// Number of unknowns.
    pub fn m(&self) -> usize {
        self.unknowns
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn base_names(&self) -> &[String] {
        &self.base
    }

    pub fn symbols(&self) -> &[SymbolDecl] {
        &self.symbols
    }

    pub fn symbol(&self, sym: u16) -> &SymbolDecl {
        &self.symbols[sym as usize]
    }

    pub fn is_unknown(&self, sym: u16) -> bool {
        (sym as usize) < self.unknowns
    }

    pub fn invertibles(&self) -> &[Terms] {
        &self.invertibles
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub fn symbol_index(&self, name: &str) -> Option<u16> {
        self.symbols.iter().position(|s| s.name == name).map(|i| i as u16)
    }

    pub fn base_index(&self, name: &str) -> Option<u16> {
        self.base.iter().position(|s| s == name).map(|i| i as u16)
    }

    pub fn jet(&self, sym: u16, idx: &[u32]) -> Var {
        assert_eq!(idx.len(), self.n());
        Var::Jet(JetVar { sym, idx: MultiIndex::from_slice(idx) })
    }

    pub fn zero_index(&self) -> MultiIndex {
        MultiIndex::zero(self.n())
    }

    pub fn var_name(&self, v: &Var) -> String {
        match v {
            Var::Base(i) => self.base[*i as usize].clone(),
            Var::Jet(j) => {
                let name = &self.symbols[j.sym as usize].name;
                if j.idx.is_zero() {
                    name.clone()
                } else {
                    format!("{name}{}", j.idx)
                }
            }
            Var::Inv(q) => format!("inv{}", q + 1),
        }
    }

    /// A copy of this universe with one more invertible; existing variable ids
    /// are unchanged, so terms transplant verbatim.
    pub fn with_invertible(&self, d: Terms) -> Arc<Universe> {
        let mut inv = self.invertibles.clone();
        inv.push(d);
        Arc::new(Universe {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            base: self.base.clone(),
            symbols: self.symbols.clone(),
            unknowns: self.unknowns,
            invertibles: inv,
            depth_cap: self.depth_cap,
        })
    }
}

impl Eq for Universe {}

impl PartialEq for Universe {
    fn eq(&self, o: &Self) -> bool {
        self.id == o.id
    }
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} m={} params={}", self.n(), self.m(), self.symbols.len() - self.unknowns)
    }
}

/// Two-phase construction: declare names, then attach rules and invertibles
/// written over the declared variables.
#[derive(Clone, Debug)]
pub struct UniverseBuilder {
    base: Vec<String>,
    symbols: Vec<SymbolDecl>,
    unknowns: usize,
    invertibles: Vec<Terms>,
    depth_cap: usize,
}

impl UniverseBuilder {
    pub fn new<S: AsRef<str>>(base: &[S], unknowns: &[S], params: &[S]) -> Result<Self> {
        if base.len() > MAX_DIM {
            return Err(Error::Invalid(format!("at most {MAX_DIM} base variables")));
        }
        let mut symbols: Vec<SymbolDecl> = unknowns
            .iter()
            .map(|s| SymbolDecl { name: s.as_ref().to_string(), kind: SymbolKind::Unknown, rules: BTreeMap::new() })
            .collect();
        symbols.extend(params.iter().map(|s| SymbolDecl {
            name: s.as_ref().to_string(),
            kind: SymbolKind::Param,
            rules: BTreeMap::new(),
        }));
        let b = UniverseBuilder {
            base: base.iter().map(|s| s.as_ref().to_string()).collect(),
            symbols,
            unknowns: unknowns.len(),
            invertibles: Vec::new(),
            depth_cap: DEFAULT_DEPTH_CAP,
        };
        let mut seen = std::collections::HashSet::new();
        for name in b.base.iter().chain(b.symbols.iter().map(|s| &s.name)) {
            if !seen.insert(name.as_str()) {
                return Err(Error::Invalid(format!("duplicate identifier `{name}`")));
            }
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    pub fn symbol_index(&self, name: &str) -> Option<u16> {
        self.symbols.iter().position(|s| s.name == name).map(|i| i as u16)
    }

    pub fn base_index(&self, name: &str) -> Option<u16> {
        self.base.iter().position(|s| s == name).map(|i| i as u16)
    }

    pub fn set_rule(&mut self, param: u16, dir: usize, rhs: Terms) -> Result<()> {
        let s = &mut self.symbols[param as usize];
        if s.kind != SymbolKind::Param {
            return Err(Error::Invalid(format!("`{}` is not a parameter", s.name)));
        }
        if dir >= self.base.len() {
            return Err(Error::Direction(dir, self.base.len()));
        }
        s.rules.insert(dir, rhs);
        Ok(())
    }

    pub fn add_invertible(&mut self, d: Terms) {
        self.invertibles.push(d);
    }

    pub fn depth_cap(mut self, cap: usize) -> Self {
        self.depth_cap = cap;
        self
    }

    pub fn build(self) -> Arc<Universe> {
        Arc::new(Universe {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            base: self.base,
            symbols: self.symbols,
            unknowns: self.unknowns,
            invertibles: self.invertibles,
            depth_cap: self.depth_cap,
        })
    }
}
