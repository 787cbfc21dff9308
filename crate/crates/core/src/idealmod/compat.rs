use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::{check_subset, groebner_js, subsets, Budget, GroebnerBasis};
use crate::brackets::{coordinate_multibracket, CoordinateVariant};
use crate::error::{Error, Result};
use crate::jetcalc::DiffPoly;
use crate::symbolic::{gci_check, generic_symbols, GciSummary};
use crate::system::PdeSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CompatibleCertified,
    Obstructed,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CompatibleCertified => "compatible-certified",
            Verdict::Obstructed => "obstructed (polynomial model)",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CompatOptions {
    pub budget: Budget,
    /// seed of the generic point used for the GCI test
    pub seed: u64,
    pub variant: CoordinateVariant,
    /// restrict to these subsets (0-based); all when empty
    pub only: Vec<Vec<usize>>,
}

impl Default for CompatOptions {
    fn default() -> Self {
        CompatOptions { budget: Budget::default(), seed: 1, variant: CoordinateVariant::Calculational, only: Vec::new() }
    }
}

fn ser_poly<S: Serializer>(p: &Option<DiffPoly>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.serialize_some(&p.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubsetResult {
    /// 0-based equation indices
    pub indices: Vec<usize>,
    #[serde(serialize_with = "ser_poly")]
    pub normal_form: Option<DiffPoly>,
    pub error: Option<String>,
}

impl SubsetResult {
    pub fn vanishes(&self) -> bool {
        self.normal_form.as_ref().is_some_and(DiffPoly::is_zero)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompatReport {
    pub system: String,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub subsets: Vec<SubsetResult>,
    pub verdict: Verdict,
    pub reason: String,
    pub gci: Option<GciSummary>,
    pub notes: Vec<String>,
}

pub fn check_compatibility(system: &PdeSystem) -> Result<CompatReport> {
    check_compatibility_with(system, &CompatOptions::default())
}

/// Reduced brackets of every (m+1)-subset and the resulting verdict.
pub fn check_compatibility_with(system: &PdeSystem, opts: &CompatOptions) -> Result<CompatReport> {
    let (n, m, r) = (system.n(), system.m(), system.r());
    if r < m {
        return Err(Error::Range(format!("{r} equations for {m} unknowns")));
    }
    let mut report = CompatReport {
        system: system.name.clone(),
        n,
        m,
        r,
        subsets: Vec::new(),
        verdict: Verdict::Inconclusive,
        reason: String::new(),
        gci: None,
        notes: Vec::new(),
    };
    if r == m {
        report.verdict = Verdict::CompatibleCertified;
        report.reason = "determined system: no brackets to check".into();
        return Ok(report);
    }

    match generic_symbols(system, opts.seed) {
        Ok((rows, note)) => {
            report.notes.extend(note);
            let g = gci_check(&rows, opts.budget);
            if g.fiber_flag {
                report.notes.push("V(J_(m-1)) is zero-dimensional but J_(m-1) is not the unit ideal".into());
            }
            report.gci = Some(g);
        }
        Err(e) => report.notes.push(format!("symbols: {e}")),
    }

    let chosen = if opts.only.is_empty() { subsets(r, m + 1) } else { opts.only.clone() };
    let mut bases: BTreeMap<usize, std::result::Result<GroebnerBasis, Error>> = BTreeMap::new();
    for idx in chosen {
        check_subset(system, &idx)?;
        let fs: Vec<DiffPoly> = idx.iter().map(|&i| system.equations[i].expr.clone()).collect();
        let s = fs.iter().map(DiffPoly::order_or_zero).sum::<usize>().saturating_sub(1);
        let gb = bases.entry(s).or_insert_with(|| groebner_js(system, s, opts.budget));
        let nf = match gb {
            Ok(gb) => coordinate_multibracket(&fs, opts.variant).and_then(|b| gb.normal_form(&b)),
            Err(e) => Err(e.clone()),
        };
        report.subsets.push(match nf {
            Ok(p) => SubsetResult { indices: idx, normal_form: Some(p), error: None },
            Err(e @ Error::Budget(_)) => SubsetResult { indices: idx, normal_form: None, error: Some(e.to_string()) },
            Err(e) => return Err(e),
        });
    }

    let gci_ok = report.gci.as_ref().is_some_and(|g| g.is_gci);
    if let Some(bad) = report.subsets.iter().find(|s| s.normal_form.as_ref().is_some_and(|p| !p.is_zero())) {
        report.verdict = Verdict::Obstructed;
        report.reason = format!("bracket of {:?} does not vanish modulo the prolonged ideal", one_based(&bad.indices));
    } else if let Some(bad) = report.subsets.iter().find(|s| s.error.is_some()) {
        report.verdict = Verdict::Inconclusive;
        report.reason = format!("{:?}: {}", one_based(&bad.indices), bad.error.as_deref().unwrap_or(""));
    } else if !gci_ok {
        report.verdict = Verdict::Inconclusive;
        report.reason = "necessary conditions hold; sufficiency requires GCI".into();
    } else {
        report.verdict = Verdict::CompatibleCertified;
        report.reason = "system is GCI and every reduced bracket vanishes".into();
    }
    Ok(report)
}

fn one_based(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|i| i + 1).collect()
}
