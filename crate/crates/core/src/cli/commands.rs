use std::fmt::Write as _;

use serde_json::{json, Value};

use super::parser::{parse, SystemFile};
use crate::brackets::{coordinate_multibracket, CoordinateVariant};
use crate::error::Error;
use crate::idealmod::{
    check_compatibility_with, first_syzygy_operator, reduced_bracket_with, subsets, Budget, CompatOptions, CompatReport,
    SyzygyOptions, Verdict,
};
use crate::symbolic::{
    gci_check, generic_symbols, hilbert_data, spencer_cohomology, theorem_c_expected, GciSummary, HilbertData,
    SpencerTable,
};
use crate::system::PdeSystem;

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OBSTRUCTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_ERROR: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Bracket,
    Reduce,
    Compat,
    Symbols,
    Spencer,
    Gci,
    Dims,
    Syzygy,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bracket => "bracket",
            Command::Reduce => "reduce",
            Command::Compat => "compat",
            Command::Symbols => "symbols",
            Command::Spencer => "spencer",
            Command::Gci => "gci",
            Command::Dims => "dims",
            Command::Syzygy => "syzygy",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_degree: Option<u32>,
    pub seed: u64,
    /// prolongation / interpolation cap
    pub cap: Option<usize>,
    /// 1-based equation indices
    pub subset: Option<Vec<usize>>,
    /// extra invertible expressions
    pub invertible: Vec<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_degree: None, seed: 1, cap: None, subset: None, invertible: Vec::new() }
    }
}

impl Options {
    fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(d) = self.max_degree {
            b.max_degree = d;
        }
        b
    }
}

/// Text report, structured report and exit code of one command.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub exit: i32,
}

impl Outcome {
    fn failure(command: &str, exit: i32, msg: String) -> Self {
        Outcome {
            text: format!("error: {msg}\n"),
            json: json!({ "schema": SCHEMA, "command": command, "error": msg }),
            exit,
        }
    }
}

fn error_exit(e: &Error) -> i32 {
    match e {
        Error::Shape(_) | Error::Range(_) => EXIT_USAGE,
        _ => EXIT_ERROR,
    }
}

/// Parses `text`, appends the extra invertibles and builds the system.
pub fn load(text: &str, invertible: &[String]) -> Result<(SystemFile, PdeSystem), String> {
    let mut full = text.to_string();
    for e in invertible {
        full.push_str(&format!("\ninvertible {e}"));
    }
    let file = parse(&full).map_err(|d| d.to_string())?;
    let system = file.to_system().map_err(|e| e.to_string())?;
    Ok((file, system))
}

pub fn run_text(cmd: Command, text: &str, opts: &Options) -> Outcome {
    match load(text, &opts.invertible) {
        Ok((_, system)) => run(cmd, &system, opts),
        Err(msg) => Outcome::failure(cmd.name(), EXIT_USAGE, msg),
    }
}

pub fn run(cmd: Command, system: &PdeSystem, opts: &Options) -> Outcome {
    let res = match cmd {
        Command::Bracket => bracket(system, opts),
        Command::Reduce => reduce(system, opts),
        Command::Compat => compat(system, opts),
        Command::Symbols => symbols(system, opts),
        Command::Spencer => spencer(system, opts),
        Command::Gci => gci(system, opts),
        Command::Dims => dims(system, opts),
        Command::Syzygy => syzygy(system, opts),
    };
    match res {
        Ok(mut o) => {
            if let Value::Object(map) = &mut o.json {
                map.insert("schema".into(), json!(SCHEMA));
                map.insert("command".into(), json!(cmd.name()));
                map.insert("system".into(), summary(system));
            }
            o
        }
        Err(e) => Outcome::failure(cmd.name(), error_exit(&e), format!("{}: {e}", system.name)),
    }
}

fn summary(system: &PdeSystem) -> Value {
    json!({
        "name": system.name,
        "n": system.n(),
        "m": system.m(),
        "r": system.r(),
        "orders": system.orders(),
        "equations": system.equations.iter().map(|e| json!({ "name": e.name, "expr": e.expr.to_string() })).collect::<Vec<_>>(),
    })
}

fn chosen_subsets(system: &PdeSystem, opts: &Options) -> crate::Result<Vec<Vec<usize>>> {
    match &opts.subset {
        Some(s) => {
            if s.iter().any(|&i| i == 0 || i > system.r()) {
                return Err(Error::Shape(format!("subset {s:?} out of range 1..={}", system.r())));
            }
            Ok(vec![s.iter().map(|i| i - 1).collect()])
        }
        None => Ok(subsets(system.r(), system.m() + 1)),
    }
}

fn names(system: &PdeSystem, idx: &[usize]) -> String {
    let v: Vec<&str> = idx.iter().map(|&i| system.equations[i].name.as_str()).collect();
    v.join(",")
}

fn bracket(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let mut text = String::new();
    let mut items = Vec::new();
    for idx in chosen_subsets(system, opts)? {
        let fs: Vec<_> = idx.iter().map(|&i| system.equations[i].expr.clone()).collect();
        let b = coordinate_multibracket(&fs, CoordinateVariant::Calculational)?;
        writeln!(text, "[{}] = {b}", names(system, &idx)).ok();
        items.push(json!({ "subset": idx.iter().map(|i| i + 1).collect::<Vec<_>>(), "bracket": b.to_string() }));
    }
    Ok(Outcome { text, json: json!({ "brackets": items }), exit: EXIT_OK })
}

fn reduce(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let mut text = String::new();
    let mut items = Vec::new();
    let mut exit = EXIT_OK;
    for idx in chosen_subsets(system, opts)? {
        let one: Vec<usize> = idx.iter().map(|i| i + 1).collect();
        match reduced_bracket_with(system, &idx, CoordinateVariant::Calculational, opts.budget()) {
            Ok(nf) => {
                if !nf.is_zero() {
                    exit = EXIT_OBSTRUCTED;
                }
                writeln!(text, "[{}]_E = {nf}", names(system, &idx)).ok();
                items.push(json!({ "subset": one, "normal_form": nf.to_string() }));
            }
            Err(e @ Error::Budget(_)) => {
                if exit == EXIT_OK {
                    exit = EXIT_INCONCLUSIVE;
                }
                writeln!(text, "[{}]_E: {e}", names(system, &idx)).ok();
                items.push(json!({ "subset": one, "normal_form": null, "error": e.to_string() }));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Outcome { text, json: json!({ "reduced": items }), exit })
}

fn default_spencer_cap(system: &PdeSystem) -> usize {
    system.orders().iter().sum::<usize>() + 2
}

fn default_hilbert_cap(system: &PdeSystem) -> usize {
    (system.orders().iter().sum::<usize>() + 6).max(12)
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::CompatibleCertified => EXIT_OK,
        Verdict::Obstructed => EXIT_OBSTRUCTED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn compat(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let copts = CompatOptions {
        budget: opts.budget(),
        seed: opts.seed,
        only: if opts.subset.is_some() { chosen_subsets(system, opts)? } else { Vec::new() },
        ..CompatOptions::default()
    };
    let report = check_compatibility_with(system, &copts)?;
    let mut notes = report.notes.clone();
    let (table, hilbert) = match generic_symbols(system, opts.seed) {
        Ok((rows, _)) => {
            let table = spencer_cohomology(&rows, opts.cap.unwrap_or_else(|| default_spencer_cap(system)));
            let hilbert = hilbert_data(&rows, opts.cap.unwrap_or_else(|| default_hilbert_cap(system)));
            if let Err(e) = &hilbert {
                notes.push(e.to_string());
            }
            (Some(table), hilbert.ok())
        }
        Err(e) => {
            notes.push(format!("symbols: {e}"));
            (None, None)
        }
    };
    let text = compat_text(system, &report, table.as_ref(), hilbert.as_ref(), &notes);
    let json = json!({
        "subsets": report.subsets.iter().map(|s| json!({
            "subset": s.indices.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "normal_form": s.normal_form.as_ref().map(|p| p.to_string()),
            "error": s.error,
        })).collect::<Vec<_>>(),
        "gci": report.gci,
        "spencer": table,
        "p": hilbert.as_ref().map(|h| h.p),
        "d": hilbert.as_ref().map(|h| h.d),
        "verdict": report.verdict,
        "reason": report.reason,
        "notes": notes,
    });
    Ok(Outcome { text, json, exit: verdict_exit(report.verdict) })
}

fn compat_text(
    system: &PdeSystem,
    report: &CompatReport,
    table: Option<&SpencerTable>,
    hilbert: Option<&HilbertData>,
    notes: &[String],
) -> String {
    let mut t = String::new();
    writeln!(t, "system {} (n={}, m={}, r={}, orders {:?})", system.name, system.n(), system.m(), system.r(), system.orders()).ok();
    for s in &report.subsets {
        match (&s.normal_form, &s.error) {
            (Some(p), _) => writeln!(t, "  [{}]_E = {p}", names(system, &s.indices)).ok(),
            (None, Some(e)) => writeln!(t, "  [{}]_E: {e}", names(system, &s.indices)).ok(),
            _ => None,
        };
    }
    if let Some(g) = &report.gci {
        writeln!(t, "GCI: {}", gci_line(g)).ok();
    }
    if let Some(tb) = table {
        writeln!(t, "Spencer: {}", h_line(tb)).ok();
    }
    if let Some(h) = hilbert {
        writeln!(t, "{}", pd_line(h)).ok();
    }
    for n in notes {
        writeln!(t, "note: {n}").ok();
    }
    writeln!(t, "verdict: {} ({})", report.verdict, report.reason).ok();
    t
}

fn gci_line(g: &GciSummary) -> String {
    if let Some(e) = &g.inconclusive {
        return format!("inconclusive ({e})");
    }
    let dim = g.char_dim.map_or("?".to_string(), |d| d.to_string());
    let mut s = format!("{} (dim V(J_m) = {dim}, expected {})", if g.is_gci { "yes" } else { "no" }, g.expected_char_dim);
    for r in &g.reasons {
        s.push_str("; ");
        s.push_str(r);
    }
    s
}

fn h_line(t: &SpencerTable) -> String {
    let parts: Vec<String> = t.h.iter().map(|((i, j), v)| format!("h^({i},{j})={v}")).collect();
    parts.join(" ")
}

fn pd_line(h: &HilbertData) -> String {
    if h.finite_type() {
        format!("p={}, d={} (finite type)", h.p, h.d)
    } else {
        format!("p={}, d={}", h.p, h.d)
    }
}

fn symbols(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let (rows, note) = generic_symbols(system, opts.seed)?;
    let mut text = rows.to_string();
    if let Some(n) = &note {
        writeln!(text, "note: {n}").ok();
    }
    let json = json!({
        "seed": opts.seed,
        "rows": rows.rows.iter().map(|r| r.iter().map(crate::symbolic::xi::display).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "orders": rows.orders,
        "note": note,
    });
    Ok(Outcome { text, json, exit: EXIT_OK })
}

fn spencer(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let (rows, note) = generic_symbols(system, opts.seed)?;
    let table = spencer_cohomology(&rows, opts.cap.unwrap_or_else(|| default_spencer_cap(system)));
    let mut text = String::new();
    writeln!(text, "dim g_i: {:?}", table.dims_g).ok();
    for j in 0..=table.n {
        let row: Vec<String> = (0..=table.cap).map(|i| table.get(i, j).to_string()).collect();
        writeln!(text, "j={j}: {}   total {}", row.join(" "), table.total(j)).ok();
    }
    for n in table.notes.iter().chain(note.iter()) {
        writeln!(text, "note: {n}").ok();
    }
    Ok(Outcome { text, json: json!({ "spencer": table, "note": note }), exit: EXIT_OK })
}

fn gci(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let (rows, note) = generic_symbols(system, opts.seed)?;
    let g = gci_check(&rows, opts.budget());
    let mut text = format!("GCI: {}\n", gci_line(&g));
    if g.fiber_flag {
        text.push_str("note: V(J_(m-1)) is zero-dimensional but J_(m-1) is not the unit ideal\n");
    }
    if let Some(n) = &note {
        writeln!(text, "note: {n}").ok();
    }
    let exit = if g.inconclusive.is_some() { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok(Outcome { text, json: json!({ "gci": g, "note": note }), exit })
}

fn dims(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let (rows, note) = generic_symbols(system, opts.seed)?;
    let h = hilbert_data(&rows, opts.cap.unwrap_or_else(|| default_hilbert_cap(system)))?;
    let mut text = format!("dim g_i: {:?}\n{}\n", h.dims, pd_line(&h));
    let expected = theorem_c_expected(system.n(), system.m(), system.r(), &system.orders()).ok();
    if let Some((p, d)) = expected {
        writeln!(text, "expected for a GCI: p={p}, d={d}").ok();
    }
    if let Some(n) = &note {
        writeln!(text, "note: {n}").ok();
    }
    let json = json!({
        "hilbert": h,
        "p": h.p,
        "d": h.d,
        "expected": expected.map(|(p, d)| json!({ "p": p, "d": d })),
        "note": note,
    });
    Ok(Outcome { text, json, exit: EXIT_OK })
}

fn syzygy(system: &PdeSystem, opts: &Options) -> crate::Result<Outcome> {
    let sopts = SyzygyOptions { budget: opts.budget(), ..SyzygyOptions::default() };
    match first_syzygy_operator(system, &sopts) {
        Ok(res) => {
            let mut text = String::new();
            for r in &res {
                writeln!(text, "{r}").ok();
            }
            let json = json!({ "syzygies": res.iter().map(|r| json!({
                "subset": r.subset.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "bracket": r.bracket.to_string(),
                "tails": r.tails.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "nabla": r.nabla.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "degree": r.degree,
                "verified": r.verified,
            })).collect::<Vec<_>>() });
            Ok(Outcome { text, json, exit: EXIT_OK })
        }
        Err(e @ Error::SyzygyNotFound { .. }) => Ok(Outcome {
            text: format!("{e}\n"),
            json: json!({ "syzygies": null, "error": e.to_string() }),
            exit: EXIT_INCONCLUSIVE,
        }),
        Err(e) => Err(e),
    }
}
