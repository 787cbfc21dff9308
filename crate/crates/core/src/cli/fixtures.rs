//! Bundled example systems with their expected verdicts.

use std::fmt::Write as _;

use serde_json::json;

use super::commands::{load, run, Command, Options, Outcome, EXIT_ERROR, EXIT_OK, SCHEMA};
use crate::idealmod::Verdict;

pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
    /// invertibles passed on the command line rather than declared in the file
    pub invertible: &'static [&'static str],
    pub verdict: Verdict,
    /// expected (p, d)
    pub dims: Option<(usize, u64)>,
}

macro_rules! fx {
    ($name:literal, $inv:expr, $v:ident, $dims:expr) => {
        Fixture {
            name: $name,
            text: include_str!(concat!("../../fixtures/", $name, ".jb")),
            invertible: $inv,
            verdict: Verdict::$v,
            dims: $dims,
        }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fx!("cr", &[], CompatibleCertified, Some((1, 2))),
    fx!("cr_jacobian_const", &[], CompatibleCertified, Some((0, 3))),
    fx!("cr_jacobian_G_u", &["u"], Obstructed, None),
    fx!("cr_jacobian_u2", &[], Obstructed, None),
    fx!("cr_jacobian_r2", &[], CompatibleCertified, None),
    fx!("cr_jacobian_exp", &[], CompatibleCertified, None),
    fx!("cr_jacobian_exp_u2", &[], Obstructed, None),
    fx!("cr_jacobian_generic", &[], Obstructed, None),
    fx!("killing", &[], Obstructed, Some((0, 3))),
    fx!("killing_flat", &[], CompatibleCertified, Some((0, 3))),
    fx!("killing_x2", &[], Obstructed, None),
    fx!("quadratic_integrals", &[], Obstructed, None),
    fx!("minimal_surface", &[], Obstructed, Some((0, 4))),
    fx!("conics", &[], CompatibleCertified, Some((0, 4))),
    fx!("grad", &[], CompatibleCertified, Some((0, 1))),
    fx!("twisted", &[], Obstructed, None),
    fx!("flows", &[], Inconclusive, None),
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

fn verdict_of(o: &Outcome) -> Option<Verdict> {
    serde_json::from_value::<String>(o.json.get("verdict")?.clone()).ok().and_then(|s| match s.as_str() {
        "compatible-certified" => Some(Verdict::CompatibleCertified),
        "obstructed" => Some(Verdict::Obstructed),
        "inconclusive" => Some(Verdict::Inconclusive),
        _ => None,
    })
}

/// Runs `compat` (and `dims` where an expectation is recorded) on the named
/// fixtures, or on all of them.
pub fn run_fixtures(only: &[String], opts: &Options) -> Outcome {
    let mut text = String::new();
    let mut items = Vec::new();
    let mut all_ok = true;
    for f in FIXTURES.iter().filter(|f| only.is_empty() || only.iter().any(|n| n == f.name)) {
        let inv: Vec<String> = f.invertible.iter().map(|s| s.to_string()).chain(opts.invertible.iter().cloned()).collect();
        let system = match load(f.text, &inv) {
            Ok((_, s)) => s,
            Err(e) => {
                all_ok = false;
                writeln!(text, "FAIL {}: {e}", f.name).ok();
                items.push(json!({ "name": f.name, "ok": false, "error": e }));
                continue;
            }
        };
        let c = run(Command::Compat, &system, opts);
        let got = verdict_of(&c);
        let mut ok = got == Some(f.verdict);
        let mut dims = None;
        if let Some((p, d)) = f.dims {
            let o = run(Command::Dims, &system, opts);
            let pd = (o.json.get("p").and_then(|v| v.as_u64()), o.json.get("d").and_then(|v| v.as_u64()));
            ok &= pd == (Some(p as u64), Some(d));
            dims = Some(json!({ "expected": [p, d], "got": [pd.0, pd.1] }));
        }
        all_ok &= ok;
        let shown = got.map_or_else(|| "error".to_string(), |v| v.to_string());
        writeln!(text, "{} {}: {shown}", if ok { "ok  " } else { "FAIL" }, f.name).ok();
        items.push(json!({ "name": f.name, "ok": ok, "expected": f.verdict, "verdict": got, "dims": dims }));
    }
    Outcome {
        text,
        json: json!({ "schema": SCHEMA, "command": "fixtures", "fixtures": items, "ok": all_ok }),
        exit: if all_ok { EXIT_OK } else { EXIT_ERROR },
    }
}
