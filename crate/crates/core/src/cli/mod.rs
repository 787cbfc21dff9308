//! System-file language, commands, reports and the fixture library.
//!
//! Exit codes: 0 success or compatible, 1 obstructed, 2 inconclusive,
//! 3 usage or parse error, 4 any other error.

pub mod commands;
pub mod fixtures;
pub mod parser;

pub use commands::{load, run, run_text, Command, Options, Outcome};
pub use fixtures::{fixture, run_fixtures, Fixture, FIXTURES};
pub use parser::{parse, parse_expr, Diagnostic, DiagKind, Expr, ParamSpec, SystemFile};
