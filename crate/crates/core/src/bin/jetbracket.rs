use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jetbracket::cli::{self, commands::EXIT_USAGE, Command, Options, Outcome};

#[derive(Parser)]
#[command(name = "jetbracket", version, about = "Multi-brackets and compatibility of overdetermined PDE systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// system file
    file: PathBuf,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args, Clone)]
struct Flags {
    /// Gröbner degree bound
    #[arg(long)]
    max_degree: Option<u32>,
    /// seed of the generic point
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// prolongation / interpolation cap
    #[arg(long)]
    cap: Option<usize>,
    /// print the structured report instead of text
    #[arg(long)]
    json: bool,
    /// 1-based equation indices, e.g. 1,2,3
    #[arg(long, value_delimiter = ',')]
    subset: Option<Vec<usize>>,
    /// extra invertible expression (repeatable)
    #[arg(long)]
    invertible: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// unreduced coordinate multi-bracket
    Bracket(Common),
    /// reduced brackets modulo the prolonged ideal
    Reduce(Common),
    /// compatibility verdict
    Compat(Common),
    /// symbols at a generic point
    Symbols(Common),
    /// Spencer δ-cohomology of the symbol
    Spencer(Common),
    /// generalized complete intersection test
    Gci(Common),
    /// functional dimension and rank
    Dims(Common),
    /// first-syzygy operator of a linear system
    Syzygy(Common),
    /// bundled examples
    Fixtures {
        #[command(subcommand)]
        action: FixtureCmd,
    },
}

#[derive(Subcommand)]
enum FixtureCmd {
    /// list bundled fixtures
    List,
    /// print one fixture file
    Show { name: String },
    /// run fixtures against their expected verdicts
    Run {
        names: Vec<String>,
        #[command(flatten)]
        flags: Flags,
    },
}

fn options(f: &Flags) -> Options {
    Options {
        max_degree: f.max_degree,
        seed: f.seed,
        cap: f.cap,
        subset: f.subset.clone(),
        invertible: f.invertible.clone(),
    }
}

fn emit(o: &Outcome, json: bool) -> ExitCode {
    // a closed pipe is not worth a panic
    if json {
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&o.json).expect("serializable"));
    } else if o.exit >= EXIT_USAGE {
        let _ = write!(std::io::stderr(), "{}", o.text);
    } else {
        let _ = write!(std::io::stdout(), "{}", o.text);
    }
    ExitCode::from(o.exit as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let (cmd, common) = match cli.cmd {
        Cmd::Bracket(c) => (Command::Bracket, c),
        Cmd::Reduce(c) => (Command::Reduce, c),
        Cmd::Compat(c) => (Command::Compat, c),
        Cmd::Symbols(c) => (Command::Symbols, c),
        Cmd::Spencer(c) => (Command::Spencer, c),
        Cmd::Gci(c) => (Command::Gci, c),
        Cmd::Dims(c) => (Command::Dims, c),
        Cmd::Syzygy(c) => (Command::Syzygy, c),
        Cmd::Fixtures { action } => {
            return match action {
                FixtureCmd::List => {
                    for f in cli::FIXTURES {
                        println!("{}", f.name);
                    }
                    ExitCode::SUCCESS
                }
                FixtureCmd::Show { name } => match cli::fixture(&name) {
                    Some(f) => {
                        print!("{}", f.text);
                        ExitCode::SUCCESS
                    }
                    None => {
                        eprintln!("error: no fixture named `{name}`");
                        ExitCode::from(EXIT_USAGE as u8)
                    }
                },
                FixtureCmd::Run { names, flags } => emit(&cli::run_fixtures(&names, &options(&flags)), flags.json),
            };
        }
    };
    let text = match std::fs::read_to_string(&common.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", common.file.display());
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    emit(&cli::run_text(cmd, &text, &options(&common.flags)), common.flags.json)
}
