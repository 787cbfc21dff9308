//! Parse a system file, print it back and run commands on it.
use jetbracket::cli::{parse, run_text, Command, Options};

const TEXT: &str = "\
system conic
base x y
unknown u
eq F1 = u[2,0] - u[0,2]
eq F2 = u[1,1]
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let file = parse(TEXT)?;
    print!("{file}");
    for cmd in [Command::Dims, Command::Compat] {
        let out = run_text(cmd, TEXT, &Options::default());
        println!("{cmd:?} (exit {})\n{}", out.exit, out.text);
    }
    // diagnostics carry line and column
    if let Err(d) = parse("system bad\nbase x\nunknown u\neq F = w[1]\n") {
        println!("error: {d}");
    }
    Ok(())
}
