//! Compatibility verdicts for a few bundled systems.
use jetbracket::cli::{fixture, load};
use jetbracket::idealmod::check_compatibility;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["cr", "cr_jacobian_exp", "cr_jacobian_u2", "killing_flat", "killing_x2", "flows"] {
        let f = fixture(name).unwrap();
        let inv: Vec<String> = f.invertible.iter().map(|s| s.to_string()).collect();
        let (_, sys) = load(f.text, &inv)?;
        let rep = check_compatibility(&sys)?;
        println!("{name:18} {}", rep.verdict);
        for s in &rep.subsets {
            match &s.normal_form {
                Some(nf) => println!("    {:?}: {nf}", s.indices),
                None => println!("    {:?}: {}", s.indices, s.error.as_deref().unwrap_or("?")),
            }
        }
    }
    Ok(())
}
