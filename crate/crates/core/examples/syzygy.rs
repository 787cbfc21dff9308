//! First syzygy of the rotation/divergence system behind `grad`.
use jetbracket::cli::{fixture, load};
use jetbracket::idealmod::{first_syzygy_operator, SyzygyOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, sys) = load(fixture("grad").unwrap().text, &[])?;
    for s in first_syzygy_operator(&sys, &SyzygyOptions::default())? {
        let nabla: Vec<String> = s.nabla.iter().map(|o| o.to_string()).collect();
        let tails: Vec<String> = s.tails.iter().map(|o| o.to_string()).collect();
        println!("subset {:?}", s.subset);
        println!("  nabla = ({})", nabla.join(", "));
        println!("  tails = ({})", tails.join(", "));
    }
    Ok(())
}
