//! Total derivatives and linearization on a small jet space; `G` stands for e^u.
use jetbracket::cli::{load, parser::expr};
use jetbracket::jetcalc::linearize;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (_, sys) = load(
        "system demo\nbase x y\nunknown u\nparam G [diff x -> G*u[1,0], y -> G*u[0,1]]\neq F = u[1,0] - G*u[0,1]\n",
        &[],
    )?;
    let f = expr(&sys, "u[1,0] - G*u[0,1]")?;
    println!("F      = {f}");
    println!("D_x F  = {}", f.total_derivative(0)?);
    println!("D_y F  = {}", f.total_derivative(1)?);
    println!("l(F)   = {}", linearize(&f));
    Ok(())
}
