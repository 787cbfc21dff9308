//! Linear and non-linear multi-brackets.
use jetbracket::brackets::{coordinate_multibracket, multibracket, CoordinateVariant};
use jetbracket::cli::{fixture, load};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Cauchy-Riemann equations together with a Jacobian constraint
    let (_, sys) = load(fixture("cr_jacobian_generic").unwrap().text, &[])?;
    let fs: Vec<_> = sys.equations.iter().map(|e| e.expr.clone()).collect();
    let b = multibracket(&fs)?;
    println!("{{F1,F2,F3}}             = {b}");
    let c = coordinate_multibracket(&fs, CoordinateVariant::Calculational)?;
    println!("coordinate form          = {c}");
    // Mayer bracket of two scalar equations
    let (_, one) = load("system mayer\nbase x y\nunknown u\neq A = u[1,0]^2 + u[0,1]\neq B = u[0,1]*u\n", &[])?;
    println!("[A,B]                    = {}", multibracket(&[one.equations[0].expr.clone(), one.equations[1].expr.clone()])?);
    Ok(())
}
