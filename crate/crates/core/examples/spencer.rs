//! Symbol dimensions, Spencer cohomology and the formal functional dimension.
use jetbracket::symbolic::{hilbert_data, spencer_cohomology, theorem_b_expected, theorem_c_expected, SymbolRows};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (n, m) = (2, 1);
    let orders = [2, 3];
    let rows = SymbolRows::generic(n, m, &orders, 7);
    let h = hilbert_data(&rows, 12)?;
    println!("dim g_i  = {:?}", h.dims);
    println!("(p, d)   = ({}, {}), predicted {:?}", h.p, h.d, theorem_c_expected(n, m, orders.len(), &orders)?);
    let t = spencer_cohomology(&rows, 8);
    for ((i, j), d) in &t.h {
        println!("H^{{{i},{j}}} = {d}");
    }
    println!("predicted {:?}", theorem_b_expected(n, m, orders.len(), &orders)?);
    Ok(())
}
