//! Complete-intersection test and Buchsbaum-Rim exactness for symbol rows.
use jetbracket::idealmod::Budget;
use jetbracket::symbolic::{buchsbaum_rim_check, gci_check, SymbolRows};

fn main() {
    let rows = SymbolRows::generic(3, 2, &[1, 1, 1, 1], 2);
    let g = gci_check(&rows, Budget::default());
    println!("generic (3,2,4): gci = {}, {:?}", g.is_gci, g.reasons);
    let br = buchsbaum_rim_check(&rows, 6);
    println!("  Buchsbaum-Rim exact to degree 6: {}", br.exact);

    let mut dep = SymbolRows::generic(2, 2, &[1, 1, 1], 2);
    dep.rows[2] = dep.rows[0].clone();
    let g = gci_check(&dep, Budget::default());
    println!("repeated row: gci = {}, {:?}", g.is_gci, g.reasons);
    let br = buchsbaum_rim_check(&dep, 6);
    println!("  first failure: {:?}", br.first_failure);
}
