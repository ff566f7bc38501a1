//! Parity bracket values: odd crossings survive as graph nodes.

use vknot::corpus;
use vknot::parity_bracket::{free_knot_invariant, normalized_parity_bracket, parity_bracket};

fn main() -> vknot::Result<()> {
    for name in ["kishino", "ks", "vk5-129", "vk5-267"] {
        let k = corpus::code(name)?;
        println!("{name}: {k}");
        println!("  <K>_P          = {}", parity_bracket(&k, false)?);
        println!("  <K>_P (z-mode) = {}", parity_bracket(&k, true)?);
        println!("  normalized     = {}", normalized_parity_bracket(&k, false)?);
    }

    let flat = corpus::code("kishino")?.flatten();
    println!("free knot {flat}: {}", free_knot_invariant(&flat)?);
    Ok(())
}
