//! Parity and odd writhe of the bundled diagrams, plus the ascending images
//! of the two long flat knots.
//!
//! Run with `cargo run --example odd_writhe`.

use vknot::{corpus, Parity};

fn main() -> vknot::Result<()> {
    for e in corpus::entries() {
        let k = &e.code;
        if k.is_flat() && !k.is_empty() {
            continue;
        }
        let odd: Vec<String> =
            k.crossings().filter(|&c| k.parity(c) == Ok(Parity::Odd)).map(|c| c.to_string()).collect();
        println!("{:<26} J = {:>2}  odd crossings: [{}]", e.name, k.odd_writhe()?, odd.join(" "));
    }

    for name in ["long-flat-F", "long-flat-G"] {
        let lift = corpus::code(name)?.ascend()?;
        println!("A({name}) = {lift}  J = {}", lift.odd_writhe()?);
    }
    Ok(())
}
