//! Long flat knots embed in long virtual knots by the ascending map.

use vknot::arrow::{flat_arrow, w_poly};
use vknot::corpus;
use vknot::moves::{scramble_with, ScrambleConfig};

fn main() -> vknot::Result<()> {
    for name in ["long-flat-F", "long-flat-G"] {
        let s = corpus::code(name)?;
        let lift = s.ascend()?;
        println!("{name}: {s}");
        println!("  A(S)       = {lift}");
        println!("  Flat(A(S)) = {}", lift.flatten());
        println!("  J(A(S))    = {}", lift.odd_writhe()?);
        println!("  W(A(S))    = {}", w_poly(&lift)?);
        println!("  F(S)       = {}", flat_arrow(&s)?);
    }

    let f = corpus::code("long-flat-F")?;
    let moved = scramble_with(&f, 25, 5, &ScrambleConfig { max_crossings: 8, flat: true }).code;
    println!("flat scramble of F: {moved}\n  F = {}", flat_arrow(&moved)?);
    Ok(())
}
