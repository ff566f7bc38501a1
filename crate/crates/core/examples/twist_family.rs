//! Twist tangles closed against one more crossing, with that crossing
//! virtualized. A `K` term appears exactly when the tangle has a nonzero
//! turnback coefficient `b(T)`.

use vknot::arrow::w_poly;
use vknot::tangle::TwistTangle;
use vknot::Sign::{self, Neg, Pos};

fn main() -> vknot::Result<()> {
    let words: [&[Sign]; 5] = [&[Pos, Pos], &[Pos, Neg], &[Neg, Neg], &[Pos, Pos, Pos, Pos], &[Pos, Neg, Pos, Neg]];
    for word in words {
        let t = TwistTangle::new(word.to_vec());
        let (a, b) = t.coefficients();
        let k = t.virtualized_closure(Pos)?;
        let w = w_poly(&k)?;
        println!("{word:?}\n  a = {a}\n  b = {b}\n  {k}\n  W = {w}\n  max K index = {}", w.max_k_index());
    }
    Ok(())
}
