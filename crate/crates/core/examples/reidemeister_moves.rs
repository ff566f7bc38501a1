//! Enumerate and apply Reidemeister moves on a Gauss code.

use vknot::moves::{apply, enumerate_moves, enumerate_reductions, Move};
use vknot::GaussCode;

fn main() -> vknot::Result<()> {
    let k: GaussCode = "closed: O1+ U2+ O3+ U1+ O2+ U3+".parse()?;
    let moves = enumerate_moves(&k);
    let r3: Vec<&Move> = moves.iter().filter(|m| matches!(m, Move::R3 { .. })).collect();
    println!("{k}: {} moves, {} third-move sites", moves.len(), r3.len());

    let bigger = apply(&k, Move::R2Add { gap_a: 0, gap_b: 3, reversed: false, a_over: true, sign: vknot::Sign::Pos })?;
    println!("after R2Add: {bigger}");
    for m in enumerate_reductions(&bigger) {
        println!("  {m} -> {}", apply(&bigger, m)?);
    }

    let switched = k.switch(2)?;
    for m in enumerate_moves(&switched).into_iter().filter(|m| matches!(m, Move::R3 { .. })) {
        println!("{switched}: {m} -> {}", apply(&switched, m)?);
    }
    Ok(())
}
