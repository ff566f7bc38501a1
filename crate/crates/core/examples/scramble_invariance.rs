//! Scramble a diagram with random Reidemeister moves and watch the
//! invariants stay put while the code changes.

use vknot::arrow::w_poly;
use vknot::bracket::f_poly;
use vknot::corpus;
use vknot::moves::{replay, scramble_with, ScrambleConfig};
use vknot::parity_bracket::normalized_parity_bracket;

fn main() -> vknot::Result<()> {
    let k = corpus::code("kishino")?;
    let config = ScrambleConfig { max_crossings: 10, ..Default::default() };
    for seed in 0..5 {
        let s = scramble_with(&k, 30, seed, &config);
        assert_eq!(replay(&k, &s.trace, false)?, s.code);
        let same = s.code.odd_writhe()? == k.odd_writhe()?
            && f_poly(&s.code)? == f_poly(&k)?
            && w_poly(&s.code)? == w_poly(&k)?
            && normalized_parity_bracket(&s.code, false)? == normalized_parity_bracket(&k, false)?;
        println!("seed {seed}: {} crossings, invariants unchanged: {same}", s.code.crossing_count());
        println!("  {}", s.code);
        if seed == 0 {
            for mv in &s.trace {
                println!("    {mv}");
            }
        }
    }
    Ok(())
}
