//! Mod 2 Khovanov homology and the arrow refinement with its extra grading.

use vknot::bracket::q_bracket;
use vknot::corpus;
use vknot::homology::{arrow_complex, betti_equal_up_to_shift, khovanov_complex};

fn main() -> vknot::Result<()> {
    for name in ["unknot", "trefoil", "virtual-trefoil", "kishino"] {
        let k = corpus::code(name)?;
        let kh = khovanov_complex(&k)?;
        println!("{name}");
        println!("  Kh        {}", kh.normalized_betti());
        println!("  chi       {}", kh.euler_characteristic().display("q"));
        println!("  q-bracket {}", q_bracket(&k)?.display("q"));
        println!("  arrow     {}", arrow_complex(&k)?.betti());
    }

    // same Khovanov table, different arrow tables
    let a = corpus::code("vk5-129")?;
    let b = corpus::code("vk5-267")?;
    let same_kh = khovanov_complex(&a)?.normalized_betti() == khovanov_complex(&b)?.normalized_betti();
    let shift = betti_equal_up_to_shift(&arrow_complex(&a)?.betti(), &arrow_complex(&b)?.betti());
    println!("vk5 pair: Khovanov equal = {same_kh}, arrow tables shift-equal = {}", shift.is_some());
    Ok(())
}
