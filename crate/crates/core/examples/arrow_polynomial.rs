//! The arrow polynomial sees what the Jones polynomial misses.

use vknot::arrow::{arrow_poly, flat_arrow, w_poly};
use vknot::bracket::f_poly;
use vknot::{corpus, Substitution};

fn main() -> vknot::Result<()> {
    for name in ["virtual-trefoil", "virtualized-trefoil", "kishino"] {
        let k = corpus::code(name)?;
        println!("{name}");
        println!("  f = {}", f_poly(&k)?);
        println!("  W = {}", w_poly(&k)?);
    }

    // setting every K_n and Lambda to 1 gives back the bracket
    let vt = corpus::code("virtual-trefoil")?;
    let a = arrow_poly(&vt)?;
    println!("<VT>_A = {a}  ->  {}", a.substitute(&Substitution::graphical_to_one())?);

    let flat_kishino = corpus::code("kishino")?.flatten();
    println!("flat Kishino {flat_kishino}\n  F = {}", flat_arrow(&flat_kishino)?);

    // a long knot whose closure is trivial
    let l = corpus::code("long-L")?;
    println!("W(L)        = {}", w_poly(&l)?);
    println!("W(close(L)) = {}", w_poly(&l.close()?)?);
    Ok(())
}
