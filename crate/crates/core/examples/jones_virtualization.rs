//! Switching and virtualizing a crossing give the same normalized bracket.
//! Virtualizing one crossing of the trefoil yields a knot with unit Jones
//! polynomial.

use vknot::bracket::{f_poly, jones};
use vknot::corpus;

fn main() -> vknot::Result<()> {
    let tr = corpus::code("trefoil")?;
    let v = jones(&tr)?;
    println!("trefoil      f = {}", v.f);
    if let Some(t) = &v.t_form {
        println!("             V = {}", t.display("t"));
    }

    for i in tr.crossings() {
        let switched = f_poly(&tr.switch(i)?)?;
        let virtualized = f_poly(&tr.virtualize(i)?)?;
        println!("crossing {i}: f(switch) = {switched}, f(virtualize) = {virtualized}");
        assert_eq!(switched, virtualized);
    }

    let t = tr.virtualize(1)?;
    println!("T = {t}\nf(T) = {}", f_poly(&t)?);
    Ok(())
}
