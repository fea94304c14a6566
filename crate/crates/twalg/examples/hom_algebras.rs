// Hom-sets made into algebras, contravariantly and covariantly.

use twalg::coalg::hom_cov;
use twalg::variety::hom_algebra_contra;
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let bool_ = ws.variety("Bool")?;
    let f2 = ws.algebra_object(&bool_, &ws.algebra("F2")?)?;
    for x in ["Two", "Three"] {
        let h = hom_algebra_contra(&f2, &ws.algebra(x)?)?;
        let ok = bool_.violation(&h.algebra)?.is_none();
        println!("Hom({x}, F2): {} elements, Boolean ring: {ok}", h.algebra.total_size());
    }
    let d2 = ws.coalgebra("D2")?;
    let v2 = ws.algebra("V2")?;
    let h = hom_cov(&d2, &v2)?;
    println!("hom_cov(D2, V2): {} elements, in Vec2: {}", h.algebra.total_size(), d2.v.violation(&h.algebra)?.is_none());
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
