// Hom-functors lifted to iso-filtered algebras.

use twalg::filtration::{check_lift_adjunction, check_lift_composition, complete, profinite_filtration, HomCovFunctor};
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let d1 = ws.coalgebra("D1")?;
    let d2 = ws.coalgebra("D2")?;
    let f = complete(&profinite_filtration(&ws.algebra("V2")?, 2)?)?.filt;
    let c = check_lift_composition(&HomCovFunctor::new(d1.clone()), &HomCovFunctor::new(d2.clone()), &f)?;
    println!("{}: passed {}", c.subject, c.passed());
    let e = complete(&profinite_filtration(&ws.algebra("V1")?, 2)?)?.filt;
    let c = check_lift_adjunction(&d2, &e, &f)?;
    println!("{}: passed {}", c.subject, c.passed());
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
