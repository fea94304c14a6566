// Finitely presented algebras and coproducts.

use twalg::kernel::{SortedSet, Term};
use twalg::variety::{coproduct, finitely_presented, Presentation};
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let bool_ = ws.variety("Bool")?;
    // Free Boolean ring on x, y with x*y = 0.
    let gens = SortedSet::parse(&bool_.sig, "x:s, y:s")?;
    let rel = (Term::app("mul", vec![Term::var("x"), Term::var("y")]), Term::app("zero", vec![]));
    let p = finitely_presented(&Presentation { variety: bool_.clone(), gens, relations: vec![rel] })?;
    println!("<x, y | xy = 0> in Bool: {} elements", p.algebra.total_size());
    let c = coproduct(&bool_, &[ws.algebra("B4")?, ws.algebra("B4")?])?;
    println!("B4 + B4 in Bool: {} elements", c.algebra.total_size());
    let vec2 = ws.variety("Vec2")?;
    let c = coproduct(&vec2, &[ws.algebra("V1")?, ws.algebra("V2")?])?;
    println!("V1 + V2 in Vec2: {} elements", c.algebra.total_size());
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
