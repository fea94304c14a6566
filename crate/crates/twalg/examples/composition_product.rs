// The composition product of co-objects and its hom-count adjunction.

use twalg::tallwraith::{ladj_counts, twprod};
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let (d1, d2) = (ws.coalgebra("D1")?, ws.coalgebra("D2")?);
    for (a, b) in [(&d1, &d2), (&d2, &d2)] {
        let p = twprod(a, b)?;
        println!("{}*{}: component of size {}", a.name, b.name, p.obj.components[0].total_size());
        let (l, r) = ladj_counts(&p.ladjs[0], &ws.algebra("V2")?)?;
        println!("  |Hom(({0}*{1})(s), V2)| = {l}, |Hom({0}(s), Hom({1}, V2))| = {r}", a.name, b.name);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
