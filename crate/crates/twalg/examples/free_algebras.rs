// Free algebras by closure in a power of the generating algebras.

use twalg::finalg::count_homs;
use twalg::kernel::SortedSet;
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    for (v, gens) in [("Vec2", "x:s, y:s"), ("Bool", "x:s"), ("SLat", "x:s, y:s, z:s")] {
        let var = ws.variety(v)?;
        let x = SortedSet::parse(&var.sig, gens)?;
        let f = var.free(&x)?;
        println!("free {v} on {{{gens}}}: {} elements", f.algebra.total_size());
    }
    // Every assignment of the generators extends uniquely.
    let vec2 = ws.variety("Vec2")?;
    let f = vec2.free(&SortedSet::parse(&vec2.sig, "x:s, y:s")?)?;
    let v2 = ws.algebra("V2")?;
    let h = f.extend(&v2, &[1, 2])?;
    println!("x -> e1, y -> e2 extends to {}", h.display());
    println!("|Hom(F(x,y), V2)| = {}", count_homs(&f.algebra, &v2)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
