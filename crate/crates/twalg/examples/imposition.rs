// Imposing identities: the reflection of an Omega-algebra into a variety.

use twalg::finalg::count_homs;
use twalg::variety::impose_identities;
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let cmag = ws.variety("CMag")?;
    // The left-projection magma is not commutative; imposing m(x,y) = m(y,x) collapses it.
    let lp = ws.algebra("LP")?;
    let (q, to_q) = impose_identities(&lp, &cmag.identities)?;
    println!("LP has {} elements, impose(LP) has {}", lp.total_size(), q.total_size());
    println!("quotient map {}", to_q.display());
    let cm2 = ws.algebra("Cm2")?;
    println!("|Hom(LP, Cm2)| = {}, |Hom(impose(LP), Cm2)| = {}", count_homs(&lp, &cm2)?, count_homs(&q, &cm2)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
