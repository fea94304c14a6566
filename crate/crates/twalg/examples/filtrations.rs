// Projective filtrations: reduction, limits, completion and profinite stages.

use twalg::filtration::{complete, filtered_hom_set, indiscrete, is_iso_filtration, limit, profinite_filtration};
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let chain = ws.filtration("Chain4")?;
    let lim = limit(&chain.reduce()?.filt)?;
    println!("Chain4 on V4: limit of size {}, iso-filtration {}", lim.algebra.total_size(), is_iso_filtration(chain)?);
    let c = complete(chain)?;
    println!("completion: base of size {}, iso-filtration {}", c.filt.base.total_size(), is_iso_filtration(&c.filt)?);
    let v3 = ws.algebra("V3")?;
    let p = profinite_filtration(&v3, 4)?;
    println!("profinite(V3, 4): {} stages", p.generating_stages().len());
    let v2 = ws.algebra("V2")?;
    let homs = filtered_hom_set(&c.filt, &indiscrete(&v2))?;
    println!("filtered homs completion(Chain4) -> indiscrete(V2): {}", homs.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
