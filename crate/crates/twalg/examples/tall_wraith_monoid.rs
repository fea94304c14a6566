// The dual numbers over F2 as a monoid for the composition product, with modules.

use twalg::tallwraith::{tw_module_check, tw_monoid_check};
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let nil2 = ws.monoid("Nil2")?;
    let c = tw_monoid_check(&nil2)?;
    println!("{}: {}", c.subject, if c.passed() { "all laws hold" } else { "laws fail" });
    for name in ["Nil2Reg", "Nil2Shift", "Nil2Triv"] {
        let m = ws.module(name)?;
        let c = tw_module_check(&nil2, &m.tm, &m.rho)?;
        println!("module {name}: {} laws, passed {}", c.laws.len(), c.passed());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
