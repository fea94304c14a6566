// The Kunneth condition and the monoid of operations of F2.

use twalg::tallwraith::{kunneth_check, operations_monoid, tw_monoid_check};
use twalg::workspace::Workspace;

pub fn run_example() -> twalg::Result<()> {
    let ws = Workspace::fixtures()?;
    let bool_ = ws.variety("Bool")?;
    let f2 = ws.algebra_object(&bool_, &ws.algebra("F2")?)?;
    let k = kunneth_check(&f2, &[0, 0])?;
    println!("Bool/F2 on two factors: {} -> {}, passed {}", k.coproduct_size, k.product_size, k.passed());
    let vec2 = ws.variety("Vec2")?;
    let v1 = ws.algebra_object(&vec2, &ws.algebra("V1")?)?;
    let k = kunneth_check(&v1, &[0, 0])?;
    println!("Vec2/V1 on two factors: passed {}, witness {}", k.passed(), k.witness.unwrap_or_default());
    let om = operations_monoid(&f2)?;
    println!("operations monoid of F2: T(s) has {} elements", om.monoid.t.components[0].total_size());
    println!("monoid laws hold: {}", tw_monoid_check(&om.monoid)?.passed());
    let (m, _, _) = om.module_on(&ws.algebra("Three")?)?;
    println!("it acts on F2^Three, {} elements", m.algebra.total_size());
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
