// Parsing and printing the block language.

use twalg::kernel::dsl;

const TEXT: &str = "
signature Mon {
  sorts: s ;
  op e : -> s ;
  op m : s s -> s ;
}

identity mon_unit (x:s) : m(x,e()) = x

algebra Z3 of Mon {
  carrier s = {z0, z1, z2} ;
  table e = [z0] ;
  table m = [z0, z1, z2, z1, z2, z0, z2, z0, z1] ;
  generators = {z1}
}
";

pub fn run_example() -> twalg::Result<()> {
    let blocks = dsl::parse(TEXT)?;
    let printed = dsl::print(&blocks);
    println!("{printed}");
    assert_eq!(dsl::parse(&printed)?, blocks);
    println!("{} blocks survive a print and reparse", blocks.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
