// Driving the command line in-process and reading its JSON report.

use twalg::cli;

pub fn run_example() -> twalg::Result<()> {
    let out = cli::run(["twalg", "--json", "kunneth", "-v", "Vec2", "-A", "V1", "-I", "s,s"]);
    let r = &out.report;
    println!("exit {} status {}", r.exit, r.status);
    for c in &r.checks {
        println!("{:?} {} {:?}", c.status, c.name, c.witness);
    }
    let out = cli::run(["twalg", "free", "-v", "Nope", "-g", "x:s"]);
    println!("unknown variety: exit {}, {}", out.report.exit, out.text.trim());
    Ok(())
}

#[allow(dead_code)]
fn main() -> twalg::Result<()> {
    run_example()
}
