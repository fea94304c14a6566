fn main() {
    let out = twalg::cli::run(std::env::args_os());
    if out.to_stderr {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    std::process::exit(out.report.exit);
}
