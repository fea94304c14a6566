use std::process::Command;
use twalg::cli::run;
use twalg::report::{Status, EXIT_FAILED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};

fn args(line: &str) -> Vec<String> {
    std::iter::once("twalg".to_string()).chain(line.split_whitespace().map(String::from)).collect()
}

fn bin(line: &str) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_twalg")).args(line.split_whitespace()).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

const CASES: &[(&str, i32)] = &[
    ("--json kunneth -v Bool -A F2 -I s,s", EXIT_OK),
    ("--json suite --fixtures free", EXIT_OK),
    ("--json hom -a V1 -b V2 --list", EXIT_OK),
    ("--json kunneth -v Vec2 -A V1 -I s,s", EXIT_FAILED),
    ("--json hom -a Nope -b F2", EXIT_USAGE),
    ("--json free -v Bool -g x:t", EXIT_USAGE),
    ("--json free -v Bool -g x:s,y:s,z:s,w:s,u:s --max-cells 100", EXIT_RESOURCE),
];

#[test]
fn exit_codes_in_process() {
    for (line, code) in CASES {
        let out = run(args(line));
        assert_eq!(out.report.exit, *code, "{line}: {}", out.text);
    }
    assert_eq!(run(args("bogus")).report.exit, EXIT_USAGE);
}

#[test]
fn exit_codes_of_the_binary() {
    for (line, code) in CASES {
        let (got, stdout) = bin(line);
        assert_eq!(got, *code, "{line}");
        let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(v["exit"], *code, "{line}");
    }
    assert_eq!(bin("bogus").0, EXIT_USAGE);
}

#[test]
fn json_is_byte_stable_across_runs_and_threads() {
    for (line, _) in CASES {
        let first = run(args(line)).text;
        let threads: Vec<_> = (0..3).map(|_| std::thread::spawn(move || run(args(line)).text)).collect();
        for t in threads {
            assert_eq!(t.join().unwrap(), first, "{line}");
        }
        assert_eq!(bin(line).1, first, "{line}");
    }
}

#[test]
fn failing_checks_carry_witnesses() {
    for (line, _) in CASES {
        let r = run(args(line)).report;
        for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
            assert!(c.witness.as_deref().is_some_and(|w| !w.is_empty()), "{line}: {}", c.name);
        }
        if r.exit == EXIT_FAILED {
            assert!(r.checks.iter().any(|c| c.status == Status::Fail));
        }
    }
}

#[test]
fn errors_are_reported_with_their_kind() {
    let r = run(args("--json free -v Bool -g x:s,y:s,z:s,w:s,u:s --max-cells 100")).report;
    let e = r.error.unwrap();
    assert_eq!((e.kind.as_str(), r.status.as_str()), ("resource", "resource"));
    assert!(r.checks.is_empty());
    let r = run(args("--json hom -a Nope -b F2")).report;
    assert_eq!(r.error.unwrap().kind, "unknown");
}

#[test]
fn json_fields_in_fixed_order() {
    let text = run(args("--json kunneth -v Vec2 -A V1 -I s,s")).text;
    let keys = ["\"command\"", "\"status\"", "\"exit\"", "\"checks\"", "\"error\"", "\"usage\""];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    for k in ["\"name\"", "\"counts\"", "\"witness\"", "\"details\"", "\"cells_built\"", "\"maps_enumerated\""] {
        assert!(text.contains(k), "{k}");
    }
}

#[test]
fn check_loads_each_file_once() {
    let path = std::env::temp_dir().join(format!("twalg-check-{}.twa", std::process::id()));
    std::fs::write(&path, "algebra Solo of SetSig {\n  carrier s = {o0}\n}\n").unwrap();
    let p = path.display().to_string();
    let r = run(args(&format!("--json check {p}"))).report;
    assert_eq!(r.exit, EXIT_OK, "{:?}", r.error);
    assert_eq!(run(args(&format!("--json -f {p} hom -a Solo -b Two"))).report.exit, EXIT_OK);
    assert_eq!(run(args(&format!("--json -f {p} check {p}"))).report.error.unwrap().kind, "duplicate");
    std::fs::remove_file(path).unwrap();
}
