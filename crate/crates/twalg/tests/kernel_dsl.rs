use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::Arc;
use twalg::kernel::dsl::{self, Block};
use twalg::kernel::{check_identity, sort_of, substitute, Identity, Signature, SortedSet, Term};
use twalg::workspace::{Workspace, BUNDLE};
use twalg::Error;

#[test]
fn bundle_parse_print_roundtrip() {
    let blocks = dsl::parse(BUNDLE).unwrap();
    let printed = dsl::print(&blocks);
    let again = dsl::parse(&printed).unwrap();
    assert_eq!(blocks, again);
    assert_eq!(printed, dsl::print(&again));
}

#[test]
fn syntax_errors_carry_positions() {
    let err = dsl::parse("signature S {\n  sorts: s ;\n  op f : s -> ;\n}").unwrap_err();
    match err {
        Error::Syntax { line, .. } => assert_eq!(line, 3),
        e => panic!("expected a syntax error, got {e}"),
    }
}

#[test]
fn comments_are_ignored() {
    let with = "# a comment\nsignature S {\n  sorts: s ; # trailing\n  op c : -> s ;\n}\n";
    let without = "signature S {\n  sorts: s ;\n  op c : -> s ;\n}\n";
    assert_eq!(dsl::parse(with).unwrap(), dsl::parse(without).unwrap());
}

#[test]
fn duplicate_and_unknown_names_are_rejected() {
    let dup = format!("{BUNDLE}\nalgebra V1 of Ab2 {{\n  carrier s = {{e0}} ;\n  table zero = [e0] ;\n  table add = [e0]\n}}\n");
    assert!(matches!(Workspace::load(&[&dup]), Err(Error::Duplicate { .. })));
    let unknown = "variety W {\n  signature: Nope ;\n  identities: [] ;\n  generators: []\n}\n";
    assert!(matches!(Workspace::load(&[BUNDLE, unknown]), Err(Error::Unknown { .. })));
}

#[test]
fn ill_sorted_identity_is_rejected() {
    let bad = "identity bad (x:a) : f(x) = x\nvariety W {\n  signature: Grd2Sig ;\n  identities: [bad] ;\n  generators: [GId]\n}\n";
    let err = Workspace::load(&[BUNDLE, bad]).unwrap_err();
    assert!(matches!(err, Error::IllSorted { .. }), "{err}");
}

fn grd2() -> Arc<Signature> {
    Workspace::fixtures().unwrap().signatures["Grd2Sig"].clone()
}

/// Symbols with their declared arities; argument sorts are left to chance.
const GRD2_OPS: &[(&str, usize)] = &[("za", 0), ("adda", 2), ("zb", 0), ("addb", 2), ("f", 1)];

fn any_term(vars: &'static [&'static str], ops: &'static [(&'static str, usize)], depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop::sample::select(vars).prop_map(Term::var);
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        (prop::sample::select(ops), prop::collection::vec(inner, 2))
            .prop_map(|((sym, n), args)| Term::app(sym, args.into_iter().take(n).collect()))
    })
    .boxed()
}

/// Sort of a term by direct recursion over the signature.
fn oracle_sort(sig: &Signature, decl: &[(&str, &str)], t: &Term) -> Option<usize> {
    match t {
        Term::Var(v) => decl.iter().find(|(n, _)| n == v).and_then(|(_, s)| sig.sorts.iter().position(|x| x == s)),
        Term::App(sym, args) => {
            let op = sig.ops.iter().find(|o| &o.symbol == sym)?;
            if op.inputs.len() != args.len() {
                return None;
            }
            for (a, &want) in args.iter().zip(&op.inputs) {
                if oracle_sort(sig, decl, a)? != want {
                    return None;
                }
            }
            Some(op.output)
        }
    }
}

proptest! {
    #[test]
    fn check_identity_accepts_exactly_equal_sorts(
        lhs in any_term(&["x", "y", "z"], GRD2_OPS, 3),
        rhs in any_term(&["x", "y", "z"], GRD2_OPS, 3),
    ) {
        let sig = grd2();
        let decl = [("x", "a"), ("y", "b")];
        let id = Identity {
            name: "t".into(),
            vars: decl.iter().map(|(n, s)| (n.to_string(), s.to_string())).collect(),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
        };
        let expected = match (oracle_sort(&sig, &decl, &lhs), oracle_sort(&sig, &decl, &rhs)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        };
        prop_assert_eq!(check_identity(&sig, &id).is_ok(), expected);
    }

    #[test]
    fn substitution_composes(
        t in any_term(&["x", "y", "z"], &[("zero", 0), ("add", 2)], 3),
        e1 in prop::collection::vec(any_term(&["x", "y", "z"], &[("zero", 0), ("add", 2)], 2), 3),
        e2 in prop::collection::vec(any_term(&["x", "y", "z"], &[("zero", 0), ("add", 2)], 2), 3),
    ) {
        let ws = Workspace::fixtures().unwrap();
        let sig = &ws.signatures["Ab2"];
        let vars = SortedSet::parse(sig, "x:s, y:s, z:s").unwrap();
        let names = ["x", "y", "z"];
        let env = |ts: &[Term]| -> BTreeMap<String, Term> {
            names.iter().map(|n| n.to_string()).zip(ts.iter().cloned()).collect()
        };
        let (env1, env2) = (env(&e1), env(&e2));
        let twice = substitute(sig, &vars, &substitute(sig, &vars, &t, &env1, &vars).unwrap(), &env2, &vars).unwrap();
        let composed: Vec<Term> = e1.iter().map(|u| substitute(sig, &vars, u, &env2, &vars).unwrap()).collect();
        let once = substitute(sig, &vars, &t, &env(&composed), &vars).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn printed_identities_reparse(
        lhs in any_term(&["x", "y"], &[("zero", 0), ("add", 2)], 3),
        rhs in any_term(&["x", "y"], &[("zero", 0), ("add", 2)], 3),
    ) {
        let id = Identity { name: "p".into(), vars: vec![("x".into(), "s".into()), ("y".into(), "s".into())], lhs, rhs };
        let text = dsl::print_identity(&id);
        prop_assert_eq!(dsl::parse(&text).unwrap(), vec![Block::Identity(id)]);
    }
}

#[test]
fn sort_of_follows_declarations() {
    let sig = grd2();
    let vars = SortedSet::parse(&sig, "x:a, y:b").unwrap();
    let t = Term::app("addb", vec![Term::app("f", vec![Term::var("x")]), Term::var("y")]);
    assert_eq!(sort_of(&sig, &vars, &t).unwrap(), 1);
    assert!(sort_of(&sig, &vars, &Term::app("f", vec![Term::var("y")])).is_err());
}
