//! Sorted signatures, terms, identities and the textual DSL.

pub mod dsl;

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OpDecl {
    pub symbol: String,
    /// Input word i(ω) as sort indices.
    pub inputs: Vec<usize>,
    /// Output sort o(ω).
    pub output: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub name: String,
    pub sorts: Vec<String>,
    pub ops: Vec<OpDecl>,
}

pub(crate) fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    /// Builds a signature from sort names and `(symbol, inputs, output)` triples.
    pub fn new(
        name: &str,
        sorts: &[&str],
        ops: &[(&str, &[&str], &str)],
    ) -> Result<Signature> {
        let mut sig = Signature {
            name: name.to_string(),
            sorts: Vec::new(),
            ops: Vec::new(),
        };
        for s in sorts {
            sig.add_sort(s)?;
        }
        for (sym, ins, out) in ops {
            let ins: Vec<String> = ins.iter().map(|s| s.to_string()).collect();
            sig.add_op(sym, &ins, out)?;
        }
        Ok(sig)
    }

    pub(crate) fn add_sort(&mut self, s: &str) -> Result<()> {
        if self.sorts.iter().any(|t| t == s) {
            return Err(Error::Duplicate { kind: "sort", name: s.to_string() });
        }
        self.sorts.push(s.to_string());
        Ok(())
    }

    pub(crate) fn add_op(&mut self, sym: &str, inputs: &[String], output: &str) -> Result<()> {
        if self.ops.iter().any(|o| o.symbol == sym) {
            return Err(Error::Duplicate { kind: "op", name: sym.to_string() });
        }
        let inputs = inputs
            .iter()
            .map(|s| self.sort_index(s))
            .collect::<Result<Vec<_>>>()?;
        let output = self.sort_index(output)?;
        self.ops.push(OpDecl { symbol: sym.to_string(), inputs, output });
        Ok(())
    }

    pub fn sort_index(&self, name: &str) -> Result<usize> {
        self.sorts
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::Unknown { kind: "sort", name: name.to_string() })
    }

    pub fn op_index(&self, sym: &str) -> Result<usize> {
        self.ops
            .iter()
            .position(|o| o.symbol == sym)
            .ok_or_else(|| Error::Unknown { kind: "op", name: sym.to_string() })
    }

    pub fn arity(&self, op: usize) -> usize {
        self.ops[op].inputs.len()
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }
}

/// An ordered list of sorted names (variables, generators).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SortedSet {
    pub entries: Vec<(String, usize)>,
}

impl SortedSet {
    pub fn new(entries: Vec<(String, usize)>) -> Result<SortedSet> {
        for (k, (n, _)) in entries.iter().enumerate() {
            if entries[..k].iter().any(|(m, _)| m == n) {
                return Err(Error::Duplicate { kind: "variable", name: n.clone() });
            }
        }
        Ok(SortedSet { entries })
    }

    /// Parses `"x:s, y:t"` against `sig`. The empty string gives the empty set.
    pub fn parse(sig: &Signature, text: &str) -> Result<SortedSet> {
        let mut entries = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (n, s) = part
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("expected name:sort, got `{part}`")))?;
            let (n, s) = (n.trim(), s.trim());
            if !valid_name(n) {
                return Err(Error::Invalid(format!("bad name `{n}`")));
            }
            entries.push((n.to_string(), sig.sort_index(s)?));
        }
        SortedSet::new(entries)
    }

    /// `n` fresh names of one sort.
    pub fn uniform(prefix: &str, n: usize, sort: usize) -> SortedSet {
        SortedSet { entries: (0..n).map(|k| (format!("{prefix}{k}"), sort)).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().position(|(n, _)| n == name)
    }

    pub fn sort_of(&self, k: usize) -> usize {
        self.entries[k].1
    }

    pub fn count_of_sort(&self, sort: usize) -> usize {
        self.entries.iter().filter(|(_, s)| *s == sort).count()
    }

    pub fn display(&self, sig: &Signature) -> String {
        self.entries
            .iter()
            .map(|(n, s)| format!("{n}:{}", sig.sorts[*s]))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// A term over named variables; nullary applications are written `c()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(n: &str) -> Term {
        Term::Var(n.to_string())
    }

    pub fn app(sym: &str, args: Vec<Term>) -> Term {
        Term::App(sym.to_string(), args)
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars_into(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn rename(&self, f: &dyn Fn(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.rename(f)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A term compiled against a signature and a variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

/// Sort of `t` over `vars`, or the path of the first ill-sorted subterm.
pub fn sort_of(sig: &Signature, vars: &SortedSet, t: &Term) -> Result<usize> {
    compile_at(sig, vars, t, "").map(|(_, s)| s)
}

pub fn compile(sig: &Signature, vars: &SortedSet, t: &Term) -> Result<(CTerm, usize)> {
    compile_at(sig, vars, t, "")
}

fn compile_at(sig: &Signature, vars: &SortedSet, t: &Term, path: &str) -> Result<(CTerm, usize)> {
    let here = if path.is_empty() { "root".to_string() } else { path.to_string() };
    match t {
        Term::Var(v) => {
            let k = vars.index_of(v).ok_or_else(|| Error::IllSorted {
                path: here,
                msg: format!("undeclared variable `{v}`"),
            })?;
            Ok((CTerm::Var(k), vars.sort_of(k)))
        }
        Term::App(sym, args) => {
            let op = sig.op_index(sym).map_err(|_| Error::IllSorted {
                path: here.clone(),
                msg: format!("unknown op `{sym}`"),
            })?;
            let decl = &sig.ops[op];
            if decl.inputs.len() != args.len() {
                return Err(Error::IllSorted {
                    path: here,
                    msg: format!("`{sym}` takes {} arguments, got {}", decl.inputs.len(), args.len()),
                });
            }
            let mut cargs = Vec::with_capacity(args.len());
            for (k, a) in args.iter().enumerate() {
                let sub = if path.is_empty() {
                    format!("argument {} of {sym}", k + 1)
                } else {
                    format!("{path} / argument {} of {sym}", k + 1)
                };
                let (c, s) = compile_at(sig, vars, a, &sub)?;
                if s != decl.inputs[k] {
                    return Err(Error::IllSorted {
                        path: sub,
                        msg: format!(
                            "expected sort {}, found {}",
                            sig.sorts[decl.inputs[k]], sig.sorts[s]
                        ),
                    });
                }
                cargs.push(c);
            }
            Ok((CTerm::App(op, cargs), decl.output))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub name: String,
    /// Declared variables with sort names, in order.
    pub vars: Vec<(String, String)>,
    pub lhs: Term,
    pub rhs: Term,
}

/// An identity resolved against a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CheckedIdentity {
    pub source: Identity,
    pub vars: SortedSet,
    pub lhs: CTerm,
    pub rhs: CTerm,
    pub sort: usize,
}

pub fn check_identity(sig: &Signature, id: &Identity) -> Result<CheckedIdentity> {
    let mut entries = Vec::new();
    for (n, s) in &id.vars {
        entries.push((n.clone(), sig.sort_index(s)?));
    }
    let vars = SortedSet::new(entries)?;
    let (lhs, ls) = compile_at(sig, &vars, &id.lhs, "lhs")?;
    let (rhs, rs) = compile_at(sig, &vars, &id.rhs, "rhs")?;
    if ls != rs {
        return Err(Error::IllSorted {
            path: "root".into(),
            msg: format!("sides have sorts {} and {}", sig.sorts[ls], sig.sorts[rs]),
        });
    }
    Ok(CheckedIdentity { source: id.clone(), vars, lhs, rhs, sort: ls })
}

impl CheckedIdentity {
    /// Key invariant under variable renaming and orientation.
    pub fn canonical_key(&self) -> String {
        let orient = |l: &Term, r: &Term| {
            let mut order = Vec::new();
            l.vars_into(&mut order);
            r.vars_into(&mut order);
            for (n, _) in &self.source.vars {
                if !order.contains(n) {
                    order.push(n.clone());
                }
            }
            let idx = |v: &str| order.iter().position(|o| o == v).unwrap();
            let sorts: Vec<usize> = order
                .iter()
                .map(|n| self.vars.sort_of(self.vars.index_of(n).unwrap()))
                .collect();
            let ren = |v: &str| format!("v{}", idx(v));
            format!("{:?}|{}={}", sorts, l.rename(&ren), r.rename(&ren))
        };
        let a = orient(&self.source.lhs, &self.source.rhs);
        let b = orient(&self.source.rhs, &self.source.lhs);
        a.min(b)
    }
}

/// Drops identities equal to an earlier one up to renaming and orientation.
pub fn dedup_identities(ids: Vec<CheckedIdentity>) -> Vec<CheckedIdentity> {
    let mut seen = std::collections::HashSet::new();
    ids.into_iter().filter(|i| seen.insert(i.canonical_key())).collect()
}

/// Replaces variables of `t` (over `src`) by terms over `dst`, checking sorts.
pub fn substitute(
    sig: &Signature,
    src: &SortedSet,
    t: &Term,
    env: &BTreeMap<String, Term>,
    dst: &SortedSet,
) -> Result<Term> {
    match t {
        Term::Var(v) => {
            let k = src
                .index_of(v)
                .ok_or_else(|| Error::Unknown { kind: "variable", name: v.clone() })?;
            let b = env
                .get(v)
                .ok_or_else(|| Error::Invalid(format!("no binding for `{v}`")))?;
            let s = sort_of(sig, dst, b)?;
            if s != src.sort_of(k) {
                return Err(Error::IllSorted {
                    path: format!("binding of {v}"),
                    msg: format!(
                        "expected sort {}, found {}",
                        sig.sorts[src.sort_of(k)], sig.sorts[s]
                    ),
                });
            }
            Ok(b.clone())
        }
        Term::App(sym, args) => Ok(Term::App(
            sym.clone(),
            args.iter()
                .map(|a| substitute(sig, src, a, env, dst))
                .collect::<Result<_>>()?,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bool_sig() -> Signature {
        Signature::new(
            "BoolRing",
            &["s"],
            &[("zero", &[], "s"), ("one", &[], "s"), ("add", &["s", "s"], "s"), ("mul", &["s", "s"], "s")],
        )
        .unwrap()
    }

    #[test]
    fn arities_read_back() {
        let sig = bool_sig();
        let ar: Vec<usize> = (0..4).map(|k| sig.arity(k)).collect();
        assert_eq!(ar, vec![0, 0, 2, 2]);
    }

    #[test]
    fn unknown_sort_and_duplicates() {
        let e = Signature::new("X", &["s"], &[("f", &["t"], "s")]).unwrap_err();
        assert_eq!(e, Error::Unknown { kind: "sort", name: "t".into() });
        let e = Signature::new("X", &["s"], &[("f", &[], "s"), ("f", &[], "s")]).unwrap_err();
        assert!(matches!(e, Error::Duplicate { .. }));
    }

    #[test]
    fn identity_checks() {
        let sig = bool_sig();
        let id = Identity {
            name: "c".into(),
            vars: vec![("x".into(), "s".into()), ("y".into(), "s".into())],
            lhs: Term::app("add", vec![Term::var("x"), Term::var("y")]),
            rhs: Term::app("add", vec![Term::var("y"), Term::var("x")]),
        };
        assert!(check_identity(&sig, &id).is_ok());
        let refl = Identity { name: "r".into(), vars: vec![("x".into(), "s".into())], lhs: Term::var("x"), rhs: Term::var("x") };
        assert!(check_identity(&sig, &refl).is_ok());
    }

    #[test]
    fn ill_sorted_argument_path() {
        let sig = Signature::new("T", &["s", "t"], &[("add", &["s", "s"], "s")]).unwrap();
        let id = Identity {
            name: "bad".into(),
            vars: vec![("x".into(), "s".into()), ("y".into(), "t".into())],
            lhs: Term::app("add", vec![Term::var("x"), Term::var("y")]),
            rhs: Term::var("x"),
        };
        match check_identity(&sig, &id) {
            Err(Error::IllSorted { path, .. }) => assert_eq!(path, "lhs / argument 2 of add"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dedup_up_to_renaming() {
        let sig = bool_sig();
        let mk = |a: &str, b: &str, swap: bool| {
            let l = Term::app("add", vec![Term::var(a), Term::var(b)]);
            let r = Term::app("add", vec![Term::var(b), Term::var(a)]);
            let (l, r) = if swap { (r, l) } else { (l, r) };
            check_identity(&sig, &Identity { name: "c".into(), vars: vec![(a.into(), "s".into()), (b.into(), "s".into())], lhs: l, rhs: r }).unwrap()
        };
        let out = dedup_identities(vec![mk("x", "y", false), mk("p", "q", true), mk("y", "x", false)]);
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn substitute_examples() {
        let sig = bool_sig();
        let src = SortedSet::parse(&sig, "x:s, y:s").unwrap();
        let dst = SortedSet::parse(&sig, "a:s, b:s, y:s").unwrap();
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), Term::app("mul", vec![Term::var("a"), Term::var("b")]));
        assert_eq!(substitute(&sig, &src, &Term::var("x"), &env, &dst).unwrap().to_string(), "mul(a,b)");
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), Term::var("y"));
        let t = Term::app("add", vec![Term::var("x"), Term::var("x")]);
        assert_eq!(substitute(&sig, &src, &t, &env, &dst).unwrap().to_string(), "add(y,y)");
        let mut env = BTreeMap::new();
        env.insert("x".to_string(), Term::app("zero", vec![]));
        env.insert("y".to_string(), Term::app("one", vec![]));
        let t = Term::app("add", vec![Term::var("x"), Term::var("y")]);
        assert_eq!(substitute(&sig, &src, &t, &env, &SortedSet::default()).unwrap().to_string(), "add(zero(),one())");
        env.remove("y");
        assert!(substitute(&sig, &src, &t, &env, &SortedSet::default()).is_err());
    }
}
