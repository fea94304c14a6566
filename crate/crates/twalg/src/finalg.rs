//! Finite sorted algebras, homomorphisms, products, subalgebras, congruences
//! and quotients.

use crate::error::{failed, invalid, Error, Result};
use crate::kernel::{compile, CTerm, CheckedIdentity, Signature, SortedSet, Term};
use crate::limits::{self, Budget};
use crate::util::{decode, Odometer, UnionFind};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

pub type Elt = usize;

/// How an element is first reached from the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// The `k`-th recorded generator.
    Gen(usize),
    /// An operation applied to earlier elements (of the op's input sorts).
    App(usize, Vec<Elt>),
}

/// A straight-line program producing every element from the generators.
#[derive(Debug, Clone)]
pub struct Derivation {
    /// Elements `(sort, elt)` in the order they are produced.
    pub order: Vec<(usize, Elt)>,
    pub steps: Vec<Vec<Step>>,
}

#[derive(Clone)]
pub struct Algebra {
    pub name: String,
    pub sig: Arc<Signature>,
    /// Element labels per sort.
    pub carriers: Vec<Vec<String>>,
    /// Row-major tables, first argument most significant.
    pub tables: Vec<Vec<Elt>>,
    /// Recorded generating subset as `(sort, elt)` pairs.
    pub generators: Option<Vec<(usize, Elt)>>,
    derivation: OnceLock<Option<Arc<Derivation>>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({} of {}, sizes {:?})", self.name, self.sig.name, self.sizes())
    }
}

impl PartialEq for Algebra {
    /// Structural equality: same signature, labels, tables and generators.
    fn eq(&self, o: &Self) -> bool {
        self.sig == o.sig
            && self.carriers == o.carriers
            && self.tables == o.tables
            && self.generators == o.generators
    }
}

impl Eq for Algebra {}

impl Algebra {
    /// Validates and builds an algebra.
    pub fn new(
        name: &str,
        sig: Arc<Signature>,
        carriers: Vec<Vec<String>>,
        tables: Vec<Vec<Elt>>,
        generators: Option<Vec<(usize, Elt)>>,
    ) -> Result<Algebra> {
        if carriers.len() != sig.num_sorts() || tables.len() != sig.ops.len() {
            return invalid(format!("algebra {name}: carrier or table count does not match {}", sig.name));
        }
        let a = Algebra::raw(name, sig, carriers, tables, None);
        for (op, decl) in a.sig.ops.iter().enumerate() {
            let cells = a.cell_count(op);
            if a.tables[op].len() as u128 != cells {
                return invalid(format!(
                    "algebra {name}: table {} has {} entries, expected {cells}",
                    decl.symbol,
                    a.tables[op].len()
                ));
            }
            let n = a.size(decl.output);
            if let Some(&bad) = a.tables[op].iter().find(|&&e| e >= n) {
                return invalid(format!("algebra {name}: table {} entry {bad} out of range", decl.symbol));
            }
        }
        limits::check_cells("algebra tables", a.tables.iter().map(|t| t.len() as u128).sum())?;
        match generators {
            Some(g) => a.with_generators(g),
            None => Ok(a),
        }
    }

    fn raw(
        name: &str,
        sig: Arc<Signature>,
        carriers: Vec<Vec<String>>,
        tables: Vec<Vec<Elt>>,
        generators: Option<Vec<(usize, Elt)>>,
    ) -> Algebra {
        Algebra { name: name.to_string(), sig, carriers, tables, generators, derivation: OnceLock::new() }
    }

    /// Builds tables from an operation function.
    pub fn from_fn(
        name: &str,
        sig: Arc<Signature>,
        carriers: Vec<Vec<String>>,
        mut f: impl FnMut(usize, &[Elt]) -> Result<Elt>,
    ) -> Result<Algebra> {
        let sizes: Vec<usize> = carriers.iter().map(Vec::len).collect();
        let mut total = 0u128;
        for op in &sig.ops {
            total += limits::product_size(op.inputs.iter().map(|&s| sizes[s]));
        }
        limits::check_cells("algebra tables", total)?;
        let mut tables = Vec::with_capacity(sig.ops.len());
        for (k, op) in sig.ops.iter().enumerate() {
            let radices: Vec<usize> = op.inputs.iter().map(|&s| sizes[s]).collect();
            let mut od = Odometer::new(radices);
            let mut t = Vec::new();
            while let Some(args) = od.next_digits() {
                t.push(f(k, args)?);
            }
            tables.push(t);
        }
        Algebra::new(name, sig, carriers, tables, None)
    }

    /// Records a generating subset, checking that it generates.
    pub fn with_generators(mut self, gens: Vec<(usize, Elt)>) -> Result<Algebra> {
        for &(s, e) in &gens {
            if s >= self.carriers.len() || e >= self.size(s) {
                return invalid(format!("algebra {}: generator out of range", self.name));
            }
        }
        let mut seen = HashSet::new();
        let gens: Vec<_> = gens.into_iter().filter(|g| seen.insert(*g)).collect();
        let d = derive(&self, &gens);
        let covered = d.order.len();
        if covered != self.total_size() {
            return invalid(format!(
                "algebra {}: recorded generators reach {covered} of {} elements",
                self.name,
                self.total_size()
            ));
        }
        self.generators = Some(gens);
        self.derivation = OnceLock::new();
        let _ = self.derivation.set(Some(Arc::new(d)));
        Ok(self)
    }

    pub fn renamed(mut self, name: &str) -> Algebra {
        self.name = name.to_string();
        self
    }

    pub fn size(&self, sort: usize) -> usize {
        self.carriers[sort].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.carriers.iter().map(Vec::len).collect()
    }

    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    pub fn num_sorts(&self) -> usize {
        self.carriers.len()
    }

    pub fn radices(&self, op: usize) -> Vec<usize> {
        self.sig.ops[op].inputs.iter().map(|&s| self.size(s)).collect()
    }

    pub fn cell_count(&self, op: usize) -> u128 {
        limits::product_size(self.radices(op))
    }

    pub fn total_cells(&self) -> u128 {
        (0..self.sig.ops.len()).map(|op| self.cell_count(op)).sum()
    }

    pub fn apply(&self, op: usize, args: &[Elt]) -> Elt {
        let ins = &self.sig.ops[op].inputs;
        let mut idx = 0;
        for (k, &a) in args.iter().enumerate() {
            idx = idx * self.size(ins[k]) + a;
        }
        self.tables[op][idx]
    }

    /// Calls `f(args, out)` for every table cell of `op`, in row-major order.
    pub fn for_each_cell(&self, op: usize, mut f: impl FnMut(&[Elt], Elt)) {
        let mut od = Odometer::new(self.radices(op));
        let mut idx = 0;
        while let Some(args) = od.next_digits() {
            f(args, self.tables[op][idx]);
            idx += 1;
        }
    }

    pub fn label(&self, sort: usize, e: Elt) -> &str {
        &self.carriers[sort][e]
    }

    pub fn find(&self, sort: usize, label: &str) -> Option<Elt> {
        self.carriers[sort].iter().position(|l| l == label)
    }

    /// Looks a label up across all sorts; it must be unambiguous.
    pub fn find_any(&self, label: &str) -> Result<(usize, Elt)> {
        let hits: Vec<_> = (0..self.num_sorts())
            .filter_map(|s| self.find(s, label).map(|e| (s, e)))
            .collect();
        match hits.as_slice() {
            [one] => Ok(*one),
            [] => Err(Error::Unknown { kind: "element", name: format!("{label} in {}", self.name) }),
            _ => invalid(format!("label {label} is ambiguous in {}", self.name)),
        }
    }

    /// The derivation from recorded generators, if any were recorded.
    pub fn derivation(&self) -> Option<Arc<Derivation>> {
        self.derivation
            .get_or_init(|| self.generators.as_ref().map(|g| Arc::new(derive(self, g))))
            .clone()
    }

    /// Generators, falling back to the whole carrier.
    pub fn generating_list(&self) -> Vec<(usize, Elt)> {
        match &self.generators {
            Some(g) => g.clone(),
            None => self.all_elements(),
        }
    }

    /// A copy whose recorded generators are the whole carrier if none were set.
    pub fn ensure_generators(&self) -> Result<Algebra> {
        if self.generators.is_some() {
            return Ok(self.clone());
        }
        self.clone().with_generators(self.all_elements())
    }

    pub fn all_elements(&self) -> Vec<(usize, Elt)> {
        (0..self.num_sorts()).flat_map(|s| (0..self.size(s)).map(move |e| (s, e))).collect()
    }

    /// Evaluates the derivation under generator images, with `app` interpreting ops.
    pub fn eval_derivation<X: Clone>(
        &self,
        gen_images: &[X],
        mut app: impl FnMut(usize, &[X]) -> Result<X>,
    ) -> Result<Vec<Vec<X>>> {
        let d = self
            .derivation()
            .ok_or_else(|| Error::Invalid(format!("algebra {} has no recorded generators", self.name)))?;
        let mut vals: Vec<Vec<Option<X>>> = self.carriers.iter().map(|c| vec![None; c.len()]).collect();
        let mut buf = Vec::new();
        for &(s, e) in &d.order {
            let v = match &d.steps[s][e] {
                Step::Gen(k) => gen_images[*k].clone(),
                Step::App(op, args) => {
                    buf.clear();
                    for (k, &a) in args.iter().enumerate() {
                        let sa = self.sig.ops[*op].inputs[k];
                        buf.push(vals[sa][a].clone().expect("derivation order"));
                    }
                    app(*op, &buf)?
                }
            };
            vals[s][e] = Some(v);
        }
        Ok(vals.into_iter().map(|v| v.into_iter().map(|x| x.expect("complete derivation")).collect()).collect())
    }

    /// The witnessing term of an element over generator names.
    pub fn witness_term(&self, sort: usize, e: Elt, gen_names: &[String]) -> Option<Term> {
        let d = self.derivation()?;
        fn go(a: &Algebra, d: &Derivation, s: usize, e: Elt, names: &[String]) -> Term {
            match &d.steps[s][e] {
                Step::Gen(k) => Term::Var(names[*k].clone()),
                Step::App(op, args) => Term::App(
                    a.sig.ops[*op].symbol.clone(),
                    args.iter()
                        .enumerate()
                        .map(|(k, &x)| go(a, d, a.sig.ops[*op].inputs[k], x, names))
                        .collect(),
                ),
            }
        }
        Some(go(self, &d, sort, e, gen_names))
    }

    /// The witnessing term of an element with `Var(k)` for the k-th generator.
    pub fn derivation_cterm(&self, sort: usize, e: Elt) -> Option<CTerm> {
        let d = self.derivation()?;
        fn go(a: &Algebra, d: &Derivation, s: usize, e: Elt) -> CTerm {
            match &d.steps[s][e] {
                Step::Gen(k) => CTerm::Var(*k),
                Step::App(op, args) => CTerm::App(
                    *op,
                    args.iter().enumerate().map(|(k, &x)| go(a, d, a.sig.ops[*op].inputs[k], x)).collect(),
                ),
            }
        }
        Some(go(self, &d, sort, e))
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .sig
            .sorts
            .iter()
            .zip(self.sizes())
            .map(|(s, n)| format!("{s}:{n}"))
            .collect();
        format!("{} [{}]", self.name, parts.join(", "))
    }
}

fn derive(a: &Algebra, gens: &[(usize, Elt)]) -> Derivation {
    let mut steps: Vec<Vec<Option<Step>>> = a.carriers.iter().map(|c| vec![None; c.len()]).collect();
    let mut known: Vec<Vec<Elt>> = vec![Vec::new(); a.num_sorts()];
    let mut order = Vec::new();
    for (k, &(s, e)) in gens.iter().enumerate() {
        if steps[s][e].is_none() {
            steps[s][e] = Some(Step::Gen(k));
            known[s].push(e);
            order.push((s, e));
        }
    }
    // Semi-naive closure: each round only visits tuples touching the last round.
    let mut frontier_start: Vec<usize> = vec![0; a.num_sorts()];
    let mut first = true;
    loop {
        let snapshot: Vec<usize> = known.iter().map(Vec::len).collect();
        let mut new_any = false;
        for (op, decl) in a.sig.ops.iter().enumerate() {
            let lists: Vec<&[Elt]> = decl.inputs.iter().map(|&s| &known[s][..snapshot[s]]).collect();
            let radices: Vec<usize> = lists.iter().map(|l| l.len()).collect();
            let mut od = Odometer::new(radices);
            let mut found = Vec::new();
            while let Some(ix) = od.next_digits() {
                if !first
                    && !ix.iter().enumerate().any(|(k, &i)| i >= frontier_start[decl.inputs[k]])
                {
                    continue;
                }
                let args: Vec<Elt> = ix.iter().enumerate().map(|(k, &i)| lists[k][i]).collect();
                let out = a.apply(op, &args);
                found.push((out, args));
            }
            for (out, args) in found {
                let s = decl.output;
                if steps[s][out].is_none() {
                    steps[s][out] = Some(Step::App(op, args));
                    known[s].push(out);
                    order.push((s, out));
                    new_any = true;
                }
            }
        }
        frontier_start = snapshot;
        first = false;
        if !new_any {
            break;
        }
    }
    // Unreached elements keep no step; callers compare coverage.
    let steps = steps
        .into_iter()
        .map(|v| v.into_iter().map(|s| s.unwrap_or(Step::Gen(usize::MAX))).collect())
        .collect();
    Derivation { order, steps }
}

#[derive(Clone)]
pub struct Hom {
    pub src: Arc<Algebra>,
    pub dst: Arc<Algebra>,
    pub maps: Vec<Vec<Elt>>,
}

impl fmt::Debug for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom({} -> {}: {:?})", self.src.name, self.dst.name, self.maps)
    }
}

impl PartialEq for Hom {
    fn eq(&self, o: &Self) -> bool {
        self.maps == o.maps && same_algebra(&self.src, &o.src) && same_algebra(&self.dst, &o.dst)
    }
}

impl Eq for Hom {}

/// Pointer equality, falling back to structural equality.
pub fn same_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || (a.sizes() == b.sizes() && a.tables == b.tables && a.sig == b.sig)
}

/// First table cell where `maps` fails to commute, as a readable witness.
pub fn hom_violation(src: &Algebra, dst: &Algebra, maps: &[Vec<Elt>]) -> Option<String> {
    let mut buf = Vec::new();
    for (op, decl) in src.sig.ops.iter().enumerate() {
        let mut od = Odometer::new(src.radices(op));
        let mut idx = 0;
        while let Some(args) = od.next_digits() {
            let out = src.tables[op][idx];
            idx += 1;
            buf.clear();
            buf.extend(args.iter().enumerate().map(|(k, &a)| maps[decl.inputs[k]][a]));
            if dst.apply(op, &buf) != maps[decl.output][out] {
                let shown: Vec<&str> = args
                    .iter()
                    .enumerate()
                    .map(|(k, &a)| src.label(decl.inputs[k], a))
                    .collect();
                return Some(format!("{}({})", decl.symbol, shown.join(",")));
            }
        }
    }
    None
}

impl Hom {
    /// Validates that `maps` is a homomorphism.
    pub fn new(src: Arc<Algebra>, dst: Arc<Algebra>, maps: Vec<Vec<Elt>>) -> Result<Hom> {
        if src.sig != dst.sig {
            return invalid(format!("hom {} -> {}: signatures differ", src.name, dst.name));
        }
        if maps.len() != src.num_sorts()
            || maps.iter().enumerate().any(|(s, m)| m.len() != src.size(s) || m.iter().any(|&x| x >= dst.size(s)))
        {
            return invalid(format!("hom {} -> {}: maps have the wrong shape", src.name, dst.name));
        }
        if let Some(w) = hom_violation(&src, &dst, &maps) {
            return failed(format!("{} -> {} is not a homomorphism at {w}", src.name, dst.name));
        }
        Ok(Hom { src, dst, maps })
    }

    pub fn new_unchecked(src: Arc<Algebra>, dst: Arc<Algebra>, maps: Vec<Vec<Elt>>) -> Hom {
        Hom { src, dst, maps }
    }

    pub fn identity(a: &Arc<Algebra>) -> Hom {
        Hom { src: a.clone(), dst: a.clone(), maps: a.sizes().iter().map(|&n| (0..n).collect()).collect() }
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Hom) -> Hom {
        let maps = first
            .maps
            .iter()
            .enumerate()
            .map(|(s, m)| m.iter().map(|&x| self.maps[s][x]).collect())
            .collect();
        Hom { src: first.src.clone(), dst: self.dst.clone(), maps }
    }

    pub fn apply(&self, sort: usize, e: Elt) -> Elt {
        self.maps[sort][e]
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| {
            let mut seen = HashSet::new();
            m.iter().all(|x| seen.insert(*x))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().enumerate().all(|(s, m)| {
            let hit: HashSet<_> = m.iter().copied().collect();
            hit.len() == self.dst.size(s)
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Inverse of a bijective hom.
    pub fn inverse(&self) -> Result<Hom> {
        if !self.is_bijective() {
            return failed(format!("{} -> {} is not bijective", self.src.name, self.dst.name));
        }
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (x, &y) in m.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        Hom::new(self.dst.clone(), self.src.clone(), maps)
    }

    /// Same maps, re-targeted at a structurally equal algebra.
    pub fn retarget(&self, dst: &Arc<Algebra>) -> Hom {
        Hom { src: self.src.clone(), dst: dst.clone(), maps: self.maps.clone() }
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .maps
            .iter()
            .enumerate()
            .map(|(s, m)| m.iter().map(|&x| self.dst.label(s, x).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("[{}]", parts.join(" | "))
    }
}

/// The unique extension of generator images along the derivation, validated.
pub fn extend_from_generators(src: &Arc<Algebra>, dst: &Arc<Algebra>, images: &[Elt]) -> Result<Hom> {
    let maps = src.eval_derivation(images, |op, args| Ok(dst.apply(op, args)))?;
    Hom::new(src.clone(), dst.clone(), maps)
}

/// Like [`extend_from_generators`] with images given per `(sort, elt)` generator.
pub fn extend_from_generator_map(
    src: &Arc<Algebra>,
    dst: &Arc<Algebra>,
    image_of: impl Fn(usize, Elt) -> Result<Elt>,
) -> Result<Hom> {
    let gens = src
        .generators
        .clone()
        .ok_or_else(|| Error::Invalid(format!("algebra {} has no recorded generators", src.name)))?;
    let images = gens.iter().map(|&(s, e)| image_of(s, e)).collect::<Result<Vec<_>>>()?;
    extend_from_generators(src, dst, &images)
}

/// One element per sort, constant tables.
pub fn terminal(sig: &Arc<Signature>) -> Algebra {
    let carriers = vec![vec!["*".to_string()]; sig.num_sorts()];
    let tables = sig.ops.iter().map(|_| vec![0]).collect();
    let a = Algebra::raw("1", sig.clone(), carriers, tables, None);
    let gens = (0..sig.num_sorts()).map(|s| (s, 0)).collect();
    a.with_generators(gens).expect("terminal algebra")
}

/// Componentwise product with projections; the empty product is terminal.
pub fn product(sig: &Arc<Signature>, factors: &[Arc<Algebra>]) -> Result<(Arc<Algebra>, Vec<Hom>)> {
    if factors.is_empty() {
        return Ok((Arc::new(terminal(sig)), Vec::new()));
    }
    let ns = sig.num_sorts();
    let radices: Vec<Vec<usize>> = (0..ns).map(|s| factors.iter().map(|f| f.size(s)).collect()).collect();
    let sizes: Vec<u128> = radices.iter().map(|r| limits::product_size(r.iter().copied())).collect();
    let cells: u128 = sig
        .ops
        .iter()
        .map(|op| op.inputs.iter().fold(1u128, |acc, &s| acc.saturating_mul(sizes[s])))
        .sum();
    limits::check_cells("product tables", cells)?;
    let carriers: Vec<Vec<String>> = (0..ns)
        .map(|s| {
            let mut od = Odometer::new(radices[s].clone());
            let mut out = Vec::new();
            while let Some(d) = od.next_digits() {
                let parts: Vec<&str> = d.iter().enumerate().map(|(k, &x)| factors[k].label(s, x)).collect();
                out.push(format!("({})", parts.join(",")));
            }
            out
        })
        .collect();
    let name = factors.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join("x");
    let mut argbuf: Vec<Vec<Elt>> = vec![Vec::new(); factors.len()];
    let p = Algebra::from_fn(&name, sig.clone(), carriers, |op, args| {
        let decl = &sig.ops[op];
        for b in argbuf.iter_mut() {
            b.clear();
        }
        for (k, &a) in args.iter().enumerate() {
            let d = decode(&radices[decl.inputs[k]], a);
            for (j, &x) in d.iter().enumerate() {
                argbuf[j].push(x);
            }
        }
        let outs: Vec<Elt> = factors.iter().enumerate().map(|(j, f)| f.apply(op, &argbuf[j])).collect();
        Ok(crate::util::encode(&radices[decl.output], &outs))
    })?;
    let p = Arc::new(p);
    let projs = (0..factors.len())
        .map(|j| {
            let maps = (0..ns)
                .map(|s| (0..p.size(s)).map(|x| decode(&radices[s], x)[j]).collect())
                .collect();
            Hom::new_unchecked(p.clone(), factors[j].clone(), maps)
        })
        .collect();
    Ok((p, projs))
}

/// The map into a product induced by a family of homs with common source.
pub fn pair_map(prod: &Arc<Algebra>, homs: &[Hom], src: &Arc<Algebra>) -> Hom {
    let ns = src.num_sorts();
    let maps = (0..ns)
        .map(|s| {
            let radices: Vec<usize> = homs.iter().map(|h| h.dst.size(s)).collect();
            (0..src.size(s))
                .map(|x| {
                    let d: Vec<Elt> = homs.iter().map(|h| h.maps[s][x]).collect();
                    crate::util::encode(&radices, &d)
                })
                .collect()
        })
        .collect();
    Hom::new_unchecked(src.clone(), prod.clone(), maps)
}

/// Closure of `seed`; the result keeps original order and labels.
pub fn subalgebra_closure(a: &Arc<Algebra>, seed: &[(usize, Elt)]) -> Result<(Arc<Algebra>, Hom)> {
    let d = derive(a, seed);
    let mut members: Vec<Vec<Elt>> = vec![Vec::new(); a.num_sorts()];
    for &(s, e) in &d.order {
        members[s].push(e);
    }
    for m in members.iter_mut() {
        m.sort_unstable();
    }
    let sub = restrict(a, &members, &format!("<{}>", a.name))?;
    let pos: Vec<HashMap<Elt, Elt>> = members
        .iter()
        .map(|m| m.iter().enumerate().map(|(k, &e)| (e, k)).collect())
        .collect();
    let mut gens = Vec::new();
    for &(s, e) in seed {
        let g = (s, pos[s][&e]);
        if !gens.contains(&g) {
            gens.push(g);
        }
    }
    let sub = Arc::new(sub.with_generators(gens)?);
    let incl = Hom::new_unchecked(sub.clone(), a.clone(), members);
    Ok((sub, incl))
}

/// The subalgebra on a closed subset given as sorted element lists.
fn restrict(a: &Algebra, members: &[Vec<Elt>], name: &str) -> Result<Algebra> {
    let pos: Vec<HashMap<Elt, Elt>> = members
        .iter()
        .map(|m| m.iter().enumerate().map(|(k, &e)| (e, k)).collect())
        .collect();
    let carriers = members
        .iter()
        .enumerate()
        .map(|(s, m)| m.iter().map(|&e| a.label(s, e).to_string()).collect())
        .collect();
    let mut buf = Vec::new();
    Algebra::from_fn(name, a.sig.clone(), carriers, |op, args| {
        let decl = &a.sig.ops[op];
        buf.clear();
        buf.extend(args.iter().enumerate().map(|(k, &x)| members[decl.inputs[k]][x]));
        let out = a.apply(op, &buf);
        pos[decl.output]
            .get(&out)
            .copied()
            .ok_or_else(|| Error::Invalid("subset is not closed".into()))
    })
}

/// Image factorization `h = incl ∘ onto` with `onto` surjective.
pub fn image(h: &Hom) -> Result<(Arc<Algebra>, Hom, Hom)> {
    let members: Vec<Vec<Elt>> = h
        .maps
        .iter()
        .map(|m| {
            let mut v: Vec<Elt> = m.clone();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut im = restrict(&h.dst, &members, &format!("im({})", h.dst.name))?;
    if let Some(g) = &h.src.generators {
        let pos: Vec<HashMap<Elt, Elt>> = members
            .iter()
            .map(|m| m.iter().enumerate().map(|(k, &e)| (e, k)).collect())
            .collect();
        let gens: Vec<_> = g.iter().map(|&(s, e)| (s, pos[s][&h.maps[s][e]])).collect();
        im = im.with_generators(gens)?;
    }
    let im = Arc::new(im);
    let onto_maps = h
        .maps
        .iter()
        .enumerate()
        .map(|(s, m)| m.iter().map(|x| members[s].binary_search(x).unwrap()).collect())
        .collect();
    let onto = Hom::new_unchecked(h.src.clone(), im.clone(), onto_maps);
    let incl = Hom::new_unchecked(im.clone(), h.dst.clone(), members);
    Ok((im, onto, incl))
}

/// A partition per sort, stored as least representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    pub reps: Vec<Vec<Elt>>,
}

impl Congruence {
    pub fn identity(a: &Algebra) -> Congruence {
        Congruence { reps: a.sizes().iter().map(|&n| (0..n).collect()).collect() }
    }

    pub fn total(a: &Algebra) -> Congruence {
        Congruence { reps: a.sizes().iter().map(|&n| vec![0; n]).collect() }
    }

    pub fn num_classes(&self, sort: usize) -> usize {
        self.reps[sort].iter().enumerate().filter(|(x, r)| x == *r).count()
    }

    pub fn total_classes(&self) -> usize {
        (0..self.reps.len()).map(|s| self.num_classes(s)).sum()
    }

    pub fn related(&self, sort: usize, a: Elt, b: Elt) -> bool {
        self.reps[sort][a] == self.reps[sort][b]
    }

    /// True if every class of `self` lies in a class of `other`.
    pub fn finer_than(&self, other: &Congruence) -> bool {
        self.reps
            .iter()
            .enumerate()
            .all(|(s, r)| r.iter().enumerate().all(|(x, &rx)| other.reps[s][x] == other.reps[s][rx]))
    }

    pub fn is_compatible(&self, a: &Algebra) -> bool {
        let mut buf = Vec::new();
        for (op, decl) in a.sig.ops.iter().enumerate() {
            let mut seen: HashMap<Vec<Elt>, Elt> = HashMap::new();
            let mut ok = true;
            a.for_each_cell(op, |args, out| {
                if !ok {
                    return;
                }
                buf.clear();
                buf.extend(args.iter().enumerate().map(|(k, &x)| self.reps[decl.inputs[k]][x]));
                let ro = self.reps[decl.output][out];
                match seen.get(&buf) {
                    Some(&r) if r != ro => ok = false,
                    Some(_) => {}
                    None => {
                        seen.insert(buf.clone(), ro);
                    }
                }
            });
            if !ok {
                return false;
            }
        }
        true
    }

    /// The kernel of a homomorphism.
    pub fn kernel(h: &Hom) -> Congruence {
        let reps = h
            .maps
            .iter()
            .map(|m| {
                let mut first: HashMap<Elt, Elt> = HashMap::new();
                m.iter().enumerate().map(|(x, &y)| *first.entry(y).or_insert(x)).collect()
            })
            .collect();
        Congruence { reps }
    }
}

/// Least congruence containing `base` and the given `(sort, a, b)` pairs.
pub fn congruence_closure(a: &Algebra, base: Option<&Congruence>, pairs: &[(usize, Elt, Elt)]) -> Congruence {
    let mut ufs: Vec<UnionFind> = match base {
        Some(c) => c.reps.iter().map(|r| UnionFind::from_reps(r)).collect(),
        None => a.sizes().iter().map(|&n| UnionFind::new(n)).collect(),
    };
    let mut dirty = base.is_some();
    for &(s, x, y) in pairs {
        dirty |= ufs[s].union(x, y);
    }
    let mut buf = Vec::new();
    while dirty {
        dirty = false;
        for (op, decl) in a.sig.ops.iter().enumerate() {
            if decl.inputs.is_empty() {
                continue;
            }
            let mut seen: HashMap<Vec<Elt>, Elt> = HashMap::new();
            let mut od = Odometer::new(a.radices(op));
            let mut idx = 0;
            while let Some(args) = od.next_digits() {
                let out = a.tables[op][idx];
                idx += 1;
                buf.clear();
                for (k, &x) in args.iter().enumerate() {
                    buf.push(ufs[decl.inputs[k]].find(x));
                }
                match seen.get(&buf) {
                    Some(&o) => {
                        dirty |= ufs[decl.output].union(o, out);
                    }
                    None => {
                        seen.insert(buf.clone(), out);
                    }
                }
            }
        }
    }
    Congruence { reps: ufs.iter_mut().map(UnionFind::reps).collect() }
}

pub fn congruence_generated(a: &Algebra, pairs: &[(usize, Elt, Elt)]) -> Congruence {
    congruence_closure(a, None, pairs)
}

/// Quotient by `theta`; elements are the class representatives in order.
pub fn quotient(a: &Arc<Algebra>, theta: &Congruence) -> Result<(Arc<Algebra>, Hom)> {
    let reps_sorted: Vec<Vec<Elt>> = theta
        .reps
        .iter()
        .map(|r| r.iter().enumerate().filter(|(x, rx)| x == *rx).map(|(x, _)| x).collect())
        .collect();
    let pos: Vec<HashMap<Elt, Elt>> = reps_sorted
        .iter()
        .map(|m| m.iter().enumerate().map(|(k, &e)| (e, k)).collect())
        .collect();
    let carriers = reps_sorted
        .iter()
        .enumerate()
        .map(|(s, m)| m.iter().map(|&e| a.label(s, e).to_string()).collect())
        .collect();
    let mut buf = Vec::new();
    let q = Algebra::from_fn(&format!("{}/~", a.name), a.sig.clone(), carriers, |op, args| {
        let decl = &a.sig.ops[op];
        buf.clear();
        buf.extend(args.iter().enumerate().map(|(k, &x)| reps_sorted[decl.inputs[k]][x]));
        let out = a.apply(op, &buf);
        Ok(pos[decl.output][&theta.reps[decl.output][out]])
    })?;
    let maps: Vec<Vec<Elt>> = theta
        .reps
        .iter()
        .enumerate()
        .map(|(s, r)| r.iter().map(|rx| pos[s][rx]).collect())
        .collect();
    let q = match &a.generators {
        Some(g) => {
            let gens = g.iter().map(|&(s, e)| (s, maps[s][e])).collect();
            q.with_generators(gens)?
        }
        None => q,
    };
    let q = Arc::new(q);
    let proj = Hom::new(a.clone(), q.clone(), maps)?;
    Ok((q, proj))
}

/// All congruences, as joins of principal congruences.
///
/// Sorted by decreasing class count, then by representative vectors, so the
/// identity congruence comes first and the total one last.
pub fn enumerate_congruences(a: &Algebra) -> Result<Vec<Congruence>> {
    let lim = limits::current().max_congruence_elems;
    if a.total_size() > lim {
        return Err(Error::Resource {
            what: "congruence enumeration carrier",
            needed: a.total_size() as u128,
            limit: lim as u64,
        });
    }
    let mut principal = Vec::new();
    for s in 0..a.num_sorts() {
        for x in 0..a.size(s) {
            for y in x + 1..a.size(s) {
                principal.push(congruence_generated(a, &[(s, x, y)]));
            }
        }
    }
    principal.sort();
    principal.dedup();
    let mut all: HashSet<Congruence> = HashSet::new();
    all.insert(Congruence::identity(a));
    let mut frontier: Vec<Congruence> = vec![Congruence::identity(a)];
    let mut budget = Budget::new("congruence joins");
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for p in &principal {
                if p.finer_than(c) {
                    continue;
                }
                budget.tick()?;
                let pairs: Vec<(usize, Elt, Elt)> = p
                    .reps
                    .iter()
                    .enumerate()
                    .flat_map(|(s, r)| r.iter().enumerate().map(move |(x, &rx)| (s, x, rx)))
                    .filter(|(_, x, rx)| x != rx)
                    .collect();
                let j = congruence_closure(a, Some(c), &pairs);
                if all.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Congruence> = all.into_iter().collect();
    out.sort_by(|x, y| y.total_classes().cmp(&x.total_classes()).then_with(|| x.cmp(y)));
    Ok(out)
}

/// All compatible partitions by filtering every partition of every sort.
///
/// Exponential; kept as an independent route for small algebras.
pub fn enumerate_congruences_by_partitions(a: &Algebra) -> Result<Vec<Congruence>> {
    let per_sort: Vec<Vec<Vec<Elt>>> = a.sizes().iter().map(|&n| set_partitions(n)).collect();
    let count = limits::product_size(per_sort.iter().map(Vec::len));
    limits::check_enum("partitions", count)?;
    let mut od = Odometer::new(per_sort.iter().map(Vec::len).collect());
    let mut out = Vec::new();
    while let Some(ix) = od.next_digits() {
        let c = Congruence { reps: ix.iter().enumerate().map(|(s, &k)| per_sort[s][k].clone()).collect() };
        if c.is_compatible(a) {
            out.push(c);
        }
    }
    out.sort_by(|x, y| y.total_classes().cmp(&x.total_classes()).then_with(|| x.cmp(y)));
    Ok(out)
}

/// Every partition of `0..n` as least-representative vectors.
pub fn set_partitions(n: usize) -> Vec<Vec<Elt>> {
    // Restricted growth strings, converted to least representatives.
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(k: usize, n: usize, maxb: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Elt>>) {
        if k == n {
            let mut first: Vec<Option<usize>> = vec![None; n];
            out.push(
                rgs.iter()
                    .enumerate()
                    .map(|(x, &b)| *first[b].get_or_insert(x))
                    .collect(),
            );
            return;
        }
        for b in 0..=maxb {
            rgs[k] = b;
            rec(k + 1, n, maxb.max(b + 1), rgs, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rgs[0] = 0;
    rec(1, n, 1, &mut rgs, &mut out);
    out
}

/// Value of a compiled term under an assignment.
pub fn evaluate(a: &Algebra, t: &CTerm, asg: &[Elt]) -> Elt {
    match t {
        CTerm::Var(k) => asg[*k],
        CTerm::App(op, args) => {
            let vals: Vec<Elt> = args.iter().map(|x| evaluate(a, x, asg)).collect();
            a.apply(*op, &vals)
        }
    }
}

/// Evaluates a named term; variables are looked up in `vars`.
pub fn evaluate_term(a: &Algebra, vars: &SortedSet, t: &Term, asg: &[Elt]) -> Result<Elt> {
    let (c, _) = compile(&a.sig, vars, t)?;
    if asg.len() < vars.len() {
        return invalid("unbound variable");
    }
    Ok(evaluate(a, &c, asg))
}

/// The lexicographically least failing assignment, if any.
pub fn counterexample(a: &Algebra, id: &CheckedIdentity) -> Result<Option<Vec<Elt>>> {
    let radices: Vec<usize> = id.vars.entries.iter().map(|(_, s)| a.size(*s)).collect();
    limits::check_enum("identity assignments", limits::product_size(radices.iter().copied()))?;
    let mut od = Odometer::new(radices);
    while let Some(asg) = od.next_digits() {
        if evaluate(a, &id.lhs, asg) != evaluate(a, &id.rhs, asg) {
            return Ok(Some(asg.to_vec()));
        }
    }
    Ok(None)
}

pub fn satisfies(a: &Algebra, id: &CheckedIdentity) -> Result<bool> {
    Ok(counterexample(a, id)?.is_none())
}

/// Formats a failing assignment as `x=label, y=label`.
pub fn show_assignment(a: &Algebra, id: &CheckedIdentity, asg: &[Elt]) -> String {
    id.vars
        .entries
        .iter()
        .zip(asg)
        .map(|((n, s), &e)| format!("{n}={}", a.label(*s, e)))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Restriction on hom search: per sort, optionally forced images.
pub type Fixed = Vec<Vec<Option<Elt>>>;

/// All homomorphisms, sorted by their map tables.
pub fn enumerate_homs(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Vec<Hom>> {
    if a.generators.is_some() {
        enumerate_homs_generated(a, b)
    } else {
        enumerate_homs_full(a, b)
    }
}

pub fn count_homs(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<usize> {
    Ok(enumerate_homs(a, b)?.len())
}

/// Candidate generator images, extended along the derivation and validated.
pub fn enumerate_homs_generated(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Vec<Hom>> {
    if a.sig != b.sig {
        return invalid("enumerate_homs: signatures differ");
    }
    let gens = a.generators.clone().ok_or_else(|| Error::Invalid("no recorded generators".into()))?;
    let radices: Vec<usize> = gens.iter().map(|&(s, _)| b.size(s)).collect();
    limits::check_enum("generator images", limits::product_size(radices.iter().copied()))?;
    let mut od = Odometer::new(radices);
    let mut out = Vec::new();
    while let Some(imgs) = od.next_digits() {
        let maps = a.eval_derivation(imgs, |op, args| Ok(b.apply(op, args)))?;
        if hom_violation(a, b, &maps).is_none() {
            out.push(Hom::new_unchecked(a.clone(), b.clone(), maps));
        }
    }
    out.sort_by(|x, y| x.maps.cmp(&y.maps));
    Ok(out)
}

/// Backtracking over every element with table-cell pruning.
pub fn enumerate_homs_full(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Vec<Hom>> {
    let fixed: Fixed = a.sizes().iter().map(|&n| vec![None; n]).collect();
    let mut out = Vec::new();
    search_homs(a, b, &fixed, &mut |maps| {
        out.push(Hom::new_unchecked(a.clone(), b.clone(), maps.to_vec()));
        true
    })?;
    Ok(out)
}

/// All homs agreeing with `fixed`, sorted.
pub fn enumerate_homs_with(a: &Arc<Algebra>, b: &Arc<Algebra>, fixed: &Fixed) -> Result<Vec<Hom>> {
    let mut out = Vec::new();
    search_homs(a, b, fixed, &mut |maps| {
        out.push(Hom::new_unchecked(a.clone(), b.clone(), maps.to_vec()));
        true
    })?;
    Ok(out)
}

/// The least hom agreeing with `fixed`, if one exists.
pub fn find_hom_with(a: &Arc<Algebra>, b: &Arc<Algebra>, fixed: &Fixed) -> Result<Option<Hom>> {
    let mut found = None;
    search_homs(a, b, fixed, &mut |maps| {
        found = Some(Hom::new_unchecked(a.clone(), b.clone(), maps.to_vec()));
        false
    })?;
    Ok(found)
}

/// Depth-first search in sort-major element order; `visit` returns false to stop.
fn search_homs(
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    fixed: &Fixed,
    visit: &mut dyn FnMut(&[Vec<Elt>]) -> bool,
) -> Result<()> {
    if a.sig != b.sig {
        return invalid("enumerate_homs: signatures differ");
    }
    let mut offsets = vec![0; a.num_sorts() + 1];
    for s in 0..a.num_sorts() {
        offsets[s + 1] = offsets[s] + a.size(s);
    }
    let n = offsets[a.num_sorts()];
    let pos_of = |s: usize, e: Elt| offsets[s] + e;
    let slots: Vec<(usize, Elt)> = a.all_elements();
    // checks[p]: table cells whose last involved element is slot p.
    let mut checks: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (op, decl) in a.sig.ops.iter().enumerate() {
        let mut idx = 0;
        let mut od = Odometer::new(a.radices(op));
        while let Some(args) = od.next_digits() {
            let out = a.tables[op][idx];
            let mut mx = pos_of(decl.output, out);
            for (k, &x) in args.iter().enumerate() {
                mx = mx.max(pos_of(decl.inputs[k], x));
            }
            checks[mx].push((op, idx));
            idx += 1;
        }
    }
    let mut maps: Vec<Vec<Elt>> = a.sizes().iter().map(|&k| vec![0; k]).collect();
    let mut budget = Budget::new("hom search nodes");
    let mut buf = Vec::new();
    let radices: Vec<Vec<usize>> = (0..a.sig.ops.len()).map(|op| a.radices(op)).collect();

    fn ok_at(
        a: &Algebra,
        b: &Algebra,
        maps: &[Vec<Elt>],
        cells: &[(usize, usize)],
        radices: &[Vec<usize>],
        buf: &mut Vec<Elt>,
    ) -> bool {
        for &(op, idx) in cells {
            let decl = &a.sig.ops[op];
            let args = decode(&radices[op], idx);
            buf.clear();
            buf.extend(args.iter().enumerate().map(|(k, &x)| maps[decl.inputs[k]][x]));
            if b.apply(op, buf) != maps[decl.output][a.tables[op][idx]] {
                return false;
            }
        }
        true
    }

    // Iterative DFS with explicit candidate counters.
    let mut choice: Vec<usize> = vec![0; n];
    let mut depth = 0usize;
    if n == 0 {
        // Only nullary ops on empty carriers are impossible; nothing to check.
        visit(&maps);
        return Ok(());
    }
    loop {
        let (s, e) = slots[depth];
        let dom = b.size(s);
        let mut advanced = false;
        while choice[depth] < dom {
            let v = choice[depth];
            choice[depth] += 1;
            if let Some(f) = fixed[s][e] {
                if f != v {
                    continue;
                }
            }
            budget.tick()?;
            maps[s][e] = v;
            if ok_at(a, b, &maps, &checks[depth], &radices, &mut buf) {
                advanced = true;
                break;
            }
        }
        if advanced {
            if depth + 1 == n {
                if !visit(&maps) {
                    return Ok(());
                }
                continue;
            }
            depth += 1;
            choice[depth] = 0;
        } else {
            if depth == 0 {
                return Ok(());
            }
            depth -= 1;
        }
    }
}

/// Every bijective hom `a -> b`.
pub fn isomorphisms(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<Vec<Hom>> {
    if a.sizes() != b.sizes() {
        return Ok(Vec::new());
    }
    Ok(enumerate_homs(a, b)?.into_iter().filter(Hom::is_bijective).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{check_identity, Identity};

    fn ab2() -> Arc<Signature> {
        Arc::new(Signature::new("Ab2", &["s"], &[("zero", &[], "s"), ("add", &["s", "s"], "s")]).unwrap())
    }

    fn vn(n: u32) -> Arc<Algebra> {
        let size = 1usize << n;
        let carriers = vec![(0..size).map(|k| format!("e{k}")).collect()];
        let a = Algebra::from_fn(&format!("V{n}"), ab2(), carriers, |op, args| Ok(if op == 0 { 0 } else { args[0] ^ args[1] }))
            .unwrap();
        Arc::new(a.with_generators((0..n).map(|k| (0, 1usize << k)).collect()).unwrap())
    }

    fn bool_sig() -> Arc<Signature> {
        Arc::new(
            Signature::new(
                "BoolRing",
                &["s"],
                &[("zero", &[], "s"), ("one", &[], "s"), ("add", &["s", "s"], "s"), ("mul", &["s", "s"], "s")],
            )
            .unwrap(),
        )
    }

    fn bool_power(k: u32) -> Arc<Algebra> {
        let size = 1usize << k;
        let full = size - 1;
        let carriers = vec![(0..size).map(|x| format!("b{x}")).collect()];
        Arc::new(
            Algebra::from_fn(&format!("F2^{k}"), bool_sig(), carriers, |op, a| {
                Ok(match op {
                    0 => 0,
                    1 => full,
                    2 => a[0] ^ a[1],
                    _ => a[0] & a[1],
                })
            })
            .unwrap(),
        )
    }

    fn left_proj() -> Arc<Algebra> {
        let sig = Arc::new(Signature::new("Mag", &["s"], &[("l", &["s", "s"], "s")]).unwrap());
        Arc::new(Algebra::from_fn("LP", sig, vec![vec!["a".into(), "b".into()]], |_, a| Ok(a[0])).unwrap())
    }

    fn ident(sig: &Signature, vars: &[&str], l: Term, r: Term) -> CheckedIdentity {
        check_identity(
            sig,
            &Identity { name: "i".into(), vars: vars.iter().map(|v| (v.to_string(), "s".to_string())).collect(), lhs: l, rhs: r },
        )
        .unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let f2 = bool_power(1);
        let vars = SortedSet::parse(&f2.sig, "x:s, y:s").unwrap();
        let t = Term::app("mul", vec![Term::app("add", vec![Term::var("x"), Term::var("y")]), Term::var("x")]);
        assert_eq!(evaluate_term(&f2, &vars, &t, &[1, 0]).unwrap(), 1);
        let v1 = vn(1);
        let vx = SortedSet::parse(&v1.sig, "x:s").unwrap();
        assert_eq!(evaluate_term(&v1, &vx, &Term::app("add", vec![Term::var("x"), Term::var("x")]), &[1]).unwrap(), 0);
    }

    #[test]
    fn satisfaction_and_witness() {
        let lp = left_proj();
        let c = ident(&lp.sig, &["x", "y"], Term::app("l", vec![Term::var("x"), Term::var("y")]), Term::app("l", vec![Term::var("y"), Term::var("x")]));
        assert_eq!(counterexample(&lp, &c).unwrap(), Some(vec![0, 1]));
        let f2 = bool_power(1);
        let c = ident(&f2.sig, &["x", "y"], Term::app("add", vec![Term::var("x"), Term::var("y")]), Term::app("add", vec![Term::var("y"), Term::var("x")]));
        assert!(satisfies(&f2, &c).unwrap());
    }

    #[test]
    fn hom_counts() {
        assert_eq!(count_homs(&vn(2), &vn(3)).unwrap(), 64);
        let t = Arc::new(terminal(&ab2()));
        assert_eq!(count_homs(&vn(3), &t).unwrap(), 1);
        assert_eq!(enumerate_homs_full(&vn(2), &vn(3)).unwrap(), enumerate_homs_generated(&vn(2), &vn(3)).unwrap());
        // The free Boolean ring on one generator is F2^2 generated by (1,0).
        let b4 = Arc::new((*bool_power(2)).clone().with_generators(vec![(0, 1)]).unwrap());
        assert_eq!(count_homs(&b4, &bool_power(1)).unwrap(), 2);
    }

    #[test]
    fn products_and_projections() {
        let (t, p) = product(&bool_sig(), &[]).unwrap();
        assert_eq!(t.sizes(), vec![1]);
        assert!(p.is_empty());
        let f2 = bool_power(1);
        let (pr, projs) = product(&bool_sig(), &[f2.clone(), f2.clone()]).unwrap();
        assert_eq!(pr.size(0), 4);
        for p in &projs {
            assert!(Hom::new(p.src.clone(), p.dst.clone(), p.maps.clone()).is_ok());
        }
        let id = Hom::identity(&f2);
        let pm = pair_map(&pr, &[id.clone(), id.clone()], &f2);
        assert_eq!(projs[0].compose(&pm), id);
    }

    #[test]
    fn closure_examples() {
        let b4 = bool_power(2);
        let (sub, _) = subalgebra_closure(&b4, &[(0, 1)]).unwrap();
        assert_eq!(sub.size(0), 4);
        let (whole, _) = subalgebra_closure(&b4, &b4.all_elements()).unwrap();
        assert_eq!(whole.tables, b4.tables);
        let (empty, _) = subalgebra_closure(&left_proj(), &[]).unwrap();
        assert_eq!(empty.size(0), 0);
    }

    #[test]
    fn congruence_examples() {
        let v2 = vn(2);
        let c = congruence_generated(&v2, &[(0, 1, 2)]);
        assert_eq!(c.num_classes(0), 2);
        let (q, p) = quotient(&v2, &c).unwrap();
        assert_eq!(q.size(0), 2);
        assert!(p.is_surjective());
        assert_eq!(Congruence::kernel(&p), c);
        let lp = left_proj();
        let pairs: Vec<_> = (0..2).flat_map(|a| (0..2).map(move |b| (0, a, b))).map(|(s, a, b)| (s, lp.apply(0, &[a, b]), lp.apply(0, &[b, a]))).collect();
        assert_eq!(congruence_generated(&lp, &pairs).num_classes(0), 1);
        assert_eq!(enumerate_congruences(&vn(3)).unwrap().len(), 16);
        let t = Arc::new(terminal(&ab2()));
        assert_eq!(enumerate_congruences(&t).unwrap().len(), 1);
    }

    #[test]
    fn congruence_routes_agree() {
        for a in [vn(2), vn(3), bool_power(2), left_proj()] {
            assert_eq!(enumerate_congruences(&a).unwrap(), enumerate_congruences_by_partitions(&a).unwrap());
        }
    }

    #[test]
    fn partitions_bell_numbers() {
        let bell: Vec<usize> = (0..7).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn non_hom_rejected_with_witness() {
        let v1 = vn(1);
        let e = Hom::new(v1.clone(), v1.clone(), vec![vec![1, 1]]).unwrap_err();
        assert!(matches!(e, Error::Failed(ref m) if m.contains("zero()")), "{e}");
    }

    #[test]
    fn image_factorization() {
        let v2 = vn(2);
        let h = Hom::new(v2.clone(), v2.clone(), vec![vec![0, 1, 1, 0]]).unwrap();
        let (im, onto, incl) = image(&h).unwrap();
        assert_eq!(im.size(0), 2);
        assert!(onto.is_surjective());
        assert!(incl.is_injective());
        assert_eq!(incl.compose(&onto), h);
    }
}
