//! Varieties as HSP of finite generators: free algebras by Birkhoff closure,
//! presentations, coproducts, imposition of identities and the contravariant
//! hom-lift.

use crate::error::{failed, invalid, Error, Result};
use crate::finalg::{
    congruence_closure, congruence_generated, counterexample, enumerate_homs, evaluate, extend_from_generators,
    hom_violation, product, quotient, show_assignment, subalgebra_closure, Algebra, Elt, Hom, Step,
};
use crate::kernel::{compile, dsl, CheckedIdentity, Signature, SortedSet, Term};
use crate::limits;
use crate::util::{decode, encode, Odometer};
use rustc_hash::FxHashMap;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

pub struct Variety {
    pub name: String,
    pub sig: Arc<Signature>,
    pub identities: Vec<CheckedIdentity>,
    pub generators: Vec<Arc<Algebra>>,
    test_algebra: OnceLock<Arc<Algebra>>,
    free_cache: Mutex<HashMap<SortedSet, Arc<FreeAlgebra>>>,
}

impl fmt::Debug for Variety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Variety({})", self.name)
    }
}

impl Variety {
    /// Checks that every generator satisfies every identity.
    pub fn new(
        name: &str,
        sig: Arc<Signature>,
        identities: Vec<CheckedIdentity>,
        generators: Vec<Arc<Algebra>>,
    ) -> Result<Variety> {
        if generators.is_empty() {
            return invalid(format!("variety {name} has no generators"));
        }
        let identities = crate::kernel::dedup_identities(identities);
        for g in &generators {
            if g.sig != sig {
                return invalid(format!("generator {} of {name} has another signature", g.name));
            }
            for id in &identities {
                if let Some(w) = counterexample(g, id)? {
                    return failed(format!(
                        "generator {} of {name} violates {} at {}",
                        g.name,
                        id.source.name,
                        show_assignment(g, id, &w)
                    ));
                }
            }
        }
        Ok(Variety {
            name: name.to_string(),
            sig,
            identities,
            generators,
            test_algebra: OnceLock::new(),
            free_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Product of the generators, the single algebra used for closures.
    pub fn test_algebra(&self) -> Result<Arc<Algebra>> {
        if let Some(a) = self.test_algebra.get() {
            return Ok(a.clone());
        }
        let a = if self.generators.len() == 1 {
            self.generators[0].clone()
        } else {
            product(&self.sig, &self.generators)?.0
        };
        Ok(self.test_algebra.get_or_init(|| a).clone())
    }

    /// First violated identity with its least failing assignment.
    pub fn violation(&self, a: &Algebra) -> Result<Option<String>> {
        for id in &self.identities {
            if let Some(w) = counterexample(a, id)? {
                return Ok(Some(format!("{} at {}", id.source.name, show_assignment(a, id, &w))));
            }
        }
        Ok(None)
    }

    pub fn contains(&self, a: &Algebra) -> Result<bool> {
        Ok(a.sig == self.sig && self.violation(a)?.is_none())
    }

    pub fn free(&self, x: &SortedSet) -> Result<Arc<FreeAlgebra>> {
        if let Some(f) = self.free_cache.lock().unwrap().get(x) {
            return Ok(f.clone());
        }
        let f = Arc::new(free_algebra(self, x)?);
        self.free_cache.lock().unwrap().insert(x.clone(), f.clone());
        Ok(f)
    }

    /// The initial algebra `F(∅)`.
    pub fn initial(&self) -> Result<Arc<FreeAlgebra>> {
        self.free(&SortedSet::default())
    }
}

/// A free algebra with its insertion of generators.
#[derive(Debug, Clone)]
pub struct FreeAlgebra {
    pub algebra: Arc<Algebra>,
    pub gens: SortedSet,
    /// Image of each generator.
    pub unit: Vec<Elt>,
}

const LABEL_CAP: usize = 48;

/// Birkhoff closure of the variable-evaluation maps inside `A^Env`.
pub fn free_algebra(v: &Variety, x: &SortedSet) -> Result<FreeAlgebra> {
    let a = v.test_algebra()?;
    let radices: Vec<usize> = x.entries.iter().map(|(_, s)| a.size(*s)).collect();
    let n_env = limits::product_size(radices.iter().copied());
    limits::check_enum("Birkhoff environments", n_env)?;
    let n_env = n_env as usize;
    let ns = v.sig.num_sorts();
    let mut vecs: Vec<Vec<Vec<u32>>> = vec![Vec::new(); ns];
    let mut index: Vec<FxHashMap<Vec<u32>, Elt>> = vec![FxHashMap::default(); ns];
    let mut steps: Vec<Vec<Step>> = vec![Vec::new(); ns];
    let mut order = Vec::new();
    let mut unit = Vec::new();
    let mut stored = 0u128;
    let mut insert = |s: usize, vec: Vec<u32>, step: Step, vecs: &mut Vec<Vec<Vec<u32>>>, steps: &mut Vec<Vec<Step>>, order: &mut Vec<(usize, Elt)>| -> Result<(Elt, bool)> {
        if let Some(&e) = index[s].get(&vec) {
            return Ok((e, false));
        }
        stored += n_env as u128;
        limits::check_cells("Birkhoff closure entries", stored)?;
        let e = vecs[s].len();
        index[s].insert(vec.clone(), e);
        vecs[s].push(vec);
        steps[s].push(step);
        order.push((s, e));
        Ok((e, true))
    };
    let envs: Vec<Vec<usize>> = (0..n_env).map(|k| decode(&radices, k)).collect();
    for (k, (_, s)) in x.entries.iter().enumerate() {
        let vec: Vec<u32> = envs.iter().map(|env| env[k] as u32).collect();
        let (e, _) = insert(*s, vec, Step::Gen(k), &mut vecs, &mut steps, &mut order)?;
        unit.push(e);
    }
    let mut frontier: Vec<usize> = vec![0; ns];
    let mut first = true;
    // Table entries recorded as they are computed; every tuple is visited once.
    let mut results: Vec<FxHashMap<Vec<Elt>, Elt>> = vec![FxHashMap::default(); v.sig.ops.len()];
    let mut off = vec![0usize; n_env];
    loop {
        let snapshot: Vec<usize> = vecs.iter().map(Vec::len).collect();
        let mut new_any = false;
        for (op, decl) in v.sig.ops.iter().enumerate() {
            let radices = a.radices(op);
            let mut strides = vec![1usize; radices.len()];
            for k in (0..radices.len().saturating_sub(1)).rev() {
                strides[k] = strides[k + 1] * radices[k + 1];
            }
            let table = &a.tables[op];
            let mut od = Odometer::new(decl.inputs.iter().map(|&s| snapshot[s]).collect());
            while let Some(ix) = od.next_digits() {
                if !first && !ix.iter().enumerate().any(|(k, &i)| i >= frontier[decl.inputs[k]]) {
                    continue;
                }
                off.iter_mut().for_each(|o| *o = 0);
                for (k, &i) in ix.iter().enumerate() {
                    let (col, st) = (&vecs[decl.inputs[k]][i], strides[k]);
                    for (o, &x) in off.iter_mut().zip(col) {
                        *o += x as usize * st;
                    }
                }
                let out: Vec<u32> = off.iter().map(|&o| table[o] as u32).collect();
                let ix = ix.to_vec();
                let (e, new) = insert(decl.output, out, Step::App(op, ix.clone()), &mut vecs, &mut steps, &mut order)?;
                results[op].insert(ix, e);
                new_any |= new;
            }
        }
        frontier = snapshot;
        first = false;
        if !new_any {
            break;
        }
    }
    // Labels are witness terms over the generator names.
    let names: Vec<String> = x.entries.iter().map(|(n, _)| n.clone()).collect();
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); ns];
    for &(s, e) in &order {
        let l = match &steps[s][e] {
            Step::Gen(k) => names[*k].clone(),
            Step::App(op, args) => {
                let parts: Vec<String> = args
                    .iter()
                    .enumerate()
                    .map(|(k, &i)| labels[v.sig.ops[*op].inputs[k]][i].clone())
                    .collect();
                format!("{}({})", v.sig.ops[*op].symbol, parts.join(","))
            }
        };
        labels[s].push(l);
    }
    for (s, ls) in labels.iter_mut().enumerate() {
        for (e, l) in ls.iter_mut().enumerate() {
            if l.len() > LABEL_CAP {
                *l = format!("t{s}_{e}");
            }
        }
    }
    let alg = Algebra::from_fn(&format!("F_{}({})", v.name, names.join(",")), v.sig.clone(), labels, |op, args| {
        results[op].get(args).copied().ok_or_else(|| Error::Failed("free algebra closure is incomplete".into()))
    })?;
    let gens: Vec<(usize, Elt)> = x.entries.iter().zip(&unit).map(|((_, s), &e)| (*s, e)).collect();
    let alg = alg.with_generators(gens)?;
    Ok(FreeAlgebra { algebra: Arc::new(alg), gens: x.clone(), unit })
}

impl FreeAlgebra {
    /// The unique hom extending `f` (one image per generator).
    pub fn extend(&self, b: &Arc<Algebra>, f: &[Elt]) -> Result<Hom> {
        universal_extension(self, b, f)
    }

    pub fn sort_of_gen(&self, k: usize) -> usize {
        self.gens.sort_of(k)
    }
}

/// The hom `F(X) → B` determined by generator images.
pub fn universal_extension(f: &FreeAlgebra, b: &Arc<Algebra>, images: &[Elt]) -> Result<Hom> {
    if images.len() != f.gens.len() {
        return invalid("universal_extension: one image per generator expected");
    }
    let recorded = f.algebra.generators.clone().unwrap_or_default();
    let gen_images: Vec<Elt> = recorded
        .iter()
        .map(|&(s, e)| {
            let k = (0..f.gens.len()).find(|&k| f.unit[k] == e && f.gens.sort_of(k) == s).unwrap();
            images[k]
        })
        .collect();
    let h = extend_from_generators(&f.algebra, b, &gen_images)?;
    for k in 0..f.gens.len() {
        if h.apply(f.gens.sort_of(k), f.unit[k]) != images[k] {
            return failed("generator images disagree on identified generators");
        }
    }
    Ok(h)
}

#[derive(Debug, Clone)]
pub struct Presentation {
    pub variety: Arc<Variety>,
    pub gens: SortedSet,
    pub relations: Vec<(Term, Term)>,
}

#[derive(Debug, Clone)]
pub struct Presented {
    pub algebra: Arc<Algebra>,
    pub free: Arc<FreeAlgebra>,
    /// Quotient map from the free algebra.
    pub quotient: Hom,
}

impl Presented {
    /// The class of the k-th presentation generator.
    pub fn gen_element(&self, k: usize) -> Elt {
        let s = self.free.gens.sort_of(k);
        self.quotient.apply(s, self.free.unit[k])
    }

    /// The hom sending the k-th presentation generator to `images[k]`.
    pub fn extend(&self, b: &Arc<Algebra>, images: &[Elt]) -> Result<Hom> {
        if images.len() != self.free.gens.len() {
            return invalid("presentation extension: one image per generator expected");
        }
        let recorded = self.algebra.generators.clone().unwrap_or_default();
        let gen_images: Vec<Elt> = recorded
            .iter()
            .map(|&(s, e)| {
                let k = (0..self.free.gens.len())
                    .find(|&k| self.free.gens.sort_of(k) == s && self.gen_element(k) == e)
                    .expect("recorded generator comes from the presentation");
                images[k]
            })
            .collect();
        let h = extend_from_generators(&self.algebra, b, &gen_images)?;
        for (k, &img) in images.iter().enumerate() {
            if h.apply(self.free.gens.sort_of(k), self.gen_element(k)) != img {
                return failed("generator images do not respect the relations");
            }
        }
        Ok(h)
    }
}

/// Quotient of `F(gens)` by the congruence generated by `pairs`.
pub fn present_by_pairs(
    v: &Variety,
    gens: &SortedSet,
    pairs: impl FnOnce(&FreeAlgebra) -> Result<Vec<(usize, Elt, Elt)>>,
) -> Result<Presented> {
    let free = v.free(gens)?;
    let ps = pairs(&free)?;
    let theta = congruence_generated(&free.algebra, &ps);
    let (algebra, quotient) = quotient(&free.algebra, &theta)?;
    Ok(Presented { algebra, free, quotient })
}

pub fn finitely_presented(p: &Presentation) -> Result<Presented> {
    let sig = &p.variety.sig;
    let mut compiled = Vec::new();
    for (l, r) in &p.relations {
        let (cl, sl) = compile(sig, &p.gens, l)?;
        let (cr, sr) = compile(sig, &p.gens, r)?;
        if sl != sr {
            return Err(Error::IllSorted { path: "relation".into(), msg: format!("sides {l} and {r} differ in sort") });
        }
        compiled.push((sl, cl, cr));
    }
    present_by_pairs(&p.variety, &p.gens, |f| {
        Ok(compiled
            .iter()
            .map(|(s, l, r)| (*s, evaluate(&f.algebra, l, &f.unit), evaluate(&f.algebra, r, &f.unit)))
            .collect())
    })
}

/// A coproduct with its injections.
#[derive(Debug, Clone)]
pub struct Coproduct {
    pub algebra: Arc<Algebra>,
    pub summands: Vec<Arc<Algebra>>,
    pub injections: Vec<Hom>,
    /// For each recorded generator of `algebra`: `(summand, sort, element)`.
    pub origins: Vec<(usize, usize, Elt)>,
}

/// Greedy irredundant generating set in element order.
pub fn greedy_generators(a: &Arc<Algebra>) -> Result<Vec<(usize, Elt)>> {
    if let Some(g) = &a.generators {
        return Ok(g.clone());
    }
    let mut gens = Vec::new();
    let mut reached: Vec<Vec<bool>> = a.sizes().iter().map(|&n| vec![false; n]).collect();
    let (sub, incl) = subalgebra_closure(a, &gens)?;
    mark(&mut reached, &incl, &sub);
    for (s, e) in a.all_elements() {
        if !reached[s][e] {
            gens.push((s, e));
            let (sub, incl) = subalgebra_closure(a, &gens)?;
            mark(&mut reached, &incl, &sub);
        }
    }
    fn mark(reached: &mut [Vec<bool>], incl: &Hom, sub: &Algebra) {
        for (s, m) in incl.maps.iter().enumerate() {
            for x in 0..sub.size(s) {
                reached[s][m[x]] = true;
            }
        }
    }
    Ok(gens)
}

/// The coproduct, presented on the summands' generators with all their
/// table entries as relations.
pub fn coproduct(v: &Variety, summands: &[Arc<Algebra>]) -> Result<Coproduct> {
    let mut entries = Vec::new();
    let mut origin_of_gen = Vec::new();
    let mut gen_lists = Vec::new();
    for (j, a) in summands.iter().enumerate() {
        if a.sig != v.sig {
            return invalid(format!("coproduct summand {} is not over {}", a.name, v.sig.name));
        }
        let gl = greedy_generators(a)?;
        for &(s, e) in &gl {
            entries.push((dsl::coproduct_var(a.label(s, e), j), s));
            origin_of_gen.push((j, s, e));
        }
        gen_lists.push(gl);
    }
    // Disambiguate clashing labels inside one summand by position.
    let mut seen = HashMap::new();
    for (k, (n, _)) in entries.iter_mut().enumerate() {
        if seen.insert(n.clone(), k).is_some() {
            *n = format!("{n}_{k}");
        }
    }
    let gens = SortedSet::new(entries)?;
    let summands_g: Vec<Arc<Algebra>> = summands
        .iter()
        .zip(&gen_lists)
        .map(|(a, g)| -> Result<Arc<Algebra>> {
            if a.generators.is_some() {
                Ok(a.clone())
            } else {
                Ok(Arc::new((**a).clone().with_generators(g.clone())?))
            }
        })
        .collect::<Result<_>>()?;
    let mut offsets = Vec::new();
    let mut off = 0;
    for g in &gen_lists {
        offsets.push(off);
        off += g.len();
    }
    let mut words: Vec<Vec<Vec<Elt>>> = Vec::new();
    let pres = present_by_pairs(v, &gens, |f| {
        let fa = &f.algebra;
        let mut pairs = Vec::new();
        for (j, a) in summands_g.iter().enumerate() {
            let imgs: Vec<Elt> = (0..gen_lists[j].len()).map(|k| f.unit[offsets[j] + k]).collect();
            let w = a.eval_derivation(&imgs, |op, args| Ok(fa.apply(op, args)))?;
            let mut buf = Vec::new();
            for (op, decl) in a.sig.ops.iter().enumerate() {
                a.for_each_cell(op, |args, out| {
                    buf.clear();
                    buf.extend(args.iter().enumerate().map(|(k, &x)| w[decl.inputs[k]][x]));
                    pairs.push((decl.output, fa.apply(op, &buf), w[decl.output][out]));
                });
            }
            words.push(w);
        }
        Ok(pairs)
    })?;
    let c = Arc::new(
        (*pres.algebra)
            .clone()
            .renamed(&summands.iter().map(|a| a.name.as_str()).collect::<Vec<_>>().join("+")),
    );
    let mut injections = Vec::new();
    for (j, a) in summands.iter().enumerate() {
        let maps = words[j]
            .iter()
            .enumerate()
            .map(|(s, m)| m.iter().map(|&x| pres.quotient.apply(s, x)).collect())
            .collect();
        injections.push(Hom::new(a.clone(), c.clone(), maps)?);
    }
    let recorded = c.generators.clone().unwrap_or_default();
    let origins = recorded
        .iter()
        .map(|&(s, g)| {
            *origin_of_gen
                .iter()
                .find(|&&(j, s2, e)| s2 == s && injections[j].apply(s, e) == g)
                .expect("coproduct generator has an origin")
        })
        .collect();
    Ok(Coproduct { algebra: c, summands: summands.to_vec(), injections, origins })
}

impl Coproduct {
    /// The copairing of `homs` (one per summand) into `target`.
    pub fn fold(&self, homs: &[Hom], target: &Arc<Algebra>) -> Result<Hom> {
        if homs.len() != self.summands.len() {
            return invalid("fold: one hom per summand expected");
        }
        let images: Vec<Elt> = self.origins.iter().map(|&(j, s, e)| homs[j].apply(s, e)).collect();
        let h = extend_from_generators(&self.algebra, target, &images)?;
        for (j, inj) in self.injections.iter().enumerate() {
            if h.compose(inj).maps != homs[j].maps {
                return failed(format!("fold disagrees with summand {j}"));
            }
        }
        Ok(h)
    }

    /// Image of one element under the copairing given by generator images,
    /// without building the whole hom.
    pub fn fold_element(
        &self,
        sort: usize,
        e: Elt,
        target: &Algebra,
        image: &dyn Fn(usize, usize, Elt) -> Elt,
        memo: &mut HashMap<(usize, Elt), Elt>,
    ) -> Elt {
        let d = self.algebra.derivation().expect("coproduct has generators");
        fn go(
            c: &Coproduct,
            d: &crate::finalg::Derivation,
            s: usize,
            e: Elt,
            target: &Algebra,
            image: &dyn Fn(usize, usize, Elt) -> Elt,
            memo: &mut HashMap<(usize, Elt), Elt>,
        ) -> Elt {
            if let Some(&v) = memo.get(&(s, e)) {
                return v;
            }
            let v = match &d.steps[s][e] {
                Step::Gen(k) => {
                    let (j, gs, ge) = c.origins[*k];
                    image(j, gs, ge)
                }
                Step::App(op, args) => {
                    let ins = &c.algebra.sig.ops[*op].inputs;
                    let vals: Vec<Elt> =
                        args.iter().enumerate().map(|(k, &x)| go(c, d, ins[k], x, target, image, memo)).collect();
                    target.apply(*op, &vals)
                }
            };
            memo.insert((s, e), v);
            v
        }
        go(self, &d, sort, e, target, image, memo)
    }
}

/// Quotient of `a` making it satisfy `ids`.
pub fn impose_identities(a: &Arc<Algebra>, ids: &[CheckedIdentity]) -> Result<(Arc<Algebra>, Hom)> {
    let mut pairs = Vec::new();
    for id in ids {
        let radices: Vec<usize> = id.vars.entries.iter().map(|(_, s)| a.size(*s)).collect();
        limits::check_enum("identity assignments", limits::product_size(radices.iter().copied()))?;
        let mut od = Odometer::new(radices);
        while let Some(asg) = od.next_digits() {
            let (l, r) = (evaluate(a, &id.lhs, asg), evaluate(a, &id.rhs, asg));
            if l != r {
                pairs.push((id.sort, l, r));
            }
        }
    }
    let theta = congruence_closure(a, None, &pairs);
    quotient(a, &theta)
}

/// A V-algebra object in W: W-algebras per V-sort and W-homs for the V-ops.
#[derive(Debug, Clone)]
pub struct VAlgebraObject {
    pub name: String,
    pub v: Arc<Variety>,
    pub w: Arc<Variety>,
    pub components: Vec<Arc<Algebra>>,
    /// Per V-op, a W-hom from the product of its input components.
    pub ops: Vec<Hom>,
}

impl VAlgebraObject {
    /// Validates op shapes and the V-identities on every W-sort layer.
    pub fn new(
        name: &str,
        v: Arc<Variety>,
        w: Arc<Variety>,
        components: Vec<Arc<Algebra>>,
        ops: Vec<Hom>,
    ) -> Result<VAlgebraObject> {
        if components.len() != v.sig.num_sorts() || ops.len() != v.sig.ops.len() {
            return invalid(format!("algebra object {name}: wrong number of components or ops"));
        }
        for (k, decl) in v.sig.ops.iter().enumerate() {
            let ins: Vec<Arc<Algebra>> = decl.inputs.iter().map(|&i| components[i].clone()).collect();
            let (p, _) = product(&w.sig, &ins)?;
            if ops[k].src.sizes() != p.sizes() || ops[k].dst.sizes() != components[decl.output].sizes() {
                return invalid(format!("algebra object {name}: op {} has the wrong shape", decl.symbol));
            }
            if let Some(wit) = hom_violation(&p, &components[decl.output], &ops[k].maps) {
                return failed(format!("algebra object {name}: op {} is not a W-hom at {wit}", decl.symbol));
            }
        }
        let obj = VAlgebraObject { name: name.to_string(), v, w, components, ops };
        for t in 0..obj.w.sig.num_sorts() {
            let layer = obj.layer(t)?;
            if let Some(msg) = obj.v.violation(&layer)? {
                return failed(format!("algebra object {name} violates {msg} on W-sort {}", obj.w.sig.sorts[t]));
            }
        }
        Ok(obj)
    }

    /// A V-algebra viewed as a V-algebra object in a variety with no
    /// operations and one sort (finite sets).
    pub fn in_sets(a: &Arc<Algebra>, v: Arc<Variety>, sets: Arc<Variety>) -> Result<VAlgebraObject> {
        if !sets.sig.ops.is_empty() || sets.sig.num_sorts() != 1 {
            return invalid("in_sets: ambient must be one-sorted without operations");
        }
        let components: Vec<Arc<Algebra>> = a
            .carriers
            .iter()
            .map(|c| Arc::new(Algebra::new(&a.name, sets.sig.clone(), vec![c.clone()], vec![], None).unwrap()))
            .collect();
        let mut ops = Vec::new();
        for (k, decl) in v.sig.ops.iter().enumerate() {
            let ins: Vec<Arc<Algebra>> = decl.inputs.iter().map(|&i| components[i].clone()).collect();
            let (p, _) = product(&sets.sig, &ins)?;
            ops.push(Hom::new_unchecked(p, components[decl.output].clone(), vec![a.tables[k].clone()]));
        }
        VAlgebraObject::new(&a.name, v, sets, components, ops)
    }

    /// The V-algebra of elements of W-sort `t`.
    pub fn layer(&self, t: usize) -> Result<Algebra> {
        let carriers = self.components.iter().map(|c| c.carriers[t].clone()).collect();
        let v = &self.v;
        Algebra::from_fn(&format!("{}[{}]", self.name, self.w.sig.sorts[t]), v.sig.clone(), carriers, |op, args| {
            let decl = &v.sig.ops[op];
            let radices: Vec<usize> = decl.inputs.iter().map(|&i| self.components[i].size(t)).collect();
            Ok(self.ops[op].maps[t][encode(&radices, args)])
        })
    }
}

/// `Hom_W(X, A(s))` per V-sort with the pointwise V-operations.
#[derive(Debug, Clone)]
pub struct HomAlgebra {
    pub algebra: Arc<Algebra>,
    /// Per V-sort, the W-homs in carrier order.
    pub homs: Vec<Vec<Hom>>,
}

pub fn hom_algebra_contra(aobj: &VAlgebraObject, x: &Arc<Algebra>) -> Result<HomAlgebra> {
    let v = &aobj.v;
    let homs: Vec<Vec<Hom>> = aobj
        .components
        .iter()
        .map(|c| enumerate_homs(x, c))
        .collect::<Result<_>>()?;
    let index: Vec<HashMap<Vec<Vec<Elt>>, Elt>> = homs
        .iter()
        .map(|hs| hs.iter().enumerate().map(|(k, h)| (h.maps.clone(), k)).collect())
        .collect();
    let carriers: Vec<Vec<String>> = homs
        .iter()
        .map(|hs| hs.iter().map(|h| hom_label(h)).collect())
        .collect();
    let wsorts = aobj.w.sig.num_sorts();
    let alg = Algebra::from_fn(&format!("Hom({},{})", x.name, aobj.name), v.sig.clone(), carriers, |op, args| {
        let decl = &v.sig.ops[op];
        let mut maps = Vec::with_capacity(wsorts);
        for t in 0..wsorts {
            let radices: Vec<usize> = decl.inputs.iter().map(|&i| aobj.components[i].size(t)).collect();
            let m: Vec<Elt> = (0..x.size(t))
                .map(|p| {
                    let tuple: Vec<Elt> =
                        args.iter().enumerate().map(|(k, &f)| homs[decl.inputs[k]][f].maps[t][p]).collect();
                    aobj.ops[op].maps[t][encode(&radices, &tuple)]
                })
                .collect();
            maps.push(m);
        }
        index[decl.output]
            .get(&maps)
            .copied()
            .ok_or_else(|| Error::Failed("pointwise operation left the hom-set".into()))
    })?;
    Ok(HomAlgebra { algebra: Arc::new(alg), homs })
}

/// Compact label `[a b c]` (sorts separated by `|`).
pub fn hom_label(h: &Hom) -> String {
    let parts: Vec<String> = h
        .maps
        .iter()
        .enumerate()
        .map(|(s, m)| m.iter().map(|&y| h.dst.label(s, y).to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", parts.join(" | "))
}

/// Precomposition with `g: X → X'` as a V-hom `Hom(X', A) → Hom(X, A)`.
pub fn hom_algebra_contra_map(aobj: &VAlgebraObject, g: &Hom) -> Result<(HomAlgebra, HomAlgebra, Hom)> {
    let src = hom_algebra_contra(aobj, &g.dst)?;
    let dst = hom_algebra_contra(aobj, &g.src)?;
    let maps = src
        .homs
        .iter()
        .enumerate()
        .map(|(s, hs)| {
            let idx: HashMap<&Vec<Vec<Elt>>, Elt> =
                dst.homs[s].iter().enumerate().map(|(k, h)| (&h.maps, k)).collect();
            hs.iter().map(|h| idx[&h.compose(g).maps]).collect()
        })
        .collect();
    let h = Hom::new(src.algebra.clone(), dst.algebra.clone(), maps)?;
    Ok((src, dst, h))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::finalg::count_homs;
    use crate::kernel::{check_identity, Identity};

    pub(crate) fn ab2_variety() -> Arc<Variety> {
        let sig = Arc::new(Signature::new("Ab2", &["s"], &[("zero", &[], "s"), ("add", &["s", "s"], "s")]).unwrap());
        let z2 = Arc::new(
            Algebra::from_fn("Z2", sig.clone(), vec![vec!["e0".into(), "e1".into()]], |op, a| {
                Ok(if op == 0 { 0 } else { a[0] ^ a[1] })
            })
            .unwrap(),
        );
        let v = |n: &str| Term::var(n);
        let add = |a: Term, b: Term| Term::app("add", vec![a, b]);
        let mk = |vars: &[&str], l: Term, r: Term| {
            check_identity(
                &sig,
                &Identity { name: "i".into(), vars: vars.iter().map(|x| (x.to_string(), "s".into())).collect(), lhs: l, rhs: r },
            )
            .unwrap()
        };
        let ids = vec![
            mk(&["x", "y", "z"], add(add(v("x"), v("y")), v("z")), add(v("x"), add(v("y"), v("z")))),
            mk(&["x", "y"], add(v("x"), v("y")), add(v("y"), v("x"))),
            mk(&["x"], add(v("x"), Term::app("zero", vec![])), v("x")),
            mk(&["x"], add(v("x"), v("x")), Term::app("zero", vec![])),
        ];
        Arc::new(Variety::new("Vec2", sig, ids, vec![z2]).unwrap())
    }

    #[test]
    fn free_sizes() {
        let v = ab2_variety();
        let sizes: Vec<usize> = (0..4).map(|n| v.free(&SortedSet::uniform("x", n, 0)).unwrap().algebra.size(0)).collect();
        assert_eq!(sizes, vec![1, 2, 4, 8]);
    }

    #[test]
    fn extension_and_counts() {
        let v = ab2_variety();
        let f = v.free(&SortedSet::uniform("x", 2, 0)).unwrap();
        let v1 = v.generators[0].clone();
        assert_eq!(count_homs(&f.algebra, &v1).unwrap(), 4);
        let id = universal_extension(&f, &f.algebra, &f.unit).unwrap();
        assert_eq!(id, Hom::identity(&f.algebra));
    }

    #[test]
    fn presentation_collapses() {
        let v = ab2_variety();
        let gens = SortedSet::uniform("x", 2, 0);
        let p = Presentation { variety: v, gens, relations: vec![(Term::var("x0"), Term::var("x1"))] };
        assert_eq!(finitely_presented(&p).unwrap().algebra.size(0), 2);
    }

    #[test]
    fn coproduct_of_free() {
        let v = ab2_variety();
        let f2 = v.free(&SortedSet::uniform("x", 2, 0)).unwrap().algebra.clone();
        let f3 = v.free(&SortedSet::uniform("y", 3, 0)).unwrap().algebra.clone();
        let c = coproduct(&v, &[f2.clone(), f3]).unwrap();
        assert_eq!(c.algebra.size(0), 32);
        let init = v.initial().unwrap().algebra.clone();
        let c = coproduct(&v, &[f2.clone(), init]).unwrap();
        assert_eq!(c.algebra.size(0), 4);
        assert!(c.injections[0].is_bijective());
    }
}
