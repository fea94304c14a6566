//! Co-V-algebra objects: components in an ambient variety W with
//! co-operations into finite coproducts, co-evaluation of terms, and the
//! covariant hom-lift.

use crate::error::{failed, invalid, Error, Result};
use crate::finalg::{enumerate_homs, evaluate, extend_from_generators, Algebra, Elt, Hom};
use crate::kernel::{compile, dsl, CTerm, CheckedIdentity, SortedSet, Term};
use crate::variety::{coproduct, greedy_generators, hom_label, Coproduct, HomAlgebra, Variety};
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Builds the co-operation for an op on demand.
pub type CoopRecipe = Box<dyn Fn(&CoVObject, usize) -> Result<Hom> + Send + Sync>;

/// Co-operation images of the generators of `component(o)` as terms over
/// the generators of the op's coproduct.
#[derive(Debug, Clone)]
pub struct CoopTerms {
    pub terms: Vec<CTerm>,
    /// Per coproduct generator: `(summand, index among that component's generators)`.
    pub origins: Vec<(usize, usize)>,
}

pub struct CoVObject {
    pub name: String,
    pub v: Arc<Variety>,
    pub w: Arc<Variety>,
    /// Per V-sort, a W-algebra with recorded generators.
    pub components: Vec<Arc<Algebra>>,
    recipe: Option<CoopRecipe>,
    coops: Vec<OnceLock<Hom>>,
    terms: Vec<OnceLock<Arc<CoopTerms>>>,
    coproducts: Mutex<HashMap<Vec<usize>, Arc<Coproduct>>>,
}

impl fmt::Debug for CoVObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoVObject({}: {} in {})", self.name, self.v.name, self.w.name)
    }
}

fn with_gens(a: &Arc<Algebra>) -> Result<Arc<Algebra>> {
    if a.generators.is_some() {
        return Ok(a.clone());
    }
    let g = greedy_generators(a)?;
    Ok(Arc::new((**a).clone().with_generators(g)?))
}

impl CoVObject {
    fn bare(name: &str, v: Arc<Variety>, w: Arc<Variety>, components: Vec<Arc<Algebra>>, check: bool) -> Result<CoVObject> {
        if components.len() != v.sig.num_sorts() {
            return invalid(format!("co-object {name}: one component per sort of {} expected", v.name));
        }
        for c in components.iter().filter(|_| check) {
            if !w.contains(c)? {
                return invalid(format!("co-object {name}: component {} is not in {}", c.name, w.name));
            }
        }
        let components = components.iter().map(with_gens).collect::<Result<Vec<_>>>()?;
        let nops = v.sig.ops.len();
        Ok(CoVObject {
            name: name.to_string(),
            v,
            w,
            components,
            recipe: None,
            coops: (0..nops).map(|_| OnceLock::new()).collect(),
            terms: (0..nops).map(|_| OnceLock::new()).collect(),
            coproducts: Mutex::new(HashMap::new()),
        })
    }

    /// Co-operations given by images of each component generator in the
    /// op's coproduct; extended and validated as W-homs.
    pub fn from_images(
        name: &str,
        v: Arc<Variety>,
        w: Arc<Variety>,
        components: Vec<Arc<Algebra>>,
        images: Vec<Vec<Elt>>,
    ) -> Result<CoVObject> {
        let b = CoVObject::bare(name, v, w, components, true)?;
        if images.len() != b.v.sig.ops.len() {
            return invalid(format!("co-object {name}: one image list per operation expected"));
        }
        for (op, imgs) in images.iter().enumerate() {
            let c = b.op_coproduct(op)?;
            let src = &b.components[b.v.sig.ops[op].output];
            let h = extend_from_generators(src, &c.algebra, imgs).map_err(|e| {
                Error::Failed(format!("co-object {name}: co-operation {} invalid: {e}", b.v.sig.ops[op].symbol))
            })?;
            let _ = b.coops[op].set(h);
        }
        Ok(b)
    }

    /// Co-operations computed on first use. Components are taken to lie in
    /// `w` already, as they do for presented algebras.
    pub fn lazy(
        name: &str,
        v: Arc<Variety>,
        w: Arc<Variety>,
        components: Vec<Arc<Algebra>>,
        recipe: CoopRecipe,
    ) -> Result<CoVObject> {
        let mut b = CoVObject::bare(name, v, w, components, false)?;
        b.recipe = Some(recipe);
        Ok(b)
    }

    pub fn num_sorts(&self) -> usize {
        self.components.len()
    }

    pub fn generators(&self, sort: usize) -> &[(usize, Elt)] {
        self.components[sort].generators.as_deref().unwrap_or(&[])
    }

    /// The coproduct of the components named by `word`, cached.
    pub fn coproduct_of(&self, word: &[usize]) -> Result<Arc<Coproduct>> {
        if let Some(c) = self.coproducts.lock().unwrap().get(word) {
            return Ok(c.clone());
        }
        let summands: Vec<Arc<Algebra>> = word.iter().map(|&i| self.components[i].clone()).collect();
        let c = Arc::new(coproduct(&self.w, &summands)?);
        Ok(self.coproducts.lock().unwrap().entry(word.to_vec()).or_insert(c).clone())
    }

    pub fn op_coproduct(&self, op: usize) -> Result<Arc<Coproduct>> {
        self.coproduct_of(&self.v.sig.ops[op].inputs)
    }

    /// The co-operation `component(o) → ∐_j component(i_j)`.
    pub fn coop(&self, op: usize) -> Result<Hom> {
        if let Some(h) = self.coops[op].get() {
            return Ok(h.clone());
        }
        let recipe = self
            .recipe
            .as_ref()
            .ok_or_else(|| Error::Invalid(format!("co-object {}: co-operation {op} missing", self.name)))?;
        let h = recipe(self, op)?;
        Ok(self.coops[op].get_or_init(|| h).clone())
    }

    pub fn coop_terms(&self, op: usize) -> Result<Arc<CoopTerms>> {
        if let Some(t) = self.terms[op].get() {
            return Ok(t.clone());
        }
        let h = self.coop(op)?;
        let c = self.op_coproduct(op)?;
        let o = self.v.sig.ops[op].output;
        let terms = self
            .generators(o)
            .iter()
            .map(|&(s, g)| c.algebra.derivation_cterm(s, h.apply(s, g)).expect("coproduct has generators"))
            .collect();
        let origins = c
            .origins
            .iter()
            .map(|&(j, s, e)| {
                let comp = self.v.sig.ops[op].inputs[j];
                let k = self.generators(comp).iter().position(|&g| g == (s, e)).expect("origin is a generator");
                (j, k)
            })
            .collect();
        let t = Arc::new(CoopTerms { terms, origins });
        Ok(self.terms[op].get_or_init(|| t).clone())
    }

    /// Forces every co-operation and checks co-satisfaction of the identities.
    pub fn validate(&self) -> Result<()> {
        for op in 0..self.v.sig.ops.len() {
            self.coop(op)?;
        }
        for id in &self.v.identities {
            if let Some(w) = co_satisfies(self, id)? {
                return failed(format!("co-object {} does not co-satisfy {}: {w}", self.name, id.source.name));
            }
        }
        Ok(())
    }

    /// A copy with one co-operation replaced, for constructing negatives.
    pub fn with_coop(&self, op: usize, h: Hom) -> Result<CoVObject> {
        let b = CoVObject::bare(&self.name, self.v.clone(), self.w.clone(), self.components.clone(), false)?;
        for k in 0..self.v.sig.ops.len() {
            let _ = b.coops[k].set(if k == op { h.clone() } else { self.coop(k)? });
        }
        Ok(b)
    }
}

/// Value of a term over `label@j` variables in a coproduct.
pub fn eval_coproduct_term(c: &Coproduct, t: &Term) -> Result<(usize, Elt)> {
    match t {
        Term::Var(v) => {
            let (label, j) = dsl::split_coproduct_var(v)
                .ok_or_else(|| Error::Invalid(format!("coproduct variable `{v}` must be label@summand")))?;
            let summand = c
                .summands
                .get(j)
                .ok_or_else(|| Error::Invalid(format!("summand {j} out of range in `{v}`")))?;
            let (s, e) = summand.find_any(label)?;
            Ok((s, c.injections[j].apply(s, e)))
        }
        Term::App(sym, args) => {
            let sig = &c.algebra.sig;
            let op = sig.op_index(sym)?;
            let decl = &sig.ops[op];
            if args.len() != decl.inputs.len() {
                return invalid(format!("{sym} expects {} arguments", decl.inputs.len()));
            }
            let mut vals = Vec::new();
            for (k, a) in args.iter().enumerate() {
                let (s, x) = eval_coproduct_term(c, a)?;
                if s != decl.inputs[k] {
                    return Err(Error::IllSorted { path: format!("argument {} of {sym}", k + 1), msg: "sort mismatch".into() });
                }
                vals.push(x);
            }
            Ok((decl.output, c.algebra.apply(op, &vals)))
        }
    }
}

/// The W-hom `component(sort t) → ∐_{x∈S} component(sort x)` induced by `t`.
pub fn co_evaluate(b: &CoVObject, vars: &SortedSet, t: &CTerm) -> Result<Hom> {
    let word: Vec<usize> = vars.entries.iter().map(|(_, s)| *s).collect();
    let target = b.coproduct_of(&word)?;
    co_eval(b, &target, t)
}

fn co_eval(b: &CoVObject, target: &Arc<Coproduct>, t: &CTerm) -> Result<Hom> {
    match t {
        CTerm::Var(k) => Ok(target.injections[*k].clone()),
        CTerm::App(op, args) => {
            let inner = args.iter().map(|a| co_eval(b, target, a)).collect::<Result<Vec<_>>>()?;
            let c = b.op_coproduct(*op)?;
            let fold = c.fold(&inner, &target.algebra)?;
            Ok(fold.compose(&b.coop(*op)?))
        }
    }
}

/// `None` if `b` co-satisfies `id`, else the first generator where the two
/// co-evaluations differ.
pub fn co_satisfies(b: &CoVObject, id: &CheckedIdentity) -> Result<Option<String>> {
    let l = co_evaluate(b, &id.vars, &id.lhs)?;
    let r = co_evaluate(b, &id.vars, &id.rhs)?;
    for &(s, g) in b.generators(id.sort) {
        let (x, y) = (l.apply(s, g), r.apply(s, g));
        if x != y {
            return Ok(Some(format!(
                "generator {} maps to {} and {}",
                b.components[id.sort].label(s, g),
                l.dst.label(s, x),
                l.dst.label(s, y)
            )));
        }
    }
    Ok(None)
}

/// Checks an unchecked identity against a co-object.
pub fn co_satisfies_identity(b: &CoVObject, vars: &SortedSet, lhs: &Term, rhs: &Term) -> Result<Option<String>> {
    let (l, sl) = compile(&b.v.sig, vars, lhs)?;
    let (r, sr) = compile(&b.v.sig, vars, rhs)?;
    if sl != sr {
        return invalid("identity sides have different sorts");
    }
    let id = CheckedIdentity {
        source: crate::kernel::Identity { name: "probe".into(), vars: vec![], lhs: lhs.clone(), rhs: rhs.clone() },
        vars: vars.clone(),
        lhs: l,
        rhs: r,
        sort: sl,
    };
    co_satisfies(b, &id)
}

/// `Hom_W(component(i), X)` per sort, with `ω` acting by fold ∘ co-operation.
pub fn hom_cov(b: &CoVObject, x: &Arc<Algebra>) -> Result<HomAlgebra> {
    let v = &b.v;
    let homs: Vec<Vec<Hom>> = b.components.iter().map(|c| enumerate_homs(c, x)).collect::<Result<_>>()?;
    let gen_index: Vec<HashMap<Vec<Elt>, Elt>> = homs
        .iter()
        .enumerate()
        .map(|(i, hs)| {
            hs.iter()
                .enumerate()
                .map(|(k, h)| (b.generators(i).iter().map(|&(s, g)| h.apply(s, g)).collect(), k))
                .collect()
        })
        .collect();
    let terms = (0..v.sig.ops.len()).map(|op| b.coop_terms(op)).collect::<Result<Vec<_>>>()?;
    let carriers: Vec<Vec<String>> = homs.iter().map(|hs| hs.iter().map(hom_label).collect()).collect();
    let alg = Algebra::from_fn(&format!("Hom({},{})", b.name, x.name), v.sig.clone(), carriers, |op, args| {
        let decl = &v.sig.ops[op];
        let t = &terms[op];
        let asg: Vec<Elt> = t
            .origins
            .iter()
            .map(|&(j, k)| {
                let (s, g) = b.generators(decl.inputs[j])[k];
                homs[decl.inputs[j]][args[j]].apply(s, g)
            })
            .collect();
        let images: Vec<Elt> = t.terms.iter().map(|term| evaluate(x, term, &asg)).collect();
        gen_index[decl.output]
            .get(&images)
            .copied()
            .ok_or_else(|| Error::Failed("fold of a co-operation is not a hom".into()))
    })?;
    Ok(HomAlgebra { algebra: Arc::new(alg), homs })
}

/// Postcomposition with `g: X → X'` as a V-hom `hom_cov(B,X) → hom_cov(B,X')`.
pub fn hom_cov_map(b: &CoVObject, g: &Hom) -> Result<(HomAlgebra, HomAlgebra, Hom)> {
    let src = hom_cov(b, &g.src)?;
    let dst = hom_cov(b, &g.dst)?;
    let maps = src
        .homs
        .iter()
        .enumerate()
        .map(|(s, hs)| {
            let idx: HashMap<&Vec<Vec<Elt>>, Elt> = dst.homs[s].iter().enumerate().map(|(k, h)| (&h.maps, k)).collect();
            hs.iter().map(|h| idx[&g.compose(h).maps]).collect()
        })
        .collect();
    let h = Hom::new(src.algebra.clone(), dst.algebra.clone(), maps)?;
    Ok((src, dst, h))
}

/// The unit object: `F_V(x)` on one generator per sort with
/// `ω ↦ ω(ι_1 x, …, ι_n x)`.
pub fn unit_object(v: &Arc<Variety>) -> Result<CoVObject> {
    let mut components = Vec::new();
    for (s, name) in v.sig.sorts.iter().enumerate() {
        let f = v.free(&SortedSet::new(vec![(format!("x_{name}"), s)])?)?;
        components.push(Arc::new((*f.algebra).clone().renamed(&format!("I_{name}"))));
    }
    let b = CoVObject::bare(&format!("I_{}", v.name), v.clone(), v.clone(), components, false)?;
    for (op, decl) in v.sig.ops.iter().enumerate() {
        let c = b.op_coproduct(op)?;
        let args: Vec<Elt> = decl
            .inputs
            .iter()
            .enumerate()
            .map(|(j, &i)| {
                let (s, g) = b.generators(i)[0];
                c.injections[j].apply(s, g)
            })
            .collect();
        let img = c.algebra.apply(op, &args);
        let h = extend_from_generators(&b.components[decl.output], &c.algebra, &[img])?;
        let _ = b.coops[op].set(h);
    }
    Ok(b)
}

/// A per-sort family of W-homs between co-objects.
#[derive(Debug, Clone)]
pub struct CoVMorphism {
    pub src: Arc<CoVObject>,
    pub dst: Arc<CoVObject>,
    pub maps: Vec<Hom>,
}

impl PartialEq for CoVMorphism {
    fn eq(&self, o: &Self) -> bool {
        self.maps == o.maps
    }
}

impl CoVMorphism {
    /// Checks that every co-operation square commutes.
    pub fn new(src: Arc<CoVObject>, dst: Arc<CoVObject>, maps: Vec<Hom>) -> Result<CoVMorphism> {
        let m = CoVMorphism::new_unchecked(src, dst, maps)?;
        if let Some(w) = m.intertwining_violation()? {
            return failed(format!("{} -> {} does not intertwine co-operations: {w}", m.src.name, m.dst.name));
        }
        Ok(m)
    }

    /// Only shapes are checked; co-operations are left alone.
    pub fn new_unchecked(src: Arc<CoVObject>, dst: Arc<CoVObject>, maps: Vec<Hom>) -> Result<CoVMorphism> {
        if maps.len() != src.num_sorts() || dst.num_sorts() != src.num_sorts() {
            return invalid("co-object morphism: one map per sort expected");
        }
        for (i, h) in maps.iter().enumerate() {
            if h.src.sizes() != src.components[i].sizes() || h.dst.sizes() != dst.components[i].sizes() {
                return invalid(format!("co-object morphism: map {i} has the wrong shape"));
            }
        }
        Ok(CoVMorphism { src, dst, maps })
    }

    /// Builds the maps from images of each component's generators.
    pub fn from_images(src: Arc<CoVObject>, dst: Arc<CoVObject>, images: &[Vec<Elt>]) -> Result<CoVMorphism> {
        let maps = (0..src.num_sorts())
            .map(|i| extend_from_generators(&src.components[i], &dst.components[i], &images[i]))
            .collect::<Result<Vec<_>>>()?;
        CoVMorphism::new(src, dst, maps)
    }

    pub fn identity(b: &Arc<CoVObject>) -> CoVMorphism {
        CoVMorphism { src: b.clone(), dst: b.clone(), maps: b.components.iter().map(Hom::identity).collect() }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &CoVMorphism) -> CoVMorphism {
        CoVMorphism {
            src: first.src.clone(),
            dst: self.dst.clone(),
            maps: self.maps.iter().zip(&first.maps).map(|(g, f)| g.compose(f)).collect(),
        }
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(Hom::is_bijective)
    }

    /// First generator where `ω^dst ∘ f_o` and `(∐ f) ∘ ω^src` differ.
    pub fn intertwining_violation(&self) -> Result<Option<String>> {
        let (src, dst) = (&self.src, &self.dst);
        for (op, decl) in src.v.sig.ops.iter().enumerate() {
            let ws = src.coop(op)?;
            let wd = dst.coop(op)?;
            let cs = src.op_coproduct(op)?;
            let cd = dst.op_coproduct(op)?;
            let o = decl.output;
            let image = |j: usize, s: usize, e: Elt| cd.injections[j].apply(s, self.maps[decl.inputs[j]].apply(s, e));
            let mut memo = HashMap::new();
            for &(s, g) in src.generators(o) {
                let lhs = wd.apply(s, self.maps[o].apply(s, g));
                let rhs = cs.fold_element(s, ws.apply(s, g), &cd.algebra, &image, &mut memo);
                if lhs != rhs {
                    return Ok(Some(format!(
                        "co-operation {} at generator {}",
                        decl.symbol,
                        src.components[o].label(s, g)
                    )));
                }
            }
        }
        Ok(None)
    }

    /// First sort and generator where two parallel morphisms differ.
    pub fn difference(&self, other: &CoVMorphism) -> Option<String> {
        for (i, (f, g)) in self.maps.iter().zip(&other.maps).enumerate() {
            for &(s, e) in self.src.generators(i) {
                if f.apply(s, e) != g.apply(s, e) {
                    return Some(format!(
                        "sort {} generator {}: {} vs {}",
                        self.src.v.sig.sorts[i],
                        self.src.components[i].label(s, e),
                        f.dst.label(s, f.apply(s, e)),
                        g.dst.label(s, g.apply(s, e))
                    ));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::tests::ab2_variety;

    #[test]
    fn unit_object_represents_identity() {
        let v = ab2_variety();
        let i = unit_object(&v).unwrap();
        i.validate().unwrap();
        let x = v.free(&SortedSet::uniform("x", 2, 0)).unwrap().algebra.clone();
        let h = hom_cov(&i, &x).unwrap();
        assert_eq!(h.algebra.size(0), 4);
        assert!(v.contains(&h.algebra).unwrap());
    }

    #[test]
    fn corrupted_coaddition_fails() {
        let v = ab2_variety();
        let i = unit_object(&v).unwrap();
        let add = v.sig.op_index("add").unwrap();
        let c = i.op_coproduct(add).unwrap();
        let bad = extend_from_generators(&i.components[0], &c.algebra, &[c.injections[0].apply(0, 0)]).unwrap();
        let j = i.with_coop(add, bad).unwrap();
        assert!(j.validate().is_err());
    }
}
