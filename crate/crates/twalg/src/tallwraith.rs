//! The composition product ⊡ through the left adjoint of the covariant
//! hom-lift, its unit and associator, Tall–Wraith monoids and modules, and
//! the operations monoid of an algebra in finite sets.

use crate::coalg::{hom_cov, unit_object, CoVMorphism, CoVObject, CoopRecipe};
use crate::error::{failed, invalid, Error, Result};
use crate::finalg::{
    count_homs, enumerate_homs, evaluate, extend_from_generators, product, Algebra, Elt, Hom, Step,
};
use crate::kernel::SortedSet;
use crate::variety::{
    coproduct, greedy_generators, hom_algebra_contra, present_by_pairs, Coproduct, HomAlgebra, Presented,
    VAlgebraObject, Variety,
};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Images `[a, y]` for every generator `y` of `B(sort a)`, computed along the
/// derivation of `a` from the brackets of generators.
struct Brackets<'a> {
    b: &'a CoVObject,
    a: &'a Algebra,
    target: &'a Algebra,
    base: &'a dyn Fn(usize, usize) -> Elt,
    memo: HashMap<(usize, Elt), Arc<Vec<Elt>>>,
}

impl Brackets<'_> {
    fn row(&mut self, s: usize, e: Elt) -> Result<Arc<Vec<Elt>>> {
        if let Some(r) = self.memo.get(&(s, e)) {
            return Ok(r.clone());
        }
        let d = self
            .a
            .derivation()
            .ok_or_else(|| Error::Invalid(format!("algebra {} has no recorded generators", self.a.name)))?;
        let row: Vec<Elt> = match &d.steps[s][e] {
            Step::Gen(k) => (0..self.b.generators(s).len()).map(|y| (self.base)(*k, y)).collect(),
            Step::App(op, args) => {
                let ins = self.a.sig.ops[*op].inputs.clone();
                let rows = args
                    .iter()
                    .enumerate()
                    .map(|(k, &x)| self.row(ins[k], x))
                    .collect::<Result<Vec<_>>>()?;
                let t = self.b.coop_terms(*op)?;
                let asg: Vec<Elt> = t.origins.iter().map(|&(j, k)| rows[j][k]).collect();
                t.terms.iter().map(|term| evaluate(self.target, term, &asg)).collect()
            }
        };
        let row = Arc::new(row);
        self.memo.insert((s, e), row.clone());
        Ok(row)
    }
}

/// The left adjoint of `hom_cov(B, −)` applied to a V-algebra `A`.
#[derive(Debug)]
pub struct Ladj {
    pub b: Arc<CoVObject>,
    pub a: Arc<Algebra>,
    pub pres: Presented,
    /// Per presentation generator: (index among A's generators, index among
    /// the generators of `B(sort)`).
    pub gen_keys: Vec<(usize, usize)>,
    lookup: HashMap<(usize, usize), usize>,
    /// `rows[s][a][y]` = `[a, y]` for generators `y` of `B(s)`.
    rows: Vec<Vec<Vec<Elt>>>,
    bracket_homs: Mutex<HashMap<(usize, Elt), Hom>>,
}

impl Ladj {
    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.pres.algebra
    }

    /// The element `⟨g, y⟩` for generator indices.
    pub fn gen(&self, g: usize, y: usize) -> Elt {
        self.pres.gen_element(self.lookup[&(g, y)])
    }

    pub fn gen_sort(&self, k: usize) -> usize {
        self.pres.free.gens.sort_of(k)
    }

    /// `[a, y]` for the y-th generator of `B(s)`.
    pub fn bracket_gen(&self, s: usize, a: Elt, y: usize) -> Elt {
        self.rows[s][a][y]
    }

    /// The W-hom `[a, −]: B(s) → L(A)`.
    pub fn bracket_hom(&self, s: usize, a: Elt) -> Result<Hom> {
        if let Some(h) = self.bracket_homs.lock().unwrap().get(&(s, a)) {
            return Ok(h.clone());
        }
        let h = extend_from_generators(&self.b.components[s], self.algebra(), &self.rows[s][a])?;
        self.bracket_homs.lock().unwrap().insert((s, a), h.clone());
        Ok(h)
    }

    /// `[a, y]` for an arbitrary element `y` of `B(s)` (at W-sort `t`).
    pub fn bracket(&self, s: usize, a: Elt, t: usize, y: Elt) -> Result<Elt> {
        Ok(self.bracket_hom(s, a)?.apply(t, y))
    }

    /// The W-hom out of `L(A)` with `⟨g, y⟩ ↦ image(g, y)`.
    pub fn extend(&self, x: &Arc<Algebra>, image: impl Fn(usize, usize) -> Elt) -> Result<Hom> {
        let images: Vec<Elt> = self.gen_keys.iter().map(|&(g, y)| image(g, y)).collect();
        self.pres.extend(x, &images)
    }

    /// `ψ ↦ (a ↦ ψ ∘ [a, −])`, a V-hom `A → hom_cov(B, X)`.
    pub fn transpose(&self, psi: &Hom, hc: &HomAlgebra) -> Result<Hom> {
        self.transpose_indexed(psi, hc, &gen_image_index(&self.b, hc))
    }

    /// [`Ladj::transpose`] over many homs into the same `X`.
    pub fn transposes(&self, psis: &[Hom], hc: &HomAlgebra) -> Result<Vec<Hom>> {
        let index = gen_image_index(&self.b, hc);
        psis.iter().map(|psi| self.transpose_indexed(psi, hc, &index)).collect()
    }

    fn transpose_indexed(&self, psi: &Hom, hc: &HomAlgebra, index: &[HashMap<Vec<Elt>, Elt>]) -> Result<Hom> {
        let maps = (0..self.a.num_sorts())
            .map(|s| {
                (0..self.a.size(s))
                    .map(|a| {
                        let imgs: Vec<Elt> = self.b.generators(s).iter().enumerate().map(|(y, &(t, _))| {
                            psi.apply(t, self.rows[s][a][y])
                        }).collect();
                        index[s].get(&imgs).copied().ok_or_else(|| Error::Failed("transpose left the hom-set".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Hom::new(self.a.clone(), hc.algebra.clone(), maps)
    }

    /// Inverse of [`Ladj::transpose`].
    pub fn untranspose(&self, phi: &Hom, hc: &HomAlgebra, x: &Arc<Algebra>) -> Result<Hom> {
        let gens = self.a.generators.clone().unwrap_or_default();
        self.extend(x, |g, y| {
            let (s, a) = gens[g];
            let (t, yy) = self.b.generators(s)[y];
            hc.homs[s][phi.apply(s, a)].apply(t, yy)
        })
    }
}

/// Per sort, generator images of each hom in a `hom_cov` carrier.
fn gen_image_index(b: &CoVObject, hc: &HomAlgebra) -> Vec<HashMap<Vec<Elt>, Elt>> {
    hc.homs
        .iter()
        .enumerate()
        .map(|(s, hs)| {
            hs.iter()
                .enumerate()
                .map(|(k, h)| (b.generators(s).iter().map(|&(t, y)| h.apply(t, y)).collect(), k))
                .collect()
        })
        .collect()
}

/// The coproduct of one copy of `B(sort x)` per element `x` of `s`.
pub fn ladj_underlying(b: &CoVObject, s: &SortedSet) -> Result<Coproduct> {
    let summands: Vec<Arc<Algebra>> = s.entries.iter().map(|(_, i)| b.components[*i].clone()).collect();
    coproduct(&b.w, &summands)
}

fn with_generators(a: &Arc<Algebra>) -> Result<Arc<Algebra>> {
    if a.generators.is_some() {
        return Ok(a.clone());
    }
    Ok(Arc::new((**a).clone().with_generators(greedy_generators(a)?)?))
}

/// Presents `L(A)` on `⟨g, y⟩` (g a generator of A, y a generator of
/// `B(sort g)`), with the relations of each copy of `B` and, for every table
/// entry `ω(a_1..a_n) = a` of A, `[a, y] = fold_j [a_j, −] (ω^B(y))`.
pub fn ladj_apply(b: &Arc<CoVObject>, a: &Arc<Algebra>) -> Result<Ladj> {
    if a.sig != b.v.sig {
        return invalid(format!("ladj: {} is not an algebra over {}", a.name, b.v.sig.name));
    }
    let a = with_generators(a)?;
    let agens = a.generators.clone().unwrap_or_default();
    let mut entries = Vec::new();
    let mut gen_keys = Vec::new();
    for (g, &(s, ae)) in agens.iter().enumerate() {
        for (y, &(t, ye)) in b.generators(s).iter().enumerate() {
            let name = format!("<{},{}>", a.label(s, ae), b.components[s].label(t, ye));
            entries.push((short_name(&name, entries.len()), t));
            gen_keys.push((g, y));
        }
    }
    let lookup: HashMap<(usize, usize), usize> = gen_keys.iter().enumerate().map(|(k, &key)| (key, k)).collect();
    let gens = SortedSet::new(entries)?;
    let mut rows_f: Vec<Vec<Arc<Vec<Elt>>>> = Vec::new();
    let pres = present_by_pairs(&b.w, &gens, |f| {
        let fa = &f.algebra;
        let mut pairs = Vec::new();
        // Copy relations: each ⟨g, −⟩ respects the table of B(sort g).
        for (g, &(s, _)) in agens.iter().enumerate() {
            let comp = &b.components[s];
            let imgs: Vec<Elt> = (0..b.generators(s).len()).map(|y| f.unit[lookup[&(g, y)]]).collect();
            let w = comp.eval_derivation(&imgs, |op, args| Ok(fa.apply(op, args)))?;
            let mut buf = Vec::new();
            for (op, decl) in comp.sig.ops.iter().enumerate() {
                comp.for_each_cell(op, |args, out| {
                    buf.clear();
                    buf.extend(args.iter().enumerate().map(|(k, &x)| w[decl.inputs[k]][x]));
                    pairs.push((decl.output, fa.apply(op, &buf), w[decl.output][out]));
                });
            }
        }
        let base = |k: usize, y: usize| f.unit[lookup[&(k, y)]];
        let mut br = Brackets { b, a: &a, target: fa, base: &base, memo: HashMap::new() };
        let mut rows: Vec<Vec<Arc<Vec<Elt>>>> = Vec::new();
        for s in 0..a.num_sorts() {
            rows.push((0..a.size(s)).map(|e| br.row(s, e)).collect::<Result<_>>()?);
        }
        for (op, decl) in a.sig.ops.iter().enumerate() {
            let t = b.coop_terms(op)?;
            a.for_each_cell(op, |args, out| {
                let asg: Vec<Elt> = t.origins.iter().map(|&(j, k)| rows[decl.inputs[j]][args[j]][k]).collect();
                for (y, term) in t.terms.iter().enumerate() {
                    let (ws, _) = b.generators(decl.output)[y];
                    let lhs = rows[decl.output][out][y];
                    let rhs = evaluate(fa, term, &asg);
                    if lhs != rhs {
                        pairs.push((ws, lhs, rhs));
                    }
                }
            });
        }
        rows_f = rows;
        Ok(pairs)
    })?;
    let q = &pres.quotient;
    let rows = rows_f
        .iter()
        .enumerate()
        .map(|(s, per_a)| {
            per_a
                .iter()
                .map(|row| row.iter().enumerate().map(|(y, &x)| q.apply(b.generators(s)[y].0, x)).collect())
                .collect()
        })
        .collect();
    let name = format!("L_{}({})", b.name, a.name);
    let pres = Presented { algebra: Arc::new((*pres.algebra).clone().renamed(&name)), ..pres };
    Ok(Ladj { b: b.clone(), a, pres, gen_keys, lookup, rows, bracket_homs: Mutex::new(HashMap::new()) })
}

/// Long generator labels are replaced by a positional name.
fn short_name(name: &str, k: usize) -> String {
    if name.len() <= 40 {
        name.to_string()
    } else {
        format!("g{k}")
    }
}

/// `B1 ⊡ B2` with the presentation data of every component.
#[derive(Debug, Clone)]
pub struct TwProduct {
    pub left: Arc<CoVObject>,
    pub right: Arc<CoVObject>,
    pub obj: Arc<CoVObject>,
    pub ladjs: Vec<Arc<Ladj>>,
}

/// The composition product; co-operations are built on first use.
pub fn twprod(b1: &Arc<CoVObject>, b2: &Arc<CoVObject>) -> Result<TwProduct> {
    if !Arc::ptr_eq(&b1.w, &b1.v) && b1.w.name != b1.v.name {
        return invalid(format!("twprod: left factor {} must be a co-object in {}", b1.name, b1.v.name));
    }
    if b2.v.sig != b1.v.sig {
        return invalid("twprod: factors are over different varieties");
    }
    let ladjs = b1
        .components
        .iter()
        .map(|c| ladj_apply(b2, c).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let components = ladjs.iter().map(|l| l.algebra().clone()).collect();
    let (l1, ls) = (b1.clone(), ladjs.clone());
    let recipe: CoopRecipe = Box::new(move |obj, op| twprod_coop(&l1, &ls, obj, op));
    let obj = CoVObject::lazy(&format!("{}*{}", b1.name, b2.name), b1.v.clone(), b2.w.clone(), components, recipe)?;
    Ok(TwProduct { left: b1.clone(), right: b2.clone(), obj: Arc::new(obj), ladjs })
}

/// `⟨a, y⟩ ↦ [ω^{B1}(a), y]` in `∐_j L(B1(i_j))`.
fn twprod_coop(b1: &CoVObject, ladjs: &[Arc<Ladj>], obj: &CoVObject, op: usize) -> Result<Hom> {
    let decl = &b1.v.sig.ops[op];
    let o = decl.output;
    let target = obj.op_coproduct(op)?;
    let src_c = b1.op_coproduct(op)?;
    let w1 = b1.coop(op)?;
    let b2 = &ladjs[o].b;
    let base = |k: usize, y: usize| {
        let (j, s, e) = src_c.origins[k];
        let comp = decl.inputs[j];
        let g = b1.generators(comp).iter().position(|&x| x == (s, e)).expect("origin is a generator");
        let l = &ladjs[comp];
        let (t, _) = l.b.generators(s)[y];
        target.injections[j].apply(t, l.gen(g, y))
    };
    let mut br = Brackets { b: b2, a: &src_c.algebra, target: &target.algebra, base: &base, memo: HashMap::new() };
    let agens = ladjs[o].a.generators.clone().unwrap_or_default();
    let mut images = Vec::new();
    for &(g, y) in &ladjs[o].gen_keys {
        let (s, a) = agens[g];
        images.push(br.row(s, w1.apply(s, a))?[y]);
    }
    ladjs[o].pres.extend(&target.algebra, &images)
}

/// `f ⊡ g: P → P'` on generators `⟨a, y⟩ ↦ [f(a), g(y)]`.
pub fn twprod_map(f: &CoVMorphism, g: &CoVMorphism, p: &TwProduct, q: &TwProduct) -> Result<CoVMorphism> {
    let mut maps = Vec::new();
    for (i, l) in p.ladjs.iter().enumerate() {
        let lq = &q.ladjs[i];
        let agens = l.a.generators.clone().unwrap_or_default();
        let h = l.extend(lq.algebra(), |gi, y| {
            let (s, a) = agens[gi];
            let (t, yy) = l.b.generators(s)[y];
            lq.bracket(s, f.maps[i].apply(s, a), t, g.maps[s].apply(t, yy)).expect("bracket of a valid element")
        })?;
        maps.push(h);
    }
    CoVMorphism::new_unchecked(p.obj.clone(), q.obj.clone(), maps)
}

/// `(B1 ⊡ B2) ⊡ B3 → B1 ⊡ (B2 ⊡ B3)`, `⟨⟨a,b⟩,c⟩ ↦ ⟨a,⟨b,c⟩⟩`.
pub fn associator(l12_3: &TwProduct, l1_23: &TwProduct, l12: &TwProduct, l23: &TwProduct) -> Result<CoVMorphism> {
    let mut maps = Vec::new();
    for (i, outer) in l12_3.ladjs.iter().enumerate() {
        let inner = &l12.ladjs[i];
        let dst = &l1_23.ladjs[i];
        let inner_keys = recorded_keys(inner);
        let b1gens = inner.a.generators.clone().unwrap_or_default();
        let h = outer.extend(dst.algebra(), |c, z| {
            let (a_idx, y_idx) = inner_keys[c];
            let (s, a) = b1gens[a_idx];
            let l23s = &l23.ladjs[s];
            let (t, _) = l23s.a.generators.as_ref().unwrap()[y_idx];
            let (u, _) = l23s.b.generators(t)[z];
            let w = l23s.gen(y_idx, z);
            dst.bracket(s, a, u, w).expect("bracket of a valid element")
        })?;
        maps.push(h);
    }
    CoVMorphism::new_unchecked(l12_3.obj.clone(), l1_23.obj.clone(), maps)
}

/// For each recorded generator of `L(A)`, the first presentation key naming it.
fn recorded_keys(l: &Ladj) -> Vec<(usize, usize)> {
    l.algebra()
        .generators
        .as_ref()
        .unwrap()
        .iter()
        .map(|&(s, e)| {
            let k = (0..l.gen_keys.len())
                .find(|&k| l.gen_sort(k) == s && l.pres.gen_element(k) == e)
                .expect("recorded generator has a key");
            l.gen_keys[k]
        })
        .collect()
}

/// `I ⊡ B → B`, `⟨x, y⟩ ↦ y`.
pub fn left_unitor(ib: &TwProduct) -> Result<CoVMorphism> {
    let b = &ib.right;
    let maps = ib
        .ladjs
        .iter()
        .enumerate()
        .map(|(i, l)| {
            l.extend(&b.components[i], |_, y| {
                let (_, ye) = b.generators(i)[y];
                ye
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CoVMorphism::new_unchecked(ib.obj.clone(), b.clone(), maps)
}

/// `B ⊡ I → B`, `⟨a, x⟩ ↦ a`.
pub fn right_unitor(bi: &TwProduct) -> Result<CoVMorphism> {
    let b = &bi.left;
    let maps = bi
        .ladjs
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let gens = l.a.generators.clone().unwrap_or_default();
            l.extend(&b.components[i], |g, _| gens[g].1)
        })
        .collect::<Result<Vec<_>>>()?;
    CoVMorphism::new_unchecked(bi.obj.clone(), b.clone(), maps)
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Law {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl Law {
    pub fn new(name: &str, witness: Option<String>) -> Law {
        Law { name: name.to_string(), pass: witness.is_none(), witness }
    }

    pub fn from_result(name: &str, r: Result<Option<String>>) -> Law {
        match r {
            Ok(w) => Law::new(name, w),
            Err(e) => Law::new(name, Some(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Certification {
    pub subject: String,
    pub laws: Vec<Law>,
}

impl Certification {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.pass)
    }

    pub fn failures(&self) -> Vec<&Law> {
        self.laws.iter().filter(|l| !l.pass).collect()
    }
}

/// A co-object in V with multiplication and unit.
#[derive(Debug, Clone)]
pub struct TallWraithMonoid {
    pub t: Arc<CoVObject>,
    pub unit: Arc<CoVObject>,
    pub tt: TwProduct,
    pub mu: CoVMorphism,
    pub eta: CoVMorphism,
}

impl TallWraithMonoid {
    /// `mu` and `eta` given by images of generators `⟨a, y⟩` and `x_i`.
    pub fn from_images(t: &Arc<CoVObject>, mu_img: impl Fn(usize, usize, usize) -> Elt, eta_img: &[Elt]) -> Result<TallWraithMonoid> {
        let unit = Arc::new(unit_object(&t.v)?);
        let tt = twprod(t, t)?;
        let maps = tt
            .ladjs
            .iter()
            .enumerate()
            .map(|(i, l)| l.extend(&t.components[i], |g, y| mu_img(i, g, y)))
            .collect::<Result<Vec<_>>>()?;
        let mu = CoVMorphism::new_unchecked(tt.obj.clone(), t.clone(), maps)?;
        let eta_images: Vec<Vec<Elt>> = eta_img.iter().map(|&e| vec![e]).collect();
        let eta_maps = (0..t.num_sorts())
            .map(|i| extend_from_generators(&unit.components[i], &t.components[i], &eta_images[i]))
            .collect::<Result<Vec<_>>>()?;
        let eta = CoVMorphism::new_unchecked(unit.clone(), t.clone(), eta_maps)?;
        Ok(TallWraithMonoid { t: t.clone(), unit, tt, mu, eta })
    }

    /// The trivial monoid on the unit object.
    pub fn trivial(v: &Arc<Variety>) -> Result<TallWraithMonoid> {
        let unit = Arc::new(unit_object(v)?);
        let tt = twprod(&unit, &unit)?;
        let mu = left_unitor(&tt)?;
        let eta = CoVMorphism::identity(&unit);
        Ok(TallWraithMonoid { t: unit.clone(), unit, tt, mu, eta })
    }
}

/// Associativity and both unit laws as exact morphism equalities.
pub fn tw_monoid_check(m: &TallWraithMonoid) -> Result<Certification> {
    let t = &m.t;
    let mut laws = vec![
        Law::from_result("mu is a co-object morphism", m.mu.intertwining_violation()),
        Law::from_result("eta is a co-object morphism", m.eta.intertwining_violation()),
    ];
    let tt = &m.tt;
    let tt_t = twprod(&tt.obj, t)?;
    let t_tt = twprod(t, &tt.obj)?;
    let id = CoVMorphism::identity(t);
    let mu_id = twprod_map(&m.mu, &id, &tt_t, tt)?;
    let id_mu = twprod_map(&id, &m.mu, &t_tt, tt)?;
    let alpha = associator(&tt_t, &t_tt, tt, tt)?;
    let lhs = m.mu.compose(&mu_id);
    let rhs = m.mu.compose(&id_mu).compose(&alpha);
    laws.push(Law::new("associativity", lhs.difference(&rhs)));
    let it = twprod(&m.unit, t)?;
    let eta_id = twprod_map(&m.eta, &id, &it, tt)?;
    laws.push(Law::new("left unit", m.mu.compose(&eta_id).difference(&left_unitor(&it)?)));
    let ti = twprod(t, &m.unit)?;
    let id_eta = twprod_map(&id, &m.eta, &ti, tt)?;
    laws.push(Law::new("right unit", m.mu.compose(&id_eta).difference(&right_unitor(&ti)?)));
    Ok(Certification { subject: format!("monoid on {}", t.name), laws })
}

/// Action `rho: T ⊡ M → M` with its square and unit triangle.
pub fn tw_module_check(m: &TallWraithMonoid, tm: &TwProduct, rho: &CoVMorphism) -> Result<Certification> {
    let t = &m.t;
    let module = &tm.right;
    let mut laws = vec![Law::from_result("rho is a co-object morphism", rho.intertwining_violation())];
    let tt_m = twprod(&m.tt.obj, module)?;
    let t_tm = twprod(t, &tm.obj)?;
    let id_m = CoVMorphism::identity(module);
    let id_t = CoVMorphism::identity(t);
    let mu_id = twprod_map(&m.mu, &id_m, &tt_m, tm)?;
    let id_rho = twprod_map(&id_t, rho, &t_tm, tm)?;
    let alpha = associator(&tt_m, &t_tm, &m.tt, tm)?;
    let lhs = rho.compose(&mu_id);
    let rhs = rho.compose(&id_rho).compose(&alpha);
    laws.push(Law::new("action square", lhs.difference(&rhs)));
    let im = twprod(&m.unit, module)?;
    let eta_id = twprod_map(&m.eta, &id_m, &im, tm)?;
    laws.push(Law::new("unit triangle", rho.compose(&eta_id).difference(&left_unitor(&im)?)));
    Ok(Certification { subject: format!("module {} over {}", module.name, t.name), laws })
}

/// A module structure on a V-algebra `M` as a V-hom `rho: M → hom_cov(T, M)`:
/// `rho(m)(mu⟨a, y⟩) = rho(rho(m)(a))(y)` and `rho(m)(eta x) = m`.
pub fn tw_algebra_module_check(m: &TallWraithMonoid, module: &Arc<Algebra>, hc: &HomAlgebra, rho: &Hom) -> Result<Certification> {
    let t = &m.t;
    let mut laws = vec![Law::new(
        "rho is a V-hom",
        crate::finalg::hom_violation(module, &hc.algebra, &rho.maps),
    )];
    let mut unit_w = None;
    let mut assoc_w = None;
    for i in 0..t.num_sorts() {
        let l = &m.tt.ladjs[i];
        let agens = l.a.generators.clone().unwrap_or_default();
        let (xs, x) = m.unit.generators(i)[0];
        let ex = m.eta.maps[i].apply(xs, x);
        for e in 0..module.size(i) {
            let act = &hc.homs[i][rho.apply(i, e)];
            if unit_w.is_none() && act.apply(xs, ex) != e {
                unit_w = Some(format!("element {} of sort {}", module.label(i, e), t.v.sig.sorts[i]));
            }
            for &(g, y) in &l.gen_keys {
                let (s, a) = agens[g];
                let (u, ye) = t.generators(s)[y];
                let prod = m.mu.maps[i].apply(u, l.gen(g, y));
                let lhs = act.apply(u, prod);
                let inner = act.apply(s, a);
                let rhs = hc.homs[s][rho.apply(s, inner)].apply(u, ye);
                if assoc_w.is_none() && lhs != rhs {
                    assoc_w = Some(format!(
                        "element {} with <{},{}>",
                        module.label(i, e),
                        t.components[i].label(s, a),
                        t.components[s].label(u, ye)
                    ));
                }
            }
        }
    }
    laws.push(Law::new("unit", unit_w));
    laws.push(Law::new("associativity", assoc_w));
    Ok(Certification { subject: format!("algebra module {} over {}", module.name, t.name), laws })
}

/// Symbolic generator keys of iterated products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Key {
    Leaf(usize),
    Pair(Box<Key>, Box<Key>),
}

fn pair(a: Key, b: Key) -> Key {
    Key::Pair(Box::new(a), Box::new(b))
}

/// The associator on keys: `⟨⟨a,b⟩,c⟩ ↦ ⟨a,⟨b,c⟩⟩`.
pub fn associate(k: &Key) -> Option<Key> {
    match k {
        Key::Pair(ab, c) => match &**ab {
            Key::Pair(a, b) => Some(pair((**a).clone(), pair((**b).clone(), (**c).clone()))),
            _ => None,
        },
        _ => None,
    }
}

/// Pentagon on generator keys of `((B⊡B)⊡B)⊡B` for `n` generators of `B`:
/// both routes to `B⊡(B⊡(B⊡B))` agree on every key.
pub fn pentagon_keys(n: usize) -> Option<String> {
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (a, b, c, d) = (Key::Leaf(a), Key::Leaf(b), Key::Leaf(c), Key::Leaf(d));
                    let k = pair(pair(pair(a.clone(), b.clone()), c.clone()), d.clone());
                    let r1 = associate(&k).and_then(|x| associate(&x));
                    let r2 = match &k {
                        Key::Pair(x, d) => associate(x).map(|x| pair(x, (**d).clone())),
                        _ => None,
                    }
                    .and_then(|x| associate(&x))
                    .and_then(|x| match x {
                        Key::Pair(a, y) => associate(&y).map(|y| pair(*a, y)),
                        _ => None,
                    });
                    if r1.is_none() || r1 != r2 {
                        return Some(format!("{k:?}"));
                    }
                }
            }
        }
    }
    None
}

/// Pentagon by computing all five associators on actual products.
pub fn pentagon_check(b: [&Arc<CoVObject>; 4]) -> Result<Option<String>> {
    let [b1, b2, b3, b4] = b;
    let p12 = twprod(b1, b2)?;
    let p23 = twprod(b2, b3)?;
    let p34 = twprod(b3, b4)?;
    let p12_3 = twprod(&p12.obj, b3)?;
    let p1_23 = twprod(b1, &p23.obj)?;
    let p23_4 = twprod(&p23.obj, b4)?;
    let p2_34 = twprod(b2, &p34.obj)?;
    let p12_34 = twprod(&p12.obj, &p34.obj)?;
    let p123_4 = twprod(&p12_3.obj, b4)?;
    let p1_23_4 = twprod(&p1_23.obj, b4)?;
    let p1_234 = twprod(b1, &p23_4.obj)?;
    let p1_2_34 = twprod(b1, &p2_34.obj)?;
    // Route 1: α(12,3,4) then α(1,2,34).
    let a1 = associator(&p123_4, &p12_34, &p12_3, &p34)?;
    let a2 = associator(&p12_34, &p1_2_34, &p12, &p2_34)?;
    let route1 = a2.compose(&a1);
    // Route 2: α(1,2,3)⊡id, α(1,23,4), id⊡α(2,3,4).
    let a123 = associator(&p12_3, &p1_23, &p12, &p23)?;
    let id4 = CoVMorphism::identity(b4);
    let m1 = twprod_map(&a123, &id4, &p123_4, &p1_23_4)?;
    let m2 = associator(&p1_23_4, &p1_234, &p1_23, &p23_4)?;
    let a234 = associator(&p23_4, &p2_34, &p23, &p34)?;
    let id1 = CoVMorphism::identity(b1);
    let m3 = twprod_map(&id1, &a234, &p1_234, &p1_2_34)?;
    let route2 = m3.compose(&m2).compose(&m1);
    Ok(route1.difference(&route2))
}

/// Report of the Künneth condition for one list of sorts.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct KunnethReport {
    pub sorts: Vec<String>,
    pub coproduct_size: usize,
    pub product_size: usize,
    pub injective: bool,
    pub surjective: bool,
    pub witness: Option<String>,
}

impl KunnethReport {
    pub fn passed(&self) -> bool {
        self.injective && self.surjective
    }
}

/// The algebra of a V-algebra object in sets viewed as a set for each sort.
fn carrier_set(aobj: &VAlgebraObject, i: usize) -> Arc<Algebra> {
    aobj.components[i].clone()
}

struct Kunneth {
    coproduct: Coproduct,
    target: HomAlgebra,
    k: Hom,
    prod: Arc<Algebra>,
}

fn kunneth_map(aobj: &VAlgebraObject, sorts: &[usize], summands: &[Arc<Algebra>]) -> Result<Kunneth> {
    let w = &aobj.w;
    let sets: Vec<Arc<Algebra>> = sorts.iter().map(|&i| carrier_set(aobj, i)).collect();
    let (prod, projs) = product(&w.sig, &sets)?;
    let target = hom_algebra_contra(aobj, &prod)?;
    let c = coproduct(&aobj.v, summands)?;
    let index: Vec<HashMap<&Vec<Vec<Elt>>, Elt>> = target
        .homs
        .iter()
        .map(|hs| hs.iter().enumerate().map(|(k, h)| (&h.maps, k)).collect())
        .collect();
    let mut pieces = Vec::new();
    for (j, &i) in sorts.iter().enumerate() {
        let src = hom_algebra_contra(aobj, &carrier_set(aobj, i))?;
        if src.algebra.sizes() != summands[j].sizes() {
            return invalid("Künneth summand does not match the hom algebra");
        }
        let maps = src
            .homs
            .iter()
            .enumerate()
            .map(|(s, hs)| hs.iter().map(|h| index[s][&h.compose(&projs[j]).maps]).collect())
            .collect();
        pieces.push(Hom::new(summands[j].clone(), target.algebra.clone(), maps)?);
    }
    let k = c.fold(&pieces, &target.algebra)?;
    Ok(Kunneth { coproduct: c, target, k, prod })
}

/// Whether `∐_j Hom(A(i_j), A) → Hom(∏_j A(i_j), A)` is bijective.
pub fn kunneth_check(aobj: &VAlgebraObject, sorts: &[usize]) -> Result<KunnethReport> {
    check_sets_ambient(aobj)?;
    let summands = sorts
        .iter()
        .map(|&i| Ok(hom_algebra_contra(aobj, &carrier_set(aobj, i))?.algebra))
        .collect::<Result<Vec<_>>>()?;
    let kn = kunneth_map(aobj, sorts, &summands)?;
    let (c, k) = (&kn.coproduct.algebra, &kn.k);
    let mut witness = None;
    let injective = k.is_injective();
    if !injective {
        'outer: for s in 0..c.num_sorts() {
            let mut first: HashMap<Elt, Elt> = HashMap::new();
            for e in 0..c.size(s) {
                if let Some(&e0) = first.get(&k.apply(s, e)) {
                    witness = Some(format!(
                        "{} and {} both map to {}",
                        c.label(s, e),
                        c.label(s, e0),
                        kn.target.algebra.label(s, k.apply(s, e))
                    ));
                    break 'outer;
                }
                first.insert(k.apply(s, e), e);
            }
        }
    }
    let surjective = k.is_surjective();
    if injective && !surjective {
        witness = Some("image misses elements of the product algebra".into());
    }
    Ok(KunnethReport {
        sorts: sorts.iter().map(|&i| aobj.v.sig.sorts[i].clone()).collect(),
        coproduct_size: c.total_size(),
        product_size: kn.target.algebra.total_size(),
        injective,
        surjective,
        witness,
    })
}

fn check_sets_ambient(aobj: &VAlgebraObject) -> Result<()> {
    if !aobj.w.sig.ops.is_empty() || aobj.w.sig.num_sorts() != 1 {
        return invalid("the operations monoid needs an algebra object in finite sets");
    }
    Ok(())
}

/// The operations monoid of a V-algebra in finite sets, with its
/// self-operation components `T(i) = Hom(A(i), A)`.
#[derive(Debug, Clone)]
pub struct OperationsMonoid {
    pub aobj: VAlgebraObject,
    pub hom_algebras: Vec<HomAlgebra>,
    pub monoid: TallWraithMonoid,
}

/// Builds `T`, `mu` (composition) and `eta` (identities). Co-operations are
/// `K⁻¹ ∘ Hom(ω_A, A)`, so the Künneth condition is required for every
/// operation's input word.
pub fn operations_monoid(aobj: &VAlgebraObject) -> Result<OperationsMonoid> {
    check_sets_ambient(aobj)?;
    let v = aobj.v.clone();
    for decl in &v.sig.ops {
        let r = kunneth_check(aobj, &decl.inputs)?;
        if !r.passed() {
            return failed(format!(
                "Künneth condition fails for ({}): {}",
                r.sorts.join(","),
                r.witness.unwrap_or_default()
            ));
        }
    }
    let hom_algebras = (0..v.sig.num_sorts())
        .map(|i| hom_algebra_contra(aobj, &carrier_set(aobj, i)))
        .collect::<Result<Vec<_>>>()?;
    let components: Vec<Arc<Algebra>> = hom_algebras.iter().map(|h| h.algebra.clone()).collect();
    let obj_for_recipe = aobj.clone();
    let hom_for_recipe = hom_algebras.clone();
    let recipe: CoopRecipe = Box::new(move |t, op| {
        let decl = &t.v.sig.ops[op];
        let c = t.op_coproduct(op)?;
        let summands: Vec<Arc<Algebra>> = decl.inputs.iter().map(|&i| t.components[i].clone()).collect();
        let kn = kunneth_map(&obj_for_recipe, &decl.inputs, &summands)?;
        // Both coproducts present the same summands the same way.
        if kn.coproduct.algebra.tables != c.algebra.tables {
            return failed("Künneth coproduct differs from the cached one");
        }
        let kinv = kn.k.inverse()?;
        let src = &hom_for_recipe[decl.output];
        let index: Vec<HashMap<&Vec<Vec<Elt>>, Elt>> = kn
            .target
            .homs
            .iter()
            .map(|hs| hs.iter().enumerate().map(|(k, h)| (&h.maps, k)).collect())
            .collect();
        let omega = Hom::new_unchecked(kn.prod.clone(), obj_for_recipe.components[decl.output].clone(), obj_for_recipe.ops[op].maps.clone());
        let maps = src
            .homs
            .iter()
            .enumerate()
            .map(|(s, hs)| hs.iter().map(|h| kinv.apply(s, index[s][&h.compose(&omega).maps])).collect())
            .collect();
        let h = Hom::new(t.components[decl.output].clone(), kn.coproduct.algebra.clone(), maps)?;
        Ok(h.retarget(&c.algebra))
    });
    let t = Arc::new(CoVObject::lazy(&format!("Ops({})", aobj.name), v.clone(), v.clone(), components, recipe)?);
    t.validate()?;
    // mu⟨θ, y⟩ = y ∘ θ and eta(x_i) = id.
    let find = |i: usize, s: usize, h: &Hom| -> Elt {
        hom_algebras[i].homs[s].iter().position(|x| x.maps == h.maps).expect("composite is a set map")
    };
    let mu_img = |i: usize, g: usize, y: usize| -> Elt {
        let (s, th) = t.generators(i)[g];
        let (u, ye) = t.generators(s)[y];
        let theta = &hom_algebras[i].homs[s][th];
        let yy = &hom_algebras[s].homs[u][ye];
        find(i, u, &yy.compose(theta))
    };
    let eta_img: Vec<Elt> = (0..v.sig.num_sorts())
        .map(|i| find(i, i, &Hom::identity(&aobj.components[i])))
        .collect();
    let monoid = TallWraithMonoid::from_images(&t, mu_img, &eta_img)?;
    Ok(OperationsMonoid { aobj: aobj.clone(), hom_algebras, monoid })
}

impl OperationsMonoid {
    /// The module `Hom(X, A)` with `rho(f) = (θ ↦ θ ∘ f)`.
    pub fn module_on(&self, x: &Arc<Algebra>) -> Result<(HomAlgebra, HomAlgebra, Hom)> {
        let m = hom_algebra_contra(&self.aobj, x)?;
        let t = &self.monoid.t;
        let hc = hom_cov(t, &m.algebra)?;
        let index: Vec<HashMap<&Vec<Vec<Elt>>, Elt>> = hc
            .homs
            .iter()
            .map(|hs| hs.iter().enumerate().map(|(k, h)| (&h.maps, k)).collect())
            .collect();
        let m_index: Vec<HashMap<&Vec<Vec<Elt>>, Elt>> = m
            .homs
            .iter()
            .map(|hs| hs.iter().enumerate().map(|(k, h)| (&h.maps, k)).collect())
            .collect();
        let mut maps = Vec::new();
        for (i, fs) in m.homs.iter().enumerate() {
            let mut row = Vec::new();
            for f in fs {
                let action: Vec<Vec<Elt>> = (0..t.v.sig.num_sorts())
                    .map(|s| self.hom_algebras[i].homs[s].iter().map(|th| m_index[s][&th.compose(f).maps]).collect())
                    .collect();
                row.push(
                    *index[i]
                        .get(&action)
                        .ok_or_else(|| Error::Failed("θ ↦ θ∘f is not a V-hom".into()))?,
                );
            }
            maps.push(row);
        }
        let rho = Hom::new(m.algebra.clone(), hc.algebra.clone(), maps)?;
        Ok((m, hc, rho))
    }

    /// `mu[θ, y]` against literal composition `y ∘ θ` for every pair.
    pub fn composition_violation(&self) -> Result<Option<String>> {
        let t = &self.monoid.t;
        for (i, l) in self.monoid.tt.ladjs.iter().enumerate() {
            for s in 0..t.v.sig.num_sorts() {
                for (th, theta) in self.hom_algebras[i].homs[s].iter().enumerate() {
                    for u in 0..t.v.sig.num_sorts() {
                        for (ye, y) in self.hom_algebras[s].homs[u].iter().enumerate() {
                            let got = self.monoid.mu.maps[i].apply(u, l.bracket(s, th, u, ye)?);
                            let lit = &y.compose(theta);
                            if self.hom_algebras[i].homs[u][got].maps != lit.maps {
                                return Ok(Some(format!(
                                    "mu[{}, {}]",
                                    t.components[i].label(s, th),
                                    t.components[s].label(u, ye)
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Hom-count form of the ⊡ adjunction: `|Hom_W(L(A), X)| = |Hom_V(A, hom_cov(B, X))|`.
pub fn ladj_counts(l: &Ladj, x: &Arc<Algebra>) -> Result<(usize, usize)> {
    let hc = hom_cov(&l.b, x)?;
    Ok((count_homs(l.algebra(), x)?, count_homs(&l.a, &hc.algebra)?))
}

/// The explicit adjunction bijection: untranspose ∘ transpose is the identity
/// on `Hom_W(L(A), X)` and transpose hits every V-hom.
pub fn ladj_bijection_violation(l: &Ladj, x: &Arc<Algebra>) -> Result<Option<String>> {
    let hc = hom_cov(&l.b, x)?;
    let psis = enumerate_homs(l.algebra(), x)?;
    let phis = enumerate_homs(&l.a, &hc.algebra)?;
    let mut hit = std::collections::HashSet::new();
    for (psi, phi) in psis.iter().zip(l.transposes(&psis, &hc)?) {
        if l.untranspose(&phi, &hc, x)?.maps != psi.maps {
            return Ok(Some(format!("transpose of {} does not return", psi.display())));
        }
        hit.insert(phi.maps);
    }
    if hit.len() != phis.len() {
        return Ok(Some(format!("{} of {} V-homs are transposes", hit.len(), phis.len())));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::tests::ab2_variety;

    #[test]
    fn unit_products_are_unit() {
        let v = ab2_variety();
        let i = Arc::new(unit_object(&v).unwrap());
        let ii = twprod(&i, &i).unwrap();
        assert_eq!(ii.obj.components[0].size(0), 2);
        ii.obj.validate().unwrap();
        let l = left_unitor(&ii).unwrap();
        assert!(l.is_iso());
        assert_eq!(l.intertwining_violation().unwrap(), None);
    }

    #[test]
    fn trivial_monoid_passes() {
        let v = ab2_variety();
        let m = TallWraithMonoid::trivial(&v).unwrap();
        let c = tw_monoid_check(&m).unwrap();
        assert!(c.passed(), "{c:?}");
    }

    #[test]
    fn pentagon_on_keys() {
        assert_eq!(pentagon_keys(2), None);
    }
}
