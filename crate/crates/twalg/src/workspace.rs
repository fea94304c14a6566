//! Named objects resolved from DSL text: the bundled fixtures plus user files.

use crate::coalg::{eval_coproduct_term, CoVMorphism, CoVObject};
use crate::error::{invalid, Error, Result};
use crate::filtration::{from_parts, ProjFilt};
use crate::finalg::{Algebra, Elt, Hom};
use crate::kernel::dsl::{self, AlgebraDecl, Block, BracketRow, HomDecl};
use crate::kernel::{check_identity, CheckedIdentity, Identity, Signature};
use crate::tallwraith::{twprod, TallWraithMonoid, TwProduct};
use crate::variety::{VAlgebraObject, Variety};
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// The fixture bundle shipped with the library.
pub const BUNDLE: &str = include_str!("../fixtures/bundle.twa");

/// A module over a monoid: `rho: T ⊡ M → M`.
#[derive(Debug, Clone)]
pub struct ModuleData {
    pub name: String,
    pub monoid: String,
    pub object: Arc<CoVObject>,
    pub tm: TwProduct,
    pub rho: CoVMorphism,
}

#[derive(Debug, Default)]
pub struct Workspace {
    pub blocks: Vec<Block>,
    pub signatures: BTreeMap<String, Arc<Signature>>,
    pub identities: BTreeMap<String, Identity>,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub varieties: BTreeMap<String, Arc<Variety>>,
    pub coalgebras: BTreeMap<String, Arc<CoVObject>>,
    pub monoids: BTreeMap<String, Arc<TallWraithMonoid>>,
    pub modules: BTreeMap<String, ModuleData>,
    pub filtrations: BTreeMap<String, ProjFilt>,
}

fn get<'a, T>(m: &'a BTreeMap<String, T>, kind: &'static str, name: &str) -> Result<&'a T> {
    m.get(name).ok_or_else(|| Error::Unknown { kind, name: name.to_string() })
}

fn insert<T>(m: &mut BTreeMap<String, T>, kind: &'static str, name: &str, v: T) -> Result<()> {
    if m.contains_key(name) {
        return Err(Error::Duplicate { kind, name: name.to_string() });
    }
    m.insert(name.to_string(), v);
    Ok(())
}

fn label_in(a: &Algebra, sort: usize, label: &str) -> Result<Elt> {
    a.find(sort, label).ok_or_else(|| Error::Unknown { kind: "element", name: format!("{label} in {}", a.name) })
}

impl Workspace {
    /// The bundled fixtures alone.
    pub fn fixtures() -> Result<Workspace> {
        Workspace::load(&[BUNDLE])
    }

    /// The bundled fixtures followed by the given texts.
    pub fn with_files(texts: &[String]) -> Result<Workspace> {
        let mut all: Vec<&str> = vec![BUNDLE];
        all.extend(texts.iter().map(|s| s.as_str()));
        Workspace::load(&all)
    }

    /// Parses every text and resolves blocks kind by kind.
    pub fn load(texts: &[&str]) -> Result<Workspace> {
        let mut ws = Workspace::default();
        for t in texts {
            ws.blocks.extend(dsl::parse(t)?);
        }
        let blocks = ws.blocks.clone();
        for b in &blocks {
            match b {
                Block::Signature(s) => insert(&mut ws.signatures, "signature", &s.name, Arc::new(s.clone()))?,
                Block::Identity(i) => insert(&mut ws.identities, "identity", &i.name, i.clone())?,
                _ => {}
            }
        }
        for b in &blocks {
            if let Block::Algebra(a) = b {
                let alg = ws.resolve_algebra(a)?;
                insert(&mut ws.algebras, "algebra", &a.name, Arc::new(alg))?;
            }
        }
        for b in &blocks {
            if let Block::Variety(v) = b {
                let sig = get(&ws.signatures, "signature", &v.signature)?.clone();
                let ids = v.identities.iter().map(|n| ws.checked_identity(&sig, n)).collect::<Result<Vec<_>>>()?;
                let gens = v.generators.iter().map(|n| ws.algebra(n)).collect::<Result<Vec<_>>>()?;
                let var = Variety::new(&v.name, sig, ids, gens)?;
                insert(&mut ws.varieties, "variety", &v.name, Arc::new(var))?;
            }
        }
        for b in &blocks {
            if let Block::Coalgebra(c) = b {
                let v = ws.variety(&c.variety)?;
                let w = ws.variety(&c.ambient)?;
                let mut comps = Vec::new();
                for sort in &v.sig.sorts {
                    let (_, an) = c
                        .components
                        .iter()
                        .find(|(s, _)| s == sort)
                        .ok_or_else(|| Error::Invalid(format!("co-object {}: no component for sort {sort}", c.name)))?;
                    let a = ws.algebra(an)?;
                    if a.sig != w.sig {
                        return invalid(format!("co-object {}: component {an} is not over {}", c.name, w.sig.name));
                    }
                    comps.push(a);
                }
                let images = coop_images(c, &v, &w, &comps)?;
                let obj = CoVObject::from_images(&c.name, v, w, comps, images)?;
                insert(&mut ws.coalgebras, "coalgebra", &c.name, Arc::new(obj))?;
            }
        }
        for b in &blocks {
            if let Block::Monoid(m) = b {
                let t = ws.coalgebra(&m.object)?;
                let mu = bracket_table(&t, &t, &t, &m.mu, "mu")?;
                let mut eta = Vec::new();
                for (i, sort) in t.v.sig.sorts.iter().enumerate() {
                    let (_, l) = m
                        .eta
                        .iter()
                        .find(|(s, _)| s == sort)
                        .ok_or_else(|| Error::Invalid(format!("monoid {}: no unit for sort {sort}", m.name)))?;
                    eta.push(t.components[i].find_any(l)?.1);
                }
                let mono = TallWraithMonoid::from_images(&t, |i, g, y| mu[&(i, g, y)], &eta)?;
                insert(&mut ws.monoids, "monoid", &m.name, Arc::new(mono))?;
            }
        }
        for b in &blocks {
            if let Block::Module(md) = b {
                let mono = get(&ws.monoids, "monoid", &md.monoid)?.clone();
                let m = ws.coalgebra(&md.object)?;
                let tm = twprod(&mono.t, &m)?;
                let table = bracket_table(&mono.t, &m, &m, &md.rho, "rho")?;
                let maps = tm
                    .ladjs
                    .iter()
                    .enumerate()
                    .map(|(i, l)| l.extend(&m.components[i], |g, y| table[&(i, g, y)]))
                    .collect::<Result<Vec<_>>>()?;
                let rho = CoVMorphism::new_unchecked(tm.obj.clone(), m.clone(), maps)?;
                let data = ModuleData { name: md.name.clone(), monoid: md.monoid.clone(), object: m, tm, rho };
                insert(&mut ws.modules, "module", &md.name, data)?;
            }
        }
        for b in &blocks {
            if let Block::Filtration(f) = b {
                let base = ws.algebra(&f.base)?;
                let stages = f
                    .stages
                    .iter()
                    .map(|(l, h)| Ok((l.clone(), ws.resolve_hom(&base, h)?)))
                    .collect::<Result<Vec<_>>>()?;
                let mut leqs = Vec::new();
                for (u, l, h) in &f.leqs {
                    let src = &stages
                        .iter()
                        .find(|(x, _)| x == u)
                        .ok_or_else(|| Error::Unknown { kind: "stage", name: u.clone() })?
                        .1
                        .dst;
                    leqs.push((u.clone(), l.clone(), ws.resolve_hom(src, h)?));
                }
                let filt = from_parts(&f.name, base, stages, leqs)?;
                insert(&mut ws.filtrations, "filtration", &f.name, filt)?;
            }
        }
        Ok(ws)
    }

    fn checked_identity(&self, sig: &Signature, name: &str) -> Result<CheckedIdentity> {
        check_identity(sig, get(&self.identities, "identity", name)?)
    }

    fn resolve_algebra(&self, a: &AlgebraDecl) -> Result<Algebra> {
        let sig = get(&self.signatures, "signature", &a.signature)?.clone();
        let mut carriers = vec![None; sig.num_sorts()];
        for (s, labels) in &a.carriers {
            let k = sig.sort_index(s)?;
            if carriers[k].is_some() {
                return Err(Error::Duplicate { kind: "carrier", name: format!("{s} in {}", a.name) });
            }
            carriers[k] = Some(labels.clone());
        }
        let carriers: Vec<Vec<String>> = carriers
            .into_iter()
            .enumerate()
            .map(|(k, c)| c.ok_or_else(|| Error::Invalid(format!("algebra {}: no carrier for sort {}", a.name, sig.sorts[k]))))
            .collect::<Result<_>>()?;
        let mut tables = vec![None; sig.ops.len()];
        for (op, labels) in &a.tables {
            let k = sig.op_index(op)?;
            let out = sig.ops[k].output;
            let row = labels
                .iter()
                .map(|l| {
                    carriers[out]
                        .iter()
                        .position(|x| x == l)
                        .ok_or_else(|| Error::Unknown { kind: "element", name: format!("{l} in {}", a.name) })
                })
                .collect::<Result<Vec<_>>>()?;
            tables[k] = Some(row);
        }
        let tables: Vec<Vec<Elt>> = tables
            .into_iter()
            .enumerate()
            .map(|(k, t)| t.ok_or_else(|| Error::Invalid(format!("algebra {}: no table for {}", a.name, sig.ops[k].symbol))))
            .collect::<Result<_>>()?;
        let gens = match &a.generators {
            None => None,
            Some(ls) => Some(
                ls.iter()
                    .map(|l| {
                        let hits: Vec<(usize, Elt)> = carriers
                            .iter()
                            .enumerate()
                            .filter_map(|(s, c)| c.iter().position(|x| x == l).map(|e| (s, e)))
                            .collect();
                        match hits.as_slice() {
                            [one] => Ok(*one),
                            [] => Err(Error::Unknown { kind: "element", name: format!("{l} in {}", a.name) }),
                            _ => invalid(format!("algebra {}: generator label {l} is ambiguous", a.name)),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Algebra::new(&a.name, sig, carriers, tables, gens)
    }

    fn resolve_hom(&self, src: &Arc<Algebra>, h: &HomDecl) -> Result<Hom> {
        let dst = self.algebra(&h.target)?;
        if h.images.len() != src.num_sorts() {
            return invalid(format!("hom into {}: one image list per sort expected", h.target));
        }
        let maps = h
            .images
            .iter()
            .enumerate()
            .map(|(s, ls)| {
                if ls.len() != src.size(s) {
                    return invalid(format!("hom into {}: {} images for {} elements", h.target, ls.len(), src.size(s)));
                }
                ls.iter().map(|l| label_in(&dst, s, l)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Hom::new(src.clone(), dst, maps)
    }

    pub fn algebra(&self, name: &str) -> Result<Arc<Algebra>> {
        get(&self.algebras, "algebra", name).cloned()
    }

    pub fn variety(&self, name: &str) -> Result<Arc<Variety>> {
        get(&self.varieties, "variety", name).cloned()
    }

    pub fn coalgebra(&self, name: &str) -> Result<Arc<CoVObject>> {
        get(&self.coalgebras, "coalgebra", name).cloned()
    }

    pub fn monoid(&self, name: &str) -> Result<Arc<TallWraithMonoid>> {
        get(&self.monoids, "monoid", name).cloned()
    }

    pub fn module(&self, name: &str) -> Result<&ModuleData> {
        get(&self.modules, "module", name)
    }

    pub fn filtration(&self, name: &str) -> Result<&ProjFilt> {
        get(&self.filtrations, "filtration", name)
    }

    /// The one-sorted variety without operations, used as an ambient.
    pub fn sets(&self) -> Result<Arc<Variety>> {
        self.variety("Set")
    }

    /// An algebra of `v` as a V-algebra object in finite sets.
    pub fn algebra_object(&self, v: &Arc<Variety>, a: &Arc<Algebra>) -> Result<VAlgebraObject> {
        if a.sig != v.sig {
            return invalid(format!("{} is not an algebra over {}", a.name, v.sig.name));
        }
        if let Some(w) = v.violation(a)? {
            return Err(Error::Failed(format!("{} is not in {}: {w}", a.name, v.name)));
        }
        VAlgebraObject::in_sets(a, v.clone(), self.sets()?)
    }

    /// A definition of `name`, in canonical form.
    pub fn print_block(&self, name: &str) -> Result<String> {
        self.blocks
            .iter()
            .find(|b| b.name() == name)
            .map(dsl::print_block)
            .ok_or_else(|| Error::Unknown { kind: "block", name: name.to_string() })
    }
}

/// Images per operation, ordered as the generators of the output component.
fn coop_images(
    c: &dsl::CoalgebraDecl,
    v: &Arc<Variety>,
    w: &Arc<Variety>,
    comps: &[Arc<Algebra>],
) -> Result<Vec<Vec<Elt>>> {
    // Co-operations are not needed to form their coproducts.
    let shell = CoVObject::lazy(
        &c.name,
        v.clone(),
        w.clone(),
        comps.to_vec(),
        Box::new(|_, _| Err(Error::Invalid("co-operation not yet defined".into()))),
    )?;
    let mut out = Vec::new();
    for (op, decl) in v.sig.ops.iter().enumerate() {
        let (_, rows) = c
            .coops
            .iter()
            .find(|(s, _)| *s == decl.symbol)
            .ok_or_else(|| Error::Invalid(format!("co-object {}: no co-operation for {}", c.name, decl.symbol)))?;
        let cp = shell.op_coproduct(op)?;
        let comp = &comps[decl.output];
        let mut imgs = Vec::new();
        for &(s, e) in shell.generators(decl.output) {
            let label = comp.label(s, e);
            let (_, t) = rows.iter().find(|(l, _)| l == label).ok_or_else(|| {
                Error::Invalid(format!("co-object {}: co-operation {} has no image for {label}", c.name, decl.symbol))
            })?;
            let (ts, x) = eval_coproduct_term(&cp, t)?;
            if ts != s {
                return Err(Error::IllSorted {
                    path: format!("{}.{}.{label}", c.name, decl.symbol),
                    msg: "image has the wrong sort".into(),
                });
            }
            imgs.push(x);
        }
        out.push(imgs);
    }
    Ok(out)
}

/// `(i, g, y) ↦ value` for `⟨g, y⟩` with `g` a generator of `left(i)` and `y`
/// a generator of `right(sort g)`, values in `out(i)`.
fn bracket_table(
    left: &CoVObject,
    right: &CoVObject,
    out: &CoVObject,
    rows: &[BracketRow],
    what: &str,
) -> Result<HashMap<(usize, usize, usize), Elt>> {
    let sorts = &left.v.sig.sorts;
    let mut table = HashMap::new();
    for (i, sort) in sorts.iter().enumerate() {
        for (g, &(gs, ge)) in left.generators(i).iter().enumerate() {
            let a = left.components[i].label(gs, ge);
            for (y, &(ys, ye)) in right.generators(gs).iter().enumerate() {
                let yl = right.components[gs].label(ys, ye);
                let row = rows.iter().find(|(s, l, r, _)| s == sort && l == a && r == yl).ok_or_else(|| {
                    Error::Invalid(format!("{what}: no entry for {sort} ({a}, {yl})"))
                })?;
                table.insert((i, g, y), label_in(&out.components[i], ys, &row.3)?);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::SortedSet;

    #[test]
    fn bundle_round_trips() {
        let blocks = dsl::parse(BUNDLE).unwrap();
        assert_eq!(dsl::print(&blocks), BUNDLE);
    }

    #[test]
    fn bundle_resolves() {
        let ws = Workspace::fixtures().unwrap();
        assert_eq!(ws.algebra("V3").unwrap().total_size(), 8);
        let b = ws.variety("Bool").unwrap();
        assert_eq!(b.free(&SortedSet::uniform("x", 1, 0)).unwrap().algebra.total_size(), 4);
        let s = ws.variety("SLat").unwrap();
        assert_eq!(s.free(&SortedSet::uniform("x", 3, 0)).unwrap().algebra.total_size(), 7);
        for n in ["D1", "D2", "D3", "BI"] {
            ws.coalgebra(n).unwrap().validate().unwrap();
        }
        assert_eq!(ws.filtration("Chain4").unwrap().stages.len(), 2);
    }

    #[test]
    fn duplicate_names_rejected() {
        let extra = "algebra V1 of Ab2 {\n  carrier s = {e0} ;\n  table zero = [e0] ;\n  table add = [e0]\n}\n".to_string();
        assert!(matches!(Workspace::with_files(&[extra]), Err(Error::Duplicate { .. })));
    }
}
