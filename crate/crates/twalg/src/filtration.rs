//! Projective and inductive filtrations by finite directed families of
//! morphisms, with reduction, limits, completion, the canonical filtration,
//! pro-finite filtrations and lifted functors.

use crate::coalg::{hom_cov, hom_cov_map, CoVObject};
use crate::error::{failed, invalid, Error, Result};
use crate::finalg::{
    enumerate_congruences, enumerate_homs, find_hom_with, image, pair_map, product, quotient, terminal, Algebra,
    Elt, Fixed, Hom,
};
use crate::limits::Budget;
use crate::tallwraith::{
    associator, ladj_apply, left_unitor, right_unitor, tw_monoid_check, twprod, Certification, Ladj, Law, TallWraithMonoid,
};
use crate::variety::{hom_algebra_contra, hom_algebra_contra_map, HomAlgebra, VAlgebraObject};
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

#[derive(Debug, Clone)]
pub struct Stage {
    pub label: String,
    pub map: Hom,
}

/// `via ∘ f_upper = f_lower` (projective) or `f_upper ∘ via = f_lower` (inductive).
#[derive(Debug, Clone)]
pub struct Leq {
    pub upper: usize,
    pub lower: usize,
    pub via: Hom,
}

/// A finite directed family of homs out of `base`.
#[derive(Debug, Clone)]
pub struct ProjFilt {
    pub name: String,
    pub base: Arc<Algebra>,
    pub stages: Vec<Stage>,
    pub leqs: Vec<Leq>,
    /// Stages from this index on were adjoined as directedness witnesses.
    pub generating: usize,
}

/// The hom `h` with `h ∘ p = g`, if one exists.
pub fn factor(p: &Hom, g: &Hom) -> Result<Option<Hom>> {
    if p.is_surjective() {
        let mut maps: Vec<Vec<Option<Elt>>> = p.dst.sizes().iter().map(|&n| vec![None; n]).collect();
        for (s, m) in p.maps.iter().enumerate() {
            for (x, &px) in m.iter().enumerate() {
                match maps[s][px] {
                    None => maps[s][px] = Some(g.maps[s][x]),
                    Some(v) if v != g.maps[s][x] => return Ok(None),
                    _ => {}
                }
            }
        }
        let maps = maps.into_iter().map(|m| m.into_iter().map(|x| x.unwrap()).collect()).collect();
        return Ok(Hom::new(p.dst.clone(), g.dst.clone(), maps).ok());
    }
    let mut fixed: Fixed = p.dst.sizes().iter().map(|&n| vec![None; n]).collect();
    for (s, m) in p.maps.iter().enumerate() {
        for (x, &px) in m.iter().enumerate() {
            match fixed[s][px] {
                None => fixed[s][px] = Some(g.maps[s][x]),
                Some(v) if v != g.maps[s][x] => return Ok(None),
                _ => {}
            }
        }
    }
    find_hom_with(&p.dst, &g.dst, &fixed)
}

fn check_hom_source(h: &Hom, a: &Arc<Algebra>, what: &str) -> Result<()> {
    if h.src.sizes() != a.sizes() || h.src.tables != a.tables {
        return invalid(format!("{what}: map does not start at the base"));
    }
    Ok(())
}

impl ProjFilt {
    /// Validates mediators and directedness.
    pub fn new(name: &str, base: Arc<Algebra>, stages: Vec<Stage>, leqs: Vec<Leq>) -> Result<ProjFilt> {
        let generating = stages.len();
        let f = ProjFilt { name: name.to_string(), base, stages, leqs, generating };
        f.validate()?;
        Ok(f)
    }

    /// Like [`ProjFilt::new`], adjoining upper bounds where pairs lack one.
    pub fn directed(name: &str, base: Arc<Algebra>, stages: Vec<Stage>, leqs: Vec<Leq>) -> Result<ProjFilt> {
        let generating = stages.len();
        let mut f = ProjFilt { name: name.to_string(), base, stages, leqs, generating };
        if let Some(w) = f.leq_violation() {
            return failed(format!("filtration {name}: {w}"));
        }
        f.directify()?;
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stages.is_empty() {
            return invalid(format!("filtration {} has no stages", self.name));
        }
        for st in &self.stages {
            check_hom_source(&st.map, &self.base, &format!("filtration {} stage {}", self.name, st.label))?;
        }
        if let Some(w) = self.leq_violation() {
            return failed(format!("filtration {}: {w}", self.name));
        }
        if let Some((a, b)) = self.undirected_pair() {
            return failed(format!(
                "filtration {}: stages {} and {} have no recorded upper bound",
                self.name, self.stages[a].label, self.stages[b].label
            ));
        }
        Ok(())
    }

    /// The first recorded mediator that does not commute, naming its stage pair.
    pub fn leq_violation(&self) -> Option<String> {
        for l in &self.leqs {
            let (u, d) = (&self.stages[l.upper], &self.stages[l.lower]);
            let ok = l.via.src.sizes() == u.map.dst.sizes()
                && l.via.dst.sizes() == d.map.dst.sizes()
                && l.via.compose(&u.map).maps == d.map.maps;
            if !ok {
                return Some(format!("mediator {} -> {} does not commute", u.label, d.label));
            }
        }
        None
    }

    /// `reach[u]`: stages below `u` through recorded mediators, with `u` itself.
    pub fn reach(&self) -> Vec<HashSet<usize>> {
        (0..self.stages.len())
            .map(|u| {
                let mut seen = HashSet::from([u]);
                let mut q = VecDeque::from([u]);
                while let Some(x) = q.pop_front() {
                    for l in self.leqs.iter().filter(|l| l.upper == x) {
                        if seen.insert(l.lower) {
                            q.push_back(l.lower);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    fn undirected_pair(&self) -> Option<(usize, usize)> {
        let reach = self.reach();
        let n = self.stages.len();
        for a in 0..n {
            for b in a + 1..n {
                if !reach.iter().any(|r| r.contains(&a) && r.contains(&b)) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Composite mediator along recorded leqs.
    pub fn mediator(&self, upper: usize, lower: usize) -> Option<Hom> {
        let mut prev: HashMap<usize, (usize, usize)> = HashMap::new();
        let mut q = VecDeque::from([upper]);
        let mut seen = HashSet::from([upper]);
        while let Some(x) = q.pop_front() {
            if x == lower {
                break;
            }
            for (k, l) in self.leqs.iter().enumerate().filter(|(_, l)| l.upper == x) {
                if seen.insert(l.lower) {
                    prev.insert(l.lower, (x, k));
                    q.push_back(l.lower);
                }
            }
        }
        if !seen.contains(&lower) {
            return None;
        }
        let mut h = Hom::identity(&self.stages[lower].map.dst);
        let mut cur = lower;
        while cur != upper {
            let (p, k) = prev[&cur];
            h = h.compose(&self.leqs[k].via);
            cur = p;
        }
        Some(h)
    }

    fn directify(&mut self) -> Result<()> {
        let mut budget = Budget::new("directedness witnesses");
        while let Some((a, b)) = self.undirected_pair() {
            budget.tick()?;
            let (fa, fb) = (self.stages[a].map.clone(), self.stages[b].map.clone());
            let mut found = false;
            for c in 0..self.stages.len() {
                let fc = &self.stages[c].map;
                if let (Some(ha), Some(hb)) = (factor(fc, &fa)?, factor(fc, &fb)?) {
                    self.leqs.push(Leq { upper: c, lower: a, via: ha });
                    self.leqs.push(Leq { upper: c, lower: b, via: hb });
                    found = true;
                    break;
                }
            }
            if found {
                continue;
            }
            let sig = self.base.sig.clone();
            let (p, projs) = product(&sig, &[fa.dst.clone(), fb.dst.clone()])?;
            let pm = pair_map(&p, &[fa.clone(), fb.clone()], &self.base);
            let (_, onto, incl) = image(&pm)?;
            let w = self.stages.len();
            self.stages.push(Stage {
                label: format!("{}^{}", self.stages[a].label, self.stages[b].label),
                map: onto,
            });
            self.leqs.push(Leq { upper: w, lower: a, via: projs[0].compose(&incl) });
            self.leqs.push(Leq { upper: w, lower: b, via: projs[1].compose(&incl) });
        }
        Ok(())
    }

    pub fn is_reduced(&self) -> bool {
        self.stages.iter().all(|s| s.map.is_surjective())
    }

    pub fn stage_index(&self, label: &str) -> Result<usize> {
        self.stages
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::Unknown { kind: "stage", name: label.to_string() })
    }

    /// The generating stages as a list of homs.
    pub fn generating_stages(&self) -> &[Stage] {
        &self.stages[..self.generating]
    }

    /// Stages replaced by their images, with the inclusions of the images.
    pub fn reduce(&self) -> Result<Reduced> {
        let mut stages = Vec::new();
        let mut incls = Vec::new();
        for st in &self.stages {
            if st.map.is_surjective() {
                incls.push(Hom::identity(&st.map.dst));
                stages.push(st.clone());
            } else {
                let (_, onto, incl) = image(&st.map)?;
                incls.push(incl);
                stages.push(Stage { label: st.label.clone(), map: onto });
            }
        }
        let mut leqs = Vec::new();
        for l in &self.leqs {
            let via = factor(&stages[l.upper].map, &stages[l.lower].map)?
                .ok_or_else(|| Error::Failed("reduction: mediator does not restrict to images".into()))?;
            leqs.push(Leq { upper: l.upper, lower: l.lower, via });
        }
        let filt = ProjFilt { name: self.name.clone(), base: self.base.clone(), stages, leqs, generating: self.generating };
        Ok(Reduced { filt, incls })
    }
}

/// A reduced filtration with the inclusions of its stage images.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub filt: ProjFilt,
    /// Per stage, the inclusion of the new target into the old one.
    pub incls: Vec<Hom>,
}

pub fn discrete(x: &Arc<Algebra>) -> ProjFilt {
    ProjFilt {
        name: format!("disc({})", x.name),
        base: x.clone(),
        stages: vec![Stage { label: "id".into(), map: Hom::identity(x) }],
        leqs: vec![],
        generating: 1,
    }
}

pub fn indiscrete(x: &Arc<Algebra>) -> ProjFilt {
    let t = Arc::new(terminal(&x.sig));
    let maps = x.sizes().iter().map(|&n| vec![0; n]).collect();
    ProjFilt {
        name: format!("indisc({})", x.name),
        base: x.clone(),
        stages: vec![Stage { label: "pt".into(), map: Hom::new_unchecked(x.clone(), t, maps) }],
        leqs: vec![],
        generating: 1,
    }
}

/// Stages `g ∘ f`, mediators unchanged.
pub fn pullback(f: &ProjFilt, along: &Hom) -> ProjFilt {
    ProjFilt {
        name: format!("{}*", f.name),
        base: along.src.clone(),
        stages: f.stages.iter().map(|s| Stage { label: s.label.clone(), map: s.map.compose(along) }).collect(),
        leqs: f.leqs.clone(),
        generating: f.generating,
    }
}

/// The compatible families of a reduced filtration.
#[derive(Debug, Clone)]
pub struct Limit {
    pub algebra: Arc<Algebra>,
    /// `families[s][e][λ]`.
    pub families: Vec<Vec<Vec<Elt>>>,
    pub cone: Vec<Hom>,
    /// `base → limit`, assembling the stages.
    pub iota: Hom,
}

const LIMIT_LABEL_CAP: usize = 40;

/// The subalgebra of `∏ targets` of families compatible with every mediator.
pub fn limit(f: &ProjFilt) -> Result<Limit> {
    let n = f.stages.len();
    let reach = f.reach();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| std::cmp::Reverse(reach[u].len()));
    let ns = f.base.num_sorts();
    let mut families: Vec<Vec<Vec<Elt>>> = Vec::with_capacity(ns);
    let mut budget = Budget::new("limit families");
    for s in 0..ns {
        let mut out = Vec::new();
        let mut cur: Vec<Option<Elt>> = vec![None; n];
        search_families(f, s, &order, 0, &mut cur, &mut out, &mut budget)?;
        families.push(out);
    }
    let index: Vec<HashMap<Vec<Elt>, Elt>> = families
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect())
        .collect();
    let carriers: Vec<Vec<String>> = families
        .iter()
        .enumerate()
        .map(|(s, fs)| {
            fs.iter()
                .enumerate()
                .map(|(k, t)| {
                    let l = format!(
                        "({})",
                        t.iter().enumerate().map(|(u, &x)| f.stages[u].map.dst.label(s, x)).collect::<Vec<_>>().join(",")
                    );
                    if l.len() <= LIMIT_LABEL_CAP {
                        l
                    } else {
                        format!("x{k}")
                    }
                })
                .collect()
        })
        .collect();
    let sig = f.base.sig.clone();
    let alg = Algebra::from_fn(&format!("lim({})", f.name), sig.clone(), carriers, |op, args| {
        let decl = &sig.ops[op];
        let fam: Vec<Elt> = (0..n)
            .map(|u| {
                let xs: Vec<Elt> = args.iter().enumerate().map(|(k, &a)| families[decl.inputs[k]][a][u]).collect();
                f.stages[u].map.dst.apply(op, &xs)
            })
            .collect();
        index[decl.output]
            .get(&fam)
            .copied()
            .ok_or_else(|| Error::Failed("compatible families are not closed under the operations".into()))
    })?;
    let alg = Arc::new(alg);
    let cone = (0..n)
        .map(|u| {
            let maps = families.iter().map(|fs| fs.iter().map(|t| t[u]).collect()).collect();
            Hom::new(alg.clone(), f.stages[u].map.dst.clone(), maps)
        })
        .collect::<Result<Vec<_>>>()?;
    let maps = (0..ns)
        .map(|s| {
            (0..f.base.size(s))
                .map(|x| {
                    let fam: Vec<Elt> = (0..n).map(|u| f.stages[u].map.apply(s, x)).collect();
                    index[s].get(&fam).copied().ok_or_else(|| Error::Failed("stage values are not compatible".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let iota = Hom::new(f.base.clone(), alg.clone(), maps)?;
    Ok(Limit { algebra: alg, families, cone, iota })
}

fn search_families(
    f: &ProjFilt,
    s: usize,
    order: &[usize],
    depth: usize,
    cur: &mut Vec<Option<Elt>>,
    out: &mut Vec<Vec<Elt>>,
    budget: &mut Budget,
) -> Result<()> {
    budget.tick()?;
    if depth == order.len() {
        out.push(cur.iter().map(|x| x.unwrap()).collect());
        return Ok(());
    }
    let u = order[depth];
    // A value forced by an assigned stage above, if any.
    let forced = f
        .leqs
        .iter()
        .find(|l| l.lower == u && cur[l.upper].is_some())
        .map(|l| l.via.apply(s, cur[l.upper].unwrap()));
    let candidates: Vec<Elt> = match forced {
        Some(v) => vec![v],
        None => (0..f.stages[u].map.dst.size(s)).collect(),
    };
    for v in candidates {
        let ok = f.leqs.iter().all(|l| {
            if l.lower == u {
                cur[l.upper].map_or(true, |t| l.via.apply(s, t) == v)
            } else if l.upper == u {
                cur[l.lower].map_or(true, |t| l.via.apply(s, v) == t)
            } else {
                true
            }
        });
        if ok {
            cur[u] = Some(v);
            search_families(f, s, order, depth + 1, cur, out, budget)?;
            cur[u] = None;
        }
    }
    Ok(())
}

/// Reduction followed by the limit, with the induced stages.
#[derive(Debug, Clone)]
pub struct Completion {
    pub filt: ProjFilt,
    pub reduced: Reduced,
    pub limit: Limit,
    /// `base(F) → base(complete(F))`.
    pub iota: Hom,
}

pub fn complete(f: &ProjFilt) -> Result<Completion> {
    let reduced = f.reduce()?;
    let lim = limit(&reduced.filt)?;
    let stages = reduced
        .filt
        .stages
        .iter()
        .zip(&lim.cone)
        .map(|(s, c)| Stage { label: s.label.clone(), map: c.clone() })
        .collect();
    let filt = ProjFilt {
        name: format!("{}^", f.name),
        base: lim.algebra.clone(),
        stages,
        leqs: reduced.filt.leqs.clone(),
        generating: f.generating,
    };
    filt.validate()?;
    Ok(Completion { iota: lim.iota.clone(), filt, reduced, limit: lim })
}

/// Reduced with a bijective canonical map to the limit.
pub fn is_iso_filtration(f: &ProjFilt) -> Result<bool> {
    Ok(f.is_reduced() && complete(f)?.iota.is_bijective())
}

/// A morphism of filtrations: a base hom with, for each target stage, a
/// source stage and a mediator exhibiting the factorization.
#[derive(Debug, Clone)]
pub struct FilteredHom {
    pub base: Hom,
    pub certs: Vec<(usize, Hom)>,
}

/// Certificates for `phi` as a morphism `f1 → f2`, if it is one.
pub fn filtered_hom(f1: &ProjFilt, f2: &ProjFilt, phi: &Hom) -> Result<Option<FilteredHom>> {
    let mut certs = Vec::new();
    for g in &f2.stages {
        let target = g.map.compose(phi);
        let mut found = None;
        for (k, f) in f1.stages.iter().enumerate() {
            if let Some(h) = factor(&f.map, &target)? {
                found = Some((k, h));
                break;
            }
        }
        match found {
            Some(c) => certs.push(c),
            None => return Ok(None),
        }
    }
    Ok(Some(FilteredHom { base: phi.clone(), certs }))
}

/// The first target stage without a certificate.
pub fn filtered_violation(f1: &ProjFilt, f2: &ProjFilt, phi: &Hom) -> Result<Option<String>> {
    for g in &f2.stages {
        let target = g.map.compose(phi);
        let mut ok = false;
        for f in &f1.stages {
            if factor(&f.map, &target)?.is_some() {
                ok = true;
                break;
            }
        }
        if !ok {
            return Ok(Some(format!("stage {} of {} does not factor through {}", g.label, f2.name, f1.name)));
        }
    }
    Ok(None)
}

pub fn filtered_hom_set(f1: &ProjFilt, f2: &ProjFilt) -> Result<Vec<FilteredHom>> {
    let mut out = Vec::new();
    for phi in enumerate_homs(&f1.base, &f2.base)? {
        if let Some(m) = filtered_hom(f1, f2, &phi)? {
            out.push(m);
        }
    }
    Ok(out)
}

/// Certificates that `f1` is stronger than `f2` (same base).
pub fn stronger(f1: &ProjFilt, f2: &ProjFilt) -> Result<Option<FilteredHom>> {
    if f1.base.sizes() != f2.base.sizes() || f1.base.tables != f2.base.tables {
        return invalid("stronger: filtrations on different bases");
    }
    filtered_hom(f1, f2, &Hom::identity(&f1.base))
}

pub fn mutually_stronger(f1: &ProjFilt, f2: &ProjFilt) -> Result<bool> {
    Ok(stronger(f1, f2)?.is_some() && stronger(f2, f1)?.is_some())
}

/// Quotients of `y` through which every `q ∘ f_i` lifts into `F_i`.
pub fn pushforward(sink: &[(ProjFilt, Hom)], y: &Arc<Algebra>) -> Result<ProjFilt> {
    for (f, h) in sink {
        check_hom_source(h, &f.base, "pushforward")?;
    }
    let mut stages = Vec::new();
    for (k, theta) in enumerate_congruences(y)?.iter().enumerate() {
        let (_, q) = quotient(y, theta)?;
        let mut ok = true;
        for (f, h) in sink {
            let qf = q.compose(h);
            let mut lifts = false;
            for st in &f.stages {
                if factor(&st.map, &qf)?.is_some() {
                    lifts = true;
                    break;
                }
            }
            if !lifts {
                ok = false;
                break;
            }
        }
        if ok {
            stages.push(Stage { label: format!("q{k}"), map: q });
        }
    }
    ProjFilt::directed(&format!("push({})", y.name), y.clone(), stages, vec![])
}

/// Quotient maps onto targets with at most `k` elements, directified.
pub fn profinite_filtration(x: &Arc<Algebra>, k: usize) -> Result<ProjFilt> {
    let mut stages = Vec::new();
    for (n, theta) in enumerate_congruences(x)?.iter().enumerate() {
        if theta.total_classes() <= k {
            let (_, q) = quotient(x, theta)?;
            stages.push(Stage { label: format!("q{n}"), map: q });
        }
    }
    ProjFilt::directed(&format!("prof{k}({})", x.name), x.clone(), stages, vec![])
}

/// The canonical filtration of an iso-filtration: each stage as a filtered
/// morphism into the discrete filtration on its target.
#[derive(Debug, Clone)]
pub struct Outer {
    pub inner: ProjFilt,
    pub stages: Vec<(ProjFilt, FilteredHom)>,
}

pub fn canonical_filtration(k: &ProjFilt) -> Result<Outer> {
    if !is_iso_filtration(k)? {
        return invalid(format!("canonical filtration: {} is not an iso-filtration", k.name));
    }
    let mut stages = Vec::new();
    for st in &k.stages {
        let d = discrete(&st.map.dst);
        let m = filtered_hom(k, &d, &st.map)?.ok_or_else(|| Error::Failed("stage is not filtered".into()))?;
        stages.push((d, m));
    }
    Ok(Outer { inner: k.clone(), stages })
}

impl Outer {
    /// The underlying filtration: the bases of the outer stages.
    pub fn forget(&self) -> Vec<Hom> {
        self.stages.iter().map(|(_, m)| m.base.clone()).collect()
    }
}

/// Filtered homs `o1.inner → o2.inner` whose composite with each outer stage
/// of `o2` factors through an outer stage of `o1` by a filtered hom.
pub fn outer_hom_set(o1: &Outer, o2: &Outer) -> Result<Vec<FilteredHom>> {
    let mut out = Vec::new();
    'phi: for phi in filtered_hom_set(&o1.inner, &o2.inner)? {
        for (t2, s2) in &o2.stages {
            let target = s2.base.compose(&phi.base);
            let mut ok = false;
            for (t1, s1) in &o1.stages {
                if let Some(h) = factor(&s1.base, &target)? {
                    if filtered_hom(t1, t2, &h)?.is_some() {
                        ok = true;
                        break;
                    }
                }
            }
            if !ok {
                continue 'phi;
            }
        }
        out.push(phi);
    }
    Ok(out)
}

/// A finite directed family of homs into `base`.
#[derive(Debug, Clone)]
pub struct IndFilt {
    pub name: String,
    pub base: Arc<Algebra>,
    pub stages: Vec<Stage>,
    pub leqs: Vec<Leq>,
    pub generating: usize,
}

impl IndFilt {
    /// Validates `f_upper ∘ via = f_lower` and adjoins copair images where
    /// pairs of stages lack a common upper bound.
    pub fn directed(name: &str, base: Arc<Algebra>, stages: Vec<Stage>, leqs: Vec<Leq>) -> Result<IndFilt> {
        let generating = stages.len();
        let mut f = IndFilt { name: name.to_string(), base, stages, leqs, generating };
        for l in &f.leqs {
            if f.stages[l.upper].map.compose(&l.via).maps != f.stages[l.lower].map.maps {
                return failed(format!(
                    "inductive filtration {name}: mediator {} -> {} does not commute",
                    f.stages[l.lower].label, f.stages[l.upper].label
                ));
            }
        }
        let mut budget = Budget::new("directedness witnesses");
        loop {
            budget.tick()?;
            let reach = f.reach();
            let n = f.stages.len();
            let pair = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .find(|&(a, b)| !reach.iter().any(|r| r.contains(&a) && r.contains(&b)));
            let Some((a, b)) = pair else { break };
            f.adjoin_copair(a, b)?;
        }
        Ok(f)
    }

    fn reach(&self) -> Vec<HashSet<usize>> {
        (0..self.stages.len())
            .map(|u| {
                let mut seen = HashSet::from([u]);
                let mut q = VecDeque::from([u]);
                while let Some(x) = q.pop_front() {
                    for l in self.leqs.iter().filter(|l| l.upper == x) {
                        if seen.insert(l.lower) {
                            q.push_back(l.lower);
                        }
                    }
                }
                seen
            })
            .collect()
    }

    /// The subalgebra generated by the two images, as a new stage.
    fn adjoin_copair(&mut self, a: usize, b: usize) -> Result<()> {
        let (fa, fb) = (&self.stages[a].map, &self.stages[b].map);
        let mut seed = Vec::new();
        for f in [fa, fb] {
            for (s, m) in f.maps.iter().enumerate() {
                seed.extend(m.iter().map(|&x| (s, x)));
            }
        }
        seed.sort();
        seed.dedup();
        let (sub, incl) = crate::finalg::subalgebra_closure(&self.base, &seed)?;
        let restrict = |f: &Hom| -> Result<Hom> {
            let maps = f
                .maps
                .iter()
                .enumerate()
                .map(|(s, m)| m.iter().map(|&x| incl.maps[s].iter().position(|&y| y == x).unwrap()).collect())
                .collect();
            Hom::new(f.src.clone(), sub.clone(), maps)
        };
        let (va, vb) = (restrict(fa)?, restrict(fb)?);
        let w = self.stages.len();
        self.stages.push(Stage { label: format!("{}+{}", self.stages[a].label, self.stages[b].label), map: incl });
        self.leqs.push(Leq { upper: w, lower: a, via: va });
        self.leqs.push(Leq { upper: w, lower: b, via: vb });
        Ok(())
    }
}

/// A covariant functor on finite algebras, given on objects and homs.
pub trait FiltFunctor {
    fn name(&self) -> String;
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>>;
    fn mor(&self, f: &Hom) -> Result<Hom>;
}

/// A contravariant functor: `mor(f: X → Y)` is `G(Y) → G(X)`.
pub trait ContraFunctor {
    fn name(&self) -> String;
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>>;
    fn mor(&self, f: &Hom) -> Result<Hom>;
}

/// Stagewise application, reduction and completion.
pub fn lift(g: &dyn FiltFunctor, f: &ProjFilt) -> Result<Completion> {
    let base = g.obj(&f.base)?;
    let stages = f
        .stages
        .iter()
        .map(|s| Ok(Stage { label: s.label.clone(), map: g.mor(&s.map)?.retarget_src(&base) }))
        .collect::<Result<Vec<_>>>()?;
    let leqs = f
        .leqs
        .iter()
        .map(|l| Ok(Leq { upper: l.upper, lower: l.lower, via: g.mor(&l.via)? }))
        .collect::<Result<Vec<_>>>()?;
    let gf = ProjFilt { name: format!("{}({})", g.name(), f.name), base, stages, leqs, generating: f.generating };
    gf.validate()?;
    complete(&gf)
}

/// An inductive filtration becomes projective under a contravariant functor.
pub fn lift_contra(g: &dyn ContraFunctor, f: &IndFilt) -> Result<Completion> {
    let base = g.obj(&f.base)?;
    let stages = f
        .stages
        .iter()
        .map(|s| Ok(Stage { label: s.label.clone(), map: g.mor(&s.map)?.retarget_src(&base) }))
        .collect::<Result<Vec<_>>>()?;
    let leqs = f
        .leqs
        .iter()
        .map(|l| Ok(Leq { upper: l.upper, lower: l.lower, via: g.mor(&l.via)? }))
        .collect::<Result<Vec<_>>>()?;
    let gf = ProjFilt { name: format!("{}({})", g.name(), f.name), base, stages, leqs, generating: f.generating };
    gf.validate()?;
    complete(&gf)
}

type AlgKey = (Vec<Vec<String>>, Vec<Vec<Elt>>);

fn key(a: &Algebra) -> AlgKey {
    (a.carriers.clone(), a.tables.clone())
}

pub struct IdentityFunctor;

impl FiltFunctor for IdentityFunctor {
    fn name(&self) -> String {
        "Id".into()
    }
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        Ok(x.clone())
    }
    fn mor(&self, f: &Hom) -> Result<Hom> {
        Ok(f.clone())
    }
}

/// `hom_cov(B, −)`.
pub struct HomCovFunctor {
    pub b: Arc<CoVObject>,
    cache: Mutex<HashMap<AlgKey, Arc<Algebra>>>,
}

impl HomCovFunctor {
    pub fn new(b: Arc<CoVObject>) -> Self {
        HomCovFunctor { b, cache: Mutex::new(HashMap::new()) }
    }
}

impl FiltFunctor for HomCovFunctor {
    fn name(&self) -> String {
        format!("Hom({},-)", self.b.name)
    }
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        if let Some(a) = self.cache.lock().unwrap().get(&key(x)) {
            return Ok(a.clone());
        }
        let a = hom_cov(&self.b, x)?.algebra;
        self.cache.lock().unwrap().insert(key(x), a.clone());
        Ok(a)
    }
    fn mor(&self, f: &Hom) -> Result<Hom> {
        let (_, _, h) = hom_cov_map(&self.b, f)?;
        Ok(h.retarget_src(&self.obj(&f.src)?).retarget(&self.obj(&f.dst)?))
    }
}

/// `ladj_apply(B, −)`, the left adjoint of `hom_cov(B, −)`.
pub struct LadjFunctor {
    pub b: Arc<CoVObject>,
    cache: Mutex<HashMap<AlgKey, Arc<Ladj>>>,
}

impl LadjFunctor {
    pub fn new(b: Arc<CoVObject>) -> Self {
        LadjFunctor { b, cache: Mutex::new(HashMap::new()) }
    }

    pub fn ladj(&self, x: &Arc<Algebra>) -> Result<Arc<Ladj>> {
        if let Some(l) = self.cache.lock().unwrap().get(&key(x)) {
            return Ok(l.clone());
        }
        let l = Arc::new(ladj_apply(&self.b, x)?);
        self.cache.lock().unwrap().insert(key(x), l.clone());
        Ok(l)
    }
}

impl FiltFunctor for LadjFunctor {
    fn name(&self) -> String {
        format!("L_{}", self.b.name)
    }
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        Ok(self.ladj(x)?.algebra().clone())
    }
    /// `⟨g, y⟩ ↦ [f(g), y]`.
    fn mor(&self, f: &Hom) -> Result<Hom> {
        let (l, l2) = (self.ladj(&f.src)?, self.ladj(&f.dst)?);
        let gens = l.a.generators.clone().unwrap_or_default();
        let out: Result<Vec<Elt>> = l
            .gen_keys
            .iter()
            .map(|&(g, y)| {
                let (s, a) = gens[g];
                Ok(l2.bracket_gen(s, f.apply(s, a), y))
            })
            .collect();
        l.pres.extend(l2.algebra(), &out?)
    }
}

/// `Hom(−, A)` for a V-algebra object `A`.
pub struct HomContraFunctor {
    pub aobj: VAlgebraObject,
    cache: Mutex<HashMap<AlgKey, Arc<Algebra>>>,
}

impl HomContraFunctor {
    pub fn new(aobj: VAlgebraObject) -> Self {
        HomContraFunctor { aobj, cache: Mutex::new(HashMap::new()) }
    }

    pub fn hom_algebra(&self, x: &Arc<Algebra>) -> Result<HomAlgebra> {
        hom_algebra_contra(&self.aobj, x)
    }
}

impl ContraFunctor for HomContraFunctor {
    fn name(&self) -> String {
        format!("Hom(-,{})", self.aobj.name)
    }
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        if let Some(a) = self.cache.lock().unwrap().get(&key(x)) {
            return Ok(a.clone());
        }
        let a = hom_algebra_contra(&self.aobj, x)?.algebra;
        self.cache.lock().unwrap().insert(key(x), a.clone());
        Ok(a)
    }
    fn mor(&self, f: &Hom) -> Result<Hom> {
        let (_, _, h) = hom_algebra_contra_map(&self.aobj, f)?;
        Ok(h.retarget_src(&self.obj(&f.dst)?).retarget(&self.obj(&f.src)?))
    }
}

/// `H ∘ G`.
pub struct Composite<'a> {
    pub outer: &'a dyn FiltFunctor,
    pub inner: &'a dyn FiltFunctor,
}

impl FiltFunctor for Composite<'_> {
    fn name(&self) -> String {
        format!("{}.{}", self.outer.name(), self.inner.name())
    }
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        self.outer.obj(&self.inner.obj(x)?)
    }
    fn mor(&self, f: &Hom) -> Result<Hom> {
        self.outer.mor(&self.inner.mor(f)?)
    }
}

/// The reflection onto algebras embeddable in powers of the probes:
/// `X ↦ X / ⋂ ker(h)` over all homs `h` into a probe. Functorial, but it
/// need not send injections to injections.
pub struct ResidualFunctor {
    pub probes: Vec<Arc<Algebra>>,
}

impl ResidualFunctor {
    fn kernel_quotient(&self, x: &Arc<Algebra>) -> Result<Hom> {
        let mut pairs = Vec::new();
        let homs: Vec<Hom> = self
            .probes
            .iter()
            .map(|p| enumerate_homs(x, p))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        for s in 0..x.num_sorts() {
            for a in 0..x.size(s) {
                for b in a + 1..x.size(s) {
                    if homs.iter().all(|h| h.apply(s, a) == h.apply(s, b)) {
                        pairs.push((s, a, b));
                    }
                }
            }
        }
        let theta = crate::finalg::congruence_generated(x, &pairs);
        Ok(quotient(x, &theta)?.1)
    }
}

impl FiltFunctor for ResidualFunctor {
    fn name(&self) -> String {
        "Res".into()
    }
    fn obj(&self, x: &Arc<Algebra>) -> Result<Arc<Algebra>> {
        Ok(self.kernel_quotient(x)?.dst.clone())
    }
    fn mor(&self, f: &Hom) -> Result<Hom> {
        let (qs, qd) = (self.kernel_quotient(&f.src)?, self.kernel_quotient(&f.dst)?);
        factor(&qs, &qd.compose(f))?.ok_or_else(|| Error::Failed("residual quotient is not functorial here".into()))
    }
}

/// Maps each family of `b` to a family of `a` through per-stage maps.
fn family_map(b: &Completion, a: &Completion, stage_maps: &[Hom]) -> Result<Option<Hom>> {
    let ns = b.limit.algebra.num_sorts();
    let index: Vec<HashMap<&Vec<Elt>, Elt>> = a
        .limit
        .families
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(k, t)| (t, k)).collect())
        .collect();
    let mut maps = Vec::new();
    for s in 0..ns {
        let mut m = Vec::new();
        for fam in &b.limit.families[s] {
            let image: Vec<Elt> = fam.iter().enumerate().map(|(u, &x)| stage_maps[u].apply(s, x)).collect();
            match index[s].get(&image) {
                Some(&k) => m.push(k),
                None => return Ok(None),
            }
        }
        maps.push(m);
    }
    Ok(Hom::new(b.limit.algebra.clone(), a.limit.algebra.clone(), maps).ok())
}

/// `lift(H ∘ G)` against `lift(H) ∘ lift(G)`: a base bijection assembled
/// stagewise and mutual refinement after transport.
pub fn check_lift_composition(g: &dyn FiltFunctor, h: &dyn FiltFunctor, f: &ProjFilt) -> Result<Certification> {
    let subject = format!("lift({}.{}) on {}", h.name(), g.name(), f.name);
    let hg = Composite { outer: h, inner: g };
    let a = lift(&hg, f)?;
    let lg = lift(g, f)?;
    let b = lift(h, &lg.filt)?;
    // Stage u of b lives in H(T'_u) with T'_u ⊆ G(T_u); stage u of a in HG(T_u).
    let mut stage_maps = Vec::new();
    let mut defined = true;
    for u in 0..f.stages.len() {
        let to_h = h.mor(&lg.reduced.incls[u])?;
        let through = to_h.compose(&b.reduced.incls[u]);
        // Pull back along the inclusion of a's reduced target.
        let incl_a = &a.reduced.incls[u];
        let inv: Vec<HashMap<Elt, Elt>> = incl_a
            .maps
            .iter()
            .map(|m| m.iter().enumerate().map(|(k, &x)| (x, k)).collect())
            .collect();
        let maps: Option<Vec<Vec<Elt>>> = through
            .maps
            .iter()
            .enumerate()
            .map(|(s, m)| m.iter().map(|x| inv[s].get(x).copied()).collect())
            .collect();
        match maps {
            Some(maps) => stage_maps.push(Hom::new_unchecked(through.src.clone(), incl_a.src.clone(), maps)),
            None => {
                defined = false;
                break;
            }
        }
    }
    let beta = if defined { family_map(&b, &a, &stage_maps)? } else { None };
    let mut laws = Vec::new();
    match &beta {
        Some(beta) if beta.is_bijective() => {
            laws.push(Law { name: "base bijection".into(), pass: true, witness: None });
            let inv = beta.inverse()?;
            let moved = pullback(&b.filt, &inv);
            let w = if mutually_stronger(&a.filt, &moved)? {
                None
            } else {
                Some("transported filtrations are not mutually stronger".to_string())
            };
            laws.push(Law { name: "mutually stronger".into(), pass: w.is_none(), witness: w });
        }
        _ => {
            let w = format!(
                "bases of sizes {} and {} are not identified stagewise",
                a.filt.base.total_size(),
                b.filt.base.total_size()
            );
            laws.push(Law { name: "base bijection".into(), pass: false, witness: Some(w) });
        }
    }
    Ok(Certification { subject, laws })
}

/// `|FilteredHom(lift L_B (E), D)| = |FilteredHom(E, lift Hom(B,−) (D))|`
/// with the explicit map `ψ ↦ ι ∘ transpose(ψ ∘ ι)`.
pub fn check_lift_adjunction(b: &Arc<CoVObject>, e: &ProjFilt, d: &ProjFilt) -> Result<Certification> {
    let lf = LadjFunctor::new(b.clone());
    let gf = HomCovFunctor::new(b.clone());
    let left = lift(&lf, e)?;
    let right = lift(&gf, d)?;
    let lhs = filtered_hom_set(&left.filt, d)?;
    let rhs = filtered_hom_set(e, &right.filt)?;
    let mut laws = vec![Law {
        name: "hom counts".into(),
        pass: lhs.len() == rhs.len(),
        witness: (lhs.len() != rhs.len()).then(|| format!("{} vs {}", lhs.len(), rhs.len())),
    }];
    let l = lf.ladj(&e.base)?;
    let hc = hom_cov(b, &d.base)?;
    let mut images = HashSet::new();
    let mut w = None;
    for psi in &lhs {
        let through = psi.base.compose(&left.iota);
        let phi = l.transpose(&through, &hc)?;
        let phi = right.iota.retarget_src(&hc.algebra).compose(&phi);
        if filtered_hom(e, &right.filt, &phi)?.is_none() {
            w = Some(format!("transpose of {} is not filtered", psi.base.display()));
            break;
        }
        images.insert(phi.maps);
    }
    if w.is_none() && images.len() != lhs.len() {
        w = Some("transposition is not injective".into());
    }
    laws.push(Law { name: "explicit bijection".into(), pass: w.is_none(), witness: w });
    Ok(Certification { subject: format!("L_{} -| Hom({},-) on {} / {}", b.name, b.name, e.name, d.name), laws })
}

/// How components are filtered before recomputing `⊡`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltMode {
    Discrete,
    Profinite(usize),
}

fn mode_filtration(x: &Arc<Algebra>, mode: FiltMode) -> Result<Completion> {
    match mode {
        FiltMode::Discrete => complete(&discrete(x)),
        FiltMode::Profinite(k) => complete(&profinite_filtration(x, k)?),
    }
}

/// A bijective hom between equal-sized algebras, validated.
fn comparison(maps_of: &Hom, src: &Arc<Algebra>, dst: &Arc<Algebra>) -> Result<Option<Hom>> {
    let h = match Hom::new(src.clone(), dst.clone(), maps_of.maps.clone()) {
        Ok(h) => h,
        Err(_) => return Ok(None),
    };
    Ok(h.is_bijective().then_some(h))
}

/// `⊡` recomputed through lifted left adjoints on filtered components,
/// compared with the unfiltered product, with every structure map certified
/// as a filtered morphism and the monoid laws re-checked.
pub fn filtered_tw_check(m: &TallWraithMonoid, mode: FiltMode) -> Result<Certification> {
    let t = &m.t;
    let mut laws = Vec::new();
    let lt = LadjFunctor::new(t.clone());
    let li = LadjFunctor::new(m.unit.clone());
    let ltt = LadjFunctor::new(m.tt.obj.clone());
    let it = twprod(&m.unit, t)?;
    let ti = twprod(t, &m.unit)?;
    let tt_t = twprod(&m.tt.obj, t)?;
    let t_tt = twprod(t, &m.tt.obj)?;
    let lam = left_unitor(&it)?;
    let rho = right_unitor(&ti)?;
    let alpha = associator(&tt_t, &t_tt, &m.tt, &m.tt)?;
    for i in 0..t.num_sorts() {
        let sort = &t.v.sig.sorts[i];
        let e = mode_filtration(&t.components[i], mode)?;
        let iota = &e.iota;
        // (T ⊡ T)(i) through the filtered pipeline.
        let ttf = lift(&lt, &e.filt)?;
        let kappa = ttf.iota.compose(&lt.mor(iota)?);
        let Some(kappa) = comparison(&kappa, &m.tt.obj.components[i], &ttf.filt.base)? else {
            laws.push(Law::new(&format!("product agrees ({sort})"), Some("no bijective comparison".into())));
            continue;
        };
        laws.push(Law::new(&format!("product agrees ({sort})"), None));
        let kinv = kappa.inverse()?;
        let mu = iota.compose(&m.mu.maps[i]).compose(&kinv);
        laws.push(Law::from_result(&format!("mu filtered ({sort})"), filtered_violation(&ttf.filt, &e.filt, &mu)));
        let unit_d = discrete(&m.unit.components[i]);
        let eta = iota.compose(&m.eta.maps[i]);
        laws.push(Law::from_result(&format!("eta filtered ({sort})"), filtered_violation(&unit_d, &e.filt, &eta)));
        // Unitors: (I ⊡ T)(i) and (T ⊡ I)(i).
        let itf = lift(&lt, &unit_d)?;
        let lam_f = iota.compose(&lam.maps[i]).compose(&itf.iota.inverse()?);
        laws.push(Law::from_result(&format!("left unitor filtered ({sort})"), filtered_violation(&itf.filt, &e.filt, &lam_f)));
        let tif = lift(&li, &e.filt)?;
        let k_ti = tif.iota.compose(&li.mor(iota)?);
        let rho_f = iota.compose(&rho.maps[i]).compose(&k_ti.inverse()?);
        laws.push(Law::from_result(&format!("right unitor filtered ({sort})"), filtered_violation(&tif.filt, &e.filt, &rho_f)));
        // Associator: L_T applied to the filtered (T ⊡ T)(i), against L_{T⊡T}(T(i)).
        let left = lift(&lt, &ttf.filt)?;
        let k_left = left.iota.compose(&lt.mor(&kappa)?);
        let right = lift(&ltt, &e.filt)?;
        let k_right = right.iota.compose(&ltt.mor(iota)?);
        let a_f = k_right.compose(&alpha.maps[i]).compose(&k_left.inverse()?);
        laws.push(Law::from_result(&format!("associator filtered ({sort})"), filtered_violation(&left.filt, &right.filt, &a_f)));
    }
    for law in tw_monoid_check(m)?.laws {
        laws.push(Law { name: format!("{} (filtered)", law.name), ..law });
    }
    let what = match mode {
        FiltMode::Discrete => "discrete".to_string(),
        FiltMode::Profinite(k) => format!("profinite {k}"),
    };
    Ok(Certification { subject: format!("filtered monoid on {} ({what})", t.name), laws })
}

impl Hom {
    /// The same maps with an equal source object substituted.
    pub fn retarget_src(&self, src: &Arc<Algebra>) -> Hom {
        Hom::new_unchecked(src.clone(), self.dst.clone(), self.maps.clone())
    }
}

/// Builds a projective filtration from stage and mediator homs given by name.
pub fn from_parts(
    name: &str,
    base: Arc<Algebra>,
    stages: Vec<(String, Hom)>,
    leqs: Vec<(String, String, Hom)>,
) -> Result<ProjFilt> {
    let stages: Vec<Stage> = stages.into_iter().map(|(label, map)| Stage { label, map }).collect();
    let find = |l: &str| {
        stages
            .iter()
            .position(|s| s.label == l)
            .ok_or_else(|| Error::Unknown { kind: "stage", name: l.to_string() })
    };
    let leqs = leqs
        .into_iter()
        .map(|(u, l, via)| Ok(Leq { upper: find(&u)?, lower: find(&l)?, via }))
        .collect::<Result<Vec<_>>>()?;
    ProjFilt::new(name, base, stages, leqs)
}
