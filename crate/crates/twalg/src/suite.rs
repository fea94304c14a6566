//! Fixture-wide checks behind `suite`, one group per topic.
//!
//! A check whose size guard trips is reported as `info` with the guard
//! message, so skipped pairs stay visible.

use crate::coalg::{hom_cov, hom_cov_map, unit_object, CoVObject};
use crate::error::{Error, Result};
use crate::filtration::{
    canonical_filtration, check_lift_adjunction, check_lift_composition, complete, discrete,
    filtered_hom_set, filtered_tw_check, indiscrete, is_iso_filtration, limit, mutually_stronger,
    outer_hom_set, profinite_filtration, pushforward, FiltFunctor, FiltMode, HomCovFunctor,
    LadjFunctor, ProjFilt, ResidualFunctor,
};
use crate::finalg::{count_homs, enumerate_homs, Algebra, Hom};
use crate::kernel::{Signature, SortedSet};
use crate::report::Check;
use crate::tallwraith::{
    associator, kunneth_check, ladj_counts, left_unitor, operations_monoid, pentagon_check,
    pentagon_keys, right_unitor, tw_algebra_module_check, tw_module_check, tw_monoid_check,
    twprod, Ladj, TallWraithMonoid,
};
use crate::variety::{hom_algebra_contra, impose_identities, Variety};
use crate::workspace::Workspace;
use std::sync::Arc;

pub const GROUPS: &[&str] = &[
    "free", "adjunction", "impose", "homlift", "twprod", "unit", "monoid", "kunneth", "filtration", "lift",
    "filtered",
];

/// Largest carrier used for filtration probes.
const FILT_CARRIER: usize = 8;
/// Largest probe used for naturality squares.
const NATURAL_CARRIER: usize = 4;
/// Ceiling on `candidates × table cells` when validating homs out of a product.
const WORK_CAP: u128 = 100_000_000;

pub fn run(ws: &Workspace, group: &str) -> Result<Vec<Check>> {
    match group {
        "all" => {
            let mut out = Vec::new();
            for g in GROUPS {
                out.extend(run(ws, g)?);
            }
            Ok(out)
        }
        "free" => free_sizes(ws),
        "adjunction" => free_adjunction(ws),
        "impose" => imposition(ws),
        "homlift" => hom_lift(ws),
        "twprod" => composition_product(ws),
        "unit" => unit_assoc(ws),
        "monoid" => monoids(ws),
        "kunneth" => kunneth(ws),
        "filtration" => filtrations(ws),
        "lift" => lifts(ws),
        "filtered" => filtered(ws),
        _ => Err(Error::Unknown { kind: "suite group", name: group.to_string() }),
    }
}

/// Runs `f`, turning a tripped size guard into an informational skip.
pub fn guarded(name: &str, f: impl FnOnce() -> Result<Check>) -> Result<Check> {
    match f() {
        Err(Error::Resource { what, needed, limit }) => {
            Ok(Check::info(name).detail(format!("skipped: {what} needs {needed}, limit {limit}")))
        }
        r => r,
    }
}

/// Fixture algebras of `v`.
pub fn members(ws: &Workspace, v: &Variety) -> Result<Vec<Arc<Algebra>>> {
    let mut out = Vec::new();
    for a in ws.algebras.values() {
        if v.contains(a)? {
            out.push(a.clone());
        }
    }
    Ok(out)
}

/// Fixture algebras over the signature of `v`, in `v` or not.
pub fn omega_algebras(ws: &Workspace, v: &Variety) -> Vec<Arc<Algebra>> {
    ws.algebras.values().filter(|a| a.sig == v.sig).cloned().collect()
}

/// Every sorted set with at most `max` names, by per-sort counts.
pub fn sorted_sets(sig: &Signature, max: usize) -> Vec<SortedSet> {
    let n = sig.num_sorts();
    let mut out = Vec::new();
    let mut counts = vec![0usize; n];
    loop {
        if counts.iter().sum::<usize>() <= max {
            let mut entries = Vec::new();
            for (s, &c) in counts.iter().enumerate() {
                for _ in 0..c {
                    entries.push((format!("x{}", entries.len()), s));
                }
            }
            out.push(SortedSet { entries });
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            counts[i] += 1;
            if counts[i] <= max {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn coalgebras_over(ws: &Workspace, v: &str) -> Vec<Arc<CoVObject>> {
    ws.coalgebras.values().filter(|b| b.v.name == v).cloned().collect()
}

fn free_sizes(ws: &Workspace) -> Result<Vec<Check>> {
    let cases = [
        ("Vec2", "", 1),
        ("Vec2", "x:s", 2),
        ("Vec2", "x:s, y:s", 4),
        ("Vec2", "x:s, y:s, z:s", 8),
        ("Bool", "x:s", 4),
        ("SLat", "x:s, y:s, z:s", 7),
    ];
    let mut out = Vec::new();
    for (vname, gens, expected) in cases {
        let v = ws.variety(vname)?;
        let x = SortedSet::parse(&v.sig, gens)?;
        let f = v.free(&x)?;
        let size = f.algebra.total_size();
        let w = v.violation(&f.algebra)?;
        let name = format!("free {vname} on {{{gens}}} has {expected} elements");
        out.push(
            Check::expect(&name, size == expected && w.is_none(), || match w {
                Some(w) => format!("free algebra violates {w}"),
                None => format!("size {size}"),
            })
            .count("size", size),
        );
    }
    let g = ws.variety("Grd2")?;
    let f = g.free(&SortedSet::parse(&g.sig, "x:a")?)?;
    let (a, b) = (f.algebra.size(0), f.algebra.size(1));
    out.push(
        Check::expect("free Grd2 on one sort-a generator has nontrivial sort b", b > 1, || format!("sort b has {b}"))
            .count("a", a)
            .count("b", b),
    );
    let bool_ = ws.variety("Bool")?;
    let unit = unit_object(&bool_)?;
    let n = unit.components[0].total_size();
    out.push(Check::expect("Bool unit object component has 4 elements", n == 4, || format!("size {n}")).count("size", n));
    Ok(out)
}

fn free_adjunction(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for v in ws.varieties.values() {
        let name = format!("|Hom(F(X),B)| = prod |B(s)|^|X(s)| in {} for |X| <= 3", v.name);
        out.push(guarded(&name, || {
            let bs = members(ws, v)?;
            let mut pairs = 0;
            let mut witness = None;
            for x in sorted_sets(&v.sig, 3) {
                let f = v.free(&x)?;
                for b in &bs {
                    let got = count_homs(&f.algebra, b)?;
                    let expected: usize = x.entries.iter().map(|&(_, s)| b.size(s)).product();
                    pairs += 1;
                    if got != expected && witness.is_none() {
                        witness = Some(format!("F({}) -> {}: {got} homs, expected {expected}", x.display(&v.sig), b.name));
                    }
                }
            }
            Ok(Check::law(&name, witness).count("pairs", pairs))
        })?);
    }
    Ok(out)
}

fn imposition(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for v in ws.varieties.values() {
        let name = format!("|Hom(A,B)| = |Hom(impose(A),B)| in {}", v.name);
        out.push(guarded(&name, || {
            let bs = members(ws, v)?;
            let mut pairs = 0;
            let mut witness = None;
            for a in omega_algebras(ws, v) {
                let (ia, _) = impose_identities(&a, &v.identities)?;
                if let Some(w) = v.violation(&ia)? {
                    witness.get_or_insert(format!("impose({}) violates {w}", a.name));
                }
                for b in &bs {
                    let (l, r) = (count_homs(&a, b)?, count_homs(&ia, b)?);
                    pairs += 1;
                    if l != r {
                        witness.get_or_insert(format!("{} -> {}: {l} against {r}", a.name, b.name));
                    }
                }
            }
            Ok(Check::law(&name, witness).count("pairs", pairs))
        })?);
    }
    Ok(out)
}

fn hom_lift(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let sets = ws.sets()?;
    let xs = members(ws, &sets)?;
    for v in ws.varieties.values() {
        for a in members(ws, v)? {
            let aobj = ws.algebra_object(v, &a)?;
            for x in &xs {
                let name = format!("Hom({}, {}) in {}", x.name, a.name, v.name);
                out.push(guarded(&name, || {
                    let h = hom_algebra_contra(&aobj, x)?;
                    Ok(Check::law(&name, v.violation(&h.algebra)?).count("size", h.algebra.total_size()))
                })?);
            }
        }
    }
    for b in ws.coalgebras.values() {
        for x in members(ws, &b.w)? {
            let name = format!("hom_cov({}, {}) in {}", b.name, x.name, b.v.name);
            out.push(guarded(&name, || {
                let h = hom_cov(b, &x)?;
                Ok(Check::law(&name, b.v.violation(&h.algebra)?).count("size", h.algebra.total_size()))
            })?);
        }
    }
    Ok(out)
}

fn log2(n: usize) -> Option<usize> {
    n.is_power_of_two().then(|| n.trailing_zeros() as usize)
}

/// Adjunction naturality in the probe: `transpose(g ∘ ψ) = Hom(B, g) ∘ transpose(ψ)`
/// for every `ψ: L(A) → g.src`.
pub fn naturality_violation(l: &Ladj, psis: &[Hom], g: &Hom) -> Result<Option<String>> {
    let (hc, hd, hg) = hom_cov_map(&l.b, g)?;
    let moved: Vec<Hom> = psis.iter().map(|psi| g.compose(psi)).collect();
    let lhs = l.transposes(&moved, &hd)?;
    let rhs = l.transposes(psis, &hc)?;
    for ((psi, x), y) in psis.iter().zip(&lhs).zip(&rhs) {
        if x.maps != hg.compose(y).maps {
            return Ok(Some(format!("square fails at {} along {}", psi.display(), g.display())));
        }
    }
    Ok(None)
}

/// Trips when validating every generator assignment `L → C` costs too much.
fn check_work(l: &Ladj, c: &Algebra) -> Result<()> {
    let a = l.algebra();
    let cand = crate::limits::product_size(a.generating_list().iter().map(|&(s, _)| c.size(s)));
    let needed = cand.saturating_mul(a.total_cells());
    if needed > WORK_CAP {
        return Err(Error::Resource { what: "hom validation work", needed, limit: WORK_CAP as u64 });
    }
    Ok(())
}

fn composition_product(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let vec2 = coalgebras_over(ws, "Vec2");
    for b1 in &vec2 {
        for b2 in &vec2 {
            let name = format!("dim {}*{} is the product of dimensions", b1.name, b2.name);
            out.push(guarded(&name, || {
                let p = twprod(b1, b2)?;
                let (n1, n2, n) =
                    (b1.components[0].total_size(), b2.components[0].total_size(), p.obj.components[0].total_size());
                let ok = matches!((log2(n1), log2(n2), log2(n)), (Some(d1), Some(d2), Some(d)) if d == d1 * d2);
                Ok(Check::expect(&name, ok, || format!("sizes {n1}, {n2} give {n}")).count("size", n))
            })?);
        }
    }
    for b1 in ws.coalgebras.values() {
        for b2 in ws.coalgebras.values().filter(|b2| b2.v.sig == b1.v.sig && b1.w.sig == b1.v.sig) {
            let p = match twprod(b1, b2) {
                Err(Error::Resource { what, needed, limit }) => {
                    let name = format!("composition product {}*{}", b1.name, b2.name);
                    out.push(Check::info(&name).detail(format!("skipped: {what} needs {needed}, limit {limit}")));
                    continue;
                }
                r => r?,
            };
            let probes = members(ws, &b2.w)?;
            for (i, l) in p.ladjs.iter().enumerate() {
                for c in &probes {
                    let name = format!("|Hom(({}*{})({i}), {})| = |Hom({}({i}), Hom({}, {}))|", b1.name, b2.name, c.name, b1.name, b2.name, c.name);
                    out.push(guarded(&name, || {
                        check_work(l, c)?;
                        let (lc, rc) = ladj_counts(l, c)?;
                        Ok(Check::expect(&name, lc == rc, || format!("{lc} against {rc}")).count("homs", lc))
                    })?);
                }
                let small: Vec<_> = probes.iter().filter(|c| c.total_size() <= NATURAL_CARRIER).collect();
                let name = format!("naturality squares for {}*{} ({i})", b1.name, b2.name);
                out.push(guarded(&name, || {
                    let mut squares = 0;
                    let mut witness = None;
                    for c in &small {
                        check_work(l, c)?;
                        let psis = enumerate_homs(l.algebra(), c)?;
                        for d in &small {
                            for g in enumerate_homs(c, d)? {
                                squares += 1;
                                if witness.is_none() {
                                    witness = naturality_violation(l, &psis, &g)?;
                                }
                            }
                        }
                    }
                    Ok(Check::law(&name, witness).count("morphisms", squares))
                })?);
            }
        }
    }
    Ok(out)
}

fn iso_check(name: &str, m: &crate::coalg::CoVMorphism) -> Result<Check> {
    let w = if !m.is_iso() { Some("not bijective".to_string()) } else { m.intertwining_violation()? };
    Ok(Check::law(name, w))
}

fn unit_assoc(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for b in ws.coalgebras.values() {
        let i = Arc::new(unit_object(&b.v)?);
        let name = format!("left unitor I*{}", b.name);
        out.push(guarded(&name, || iso_check(&name, &left_unitor(&twprod(&i, b)?)?))?);
        let name = format!("right unitor {}*I", b.name);
        out.push(guarded(&name, || iso_check(&name, &right_unitor(&twprod(b, &i)?)?))?);
    }
    let all: Vec<_> = ws.coalgebras.values().cloned().collect();
    for b1 in &all {
        for b2 in all.iter().filter(|b| b.v.sig == b1.v.sig) {
            for b3 in all.iter().filter(|b| b.v.sig == b1.v.sig) {
                let name = format!("associator ({}*{})*{}", b1.name, b2.name, b3.name);
                out.push(guarded(&name, || {
                    let l12 = twprod(b1, b2)?;
                    let l23 = twprod(b2, b3)?;
                    let l12_3 = twprod(&l12.obj, b3)?;
                    let l1_23 = twprod(b1, &l23.obj)?;
                    iso_check(&name, &associator(&l12_3, &l1_23, &l12, &l23)?)
                })?);
            }
        }
    }
    let d1 = ws.coalgebra("D1")?;
    let name = "pentagon on D1^4";
    out.push(guarded(name, || Ok(Check::law(name, pentagon_check([&d1, &d1, &d1, &d1])?)))?);
    let d2 = ws.coalgebra("D2")?;
    let n = d2.generators(0).len();
    out.push(Check::law("pentagon on generator keys of D2^4", pentagon_keys(n)).count("generators", n));
    Ok(out)
}

fn certification_checks(c: &crate::tallwraith::Certification) -> Vec<Check> {
    Check::from_certification(c)
}

fn monoids(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for m in ws.monoids.values() {
        out.extend(certification_checks(&tw_monoid_check(m)?));
    }
    for md in ws.modules.values() {
        let m = ws.monoid(&md.monoid)?;
        let mut c = tw_module_check(&m, &md.tm, &md.rho)?;
        c.subject = format!("module {}", md.name);
        out.extend(certification_checks(&c));
    }
    for vname in ["Vec2", "Bool"] {
        let m = TallWraithMonoid::trivial(&ws.variety(vname)?)?;
        out.extend(certification_checks(&tw_monoid_check(&m)?));
    }
    Ok(out)
}

fn kunneth(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let bool_ = ws.variety("Bool")?;
    let aobj = ws.algebra_object(&bool_, &ws.algebra("F2")?)?;
    for sorts in [vec![], vec![0], vec![0, 0], vec![0, 0, 0]] {
        let k = kunneth_check(&aobj, &sorts)?;
        let name = format!("Kunneth for Bool/F2 on {} factors", sorts.len());
        out.push(
            Check::law(&name, k.witness.clone().or_else(|| (!k.passed()).then(|| "not bijective".into())))
                .count("coproduct", k.coproduct_size)
                .count("product", k.product_size),
        );
    }
    let vec2 = ws.variety("Vec2")?;
    let v1 = ws.algebra_object(&vec2, &ws.algebra("V1")?)?;
    let k = kunneth_check(&v1, &[0, 0])?;
    let mut c = Check::expect("Kunneth for Vec2/V1 on 2 factors fails with a kernel pair", !k.injective && k.witness.is_some(), || {
        "the comparison map is injective".into()
    })
    .count("coproduct", k.coproduct_size)
    .count("product", k.product_size);
    if let Some(w) = &k.witness {
        c = c.detail(format!("kernel pair: {w}"));
    }
    out.push(c);
    let om = operations_monoid(&aobj)?;
    out.extend(certification_checks(&tw_monoid_check(&om.monoid)?));
    out.push(Check::law("operations monoid: mu is composition of operations", om.composition_violation()?));
    let sets = ws.sets()?;
    for x in members(ws, &sets)? {
        let (m, hc, rho) = om.module_on(&x)?;
        out.extend(certification_checks(&tw_algebra_module_check(&om.monoid, &m.algebra, &hc, &rho)?));
    }
    Ok(out)
}

/// Completed and raw filtrations on fixture algebras with small carriers.
pub fn filtration_probes(ws: &Workspace, sig: &Arc<Signature>) -> Result<Vec<ProjFilt>> {
    let mut out = Vec::new();
    for f in ws.filtrations.values() {
        if f.base.sig == *sig && f.base.total_size() <= FILT_CARRIER {
            out.push(f.clone());
        }
    }
    for a in ws.algebras.values() {
        if a.sig == *sig && a.total_size() <= FILT_CARRIER {
            out.push(discrete(a));
            out.push(indiscrete(a));
            out.push(profinite_filtration(a, 2)?);
        }
    }
    Ok(out)
}

fn same_stages(a: &ProjFilt, b: &ProjFilt) -> bool {
    a.stages.len() == b.stages.len()
        && a.stages.iter().zip(&b.stages).all(|(x, y)| x.map.maps == y.map.maps && x.map.dst.tables == y.map.dst.tables)
}

fn filtrations(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let v3 = ws.algebra("V3")?;
    let p = profinite_filtration(&v3, 4)?;
    let n = p.generating_stages().len();
    out.push(Check::expect("profinite(V3, 4) has 15 generating stages", n == 15, || format!("{n} stages")).count("stages", n));
    let chain = ws.filtration("Chain4")?;
    let lim = limit(&chain.reduce()?.filt)?;
    let iso = is_iso_filtration(chain)?;
    out.push(
        Check::expect("Chain4 has a 4-element limit and is not iso", lim.algebra.total_size() == 4 && !iso, || {
            format!("limit size {}, iso {iso}", lim.algebra.total_size())
        })
        .count("limit", lim.algebra.total_size()),
    );
    let two = ws.filtration("TwoProj")?;
    out.push(Check::expect("TwoProj is an iso-filtration", is_iso_filtration(two)?, || "not iso".into()));
    let v2 = ws.algebra("V2")?;
    let push = pushforward(&[], &v2)?;
    out.push(Check::expect("empty pushforward on V2 is mutually stronger than discrete", mutually_stronger(&push, &discrete(&v2))?, || {
        "not mutually stronger".into()
    }));
    let sigs: Vec<Arc<Signature>> = ws.signatures.values().cloned().collect();
    for sig in &sigs {
        let probes = filtration_probes(ws, sig)?;
        if probes.is_empty() {
            continue;
        }
        let name = format!("reduce and complete are idempotent on {} probes", sig.name);
        out.push(guarded(&name, || {
            let mut witness = None;
            for f in &probes {
                let r1 = f.reduce()?;
                let r2 = r1.filt.reduce()?;
                if !same_stages(&r1.filt, &r2.filt) {
                    witness.get_or_insert(format!("reduce is not idempotent on {}", f.name));
                }
                let c = complete(f)?;
                if !is_iso_filtration(&c.filt)? {
                    witness.get_or_insert(format!("complete({}) is not an iso-filtration", f.name));
                }
                if !complete(&c.filt)?.iota.is_bijective() {
                    witness.get_or_insert(format!("complete is not idempotent on {}", f.name));
                }
            }
            Ok(Check::law(&name, witness).count("filtrations", probes.len()))
        })?);
        let name = format!("filtration adjunction counts on {} probes", sig.name);
        out.push(guarded(&name, || {
            let mut pairs = 0;
            let mut witness = None;
            let isos: Vec<ProjFilt> = probes.iter().map(|f| Ok(complete(f)?.filt)).collect::<Result<_>>()?;
            for f in &probes {
                let cf = complete(f)?.filt;
                for e in &isos {
                    pairs += 1;
                    let (l, r) = (filtered_hom_set(&cf, e)?.len(), filtered_hom_set(f, e)?.len());
                    if l != r {
                        witness.get_or_insert(format!("completion: {} -> {}: {l} against {r}", f.name, e.name));
                    }
                }
                for g in &probes {
                    let x = &g.base;
                    let (l, r) = (filtered_hom_set(&discrete(x), f)?.len(), enumerate_homs(x, &f.base)?.len());
                    if l != r {
                        witness.get_or_insert(format!("discrete: {} -> {}: {l} against {r}", x.name, f.name));
                    }
                    let (l, r) = (filtered_hom_set(f, &indiscrete(x))?.len(), enumerate_homs(&f.base, x)?.len());
                    if l != r {
                        witness.get_or_insert(format!("indiscrete: {} -> {}: {l} against {r}", f.name, x.name));
                    }
                    pairs += 2;
                }
            }
            Ok(Check::law(&name, witness).count("pairs", pairs))
        })?);
        let name = format!("canonical filtration on {} iso probes", sig.name);
        out.push(guarded(&name, || {
            let mut witness = None;
            let isos: Vec<ProjFilt> = probes.iter().map(|f| Ok(complete(f)?.filt)).collect::<Result<_>>()?;
            let outers = isos.iter().map(canonical_filtration).collect::<Result<Vec<_>>>()?;
            for (k, o) in isos.iter().zip(&outers) {
                let stages: Vec<Vec<Vec<usize>>> = k.stages.iter().map(|s| s.map.maps.clone()).collect();
                let forgot: Vec<Vec<Vec<usize>>> = o.forget().into_iter().map(|h| h.maps).collect();
                if stages != forgot {
                    witness.get_or_insert(format!("forget(canonical({})) differs", k.name));
                }
            }
            for (k1, o1) in isos.iter().zip(&outers) {
                for (k2, o2) in isos.iter().zip(&outers) {
                    let (l, r) = (outer_hom_set(o1, o2)?.len(), filtered_hom_set(k1, k2)?.len());
                    if l != r {
                        witness.get_or_insert(format!("{} -> {}: {l} against {r}", k1.name, k2.name));
                    }
                }
            }
            Ok(Check::law(&name, witness).count("filtrations", isos.len()))
        })?);
    }
    Ok(out)
}

/// Completed filtrations used as lift arguments for co-objects over `v`.
fn lift_probes(ws: &Workspace, v: &Variety) -> Result<Vec<ProjFilt>> {
    let mut out = Vec::new();
    for a in members(ws, v)?.iter().filter(|a| a.total_size() <= 4) {
        out.push(complete(&profinite_filtration(a, 2)?)?.filt);
    }
    for f in ws.filtrations.values().filter(|f| f.base.sig == v.sig && f.base.total_size() <= 4) {
        out.push(complete(f)?.filt);
    }
    Ok(out)
}

fn lifts(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let all: Vec<_> = ws.coalgebras.values().cloned().collect();
    for g in &all {
        for h in all.iter().filter(|h| h.w.sig == g.v.sig) {
            for f in lift_probes(ws, &g.w)? {
                let name = format!("lift(Hom({},-).Hom({},-)) on {}", h.name, g.name, f.name);
                out.push(guarded(&name, || {
                    let c = check_lift_composition(&HomCovFunctor::new(g.clone()), &HomCovFunctor::new(h.clone()), &f)?;
                    Ok(Check::law(&name, c.failures().first().map(|l| format!("{}: {}", l.name, l.witness.clone().unwrap_or_default()))))
                })?);
            }
        }
    }
    for b in &all {
        let es = lift_probes(ws, &b.v)?;
        let ds = lift_probes(ws, &b.w)?;
        for e in &es {
            for d in &ds {
                let name = format!("lifted adjunction for {} on {} and {}", b.name, e.name, d.name);
                out.push(guarded(&name, || {
                    let c = check_lift_adjunction(b, e, d)?;
                    Ok(Check::law(&name, c.failures().first().map(|l| format!("{}: {}", l.name, l.witness.clone().unwrap_or_default()))))
                })?);
            }
        }
        let name = format!("L_{} preserves fixture surjections", b.name);
        out.push(guarded(&name, || {
            let lf = LadjFunctor::new(b.clone());
            let xs: Vec<_> = members(ws, &b.v)?.into_iter().filter(|a| a.total_size() <= FILT_CARRIER).collect();
            let mut n = 0;
            let mut witness = None;
            for x in &xs {
                for y in &xs {
                    for g in enumerate_homs(x, y)?.into_iter().filter(Hom::is_surjective) {
                        n += 1;
                        if !lf.mor(&g)?.is_surjective() {
                            witness.get_or_insert(format!("L({}) is not onto", g.display()));
                        }
                    }
                }
            }
            Ok(Check::law(&name, witness).count("surjections", n))
        })?);
    }
    let name = "lift composition for the residual functor onto GB (not mono-preserving)";
    out.push(guarded(name, || {
        let res = ResidualFunctor { probes: vec![ws.algebra("GB")?] };
        let f = complete(&profinite_filtration(&ws.algebra("GId")?, 2)?)?.filt;
        let c = check_lift_composition(&res, &res, &f)?;
        let holds = c.passed();
        Ok(Check::info(name).detail(if holds {
            "composition law holds: finite directed iso-filtrations have a bijective top stage".to_string()
        } else {
            format!("composition law fails: {:?}", c.failures().first().map(|l| l.witness.clone()))
        }))
    })?);
    Ok(out)
}

fn filtered(ws: &Workspace) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut monoids: Vec<(String, TallWraithMonoid)> =
        ws.monoids.iter().map(|(n, m)| (n.clone(), (**m).clone())).collect();
    let bool_ = ws.variety("Bool")?;
    let aobj = ws.algebra_object(&bool_, &ws.algebra("F2")?)?;
    monoids.push(("Ops(Bool,F2)".into(), operations_monoid(&aobj)?.monoid));
    for (name, m) in &monoids {
        let plain = tw_monoid_check(m)?;
        let disc = filtered_tw_check(m, FiltMode::Discrete)?;
        let same = plain.laws.iter().all(|l| {
            disc.laws.iter().any(|d| d.name == format!("{} (filtered)", l.name) && d.pass == l.pass && d.witness == l.witness)
        });
        out.push(Check::expect(&format!("{name}: discrete filtered check reproduces the unfiltered laws"), same, || {
            "law records differ".into()
        }));
        out.extend(certification_checks(&disc));
        let name = format!("{name}: profinite(2) filtered monoid laws");
        out.push(guarded(&name, || {
            let c = filtered_tw_check(m, FiltMode::Profinite(2))?;
            Ok(Check::law(&name, c.failures().first().map(|l| format!("{}: {}", l.name, l.witness.clone().unwrap_or_default())))
                .count("laws", c.laws.len()))
        })?);
    }
    Ok(out)
}
