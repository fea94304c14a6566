use proptest::prelude::*;
use std::collections::HashSet;
use std::sync::Arc;
use twalg::coalg::{co_satisfies, hom_cov, CoVMorphism};
use twalg::finalg::{count_homs, enumerate_homs, product, satisfies, Algebra};
use twalg::kernel::{check_identity, dsl, dsl::Block, CheckedIdentity, Signature, SortedSet};
use twalg::variety::{coproduct, hom_algebra_contra, impose_identities};
use twalg::workspace::Workspace;

fn ws() -> Workspace {
    Workspace::fixtures().unwrap()
}

fn parse_ids(sig: &Signature, text: &str) -> Vec<CheckedIdentity> {
    dsl::parse(text)
        .unwrap()
        .into_iter()
        .map(|b| match b {
            Block::Identity(id) => check_identity(sig, &id).unwrap(),
            _ => unreachable!(),
        })
        .collect()
}

#[test]
fn free_algebras_satisfy_the_identities() {
    let ws = ws();
    for v in ws.varieties.values() {
        for x in twalg::suite::sorted_sets(&v.sig, 2) {
            let f = v.free(&x).unwrap();
            assert!(v.violation(&f.algebra).unwrap().is_none(), "F({}) in {}", x.display(&v.sig), v.name);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn free_extension_sends_generators_to_images(images in prop::collection::vec(0usize..16, 3)) {
        let ws = ws();
        let v = ws.variety("Vec2").unwrap();
        let b = ws.algebra("V4").unwrap();
        let f = v.free(&SortedSet::parse(&v.sig, "x:s, y:s, z:s").unwrap()).unwrap();
        let h = f.extend(&b, &images).unwrap();
        for (k, &img) in images.iter().enumerate() {
            prop_assert_eq!(h.apply(0, f.unit[k]), img);
        }
    }

    #[test]
    fn bool_extension_sends_generators_to_images(images in prop::collection::vec(0usize..8, 2)) {
        let ws = ws();
        let v = ws.variety("Bool").unwrap();
        let b = ws.algebra("B8").unwrap();
        let f = v.free(&SortedSet::parse(&v.sig, "x:s, y:s").unwrap()).unwrap();
        let h = f.extend(&b, &images).unwrap();
        for (k, &img) in images.iter().enumerate() {
            prop_assert_eq!(h.apply(0, f.unit[k]), img);
        }
    }
}

#[test]
fn imposing_twice_changes_nothing() {
    let ws = ws();
    for v in ws.varieties.values() {
        for a in twalg::suite::omega_algebras(&ws, v) {
            let (once, _) = impose_identities(&a, &v.identities).unwrap();
            let (twice, q) = impose_identities(&once, &v.identities).unwrap();
            assert_eq!(once.sizes(), twice.sizes(), "{} in {}", a.name, v.name);
            assert!(q.is_bijective());
        }
    }
}

#[test]
fn coproduct_counting_law() {
    let ws = ws();
    for vname in ["Vec2", "Bool", "SLat", "Grd2"] {
        let v = ws.variety(vname).unwrap();
        let small: Vec<Arc<Algebra>> =
            twalg::suite::members(&ws, &v).unwrap().into_iter().filter(|a| a.total_size() <= 4).collect();
        for a in &small {
            for b in &small {
                let c = coproduct(&v, &[a.clone(), b.clone()]).unwrap();
                for t in &small {
                    let lhs = count_homs(&c.algebra, t).unwrap();
                    let rhs = count_homs(a, t).unwrap() * count_homs(b, t).unwrap();
                    assert_eq!(lhs, rhs, "{}+{} -> {} in {vname}", a.name, b.name, t.name);
                }
            }
        }
    }
}

#[test]
fn contravariant_hom_turns_coproducts_into_products() {
    let ws = ws();
    let sets = ws.sets().unwrap();
    let (two, three) = (ws.algebra("Two").unwrap(), ws.algebra("Three").unwrap());
    let c = coproduct(&sets, &[two.clone(), three.clone()]).unwrap();
    assert_eq!(c.algebra.total_size(), 5);
    for (vname, aname) in [("Bool", "F2"), ("Vec2", "V1"), ("SLat", "C2"), ("CMag", "Cm2")] {
        let v = ws.variety(vname).unwrap();
        let aobj = ws.algebra_object(&v, &ws.algebra(aname).unwrap()).unwrap();
        let hc = hom_algebra_contra(&aobj, &c.algebra).unwrap();
        let h2 = hom_algebra_contra(&aobj, &two).unwrap();
        let h3 = hom_algebra_contra(&aobj, &three).unwrap();
        let pairs: HashSet<(Vec<Vec<usize>>, Vec<Vec<usize>>)> = hc.homs[0]
            .iter()
            .map(|h| (h.compose(&c.injections[0]).maps, h.compose(&c.injections[1]).maps))
            .collect();
        assert_eq!(pairs.len(), hc.homs[0].len(), "restriction is injective for {aname}");
        assert_eq!(pairs.len(), h2.homs[0].len() * h3.homs[0].len(), "restriction is onto for {aname}");
    }
}

#[test]
fn co_satisfaction_matches_probes() {
    let ws = ws();
    for b in ws.coalgebras.values() {
        let sig = &b.v.sig;
        let text = if sig.name == "Ab2" {
            "identity t1 (x:s, y:s) : add(x,y) = add(y,x)\nidentity t2 (x:s) : add(x,x) = x\nidentity t3 (x:s, y:s) : add(x,y) = x\n"
        } else {
            "identity t1 (x:s, y:s) : mul(x,y) = mul(y,x)\nidentity t2 (x:s, y:s) : mul(x,y) = add(x,y)\nidentity t3 (x:s) : add(x,one()) = x\n"
        };
        let mut ids = parse_ids(sig, text);
        ids.extend(b.v.identities.iter().cloned());
        let probes: Vec<Arc<Algebra>> =
            twalg::suite::members(&ws, &b.w).unwrap().into_iter().filter(|x| x.total_size() <= 8).collect();
        for id in &ids {
            let co = co_satisfies(b, id).unwrap().is_none();
            let word: Vec<usize> = id.vars.entries.iter().map(|&(_, s)| s).collect();
            let own = b.coproduct_of(&word).unwrap().algebra.clone();
            let mut all = true;
            let mut own_checked = false;
            for x in probes.iter().chain([&own]) {
                let Ok(h) = hom_cov(b, x) else { continue };
                // Skip probes whose assignment space is over the enumeration guard.
                if (h.algebra.total_size() as u128).pow(id.vars.len() as u32) > 1_000_000 {
                    continue;
                }
                all &= satisfies(&h.algebra, id).unwrap();
                own_checked |= Arc::ptr_eq(x, &own);
            }
            if own_checked || !all {
                assert_eq!(co, all, "{} on {}", id.source.name, b.name);
            } else {
                assert!(!co || all, "{} on {}", id.source.name, b.name);
            }
        }
    }
}

#[test]
fn covariant_hom_preserves_products() {
    let ws = ws();
    for b in ws.coalgebras.values() {
        let xs: Vec<Arc<Algebra>> =
            twalg::suite::members(&ws, &b.w).unwrap().into_iter().filter(|x| x.total_size() <= 4).collect();
        for x in &xs {
            for y in &xs {
                let gens = b.components[0].generating_list().len() as u32;
                if ((x.total_size() * y.total_size()) as u128).pow(gens) > 1024 {
                    continue;
                }
                let (p, projs) = product(&b.w.sig, &[x.clone(), y.clone()]).unwrap();
                let hp = hom_cov(b, &p).unwrap();
                let (hx, hy) = (hom_cov(b, x).unwrap(), hom_cov(b, y).unwrap());
                let split: HashSet<(Vec<Vec<usize>>, Vec<Vec<usize>>)> =
                    hp.homs[0].iter().map(|h| (projs[0].compose(h).maps, projs[1].compose(h).maps)).collect();
                assert_eq!(split.len(), hp.homs[0].len());
                assert_eq!(split.len(), hx.homs[0].len() * hy.homs[0].len(), "{} on {}x{}", b.name, x.name, y.name);
            }
        }
    }
}

#[test]
fn co_object_morphisms_compose() {
    let ws = ws();
    for b in ws.coalgebras.values() {
        let id = CoVMorphism::identity(b);
        assert!(id.intertwining_violation().unwrap().is_none());
        assert!(id.compose(&id).difference(&id).is_none());
    }
    let d2 = ws.coalgebra("D2").unwrap();
    let autos = enumerate_homs(&d2.components[0], &d2.components[0]).unwrap();
    let morphisms: Vec<CoVMorphism> = autos
        .into_iter()
        .filter_map(|h| CoVMorphism::new(d2.clone(), d2.clone(), vec![h]).ok())
        .collect();
    assert_eq!(morphisms.len(), 16);
    for f in &morphisms {
        for g in &morphisms {
            assert!(g.compose(f).intertwining_violation().unwrap().is_none());
        }
    }
}
