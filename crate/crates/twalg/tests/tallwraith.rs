use std::sync::Arc;
use twalg::coalg::{hom_cov, unit_object};
use twalg::filtration::{FiltFunctor, LadjFunctor};
use twalg::finalg::{enumerate_homs, Algebra};
use twalg::tallwraith::{
    kunneth_check, ladj_bijection_violation, left_unitor, operations_monoid, pentagon_check, pentagon_keys,
    right_unitor, tw_monoid_check, twprod, TallWraithMonoid,
};
use twalg::workspace::Workspace;

fn ws() -> Workspace {
    Workspace::fixtures().unwrap()
}

fn small(ws: &Workspace, v: &twalg::variety::Variety, max: usize) -> Vec<Arc<Algebra>> {
    twalg::suite::members(ws, v).unwrap().into_iter().filter(|a| a.total_size() <= max).collect()
}

#[test]
fn transposition_is_natural_in_the_argument() {
    let ws = ws();
    for name in ["D1", "D2", "BI"] {
        let b = ws.coalgebra(name).unwrap();
        let lf = LadjFunctor::new(b.clone());
        let args = small(&ws, &b.v, 4);
        let probes = small(&ws, &b.w, 4);
        let mut squares = 0;
        for a in &args {
            for a2 in &args {
                for h in enumerate_homs(a, a2).unwrap() {
                    let lh = lf.mor(&h).unwrap();
                    let (l, l2) = (lf.ladj(a).unwrap(), lf.ladj(a2).unwrap());
                    for c in &probes {
                        let hc = hom_cov(&b, c).unwrap();
                        let psis = enumerate_homs(l2.algebra(), c).unwrap();
                        let pulled: Vec<_> = psis.iter().map(|psi| psi.compose(&lh)).collect();
                        let lhs = l.transposes(&pulled, &hc).unwrap();
                        let rhs = l2.transposes(&psis, &hc).unwrap();
                        for (x, y) in lhs.iter().zip(&rhs) {
                            assert_eq!(x.maps, y.compose(&h).maps, "{name}: square along {}", h.display());
                            squares += 1;
                        }
                    }
                }
            }
        }
        assert!(squares > 0);
    }
}

#[test]
fn transposition_is_a_bijection() {
    let ws = ws();
    for name in ["D1", "D2", "BI"] {
        let b = ws.coalgebra(name).unwrap();
        let lf = LadjFunctor::new(b.clone());
        for a in small(&ws, &b.v, 4) {
            let l = lf.ladj(&a).unwrap();
            for c in small(&ws, &b.w, 4) {
                assert!(ladj_bijection_violation(&l, &c).unwrap().is_none(), "{name} on {} into {}", a.name, c.name);
            }
        }
    }
}

#[test]
fn unitors_are_isomorphisms() {
    let ws = ws();
    for b in ws.coalgebras.values() {
        let i = Arc::new(unit_object(&b.v).unwrap());
        let l = left_unitor(&twprod(&i, b).unwrap()).unwrap();
        let r = right_unitor(&twprod(b, &i).unwrap()).unwrap();
        for m in [l, r] {
            assert!(m.is_iso(), "{}", b.name);
            assert!(m.intertwining_violation().unwrap().is_none(), "{}", b.name);
        }
    }
}

#[test]
fn pentagon_holds() {
    let ws = ws();
    let d1 = ws.coalgebra("D1").unwrap();
    assert!(pentagon_check([&d1, &d1, &d1, &d1]).unwrap().is_none());
    for n in 1..=3 {
        assert!(pentagon_keys(n).is_none());
    }
}

#[test]
fn trivial_monoids_pass() {
    let ws = ws();
    for v in ["Vec2", "Bool", "SLat"] {
        let m = TallWraithMonoid::trivial(&ws.variety(v).unwrap()).unwrap();
        assert!(tw_monoid_check(&m).unwrap().passed(), "{v}");
    }
}

#[test]
fn kunneth_decides_the_operations_monoid() {
    let ws = ws();
    let bool_ = ws.variety("Bool").unwrap();
    let f2 = ws.algebra_object(&bool_, &ws.algebra("F2").unwrap()).unwrap();
    assert!(kunneth_check(&f2, &[0, 0]).unwrap().passed());
    let om = operations_monoid(&f2).unwrap();
    assert!(om.composition_violation().unwrap().is_none());
    let vec2 = ws.variety("Vec2").unwrap();
    let v1 = ws.algebra_object(&vec2, &ws.algebra("V1").unwrap()).unwrap();
    let k = kunneth_check(&v1, &[0, 0]).unwrap();
    assert!(!k.passed() && k.witness.is_some());
    assert!(operations_monoid(&v1).is_err());
}
