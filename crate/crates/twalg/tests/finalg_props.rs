use proptest::prelude::*;
use std::collections::HashSet;
use std::sync::Arc;
use twalg::finalg::{
    congruence_generated, count_homs, enumerate_homs, enumerate_homs_full, enumerate_homs_generated, hom_violation,
    isomorphisms, quotient, satisfies, set_partitions, Algebra, Congruence, Hom,
};
use twalg::kernel::{check_identity, dsl, dsl::Block, Signature};
use twalg::workspace::Workspace;

fn mag() -> Arc<Signature> {
    Workspace::fixtures().unwrap().signatures["MagSig"].clone()
}

fn magma(n: usize, table: &[usize]) -> Arc<Algebra> {
    let carrier = (0..n).map(|i| format!("m{i}")).collect();
    let t = table.iter().take(n * n).map(|&x| x % n).collect();
    Arc::new(Algebra::new("M", mag(), vec![carrier], vec![t], None).unwrap())
}

fn any_magma(max: usize) -> impl Strategy<Value = Arc<Algebra>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(0..n, n * n).prop_map(move |t| magma(n, &t)))
}

/// Every map of carriers, tested cell by cell.
fn brute_count(a: &Algebra, b: &Algebra) -> usize {
    let (n, m) = (a.size(0), b.size(0));
    let mut count = 0;
    for code in 0..m.pow(n as u32) {
        let f: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
        let ok = (0..n).all(|x| (0..n).all(|y| f[a.apply(0, &[x, y])] == b.apply(0, &[f[x], f[y]])));
        count += ok as usize;
    }
    count
}

fn identities() -> Vec<twalg::kernel::CheckedIdentity> {
    let text = "identity c (x:s, y:s) : m(x,y) = m(y,x)\nidentity a (x:s, y:s, z:s) : m(m(x,y),z) = m(x,m(y,z))\nidentity i (x:s) : m(x,x) = x\nidentity l (x:s, y:s) : m(x,y) = x\n";
    let sig = mag();
    dsl::parse(text)
        .unwrap()
        .into_iter()
        .map(|b| match b {
            Block::Identity(id) => check_identity(&sig, &id).unwrap(),
            _ => unreachable!(),
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homs_validate_and_include_identity(a in any_magma(4), b in any_magma(3)) {
        let ends = enumerate_homs(&a, &a).unwrap();
        prop_assert!(ends.iter().any(|h| h.maps == Hom::identity(&a).maps));
        let ab = enumerate_homs(&a, &b).unwrap();
        for h in &ab {
            prop_assert!(hom_violation(&a, &b, &h.maps).is_none());
        }
        for f in &ends {
            for g in &ab {
                let gf = g.compose(f);
                prop_assert!(hom_violation(&a, &b, &gf.maps).is_none());
            }
        }
    }

    #[test]
    fn hom_counts_match_brute_force(a in any_magma(4), b in any_magma(4)) {
        prop_assert_eq!(count_homs(&a, &b).unwrap(), brute_count(&a, &b));
    }

    #[test]
    fn generated_and_full_enumeration_agree(a in any_magma(4), b in any_magma(3)) {
        let a = Arc::new(a.ensure_generators().unwrap());
        let g: HashSet<Vec<Vec<usize>>> = enumerate_homs_generated(&a, &b).unwrap().into_iter().map(|h| h.maps).collect();
        let f: HashSet<Vec<Vec<usize>>> = enumerate_homs_full(&a, &b).unwrap().into_iter().map(|h| h.maps).collect();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn generated_congruence_is_the_least(a in any_magma(5), pairs in prop::collection::vec((0usize..5, 0usize..5), 0..3)) {
        let n = a.size(0);
        let pairs: Vec<(usize, usize, usize)> = pairs.into_iter().map(|(x, y)| (0, x % n, y % n)).collect();
        let theta = congruence_generated(&a, &pairs);
        prop_assert!(pairs.iter().all(|&(_, x, y)| theta.related(0, x, y)));
        prop_assert!(theta.is_compatible(&a));
        // Meet of every compatible partition containing the pairs.
        let mut meet = vec![vec![true; n]; n];
        for p in set_partitions(n) {
            let contains = pairs.iter().all(|&(_, x, y)| p[x] == p[y]);
            let compatible = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| {
                p[x] != p[y] || (p[a.apply(0, &[x, z])] == p[a.apply(0, &[y, z])] && p[a.apply(0, &[z, x])] == p[a.apply(0, &[z, y])])
            })));
            if contains && compatible {
                for x in 0..n {
                    for y in 0..n {
                        meet[x][y] &= p[x] == p[y];
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(theta.related(0, x, y), meet[x][y]);
            }
        }
    }

    #[test]
    fn quotient_maps_are_surjective_homs_with_kernel_theta(a in any_magma(5), x in 0usize..5, y in 0usize..5) {
        let n = a.size(0);
        let theta = congruence_generated(&a, &[(0, x % n, y % n)]);
        let (q, h) = quotient(&a, &theta).unwrap();
        prop_assert!(hom_violation(&a, &q, &h.maps).is_none());
        prop_assert!(h.is_surjective());
        prop_assert_eq!(Congruence::kernel(&h), theta);
    }

    #[test]
    fn satisfaction_is_invariant_under_isomorphism(a in any_magma(4), perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let n = a.size(0);
        let pi: Vec<usize> = perm.into_iter().filter(|&i| i < n).collect();
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                table[pi[x] * n + pi[y]] = pi[a.apply(0, &[x, y])];
            }
        }
        let b = magma(n, &table);
        let isos = isomorphisms(&a, &b).unwrap();
        prop_assert!(!isos.is_empty());
        for id in identities() {
            prop_assert_eq!(satisfies(&a, &id).unwrap(), satisfies(&b, &id).unwrap());
        }
    }
}

#[test]
fn enumeration_routes_agree_on_fixtures() {
    let ws = Workspace::fixtures().unwrap();
    let algebras: Vec<_> = ws.algebras.values().filter(|a| a.total_size() <= 8).cloned().collect();
    for a in &algebras {
        let a = &Arc::new(a.ensure_generators().unwrap());
        for b in algebras.iter().filter(|b| b.sig == a.sig) {
            let g: HashSet<_> = enumerate_homs_generated(a, b).unwrap().into_iter().map(|h| h.maps).collect();
            let f: HashSet<_> = enumerate_homs_full(a, b).unwrap().into_iter().map(|h| h.maps).collect();
            assert_eq!(g, f, "{} -> {}", a.name, b.name);
        }
    }
}

#[test]
fn fixtures_satisfy_their_identities() {
    let ws = Workspace::fixtures().unwrap();
    for v in ws.varieties.values() {
        for g in &v.generators {
            for id in &v.identities {
                assert!(satisfies(g, id).unwrap(), "{} fails {}", g.name, id.source.name);
            }
        }
    }
}
