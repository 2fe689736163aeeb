use std::collections::BTreeSet;

use iwalog_core::group::{catalog_spec, Group, GroupG, CATALOG};
use proptest::prelude::*;

/// Every catalog group that exists for the given prime, with e in {1, 2},
/// skipping the largest ones to keep the cases cheap.
fn groups() -> Vec<(String, u64, u32)> {
    let mut out = Vec::new();
    for &(name, _) in CATALOG {
        for p in [2u64, 3] {
            for e in [1u32, 2] {
                if let Ok(spec) = catalog_spec(name, p, e, 1) {
                    if spec.h_order * (p as usize).pow(e) <= 96 {
                        out.push((name.to_string(), p, e));
                    }
                }
            }
        }
    }
    out
}

fn build(name: &str, p: u64, e: u32) -> Group {
    GroupG::from_catalog(name, p, e).unwrap()
}

fn group_case() -> impl Strategy<Value = (String, u64, u32)> {
    prop::sample::select(groups())
}

fn commutator(g: &GroupG, x: usize, y: usize) -> usize {
    g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn order_and_classes((name, p, e) in group_case()) {
        let g = build(&name, p, e);
        prop_assert_eq!(g.order, g.h.order * (p as usize).pow(e));
        let mut seen = vec![false; g.order];
        for class in &g.classes {
            for &x in class {
                prop_assert!(!seen[x]);
                seen[x] = true;
                for y in 0..g.order {
                    prop_assert!(class.contains(&g.conj(y, x)));
                }
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        prop_assert_eq!(g.is_abelian(), g.num_classes() == g.order);
    }

    #[test]
    fn group_axioms((name, p, e) in group_case(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let g = build(&name, p, e);
        let [x, y, z] = [0, 1, 2].map(|i| picks[i].index(g.order));
        prop_assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
        prop_assert_eq!(g.mul(x, g.inv(x)), 0);
        prop_assert_eq!(g.index(g.element(x)), x);
        // the Γ-part is a homomorphism to Z/p^e
        prop_assert_eq!(g.gamma_part(g.mul(x, y)), (g.gamma_part(x) + g.gamma_part(y)) % g.pe);
    }

    #[test]
    fn normalizers_and_weyl_groups((name, p, e) in group_case()) {
        let g = build(&name, p, e);
        let lat = &g.lattice;
        for (s, sub) in lat.subgroups.iter().enumerate() {
            let normalizer: Vec<usize> = (0..g.order).filter(|&x| lat.conj_action[x][s] == s).collect();
            prop_assert_eq!(&lat.normalizers[s], &normalizer);
            prop_assert_eq!(g.order % normalizer.len(), 0);
            prop_assert_eq!(normalizer.len() % sub.order, 0);
            prop_assert_eq!(lat.weyl_reps[s].len(), normalizer.len() / sub.order);
            prop_assert_eq!(lat.weyl_order(s), normalizer.len() / sub.order);
            for &x in &sub.elements {
                prop_assert!(sub.member[x]);
                prop_assert_eq!(lat.conj_action[x][s], s);
            }
        }
    }

    #[test]
    fn conjugation_orbits((name, p, e) in group_case()) {
        let g = build(&name, p, e);
        let lat = &g.lattice;
        for (o, orbit) in lat.conj_orbits.iter().enumerate() {
            let s = orbit[0];
            let expected: BTreeSet<usize> = (0..g.order).map(|x| lat.conj_action[x][s]).collect();
            prop_assert_eq!(orbit.iter().copied().collect::<BTreeSet<_>>(), expected);
            for &t in orbit {
                prop_assert_eq!(lat.orbit_of[t], o);
            }
            // orbit-stabilizer
            prop_assert_eq!(orbit.len() * lat.normalizers[s].len(), g.order);
        }
    }

    #[test]
    fn coset_representatives((name, p, e) in group_case()) {
        let g = build(&name, p, e);
        let lat = &g.lattice;
        for (s, sub) in lat.subgroups.iter().enumerate() {
            prop_assert_eq!(lat.coset_reps[s].len(), g.order / sub.order);
            prop_assert_eq!(lat.right_coset_reps[s].len(), g.order / sub.order);
            let left: BTreeSet<usize> =
                lat.coset_reps[s].iter().flat_map(|&x| sub.elements.iter().map(move |&q| (x, q))).map(|(x, q)| g.mul(x, q)).collect();
            let right: BTreeSet<usize> =
                lat.right_coset_reps[s].iter().flat_map(|&c| sub.elements.iter().map(move |&q| (q, c))).map(|(q, c)| g.mul(q, c)).collect();
            prop_assert_eq!(left.len(), g.order);
            prop_assert_eq!(right.len(), g.order);
        }
    }

    #[test]
    fn p_power_pairs((name, p, e) in group_case()) {
        let g = build(&name, p, e);
        let lat = &g.lattice;
        for &(big, small) in &lat.p_power_pairs {
            let (gp, _) = g.power(lat.subgroups[big].generator, p);
            prop_assert_eq!(lat.generated(gp), small);
            prop_assert_eq!(lat.subgroups[big].order, p as usize * lat.subgroups[small].order);
            prop_assert!(lat.inclusions.contains(&(small, big)));
        }
    }

    #[test]
    fn abelianization((name, p, e) in group_case(), picks in prop::collection::vec(any::<prop::sample::Index>(), 2)) {
        let g = build(&name, p, e);
        let ab = &g.ab;
        let (x, y) = (picks[0].index(g.order), picks[1].index(g.order));
        prop_assert!(ab.map(commutator(&g, x, y)).iter().all(|&v| v == 0));
        let sum: Vec<usize> = ab.map(x).iter().zip(ab.map(y)).zip(&ab.orders).map(|((a, b), n)| (a + b) % n).collect();
        prop_assert_eq!(ab.map(g.mul(x, y)), &sum[..]);
        prop_assert_eq!(ab.order() * ab.commutator.len(), g.order);
        for &c in &ab.commutator {
            prop_assert!(ab.map(c).iter().all(|&v| v == 0));
        }
    }
}
