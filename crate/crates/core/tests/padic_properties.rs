use iwalog_core::padic::det::Zpk;
use iwalog_core::padic::{det_berkowitz, det_unit_pivot, howell_solve, zmod, HowellForm, CommRing, LocalRing, ModMatrix, UnramRing};
use proptest::prelude::*;

fn ring(p: u64, f: usize) -> UnramRing {
    UnramRing::new(p, f, 6, None).unwrap()
}

fn elem(p: u64, f: usize) -> impl Strategy<Value = Vec<u64>> {
    let m = p.pow(6);
    prop::collection::vec(0..m, f)
}

fn ring_and_pair() -> impl Strategy<Value = (u64, usize, Vec<u64>, Vec<u64>)> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 1usize..=3)
        .prop_flat_map(|(p, f)| (Just(p), Just(f), elem(p, f), elem(p, f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn frobenius_is_a_ring_map((p, f, a, b) in ring_and_pair()) {
        let o = ring(p, f);
        prop_assert_eq!(o.frobenius(&o.add(&a, &b)), o.add(&o.frobenius(&a), &o.frobenius(&b)));
        prop_assert_eq!(o.frobenius(&o.mul(&a, &b)), o.mul(&o.frobenius(&a), &o.frobenius(&b)));
        // φ(x) ≡ x^p mod p
        let d = o.sub(&o.frobenius(&a), &o.pow(&a, p));
        prop_assert!(d.iter().all(|&c| c % p == 0));
    }

    #[test]
    fn teichmuller_is_a_root_of_unity((p, f, a, _b) in ring_and_pair()) {
        let o = ring(p, f);
        let r: Vec<u64> = a.iter().map(|&c| c % p).collect();
        prop_assume!(r.iter().any(|&c| c != 0));
        let t = o.teichmuller(&r).unwrap();
        prop_assert_eq!(o.pow(&t, o.q() - 1), o.one());
        let back: Vec<u64> = t.iter().map(|&c| c % p).collect();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn inverse_of_units((p, f, a, _b) in ring_and_pair()) {
        let o = ring(p, f);
        match o.inverse(&a) {
            Some(ai) => prop_assert_eq!(o.mul(&a, &ai), o.one()),
            None => prop_assert!(!o.is_unit(&a)),
        }
    }
}

/// All vectors in (Z/m)^cols.
fn all_vectors(cols: usize, m: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for _ in 0..cols {
        out = out.into_iter().flat_map(|v| (0..m).map(move |c| [v.clone(), vec![c]].concat())).collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn howell_membership_matches_enumeration(
        k in 1u32..=3,
        rows in 1usize..=3,
        cols in 1usize..=3,
        seed in prop::collection::vec(0u64..8, 9),
        target in prop::collection::vec(0u64..8, 3),
    ) {
        let m = 2u64.pow(k);
        let a: Vec<Vec<u64>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * 3 + c] % m).collect()).collect();
        let b: Vec<u64> = target[..rows].iter().map(|&v| v % m).collect();
        let mat = ModMatrix::from_rows(&a).unwrap();
        let apply = |x: &[u64]| -> Vec<u64> {
            (0..rows).map(|r| (0..cols).fold(0, |s, c| (s + a[r][c] * x[c]) % m)).collect()
        };
        let solved = howell_solve(&mat, &b, 2, k).unwrap();
        // b is in the column span iff some coefficient vector hits it
        let reachable = all_vectors(cols, m).into_iter().any(|x| apply(&x) == b);
        prop_assert_eq!(solved.is_some(), reachable);
        prop_assert_eq!(HowellForm::new(&mat, 2, k).contains(&b).unwrap(), reachable);
        if let Some(x) = solved {
            prop_assert_eq!(apply(&x), b);
        }
    }

    #[test]
    fn determinants_agree_and_multiply(
        p in prop_oneof![Just(2u64), Just(3)],
        n in 1usize..=6,
        entries in prop::collection::vec(any::<u64>(), 72),
    ) {
        let r = Zpk { p, m: p.pow(8) };
        let a: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| entries[i * n + j] % r.m).collect()).collect();
        let b: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| entries[36 + i * n + j] % r.m).collect()).collect();
        let ab: Vec<Vec<u64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).fold(0, |s, t| zmod::add(s, zmod::mul(a[i][t], b[t][j], r.m), r.m))).collect())
            .collect();
        let (da, db, dab) = (det_berkowitz(&r, &a).unwrap(), det_berkowitz(&r, &b).unwrap(), det_berkowitz(&r, &ab).unwrap());
        prop_assert_eq!(dab, r.mul(&da, &db));
        if r.is_unit(&da) {
            prop_assert_eq!(det_unit_pivot(&r, &a).unwrap(), da);
        }
    }
}
