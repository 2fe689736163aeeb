use iwalog_core::iwasawa::Agreement;
use iwalog_core::sample::Sampler;
use iwalog_core::{ArithmeticContext, ContextParams, Ctx, Series};
use proptest::prelude::*;

const M: usize = 12;

fn ctx(p: u64, f: usize) -> Ctx {
    ArithmeticContext::new(&ContextParams { p, f, e: 1, n: 6, m: M, lneg: 8, guard: 4, modulus: None }).unwrap()
}

/// Equal on every digit both sides know, with something actually known.
fn tracked(ag: Agreement) -> bool {
    ag.equal && ag.digits > 0
}

fn half(c: &ArithmeticContext, a: &Series, b: &Series) -> bool {
    tracked(a.agree(b, c, c.k, c.m as i32 / 2))
}

fn params() -> impl Strategy<Value = (u64, usize, u64)> {
    (prop_oneof![Just(2u64), Just(3)], 1usize..=2, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_a_ring_map_on_power_series((p, f, seed) in params()) {
        let c = ctx(p, f);
        let mut s = Sampler::new(seed);
        let (x, y) = (s.series(&c, M), s.series(&c, M));
        let sum = x.add(&y, &c).phi(&c).unwrap();
        prop_assert!(sum.same_value(&x.phi(&c).unwrap().add(&y.phi(&c).unwrap(), &c), &c));
        let prod = x.mul(&y, &c).phi(&c).unwrap();
        prop_assert!(prod.same_value(&x.phi(&c).unwrap().mul(&y.phi(&c).unwrap(), &c), &c));
    }

    #[test]
    fn phi_is_a_ring_map_on_laurent_series((p, f, seed) in params()) {
        let c = ctx(p, f);
        let mut s = Sampler::new(seed);
        let (x, y) = (s.laurent(&c, 3, M), s.laurent(&c, 3, M));
        let lhs = x.mul(&y, &c).phi(&c).unwrap();
        let rhs = x.phi(&c).unwrap().mul(&y.phi(&c).unwrap(), &c);
        prop_assert!(half(&c, &lhs, &rhs));
    }

    #[test]
    fn p_th_power_is_frobenius_mod_p((p, f, seed) in params()) {
        let c = ctx(p, f);
        let y = Sampler::new(seed).series(&c, M);
        let d = y.pow(&c, p).sub(&y.phi(&c).unwrap(), &c);
        prop_assert_eq!(d.denom_exp(), 0);
        for deg in 0..M as i32 {
            prop_assert!(d.coeff(&c, deg).iter().all(|&v| v % p == 0), "degree {}", deg);
        }
    }

    #[test]
    fn power_series_inverse((p, f, seed) in params()) {
        let c = ctx(p, f);
        let mut s = Sampler::new(seed);
        let x = s.series(&c, M).add(&Series::constant(&c, &s.o_unit(&c)), &c);
        prop_assume!(c.o.is_unit(&x.coeff(&c, 0)));
        let xi = x.invert_series(&c).unwrap();
        prop_assert!(x.mul(&xi, &c).same_value(&Series::one(&c), &c));
        prop_assert!(xi.is_integral(&c));
    }

    #[test]
    fn laurent_inverse((p, f, seed) in params()) {
        let c = ctx(p, f);
        let x = Sampler::new(seed).laurent_unit(&c, 3, M);
        let xi = x.invert_laurent(&c).unwrap();
        prop_assert!(half(&c, &x.mul(&xi, &c), &Series::one(&c)));
    }

    #[test]
    fn inverse_of_product((p, f, seed) in params()) {
        let c = ctx(p, f);
        let mut s = Sampler::new(seed);
        let (x, y) = (s.laurent_unit(&c, 2, M), s.laurent_unit(&c, 2, M));
        let lhs = x.mul(&y, &c).invert_laurent(&c).unwrap();
        let rhs = y.invert_laurent(&c).unwrap().mul(&x.invert_laurent(&c).unwrap(), &c);
        prop_assert!(half(&c, &lhs, &rhs));
    }

    #[test]
    fn storage_is_canonical((p, f, seed) in params()) {
        let c = ctx(p, f);
        let mut s = Sampler::new(seed);
        let (x, y) = (s.series(&c, M), s.series(&c, M));
        prop_assert_eq!(x.add(&y, &c).sub(&y, &c), x.clone());
        prop_assert_eq!(x.mul_p(&c, 2).divide_by_p(&c, 2).unwrap().truncate_precision(&c, c.k - 2), x.truncate_precision(&c, c.k - 2));
        prop_assert!(x.sub(&x, &c).is_zero());
    }
}
