//! Deterministic random elements for property tests and the harness.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::ArithmeticContext;
use crate::iwasawa::{Block, Series};
use crate::padic::zmod;
use crate::twisted::{RingTag, TwistedAlgebra, TwistedRingElement};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// The stream for one trial of a run with the given seed.
    pub fn for_trial(seed: u64, trial: u64) -> Sampler {
        Sampler::new(seed.wrapping_add(trial))
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.rng.gen_range(0..n)
    }

    pub fn o_element(&mut self, ctx: &ArithmeticContext) -> Vec<u64> {
        (0..ctx.f).map(|_| self.rng.gen_range(0..ctx.pk)).collect()
    }

    /// A unit of O.
    pub fn o_unit(&mut self, ctx: &ArithmeticContext) -> Vec<u64> {
        loop {
            let c = self.o_element(ctx);
            if ctx.o.is_unit(&c) {
                return c;
            }
        }
    }

    /// A nonzero element of the residue field F_q.
    pub fn residue_unit(&mut self, ctx: &ArithmeticContext) -> Vec<u64> {
        loop {
            let r: Vec<u64> = (0..ctx.f).map(|_| self.rng.gen_range(0..ctx.p)).collect();
            if r.iter().any(|&v| v != 0) {
                return r;
            }
        }
    }

    /// A power series supported in degrees below `deg`.
    pub fn series(&mut self, ctx: &ArithmeticContext, deg: usize) -> Series {
        let cs: Vec<Vec<u64>> = (0..deg.min(ctx.m)).map(|_| self.o_element(ctx)).collect();
        Series::from_coeffs(ctx, 0, &cs)
    }

    /// A Laurent series with degrees in [-neg, deg) whose coefficient at -j
    /// is divisible by p^{⌈j/2⌉}, so that it lies in the completed ring.
    pub fn laurent(&mut self, ctx: &ArithmeticContext, neg: usize, deg: usize) -> Series {
        let neg = neg.min(ctx.lneg);
        let mut cs = Vec::new();
        for j in (1..=neg).rev() {
            let v = (j as u32).div_ceil(2).min(ctx.k);
            let c = self.o_element(ctx);
            cs.push(c.iter().map(|&x| zmod::mul(x, ctx.pp(v), ctx.pk)).collect());
        }
        for _ in 0..deg.min(ctx.m) {
            cs.push(self.o_element(ctx));
        }
        Series::from_coeffs(ctx, -(neg as i32), &cs)
    }

    /// A unit of the completed Laurent ring: T^v times a unit power series plus
    /// p-adically small negative terms.
    pub fn laurent_unit(&mut self, ctx: &ArithmeticContext, neg: usize, deg: usize) -> Series {
        let v = self.rng.gen_range(0..=2i32);
        let mut cs = vec![self.o_unit(ctx)];
        for _ in 1..deg.min(ctx.m) {
            cs.push(self.o_element(ctx));
        }
        let u = Series::from_coeffs(ctx, 0, &cs);
        let small = self.laurent(ctx, neg, 0).mul_p(ctx, 1);
        u.add(&small, ctx).shift(ctx, -v)
    }

    pub fn twisted(&mut self, alg: &TwistedAlgebra, tag: RingTag, deg: usize) -> TwistedRingElement {
        let ctx = alg.ctx();
        let parts: Vec<(usize, Series)> = (0..alg.order())
            .map(|g| {
                let s = match tag {
                    RingTag::Integral => self.series(ctx, deg),
                    RingTag::Completed => self.laurent(ctx, 4, deg),
                };
                (g, s)
            })
            .collect();
        alg.from_coeffs(tag, &parts)
    }

    /// An element of the radical J of the integral ring (residue zero).
    pub fn radical(&mut self, alg: &TwistedAlgebra, deg: usize) -> TwistedRingElement {
        let ctx = alg.ctx();
        let x = self.twisted(alg, RingTag::Integral, deg);
        let r = alg.residue(&x).expect("integral");
        let fix: Vec<u64> = r.iter().map(|&v| zmod::neg(v, ctx.pk)).collect();
        alg.add(&x, &alg.scalar(&Series::constant(ctx, &fix), RingTag::Integral))
    }

    /// teich(r)·(1 + j) with r a random nonzero residue and j in J.
    pub fn integral_unit(&mut self, alg: &TwistedAlgebra, deg: usize) -> TwistedRingElement {
        let ctx = alg.ctx();
        let t = ctx.o.teichmuller(&self.residue_unit(ctx)).expect("nonzero residue");
        let j = self.radical(alg, deg);
        let one_j = alg.add(&alg.one(RingTag::Integral), &j);
        alg.scale_o(&one_j, &t)
    }

    /// A unit of the completed ring: s·γ̄^a·(1 + p r + Σ c_h (h̄ − 1̄)).
    pub fn completed_unit(&mut self, alg: &TwistedAlgebra, deg: usize) -> TwistedRingElement {
        let ctx = alg.ctx();
        let tag = RingTag::Completed;
        let g = &alg.group;
        let nh = g.h.order;
        let r = self.twisted(alg, tag, deg);
        let mut inner = alg.add(&alg.one(tag), &alg.mul_p(&r, 1));
        for h in 1..nh {
            let c = self.laurent(ctx, 2, deg);
            let d = alg.sub(&alg.basis(h, tag), &alg.one(tag));
            inner = alg.add(&inner, &alg.scale(&d, &c));
        }
        let a = self.below(g.pe as u64) as usize;
        let s = self.laurent_unit(ctx, 4, deg);
        alg.scale(&alg.m(&alg.basis(nh * a, tag), &inner), &s)
    }

    /// A block with random numerators over the given slots and degrees.
    pub fn block(&mut self, ctx: &ArithmeticContext, slots: usize, deg: usize) -> Block {
        let mut b = Block::zero(ctx, slots);
        for s in 0..slots {
            for d in 0..deg.min(ctx.m) {
                let c = self.o_element(ctx);
                b.set_coef(ctx, s, d as i32, &c);
            }
        }
        b.canonicalize(ctx);
        b
    }
}
