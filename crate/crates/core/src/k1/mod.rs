//! The multiplicative side. K_1 of the local rings here is a quotient of the
//! unit group, so K_1 classes are handled through single units.
//!
//! Logarithms are computed by raising 1+x to a p-power w ≡ 1 mod p, summing
//! log(w) = Σ (−1)^{j+1} p^j z^j / j for w = 1 + pz with integral terms, and
//! dividing by that p-power again.

mod congruence;
mod norm;

pub use congruence::{MultiplicativeTuple, PhiReport, RelationReport};
pub use norm::SubgroupRing;

use crate::error::{Error, Result};
use crate::iwasawa::Block;
use crate::padic::zmod;
use crate::twisted::{ConjModuleElement, IdealSpec, RingTag, TwistedAlgebra, TwistedRingElement};

/// x = u·y with y on the Γ-part and u ∈ 1 + J_H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatSplitting {
    pub u: TwistedRingElement,
    pub y: TwistedRingElement,
}

fn divisible_by_p(b: &Block, ctx: &crate::context::ArithmeticContext) -> bool {
    b.denom == 0 && b.data.iter().all(|&v| v % ctx.p == 0)
}

impl TwistedAlgebra {
    /// Iteration cap for the log and exp series.
    fn series_cap(&self) -> usize {
        let ctx = &self.ctx;
        (ctx.n as usize * ctx.m * self.order()).max(64)
    }

    /// Smallest r with p^r ≥ M·|G|; J^{p^r} ⊆ (p, T^M) once this holds.
    fn power_up_bound(&self) -> u32 {
        let ctx = &self.ctx;
        let target = (ctx.m * self.order()) as u64;
        let mut r = 0;
        let mut v = 1u64;
        while v < target {
            v *= ctx.p;
            r += 1;
        }
        r
    }

    /// x ≡ 1 mod p at every known digit.
    pub fn is_one_mod_p(&self, x: &TwistedRingElement) -> bool {
        let mut b = self.sub(x, &self.one(x.tag)).b;
        b.canonicalize(&self.ctx);
        divisible_by_p(&b, &self.ctx)
    }

    pub fn with_tag(&self, x: &TwistedRingElement, tag: RingTag) -> TwistedRingElement {
        TwistedRingElement { tag, ..x.clone() }
    }

    fn check_ideal(&self, x: &TwistedRingElement, ideal: IdealSpec) -> Result<()> {
        let ctx = &self.ctx;
        match ideal {
            IdealSpec::Full => Ok(()),
            IdealSpec::J => {
                if self.residue(x)?.iter().any(|&v| v != 0) {
                    return Err(Error::InvalidInput("element is not in the radical J".into()));
                }
                Ok(())
            }
            IdealSpec::PJ => {
                let mut b = x.b.clone();
                b.canonicalize(ctx);
                if !divisible_by_p(&b, ctx) {
                    return Err(Error::InvalidInput("element is not divisible by p".into()));
                }
                let y = self.divide_by_p(x, 1).or_else(|_| Ok::<_, Error>(self.zero(x.tag)))?;
                if y.is_zero() {
                    return Ok(());
                }
                self.check_ideal(&y, IdealSpec::J)
            }
        }
    }

    /// log(1 + pz) for integral z, summed with integral terms.
    fn log_series(&self, z: &TwistedRingElement) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        let p = ctx.p;
        let k = ctx.k as i64;
        let mut acc = self.zero(z.tag);
        let mut zj = self.one(z.tag);
        for j in 1..=self.series_cap() as u64 {
            zj = self.m(&zj, z);
            if zj.is_zero() {
                return Ok(TwistedRingElement { support: z.support, ..acc });
            }
            let v = zmod::int_valuation(j, p);
            let unit = j / p.pow(v);
            let inv = zmod::inv(unit % ctx.pk, ctx.pk).expect("prime-to-p part is a unit");
            let c = if j % 2 == 1 { inv } else { zmod::neg(inv, ctx.pk) };
            let term = self.mul_p(&self.scale_o(&zj, &ctx.o.scalar(c)), (j - v as u64) as u32);
            acc = self.add(&acc, &term);
            // j − ⌊log_p j⌋ <= j − v_p(j) is non-decreasing, so later terms vanish
            if j as i64 - j.ilog(p) as i64 >= k {
                return Ok(TwistedRingElement { support: z.support, ..acc });
            }
        }
        Err(Error::IterationCap(self.series_cap()))
    }

    /// Log(1 + x) for x in the given ideal.
    pub fn log_one_plus(&self, x: &TwistedRingElement, ideal: IdealSpec) -> Result<TwistedRingElement> {
        self.check_ideal(x, ideal)?;
        self.log_one_plus_unchecked(x)
    }

    pub(crate) fn log_one_plus_unchecked(&self, x: &TwistedRingElement) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        if x.b.denom > 0 {
            return Err(Error::InvalidInput("log needs an integral argument".into()));
        }
        let one = TwistedRingElement { support: x.support, ..self.one(x.tag) };
        let mut w = self.add(&one, x);
        let rmax = self.power_up_bound() + 1;
        let mut r = 0u32;
        let d = loop {
            let d = self.sub(&w, &one);
            if divisible_by_p(&d.b, ctx) {
                break d;
            }
            if r >= rmax {
                return Err(Error::InvalidInput("1 + x does not become 1 mod p under p-powers".into()));
            }
            w = self.pow(&w, ctx.p);
            r += 1;
        };
        if d.is_zero() {
            return Ok(TwistedRingElement { support: x.support, ..self.zero(x.tag) });
        }
        let mut zb = d.b.clone();
        zb.denom = 1;
        zb.canonicalize(ctx);
        let z = TwistedRingElement { b: zb, ..d };
        let l = self.log_series(&z)?;
        if r == 0 || l.is_zero() {
            return Ok(l);
        }
        let mut b = l.b.clone();
        b.denom += r;
        b.canonicalize(ctx);
        Ok(TwistedRingElement { b, ..l })
    }

    /// Exp on I = pJ, by Newton iteration y ← y·(1 + x − log y) inside the
    /// commutative closed subalgebra generated by x.
    pub fn exp_ideal(&self, x: &TwistedRingElement) -> Result<TwistedRingElement> {
        self.check_ideal(x, IdealSpec::PJ)?;
        let one = TwistedRingElement { support: x.support, ..self.one(x.tag) };
        let mut y = self.add(&one, x);
        for _ in 0..64 {
            let ly = self.log_one_plus_unchecked(&self.sub(&y, &one))?;
            let eps = self.sub(x, &ly);
            if eps.is_zero() {
                return Ok(y);
            }
            y = self.m(&y, &self.add(&one, &eps));
        }
        Err(Error::IterationCap(64))
    }

    /// Log on units of the integral ring: (q−1)^{-1}·Log(x^{q−1}).
    pub fn log_unit(&self, x: &TwistedRingElement) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        if x.tag != RingTag::Integral {
            return Err(Error::InvalidInput("log_unit works on the integral ring".into()));
        }
        if !self.is_unit(x) {
            return Err(Error::NotAUnit("residue is zero".into()));
        }
        let q = ctx.q();
        let w = self.pow(x, q - 1);
        let one = TwistedRingElement { support: x.support, ..self.one(x.tag) };
        let l = self.log_one_plus(&self.sub(&w, &one), IdealSpec::J)?;
        let inv = zmod::inv((q - 1) % ctx.pk, ctx.pk).expect("q − 1 is prime to p");
        Ok(self.scale_o(&l, &ctx.o.scalar(inv)))
    }

    /// a − φ(a)/p on the class module, failing unless the result is integral.
    /// log x − (φ/p)(log x), with whatever denominator remains.
    fn l_from_log_raw(&self, l: &TwistedRingElement) -> Result<ConjModuleElement> {
        let ctx = &self.ctx;
        let a = self.to_conj(l);
        let ph = self.phi_conj(&a)?;
        let mut phb = ph.b.clone();
        phb.denom += 1;
        phb.canonicalize(ctx);
        Ok(self.conj_sub(&a, &ConjModuleElement { b: phb, tag: a.tag }))
    }

    fn require_integral(&self, mut out: ConjModuleElement, upto: i32, what: &str) -> Result<ConjModuleElement> {
        let d = out.b.denom;
        out.b.make_integral(&self.ctx, upto).map_err(|(slot, deg)| {
            Error::Integrality(format!("{what} keeps denominator p^{d} (class {slot}, degree {deg})"))
        })?;
        Ok(out)
    }

    fn l_from_log(&self, l: &TwistedRingElement) -> Result<ConjModuleElement> {
        let out = self.l_from_log_raw(l)?;
        self.require_integral(out, self.ctx.m as i32, "integral logarithm")
    }

    /// The integral logarithm L(x) = log x − (φ/p)(log x) on the class module.
    pub fn integral_log_l(&self, x: &TwistedRingElement) -> Result<ConjModuleElement> {
        self.l_from_log(&self.log_unit(x)?)
    }

    /// φ as a ring map on a commutative subring (R[P]^τ or the Γ-part):
    /// Frobenius-semilinear on coefficients, ḡ ↦ ḡ^p.
    pub fn phi_ring(&self, x: &TwistedRingElement) -> Result<TwistedRingElement> {
        let b = self.phi_power_map(&x.b, self.order(), |i| i, |g| g)?;
        Ok(TwistedRingElement { b, tag: x.tag, support: x.support })
    }

    /// x = u·y with y the Γ-part of x (H ↦ 1) and u = x·y^{-1}.
    pub fn split_unit_hat(&self, x: &TwistedRingElement) -> Result<HatSplitting> {
        let y = self.gamma_projection(x);
        let yi = self.ring_invert(&y)?;
        let u = self.m(x, &yi);
        Ok(HatSplitting { u, y })
    }

    /// L on the completed ring: L(u) + (1/p)·log(y^p/φ(y)) for x = u·y.
    pub fn integral_log_hat(&self, x: &TwistedRingElement) -> Result<ConjModuleElement> {
        let ctx = &self.ctx;
        let x = self.with_tag(x, RingTag::Completed);
        let HatSplitting { u, y } = self.split_unit_hat(&x)?;
        let one = self.one(RingTag::Completed);
        let lu = self.l_from_log_raw(&self.log_one_plus_unchecked(&self.sub(&u, &one))?)?;
        let ratio = self.m(&self.pow(&y, ctx.p), &self.ring_invert(&self.phi_ring(&y)?)?);
        let d = self.sub(&ratio, &one);
        if !self.is_one_mod_p(&ratio) {
            return Err(Error::Internal("y^p/φ(y) is not 1 mod p".into()));
        }
        let ly = self.log_one_plus_unchecked(&d)?;
        let mut lyb = self.to_conj(&ly).b;
        lyb.denom += 1;
        lyb.canonicalize(ctx);
        let out = self.conj_add(&lu, &ConjModuleElement { b: lyb, tag: RingTag::Completed });
        // truncation above degree M leaves no usable digits in the upper half
        let out = self.require_integral(out, ctx.m as i32 / 2, "completed integral logarithm")?;
        Ok(out)
    }
}
