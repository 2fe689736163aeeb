//! Power series and Laurent series over O in the variable T, truncated at T^M,
//! with a power-of-p denominator.

use super::block::{Agreement, Block};
use crate::context::ArithmeticContext;
use crate::error::{Error, Result};
use crate::padic::zmod;

/// Cached images φ(T)^j (j < M) and φ(T)^{-j} (j >= 1).
#[derive(Debug, Default)]
pub struct PhiCache {
    pos: Vec<Block>,
    neg: Vec<Block>,
}

/// Element of Λ_O(Γ^{p^e}) = O[[T]] or of the completed ring of Laurent series.
/// The same storage serves both; an element is integral when no negative degree
/// carries a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub(crate) b: Block,
}

pub type PowerSeriesElement = Series;
pub type LaurentElement = Series;

/// Multiplies every slot by T^d. Degrees pushed to M or beyond are dropped and
/// degrees pulled in from beyond M are unknown unless the tail is exact.
pub(crate) fn shift_block(ctx: &ArithmeticContext, x: &Block, d: i32) -> Block {
    if d == 0 {
        return x.clone();
    }
    let m = ctx.m as i32;
    let mut out = Block::zero(ctx, x.slots);
    out.extend_low(ctx, (x.low + d).min(0));
    out.denom = x.denom;
    for deg in out.low..m {
        let src = deg - d;
        let i = (deg - out.low) as usize;
        out.prec[i] = x.prec_at(ctx, src);
        if src < x.low || src >= m {
            continue;
        }
        for s in 0..x.slots {
            if let Some(c) = x.coef(ctx, s, src) {
                let c = c.to_vec();
                out.set_coef(ctx, s, deg, &c);
            }
        }
    }
    out.tail_exact = x.tail_exact && x.max_degree(ctx).map_or(true, |t| t + d < m);
    out.canonicalize(ctx);
    out
}

fn two_minus(ctx: &ArithmeticContext, x: &Block) -> Block {
    let mut two = Block::zero(ctx, x.slots);
    for s in 0..x.slots {
        two.set_coef(ctx, s, 0, &ctx.o.scalar(2));
    }
    two.sub(x, ctx)
}

fn single(i: usize, j: usize) -> Option<(usize, bool)> {
    let _ = (i, j);
    Some((0, false))
}

impl PhiCache {
    fn pos(&mut self, ctx: &ArithmeticContext, j: usize) -> &Block {
        while self.pos.len() <= j {
            let next = match self.pos.last() {
                None => Series::one(ctx).b,
                Some(last) => Block::product(last, &phi_t(ctx).b, ctx, 1, &single),
            };
            self.pos.push(next);
        }
        &self.pos[j]
    }

    fn neg(&mut self, ctx: &ArithmeticContext, j: usize) -> Result<&Block> {
        let p = ctx.p as i64;
        if -(p * j as i64) < ctx.capacity {
            return Err(Error::CapacityExceeded { degree: -(p * j as i64), capacity: ctx.capacity });
        }
        if self.neg.is_empty() {
            let w = phi_t(ctx).invert_laurent(ctx)?;
            self.neg.push(w.b);
        }
        while self.neg.len() < j {
            let next = Block::product(self.neg.last().unwrap(), &self.neg[0], ctx, 1, &single);
            if (next.low as i64) < ctx.capacity {
                return Err(Error::CapacityExceeded { degree: next.low as i64, capacity: ctx.capacity });
            }
            self.neg.push(next);
        }
        Ok(&self.neg[j - 1])
    }
}

/// φ(T) = (1+T)^p − 1.
fn phi_t(ctx: &ArithmeticContext) -> Series {
    let p = ctx.p;
    let mut binom = 1u64;
    let mut cs = vec![0i64; p as usize + 1];
    for i in 1..=p {
        binom = binom * (p - i + 1) / i;
        cs[i as usize] = binom as i64;
    }
    Series::from_int_coeffs(ctx, 0, &cs)
}

/// Applies the Frobenius-semilinear endomorphism T ↦ (1+T)^p − 1 slotwise.
pub(crate) fn phi_block(ctx: &ArithmeticContext, x: &Block) -> Result<Block> {
    let m = ctx.m as i32;
    let k = ctx.k;
    let mut cache = ctx.phi_cache.lock().expect("phi cache poisoned");
    let mut images: Vec<(i32, Block)> = Vec::new();
    for j in x.low..m {
        let img = if j >= 0 { cache.pos(ctx, j as usize).clone() } else { cache.neg(ctx, (-j) as usize)?.clone() };
        images.push((j, img));
    }
    drop(cache);
    let low = images.iter().map(|(_, b)| b.low).min().unwrap_or(0).min(0);
    let mut out = Block::zero(ctx, x.slots);
    out.extend_low(ctx, low);
    out.denom = x.denom;
    let len = out.len(ctx);
    let mut prec = vec![k; len];
    let f = ctx.f;
    for (j, img) in &images {
        let pj = x.prec_at(ctx, *j);
        let coeffs: Vec<Vec<u64>> = (0..x.slots).map(|s| ctx.o.frobenius(&x.coef_vec(ctx, s, *j))).collect();
        for n in img.low..m {
            let c = img.coef(ctx, 0, n).unwrap();
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            let v = ctx.o.valuation(c);
            let i = (n - low) as usize;
            prec[i] = prec[i].min(pj + v);
            for (s, a) in coeffs.iter().enumerate() {
                if a.iter().all(|&t| t == 0) {
                    continue;
                }
                let prod = ctx.o.mul(a, c);
                let o = (s * len + i) * f;
                for t in 0..f {
                    out.data[o + t] = zmod::add(out.data[o + t], prod[t], ctx.pk);
                }
            }
        }
    }
    out.prec = prec.into_iter().map(|v| v.min(k)).collect();
    let p = ctx.p as i32;
    out.tail_exact = x.tail_exact && x.max_degree(ctx).map_or(true, |t| t <= 0 || p * t < m);
    out.canonicalize(ctx);
    Ok(out)
}

impl Series {
    pub fn from_block(b: Block) -> Series {
        assert_eq!(b.slots, 1);
        Series { b }
    }

    pub fn block(&self) -> &Block {
        &self.b
    }

    pub fn zero(ctx: &ArithmeticContext) -> Series {
        Series { b: Block::zero(ctx, 1) }
    }

    pub fn one(ctx: &ArithmeticContext) -> Series {
        Series::constant(ctx, &ctx.o.one())
    }

    pub fn from_int(ctx: &ArithmeticContext, c: i64) -> Series {
        Series::constant(ctx, &ctx.o.scalar(zmod::from_i64(c, ctx.pk)))
    }

    pub fn constant(ctx: &ArithmeticContext, c: &[u64]) -> Series {
        Series::monomial(ctx, 0, c)
    }

    pub fn monomial(ctx: &ArithmeticContext, deg: i32, c: &[u64]) -> Series {
        let mut b = Block::zero(ctx, 1);
        b.set_coef(ctx, 0, deg, c);
        b.canonicalize(ctx);
        Series { b }
    }

    /// The variable T = γ^{p^e} − 1.
    pub fn t(ctx: &ArithmeticContext) -> Series {
        Series::monomial(ctx, 1, &ctx.o.one())
    }

    /// Integer coefficients starting at degree `low`.
    pub fn from_int_coeffs(ctx: &ArithmeticContext, low: i32, cs: &[i64]) -> Series {
        let mut b = Block::zero(ctx, 1);
        for (i, &c) in cs.iter().enumerate() {
            b.set_coef(ctx, 0, low + i as i32, &ctx.o.scalar(zmod::from_i64(c, ctx.pk)));
        }
        b.tail_exact = low + (cs.len() as i32) <= ctx.m as i32 || cs.iter().skip((ctx.m as i32 - low).max(0) as usize).all(|&c| c == 0);
        b.canonicalize(ctx);
        Series { b }
    }

    pub fn from_coeffs(ctx: &ArithmeticContext, low: i32, cs: &[Vec<u64>]) -> Series {
        let mut b = Block::zero(ctx, 1);
        for (i, c) in cs.iter().enumerate() {
            b.set_coef(ctx, 0, low + i as i32, c);
        }
        b.tail_exact = low + (cs.len() as i32) <= ctx.m as i32;
        b.canonicalize(ctx);
        Series { b }
    }

    /// Numerator coefficient of T^deg.
    pub fn coeff(&self, ctx: &ArithmeticContext, deg: i32) -> Vec<u64> {
        self.b.coef_vec(ctx, 0, deg)
    }

    pub fn denom_exp(&self) -> u32 {
        self.b.denom
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero()
    }

    /// Lowest degree with a nonzero coefficient, 0 for zero.
    pub fn low(&self, ctx: &ArithmeticContext) -> i32 {
        self.b.min_degree(ctx).unwrap_or(0)
    }

    pub fn is_integral(&self, ctx: &ArithmeticContext) -> bool {
        self.b.denom == 0 && self.low(ctx) >= 0
    }

    /// Digits known at the least precise stored degree.
    pub fn effective_precision(&self) -> i64 {
        self.b.effective_precision()
    }

    pub fn add(&self, o: &Series, ctx: &ArithmeticContext) -> Series {
        Series { b: self.b.add(&o.b, ctx) }
    }

    pub fn sub(&self, o: &Series, ctx: &ArithmeticContext) -> Series {
        Series { b: self.b.sub(&o.b, ctx) }
    }

    pub fn neg(&self, ctx: &ArithmeticContext) -> Series {
        Series { b: self.b.neg(ctx) }
    }

    pub fn mul(&self, o: &Series, ctx: &ArithmeticContext) -> Series {
        Series { b: Block::product(&self.b, &o.b, ctx, 1, &single) }
    }

    pub fn scale(&self, ctx: &ArithmeticContext, c: &[u64]) -> Series {
        Series { b: self.b.scale(ctx, c) }
    }

    pub fn scale_int(&self, ctx: &ArithmeticContext, c: i64) -> Series {
        Series { b: self.b.scale_int(ctx, c) }
    }

    pub fn pow(&self, ctx: &ArithmeticContext, mut e: u64) -> Series {
        let mut base = self.clone();
        let mut r = Series::one(ctx);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base, ctx);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, ctx);
            }
        }
        r
    }

    /// Multiplication by T^d.
    pub fn shift(&self, ctx: &ArithmeticContext, d: i32) -> Series {
        Series { b: shift_block(ctx, &self.b, d) }
    }

    /// Frobenius on coefficients together with T ↦ (1+T)^p − 1.
    pub fn phi(&self, ctx: &ArithmeticContext) -> Result<Series> {
        Ok(Series { b: phi_block(ctx, &self.b)? })
    }

    /// Multiplies by p^k.
    pub fn mul_p(&self, ctx: &ArithmeticContext, k: u32) -> Series {
        if k <= self.b.denom {
            let mut b = self.b.clone();
            b.denom -= k;
            b.canonicalize(ctx);
            return Series { b };
        }
        let mut b = self.b.clone();
        let extra = k - b.denom;
        b.denom = 0;
        let b = b.raise_denom(ctx, extra);
        let mut b = Block { denom: 0, ..b };
        b.canonicalize(ctx);
        Series { b }
    }

    /// Divides by p^k, recording the loss in the denominator.
    pub fn divide_by_p(&self, ctx: &ArithmeticContext, k: u32) -> Result<Series> {
        let mut b = self.b.clone();
        b.denom += k;
        b.canonicalize(ctx);
        let best = b.prec.iter().copied().max().unwrap_or(0) as i64;
        if best - b.denom as i64 <= 0 {
            return Err(Error::PrecisionExhausted(format!("division by p^{k} leaves no digits")));
        }
        Ok(Series { b })
    }

    /// T-adic valuation of the reduction mod p (denominator must be trivial).
    pub fn residue_valuation(&self, ctx: &ArithmeticContext) -> Option<i32> {
        if self.b.denom > 0 {
            return None;
        }
        (self.b.low..ctx.m as i32).find(|&d| {
            self.b.prec_at(ctx, d) > 0 && self.b.coef(ctx, 0, d).map_or(false, |c| c.iter().any(|&v| v % ctx.p != 0))
        })
    }

    fn newton(&self, ctx: &ArithmeticContext, seed: Series) -> Result<Series> {
        let mut z = seed.b;
        for _ in 0..96 {
            let yz = Block::product(&self.b, &z, ctx, 1, &single);
            let zn = Block::product(&z, &two_minus(ctx, &yz), ctx, 1, &single);
            if (zn.low as i64) < ctx.capacity {
                return Err(Error::CapacityExceeded { degree: zn.low as i64, capacity: ctx.capacity });
            }
            let mut zc = z.clone();
            zc.meet_precision(ctx, &zn);
            if zc == zn {
                return Ok(Series { b: zn });
            }
            z = zn;
        }
        Err(Error::IterationCap(96))
    }

    /// Inverse in O[[T]]: requires a unit constant term and no denominator.
    pub fn invert_series(&self, ctx: &ArithmeticContext) -> Result<Series> {
        if self.b.denom > 0 || self.low(ctx) < 0 {
            return Err(Error::NotAUnit("not an integral power series".into()));
        }
        let a0 = self.coeff(ctx, 0);
        if self.b.prec_at(ctx, 0) == 0 || !ctx.o.is_unit(&a0) {
            return Err(Error::NotAUnit("constant term is not a unit".into()));
        }
        let seed = Series::constant(ctx, &ctx.o.inverse(&a0).expect("unit"));
        self.newton(ctx, seed)
    }

    /// Inverse in the completed Laurent ring: any element nonzero mod p.
    pub fn invert_laurent(&self, ctx: &ArithmeticContext) -> Result<Series> {
        if self.b.denom > 0 {
            let num = Series { b: Block { denom: 0, ..self.b.clone() } };
            return Ok(num.invert_laurent(ctx)?.mul_p(ctx, self.b.denom));
        }
        let v = self.residue_valuation(ctx).ok_or_else(|| Error::NotAUnit("element is divisible by p".into()))?;
        if (v as i64) > ctx.lneg as i64 + ctx.m as i64 {
            return Err(Error::CapacityExceeded { degree: -(v as i64), capacity: -(ctx.lneg as i64) });
        }
        let y = self.shift(ctx, -v);
        let av = y.coeff(ctx, 0);
        let seed = Series::constant(ctx, &ctx.o.inverse(&av).expect("unit"));
        let z = y.newton(ctx, seed)?;
        Ok(z.shift(ctx, -v))
    }

    /// Inverse in whichever ring the element lives in.
    pub fn inverse(&self, ctx: &ArithmeticContext) -> Result<Series> {
        if self.is_integral(ctx) {
            if let Ok(z) = self.invert_series(ctx) {
                return Ok(z);
            }
        }
        self.invert_laurent(ctx)
    }

    pub fn agree(&self, o: &Series, ctx: &ArithmeticContext, digits: u32, upto: i32) -> Agreement {
        self.b.agree(&o.b, ctx, digits, upto)
    }

    /// True when the two values coincide at every digit both of them know.
    pub fn same_value(&self, o: &Series, ctx: &ArithmeticContext) -> bool {
        self.b.agree(&o.b, ctx, ctx.k, ctx.m as i32).equal
    }

    pub fn truncate_precision(&self, ctx: &ArithmeticContext, digits: u32) -> Series {
        let mut b = self.b.clone();
        b.truncate_precision(ctx, digits);
        Series { b }
    }
}

/// The coefficient ring R (or its completion) as a ring for determinant code.
pub struct SeriesRing<'a>(pub &'a ArithmeticContext);

impl crate::padic::CommRing for SeriesRing<'_> {
    type Elem = Series;
    fn zero(&self) -> Series {
        Series::zero(self.0)
    }
    fn one(&self) -> Series {
        Series::one(self.0)
    }
    fn add(&self, a: &Series, b: &Series) -> Series {
        a.add(b, self.0)
    }
    fn sub(&self, a: &Series, b: &Series) -> Series {
        a.sub(b, self.0)
    }
    fn mul(&self, a: &Series, b: &Series) -> Series {
        a.mul(b, self.0)
    }
    fn neg(&self, a: &Series) -> Series {
        a.neg(self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::ContextParams;

    fn ctx(p: u64, f: usize) -> std::sync::Arc<ArithmeticContext> {
        ArithmeticContext::new(&ContextParams::new(p, f, 1)).unwrap()
    }

    fn ints(c: &ArithmeticContext, s: &Series, lo: i32, hi: i32) -> Vec<i64> {
        (lo..hi)
            .map(|d| {
                let v = s.coeff(c, d)[0];
                if v > c.pk / 2 {
                    v as i64 - c.pk as i64
                } else {
                    v as i64
                }
            })
            .collect()
    }

    #[test]
    fn phi_of_t_for_p2() {
        let c = ctx(2, 1);
        let t = Series::t(&c);
        assert_eq!(ints(&c, &t.phi(&c).unwrap(), 0, 4), vec![0, 2, 1, 0]);
    }

    #[test]
    fn phi_of_t_is_t_pow_p_mod_p() {
        for p in [2u64, 3, 5] {
            let c = ctx(p, 1);
            let y = Series::t(&c).phi(&c).unwrap();
            for d in 0..c.m as i32 {
                let expect = if d == p as i32 { 1 } else { 0 };
                assert_eq!(y.coeff(&c, d)[0] % p, expect);
            }
        }
    }

    #[test]
    fn phi_on_constants_is_frobenius() {
        let c = ArithmeticContext::new(&ContextParams { modulus: Some(vec![1, 0]), ..ContextParams::new(3, 2, 1) }).unwrap();
        let u = Series::constant(&c, &c.o.basis(1));
        let img = u.phi(&c).unwrap();
        assert_eq!(img.coeff(&c, 0), c.o.neg(&c.o.basis(1)));
    }

    #[test]
    fn geometric_series() {
        let c = ctx(3, 1);
        let x = Series::from_int_coeffs(&c, 0, &[1, -1]);
        let z = x.invert_series(&c).unwrap();
        assert_eq!(ints(&c, &z, 0, c.m as i32), vec![1; c.m]);
        assert!(x.mul(&z, &c).same_value(&Series::one(&c), &c));
    }

    #[test]
    fn invert_four_mod_27() {
        let c = ctx(3, 1);
        let z = Series::from_int(&c, 4).invert_series(&c).unwrap();
        assert_eq!((z.coeff(&c, 0)[0] * 4) % 27, 1);
    }

    #[test]
    fn laurent_inverses() {
        let c = ctx(3, 1);
        let t = Series::t(&c);
        let ti = t.invert_laurent(&c).unwrap();
        assert!(ti.same_value(&Series::monomial(&c, -1, &c.o.one()), &c));
        assert!(matches!(Series::from_int(&c, 3).invert_laurent(&c), Err(Error::NotAUnit(_))));
        let x = Series::from_int_coeffs(&c, 0, &[3, 1]);
        let z = x.invert_laurent(&c).unwrap();
        for k in 0..c.k as i32 {
            let expect = zmod::from_i64((-3i64).pow(k as u32), c.pk);
            assert_eq!(z.coeff(&c, -1 - k)[0], expect, "degree {}", -1 - k);
        }
        assert!(x.mul(&z, &c).same_value(&Series::one(&c), &c));
    }

    #[test]
    fn divide_by_p_examples() {
        let c = ctx(3, 1);
        let pt = Series::from_int_coeffs(&c, 0, &[0, 3]);
        let r = pt.divide_by_p(&c, 1).unwrap();
        assert_eq!(r.denom_exp(), 0);
        assert_eq!(ints(&c, &r, 0, 3), vec![0, 1, 0]);
        let t = Series::t(&c);
        assert_eq!(t.divide_by_p(&c, 1).unwrap().denom_exp(), 1);
        assert!(matches!(t.divide_by_p(&c, c.k), Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn phi_of_negative_powers() {
        let c = ctx(2, 1);
        let ti = Series::monomial(&c, -1, &c.o.one());
        let a = ti.phi(&c).unwrap();
        let b = Series::t(&c).phi(&c).unwrap();
        assert!(a.mul(&b, &c).same_value(&Series::one(&c), &c));
    }
}
