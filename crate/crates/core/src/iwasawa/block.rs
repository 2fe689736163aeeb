//! Dense storage shared by power series, Laurent series and twisted group ring
//! elements: `slots` truncated series in T with coefficients in O/p^K, a common
//! denominator p^denom, and one precision per T-degree.
//!
//! A coefficient at degree j is known modulo p^{prec[j]} (numerator digits).
//! Degrees below `low` are exact zeros. Degrees >= M are exact zeros when
//! `tail_exact` holds and unknown otherwise.

use crate::context::ArithmeticContext;
use crate::padic::zmod;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub slots: usize,
    pub low: i32,
    pub data: Vec<u64>,
    pub prec: Vec<u32>,
    pub tail_exact: bool,
    pub denom: u32,
}

/// Outcome of comparing two blocks to a requested number of digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub equal: bool,
    /// Smallest number of digits actually compared over the inspected degrees.
    pub digits: u32,
    /// Degrees where fewer than the requested digits were available.
    pub short: usize,
    /// First mismatch as (slot, degree).
    pub mismatch: Option<(usize, i32)>,
}

impl Block {
    pub fn zero(ctx: &ArithmeticContext, slots: usize) -> Block {
        Block {
            slots,
            low: 0,
            data: vec![0; slots * ctx.m * ctx.f],
            prec: vec![ctx.k; ctx.m],
            tail_exact: true,
            denom: 0,
        }
    }

    #[inline]
    pub fn len(&self, ctx: &ArithmeticContext) -> usize {
        (ctx.m as i32 - self.low) as usize
    }

    #[inline]
    fn offset(&self, ctx: &ArithmeticContext, slot: usize, deg: i32) -> usize {
        (slot * self.len(ctx) + (deg - self.low) as usize) * ctx.f
    }

    pub fn coef(&self, ctx: &ArithmeticContext, slot: usize, deg: i32) -> Option<&[u64]> {
        if deg < self.low || deg >= ctx.m as i32 {
            return None;
        }
        let o = self.offset(ctx, slot, deg);
        Some(&self.data[o..o + ctx.f])
    }

    pub fn coef_vec(&self, ctx: &ArithmeticContext, slot: usize, deg: i32) -> Vec<u64> {
        self.coef(ctx, slot, deg).map(|c| c.to_vec()).unwrap_or_else(|| vec![0; ctx.f])
    }

    /// Writes a coefficient; degrees >= M are ignored.
    pub fn set_coef(&mut self, ctx: &ArithmeticContext, slot: usize, deg: i32, c: &[u64]) {
        if deg >= ctx.m as i32 {
            return;
        }
        if deg < self.low {
            self.relayout(ctx, deg);
        }
        let o = self.offset(ctx, slot, deg);
        for (d, &x) in self.data[o..o + ctx.f].iter_mut().zip(c) {
            *d = x % ctx.pk;
        }
    }

    pub fn prec_at(&self, ctx: &ArithmeticContext, deg: i32) -> u32 {
        if deg < self.low {
            ctx.k
        } else if deg >= ctx.m as i32 {
            if self.tail_exact {
                ctx.k
            } else {
                0
            }
        } else {
            self.prec[(deg - self.low) as usize]
        }
    }

    /// Re-stores the block with a new lowest degree. Coefficients below the new
    /// low are dropped, so callers only raise `low` over zero degrees.
    fn relayout(&mut self, ctx: &ArithmeticContext, new_low: i32) {
        let new_low = new_low.min(0);
        if new_low == self.low {
            return;
        }
        let f = ctx.f;
        let m = ctx.m as i32;
        let old_len = self.len(ctx);
        let new_len = (m - new_low) as usize;
        let mut data = vec![0u64; self.slots * new_len * f];
        let mut prec = vec![ctx.k; new_len];
        let from = self.low.max(new_low);
        for deg in from..m {
            prec[(deg - new_low) as usize] = self.prec[(deg - self.low) as usize];
            for s in 0..self.slots {
                let src = (s * old_len + (deg - self.low) as usize) * f;
                let dst = (s * new_len + (deg - new_low) as usize) * f;
                data[dst..dst + f].copy_from_slice(&self.data[src..src + f]);
            }
        }
        self.data = data;
        self.prec = prec;
        self.low = new_low;
    }

    pub fn extend_low(&mut self, ctx: &ArithmeticContext, new_low: i32) {
        if new_low < self.low {
            self.relayout(ctx, new_low);
        }
    }

    fn degree_is_exact_zero(&self, ctx: &ArithmeticContext, deg: i32) -> bool {
        if self.prec_at(ctx, deg) < ctx.k {
            return false;
        }
        (0..self.slots).all(|s| self.coef(ctx, s, deg).map_or(true, |c| c.iter().all(|&x| x == 0)))
    }

    /// Drops leading negative degrees that are exactly zero.
    pub fn trim(&mut self, ctx: &ArithmeticContext) {
        let mut new_low = self.low;
        while new_low < 0 && self.degree_is_exact_zero(ctx, new_low) {
            new_low += 1;
        }
        if new_low != self.low {
            self.relayout(ctx, new_low);
        }
    }

    /// Reduces every coefficient modulo p^{prec} of its degree.
    pub fn normalize(&mut self, ctx: &ArithmeticContext) {
        let f = ctx.f;
        let len = self.len(ctx);
        for i in 0..len {
            let pi = self.prec[i].min(ctx.k);
            self.prec[i] = pi;
            if pi == ctx.k {
                continue;
            }
            let md = ctx.pp(pi);
            for s in 0..self.slots {
                let o = (s * len + i) * f;
                for x in &mut self.data[o..o + f] {
                    *x %= md;
                }
            }
        }
    }

    /// Normal form: reduced coefficients, minimal denominator, trimmed low end.
    pub fn canonicalize(&mut self, ctx: &ArithmeticContext) {
        self.normalize(ctx);
        let p = ctx.p;
        while self.denom > 0 && self.data.iter().all(|&x| x % p == 0) {
            for x in &mut self.data {
                *x /= p;
            }
            for pi in &mut self.prec {
                *pi = pi.saturating_sub(1);
            }
            self.denom -= 1;
        }
        self.trim(ctx);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn slot_is_zero(&self, ctx: &ArithmeticContext, slot: usize) -> bool {
        let w = self.len(ctx) * ctx.f;
        self.data[slot * w..(slot + 1) * w].iter().all(|&x| x == 0)
    }

    /// Highest degree carrying a nonzero stored coefficient.
    pub fn max_degree(&self, ctx: &ArithmeticContext) -> Option<i32> {
        let len = self.len(ctx);
        let f = ctx.f;
        (0..len).rev().find_map(|i| {
            let nz = (0..self.slots).any(|s| {
                let o = (s * len + i) * f;
                self.data[o..o + f].iter().any(|&x| x != 0)
            });
            nz.then_some(self.low + i as i32)
        })
    }

    /// Lowest degree carrying a nonzero stored coefficient.
    pub fn min_degree(&self, ctx: &ArithmeticContext) -> Option<i32> {
        let len = self.len(ctx);
        let f = ctx.f;
        (0..len).find_map(|i| {
            let nz = (0..self.slots).any(|s| {
                let o = (s * len + i) * f;
                self.data[o..o + f].iter().any(|&x| x != 0)
            });
            nz.then_some(self.low + i as i32)
        })
    }

    /// Per-degree (valuation, precision) over [low, M), valuations capped at precision.
    fn profile(&self, ctx: &ArithmeticContext) -> (Vec<u32>, Vec<u32>) {
        let len = self.len(ctx);
        let f = ctx.f;
        let mut vals = Vec::with_capacity(len);
        for i in 0..len {
            let pi = self.prec[i];
            let mut v = pi;
            for s in 0..self.slots {
                let o = (s * len + i) * f;
                for &x in &self.data[o..o + f] {
                    if x != 0 {
                        v = v.min(zmod::valuation(x, ctx.p, pi));
                    }
                }
            }
            vals.push(v);
        }
        (vals, self.prec.clone())
    }

    /// Minimum over stored degrees of the precision in absolute digits.
    pub fn effective_precision(&self) -> i64 {
        self.prec.iter().map(|&x| x as i64 - self.denom as i64).min().unwrap_or(0)
    }

    /// Absolute precision at each degree in [0, upto).
    pub fn abs_prec_at(&self, ctx: &ArithmeticContext, deg: i32) -> i64 {
        self.prec_at(ctx, deg) as i64 - self.denom as i64
    }

    /// Multiplies numerators by p^s keeping the value fixed in absolute terms
    /// (the denominator rises by s).
    pub fn raise_denom(&self, ctx: &ArithmeticContext, s: u32) -> Block {
        if s == 0 {
            return self.clone();
        }
        let mut r = self.clone();
        let ps = if s >= ctx.k { 0 } else { ctx.pp(s) };
        for x in &mut r.data {
            *x = zmod::mul(*x, ps, ctx.pk);
        }
        for pi in &mut r.prec {
            *pi = (*pi + s).min(ctx.k);
        }
        r.denom += s;
        r
    }

    fn combine(&self, other: &Block, ctx: &ArithmeticContext, negate: bool) -> Block {
        assert_eq!(self.slots, other.slots, "slot count mismatch");
        let d = self.denom.max(other.denom);
        let mut a = self.raise_denom(ctx, d - self.denom);
        let b = other.raise_denom(ctx, d - other.denom);
        let low = a.low.min(b.low);
        a.extend_low(ctx, low);
        let m = ctx.m as i32;
        let len = a.len(ctx);
        let f = ctx.f;
        for deg in low..m {
            let i = (deg - low) as usize;
            a.prec[i] = a.prec[i].min(b.prec_at(ctx, deg));
            if deg < b.low {
                continue;
            }
            for s in 0..a.slots {
                let oa = (s * len + i) * f;
                let ob = b.offset(ctx, s, deg);
                for t in 0..f {
                    let y = b.data[ob + t];
                    a.data[oa + t] = if negate {
                        zmod::sub(a.data[oa + t], y, ctx.pk)
                    } else {
                        zmod::add(a.data[oa + t], y, ctx.pk)
                    };
                }
            }
        }
        a.tail_exact = a.tail_exact && b.tail_exact;
        a.canonicalize(ctx);
        a
    }

    pub fn add(&self, other: &Block, ctx: &ArithmeticContext) -> Block {
        self.combine(other, ctx, false)
    }

    pub fn sub(&self, other: &Block, ctx: &ArithmeticContext) -> Block {
        self.combine(other, ctx, true)
    }

    pub fn neg(&self, ctx: &ArithmeticContext) -> Block {
        let mut r = self.clone();
        for x in &mut r.data {
            *x = zmod::neg(*x, ctx.pk);
        }
        r
    }

    /// Applies a Z_p-linear, valuation-preserving map to every coefficient.
    pub fn map_coeffs(&self, ctx: &ArithmeticContext, g: impl Fn(&[u64]) -> Vec<u64>) -> Block {
        let mut r = self.clone();
        let f = ctx.f;
        for chunk in r.data.chunks_mut(f) {
            let y = g(chunk);
            chunk.copy_from_slice(&y);
        }
        r.canonicalize(ctx);
        r
    }

    /// Multiplies every coefficient by an element of O.
    pub fn scale(&self, ctx: &ArithmeticContext, c: &[u64]) -> Block {
        self.map_coeffs(ctx, |x| ctx.o.mul(x, c))
    }

    pub fn scale_int(&self, ctx: &ArithmeticContext, c: i64) -> Block {
        let c = zmod::from_i64(c, ctx.pk);
        let mut r = self.clone();
        for x in &mut r.data {
            *x = zmod::mul(*x, c, ctx.pk);
        }
        r.canonicalize(ctx);
        r
    }

    /// Extracts one slot as a single-slot block with the same precision profile.
    pub fn slot(&self, ctx: &ArithmeticContext, s: usize) -> Block {
        let w = self.len(ctx) * ctx.f;
        Block {
            slots: 1,
            low: self.low,
            data: self.data[s * w..(s + 1) * w].to_vec(),
            prec: self.prec.clone(),
            tail_exact: self.tail_exact,
            denom: self.denom,
        }
    }

    /// Assembles single-slot blocks into one block. Precision is the worst over
    /// the parts, since the profile is shared between slots.
    pub fn from_slots(ctx: &ArithmeticContext, parts: &[Block]) -> Block {
        let n = parts.len();
        let d = parts.iter().map(|b| b.denom).max().unwrap_or(0);
        let low = parts.iter().map(|b| b.low).min().unwrap_or(0).min(0);
        let mut out = Block::zero(ctx, n);
        out.extend_low(ctx, low);
        out.denom = d;
        out.tail_exact = parts.iter().all(|b| b.tail_exact);
        let len = out.len(ctx);
        let f = ctx.f;
        for (s, part) in parts.iter().enumerate() {
            assert_eq!(part.slots, 1);
            let part = part.raise_denom(ctx, d - part.denom);
            for deg in low..ctx.m as i32 {
                let i = (deg - low) as usize;
                out.prec[i] = out.prec[i].min(part.prec_at(ctx, deg));
                if let Some(c) = part.coef(ctx, 0, deg) {
                    let o = (s * len + i) * f;
                    out.data[o..o + f].copy_from_slice(c);
                }
            }
        }
        out.canonicalize(ctx);
        out
    }

    /// Sums slot s into slot `dest(s)` of a block with `out_slots` slots,
    /// dropping slots mapped to `None`.
    pub fn regroup(&self, ctx: &ArithmeticContext, out_slots: usize, dest: impl Fn(usize) -> Option<usize>) -> Block {
        let len = self.len(ctx);
        let w = len * ctx.f;
        let mut out = Block {
            slots: out_slots,
            low: self.low,
            data: vec![0; out_slots * w],
            prec: self.prec.clone(),
            tail_exact: self.tail_exact,
            denom: self.denom,
        };
        for s in 0..self.slots {
            let Some(d) = dest(s) else { continue };
            for i in 0..w {
                let v = self.data[s * w + i];
                if v != 0 {
                    out.data[d * w + i] = zmod::add(out.data[d * w + i], v, ctx.pk);
                }
            }
        }
        out.canonicalize(ctx);
        out
    }

    /// Integer linear map on slots: out[dst] += c·self[src] for each (src, dst, c).
    pub fn linear_map(&self, ctx: &ArithmeticContext, out_slots: usize, terms: &[(usize, usize, i64)]) -> Block {
        let len = self.len(ctx);
        let w = len * ctx.f;
        let mut out = Block {
            slots: out_slots,
            low: self.low,
            data: vec![0; out_slots * w],
            prec: self.prec.clone(),
            tail_exact: self.tail_exact,
            denom: self.denom,
        };
        for &(src, dst, c) in terms {
            let c = zmod::from_i64(c, ctx.pk);
            for i in 0..w {
                let v = self.data[src * w + i];
                if v != 0 {
                    out.data[dst * w + i] = zmod::add(out.data[dst * w + i], zmod::mul(v, c, ctx.pk), ctx.pk);
                }
            }
        }
        out.canonicalize(ctx);
        out
    }

    /// Replaces the shared precision profile by its minimum with `other`'s.
    pub fn meet_precision(&mut self, ctx: &ArithmeticContext, other: &Block) {
        let shift = other.denom as i64 - self.denom as i64;
        for deg in self.low..ctx.m as i32 {
            let i = (deg - self.low) as usize;
            let q = other.prec_at(ctx, deg) as i64 - shift;
            self.prec[i] = (self.prec[i] as i64).min(q.max(0)) as u32;
        }
        self.tail_exact &= other.tail_exact;
        self.canonicalize(ctx);
    }

    /// Clears the denominator after checking that every coefficient below
    /// degree `upto` is integral. From `upto` on, coefficients that are not
    /// visibly integral are dropped to zero known digits. Returns the first
    /// non-integral (slot, degree) below `upto` on failure.
    pub fn make_integral(&mut self, ctx: &ArithmeticContext, upto: i32) -> Result<(), (usize, i32)> {
        self.canonicalize(ctx);
        let d = self.denom;
        if d == 0 {
            return Ok(());
        }
        let len = self.len(ctx);
        let f = ctx.f;
        let pd = ctx.pp(d);
        for i in 0..len {
            let deg = self.low + i as i32;
            let pi = self.prec[i];
            let md = ctx.pp(pi.min(d));
            let mut integral = pi >= d;
            for s in 0..self.slots {
                let o = (s * len + i) * f;
                if self.data[o..o + f].iter().any(|&x| x % md != 0) {
                    integral = false;
                }
                if !integral && deg < upto {
                    return Err((s, deg));
                }
            }
            for s in 0..self.slots {
                let o = (s * len + i) * f;
                for x in &mut self.data[o..o + f] {
                    *x = if integral { *x / pd } else { 0 };
                }
            }
            self.prec[i] = if integral { pi - d } else { 0 };
        }
        self.denom = 0;
        self.trim(ctx);
        Ok(())
    }

    /// Caps precision at `digits` absolute digits.
    pub fn truncate_precision(&mut self, ctx: &ArithmeticContext, digits: u32) {
        let cap = digits + self.denom;
        for pi in &mut self.prec {
            *pi = (*pi).min(cap);
        }
        self.canonicalize(ctx);
    }

    /// Generic product. `route(i, j)` gives the destination slot of the product
    /// of slot i of `a` and slot j of `b`, and whether the structure constant
    /// carries a factor (1+T).
    pub fn product(
        a: &Block,
        b: &Block,
        ctx: &ArithmeticContext,
        out_slots: usize,
        route: &dyn Fn(usize, usize) -> Option<(usize, bool)>,
    ) -> Block {
        let f = ctx.f;
        let w = 2 * f - 1;
        let m = ctx.m as i32;
        let low_c = a.low + b.low;
        let len_c = (m - low_c) as usize;
        let la = a.len(ctx);
        let lb = b.len(ctx);

        let ranges = |x: &Block, len: usize| -> Vec<Option<(usize, usize)>> {
            (0..x.slots)
                .map(|s| {
                    let base = s * len * f;
                    let first = (0..len).find(|&i| x.data[base + i * f..base + i * f + f].iter().any(|&v| v != 0))?;
                    let last = (0..len).rev().find(|&i| x.data[base + i * f..base + i * f + f].iter().any(|&v| v != 0))?;
                    Some((first, last))
                })
                .collect()
        };
        let ra = ranges(a, la);
        let rb = ranges(b, lb);

        // u64 accumulators suffice when no entry can overflow
        let terms = (a.slots * b.slots * la.min(lb) * f) as u128;
        let narrow = (ctx.pk as u128 - 1).pow(2) * terms < u64::MAX as u128;
        let size = out_slots * 2 * len_c * w;
        let mut acc = if narrow { Acc::Narrow(vec![0u64; size]) } else { Acc::Wide(vec![0u128; size]) };
        let mut used_carry = false;
        let mut max_deg: Option<i32> = None;
        for (sa, ra_s) in ra.iter().enumerate() {
            let Some((a0, a1)) = *ra_s else { continue };
            for (sb, rb_s) in rb.iter().enumerate() {
                let Some((b0, b1)) = *rb_s else { continue };
                let Some((dst, carry)) = route(sa, sb) else { continue };
                used_carry |= carry;
                let top = a.low + a1 as i32 + b.low + b1 as i32 + carry as i32;
                max_deg = Some(max_deg.map_or(top, |t: i32| t.max(top)));
                let span = Span {
                    base: (dst * 2 + carry as usize) * len_c,
                    a: &a.data[sa * la * f..(sa + 1) * la * f],
                    b: &b.data[sb * lb * f..(sb + 1) * lb * f],
                    ar: (a0, a1),
                    br: (b0, b1),
                    len_c,
                    f,
                };
                match &mut acc {
                    Acc::Narrow(v) => span.accumulate(v),
                    Acc::Wide(v) => span.accumulate(v),
                }
            }
        }

        // precision envelope; full-precision power series need no bookkeeping
        let k = ctx.k;
        let full = |x: &Block| x.low == 0 && x.prec.iter().all(|&d| d >= k);
        let env = if full(a) && full(b) { vec![k; len_c] } else { Self::envelope(a, b, ctx, len_c) };
        let mut prec = env.clone();
        if used_carry {
            for n in 1..len_c {
                prec[n] = prec[n].min(env[n - 1]);
            }
        }

        let pk = ctx.pk as u128;
        let mut out = Block {
            slots: out_slots,
            low: low_c.min(0),
            data: Vec::new(),
            prec: Vec::new(),
            tail_exact: false,
            denom: a.denom + b.denom,
        };
        // low_c may be positive only if both lows are, which never happens (low <= 0)
        debug_assert!(low_c <= 0);
        out.data = vec![0u64; out_slots * len_c * f];
        out.prec = prec;
        let mut buf = vec![0u64; w];
        for dst in 0..out_slots {
            for n in 0..len_c {
                let o0 = ((dst * 2) * len_c + n) * w;
                let o1 = ((dst * 2 + 1) * len_c + n) * w;
                for t in 0..w {
                    let mut v = acc.get(o0 + t) % pk + acc.get(o1 + t) % pk;
                    if n > 0 {
                        v += acc.get(o1 - w + t) % pk;
                    }
                    buf[t] = (v % pk) as u64;
                }
                if f > 1 {
                    ctx.o.reduce_wide(&mut buf);
                }
                let o = (dst * len_c + n) * f;
                out.data[o..o + f].copy_from_slice(&buf[..f]);
            }
        }
        let a_zero = ra.iter().all(|r| r.is_none());
        let b_zero = rb.iter().all(|r| r.is_none());
        out.tail_exact = a_zero
            || b_zero
            || (a.tail_exact && b.tail_exact && max_deg.map_or(true, |t| t < m));
        out.canonicalize(ctx);
        out
    }

    /// Per-degree precision of a product from the factors' (valuation, precision) profiles.
    fn envelope(a: &Block, b: &Block, ctx: &ArithmeticContext, len_c: usize) -> Vec<u32> {
        let (va, pa) = a.profile(ctx);
        let (vb, pb) = b.profile(ctx);
        let k = ctx.k;
        let beyond = |exact: bool| if exact { k } else { 0 };
        let at = |v: &Vec<u32>, i: usize, len: usize, exact: bool| if i < len { v[i] } else { beyond(exact) };
        let (la, lb) = (a.len(ctx), b.len(ctx));
        let mut env = vec![k; len_c];
        for (n, e) in env.iter_mut().enumerate() {
            let mut best = k;
            for i in 0..=n {
                let j = n - i;
                let (vai, pai) = (at(&va, i, la, a.tail_exact), at(&pa, i, la, a.tail_exact));
                let (vbj, pbj) = (at(&vb, j, lb, b.tail_exact), at(&pb, j, lb, b.tail_exact));
                let t = (vai + pbj).min(pai + vbj);
                if t < best {
                    best = t;
                    if best == 0 {
                        break;
                    }
                }
            }
            *e = best.min(k);
        }
        env
    }

    /// Compares two blocks with equal slot counts to `digits` absolute digits
    /// over degrees below `upto`.
    pub fn agree(&self, other: &Block, ctx: &ArithmeticContext, digits: u32, upto: i32) -> Agreement {
        assert_eq!(self.slots, other.slots);
        let d = self.denom.max(other.denom);
        let a = self.raise_denom(ctx, d - self.denom);
        let b = other.raise_denom(ctx, d - other.denom);
        let low = a.low.min(b.low);
        let upto = upto.min(ctx.m as i32);
        let mut res = Agreement { equal: true, digits, short: 0, mismatch: None };
        for deg in low..upto {
            let avail = (a.prec_at(ctx, deg).min(b.prec_at(ctx, deg)) as i64 - d as i64).max(0) as u32;
            let use_d = digits.min(avail);
            if use_d < digits {
                res.short += 1;
            }
            res.digits = res.digits.min(use_d);
            if use_d == 0 {
                continue;
            }
            let md = ctx.pp(use_d + d);
            for s in 0..a.slots {
                let ca = a.coef_vec(ctx, s, deg);
                let cb = b.coef_vec(ctx, s, deg);
                if ca.iter().zip(&cb).any(|(x, y)| x % md != y % md) {
                    res.equal = false;
                    if res.mismatch.is_none() {
                        res.mismatch = Some((s, deg));
                    }
                }
            }
        }
        res
    }
}

enum Acc {
    Narrow(Vec<u64>),
    Wide(Vec<u128>),
}

impl Acc {
    fn get(&self, i: usize) -> u128 {
        match self {
            Acc::Narrow(v) => v[i] as u128,
            Acc::Wide(v) => v[i],
        }
    }
}

/// One pair of slots feeding one accumulator row.
struct Span<'a> {
    base: usize,
    a: &'a [u64],
    b: &'a [u64],
    ar: (usize, usize),
    br: (usize, usize),
    len_c: usize,
    f: usize,
}

impl Span<'_> {
    fn accumulate<T>(&self, acc: &mut [T])
    where
        T: Copy + From<u64> + std::ops::AddAssign + std::ops::Mul<Output = T>,
    {
        let (f, w) = (self.f, 2 * self.f - 1);
        let (b0, b1) = self.br;
        for i in self.ar.0..=self.ar.1 {
            let ai = &self.a[i * f..i * f + f];
            if ai.iter().all(|&v| v == 0) {
                continue;
            }
            let jmax = b1.min(self.len_c.saturating_sub(i + 1));
            if b0 > jmax {
                continue;
            }
            if f == 1 {
                let av = T::from(ai[0]);
                let out = &mut acc[self.base + i + b0..=self.base + i + jmax];
                for (o, &bv) in out.iter_mut().zip(&self.b[b0..=jmax]) {
                    *o += av * T::from(bv);
                }
                continue;
            }
            for j in b0..=jmax {
                let bj = &self.b[j * f..j * f + f];
                let o = (self.base + i + j) * w;
                for (x, &av) in ai.iter().enumerate() {
                    if av == 0 {
                        continue;
                    }
                    let av = T::from(av);
                    for (y, &bv) in bj.iter().enumerate() {
                        acc[o + x + y] += av * T::from(bv);
                    }
                }
            }
        }
    }
}
