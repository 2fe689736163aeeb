//! The twisted group ring R[G]^τ ≅ Λ_O(𝒢), R = Λ_O(Γ^{p^e}), its completed
//! version over the Laurent ring, and the class module R[Conj(G)]^τ.
//!
//! A basis element ḡ is the image of the lift h·γ^a (0 <= a < p^e) of g = (h, a).
//! Products follow ḡ·ḡ' = τ(g,g')·(gg')‾ with τ(g,g') = (1+T)^{⌊(a+a')/p^e⌋}.

mod commutator;
mod conj;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

pub use commutator::IdealSpec;
pub use conj::ConjModuleElement;

use crate::context::{ArithmeticContext, Ctx};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::iwasawa::{Agreement, Block, Series, SeriesRing};
use crate::padic::{berkowitz_charpoly, HowellForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingTag {
    /// Coefficients in O[[T]].
    Integral,
    /// Coefficients in the p-adic completion of O[[T]][1/T].
    Completed,
}

/// Σ_g c_g ḡ with c_g in R or its completion, dense over G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedRingElement {
    pub(crate) b: Block,
    pub tag: RingTag,
    /// Cyclic subgroup carrying the support, `None` for all of G.
    pub support: Option<usize>,
}

impl TwistedRingElement {
    pub fn block(&self) -> &Block {
        &self.b
    }

    pub fn denom_exp(&self) -> u32 {
        self.b.denom
    }

    pub fn is_zero(&self) -> bool {
        self.b.is_zero()
    }

    pub fn effective_precision(&self) -> i64 {
        self.b.effective_precision()
    }
}

pub struct TwistedAlgebra {
    pub ctx: Ctx,
    pub group: Group,
    howell: Mutex<HashMap<(u32, u32), Arc<HowellForm>>>,
    pub(crate) trace_howell: Mutex<HashMap<(usize, u32, u32), Arc<HowellForm>>>,
}

fn join_support(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    if a == b {
        a
    } else {
        None
    }
}

fn join_tag(a: RingTag, b: RingTag) -> RingTag {
    if a == RingTag::Completed || b == RingTag::Completed {
        RingTag::Completed
    } else {
        RingTag::Integral
    }
}

impl TwistedAlgebra {
    pub fn new(ctx: Ctx, group: Group) -> Result<TwistedAlgebra> {
        if ctx.p != group.p {
            return Err(Error::InvalidContext(format!("context prime {} differs from group prime {}", ctx.p, group.p)));
        }
        if ctx.e != group.e {
            return Err(Error::InvalidContext(format!("context e = {} differs from group e = {}", ctx.e, group.e)));
        }
        let exponent = group.ab_exponent() as u64;
        if (ctx.pp(ctx.n.min(ctx.k)) as u128) < exponent as u128 {
            return Err(Error::InvalidContext(format!("N too small for the exponent {exponent} of G^ab")));
        }
        Ok(TwistedAlgebra {
            ctx,
            group,
            howell: Mutex::new(HashMap::new()),
            trace_howell: Mutex::new(HashMap::new()),
        })
    }

    pub fn ctx(&self) -> &ArithmeticContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.group.order
    }

    fn wrap(&self, b: Block, tag: RingTag, support: Option<usize>) -> TwistedRingElement {
        TwistedRingElement { b, tag, support }
    }

    pub fn zero(&self, tag: RingTag) -> TwistedRingElement {
        self.wrap(Block::zero(&self.ctx, self.order()), tag, None)
    }

    pub fn one(&self, tag: RingTag) -> TwistedRingElement {
        self.basis(0, tag)
    }

    /// ḡ.
    pub fn basis(&self, g: usize, tag: RingTag) -> TwistedRingElement {
        self.scalar_at(g, &Series::one(&self.ctx), tag)
    }

    /// c·ḡ.
    pub fn scalar_at(&self, g: usize, c: &Series, tag: RingTag) -> TwistedRingElement {
        let ctx = &self.ctx;
        let parts: Vec<Block> =
            (0..self.order()).map(|s| if s == g { c.b.clone() } else { Series::zero(ctx).b }).collect();
        self.wrap(Block::from_slots(ctx, &parts), tag, None)
    }

    /// c·1̄ for c in R.
    pub fn scalar(&self, c: &Series, tag: RingTag) -> TwistedRingElement {
        self.scalar_at(0, c, tag)
    }

    pub fn from_coeffs(&self, tag: RingTag, terms: &[(usize, Series)]) -> TwistedRingElement {
        let ctx = &self.ctx;
        let mut parts: Vec<Series> = vec![Series::zero(ctx); self.order()];
        for (g, c) in terms {
            parts[*g] = parts[*g].add(c, ctx);
        }
        let blocks: Vec<Block> = parts.into_iter().map(|s| s.b).collect();
        self.wrap(Block::from_slots(ctx, &blocks), tag, None)
    }

    pub fn coeff(&self, x: &TwistedRingElement, g: usize) -> Series {
        let mut b = x.b.slot(&self.ctx, g);
        b.canonicalize(&self.ctx);
        Series::from_block(b)
    }

    /// Restricts the support tag to a cyclic subgroup P, checking the coefficients.
    pub fn with_support(&self, x: &TwistedRingElement, p_sub: usize) -> Result<TwistedRingElement> {
        let sub = &self.group.lattice.subgroups[p_sub];
        for g in 0..self.order() {
            if !sub.member[g] && !x.b.slot_is_zero(&self.ctx, g) {
                return Err(Error::InvalidInput(format!("coefficient at {g} outside the support subgroup")));
            }
        }
        Ok(TwistedRingElement { support: Some(p_sub), ..x.clone() })
    }

    pub fn add(&self, x: &TwistedRingElement, y: &TwistedRingElement) -> TwistedRingElement {
        self.wrap(x.b.add(&y.b, &self.ctx), join_tag(x.tag, y.tag), join_support(x.support, y.support))
    }

    pub fn sub(&self, x: &TwistedRingElement, y: &TwistedRingElement) -> TwistedRingElement {
        self.wrap(x.b.sub(&y.b, &self.ctx), join_tag(x.tag, y.tag), join_support(x.support, y.support))
    }

    pub fn neg(&self, x: &TwistedRingElement) -> TwistedRingElement {
        self.wrap(x.b.neg(&self.ctx), x.tag, x.support)
    }

    /// Product in R[G]^τ; both factors must carry the same ring tag.
    pub fn mul(&self, x: &TwistedRingElement, y: &TwistedRingElement) -> Result<TwistedRingElement> {
        if x.tag != y.tag {
            return Err(Error::RingTagMismatch);
        }
        Ok(self.m(x, y))
    }

    /// Product promoting to the completed ring when the tags differ.
    pub(crate) fn m(&self, x: &TwistedRingElement, y: &TwistedRingElement) -> TwistedRingElement {
        let g = &self.group;
        let route = |i: usize, j: usize| Some((g.mul(i, j), g.carry(i, j)));
        let b = Block::product(&x.b, &y.b, &self.ctx, self.order(), &route);
        self.wrap(b, join_tag(x.tag, y.tag), join_support(x.support, y.support))
    }

    /// Multiplication by a central scalar c in R.
    pub fn scale(&self, x: &TwistedRingElement, c: &Series) -> TwistedRingElement {
        let b = Block::product(&x.b, &c.b, &self.ctx, self.order(), &|i, _| Some((i, false)));
        self.wrap(b, x.tag, x.support)
    }

    pub fn scale_o(&self, x: &TwistedRingElement, c: &[u64]) -> TwistedRingElement {
        self.wrap(x.b.scale(&self.ctx, c), x.tag, x.support)
    }

    pub fn scale_int(&self, x: &TwistedRingElement, c: i64) -> TwistedRingElement {
        self.wrap(x.b.scale_int(&self.ctx, c), x.tag, x.support)
    }

    /// Multiplies by p^k.
    pub fn mul_p(&self, x: &TwistedRingElement, k: u32) -> TwistedRingElement {
        let ctx = &self.ctx;
        let mut b = if k <= x.b.denom {
            Block { denom: x.b.denom - k, ..x.b.clone() }
        } else {
            let extra = k - x.b.denom;
            let r = Block { denom: 0, ..x.b.clone() }.raise_denom(ctx, extra);
            Block { denom: 0, ..r }
        };
        b.canonicalize(ctx);
        self.wrap(b, x.tag, x.support)
    }

    /// Divides by p^k, failing once no digits remain.
    pub fn divide_by_p(&self, x: &TwistedRingElement, k: u32) -> Result<TwistedRingElement> {
        let mut b = x.b.clone();
        b.denom += k;
        b.canonicalize(&self.ctx);
        let best = b.prec.iter().copied().max().unwrap_or(0) as i64;
        if best - b.denom as i64 <= 0 {
            return Err(Error::PrecisionExhausted(format!("division by p^{k} leaves no digits")));
        }
        Ok(self.wrap(b, x.tag, x.support))
    }

    pub fn pow(&self, x: &TwistedRingElement, mut k: u64) -> TwistedRingElement {
        let mut base = x.clone();
        let mut r = TwistedRingElement { support: x.support, ..self.one(x.tag) };
        while k > 0 {
            if k & 1 == 1 {
                r = self.m(&r, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.m(&base, &base);
            }
        }
        r
    }

    /// Exponent k with τ(g1, g2) = (1+T)^k.
    pub fn cocycle_tau(&self, g1: usize, g2: usize) -> u32 {
        self.group.carry(g1, g2) as u32
    }

    pub fn tau_series(&self, g1: usize, g2: usize) -> Series {
        let ctx = &self.ctx;
        Series::from_int_coeffs(ctx, 0, &[1, 1]).pow(ctx, self.cocycle_tau(g1, g2) as u64)
    }

    /// ḡ^k = (1+T)^s·(g^k)‾; returns (s, g^k).
    pub fn twisted_power_class(&self, g: usize, k: u64) -> (u64, usize) {
        let (x, c) = self.group.power(g, k);
        (c, x)
    }

    /// Applies φ to the coefficients of a block whose slot i stands for the
    /// group element `elem(i)`, then sends slot i to `dest(elem(i)^p)` with the
    /// scalar (1+T)^s from ḡ^p = (1+T)^s·(g^p)‾.
    pub(crate) fn phi_power_map(
        &self,
        b: &Block,
        out_slots: usize,
        elem: impl Fn(usize) -> usize,
        dest: impl Fn(usize) -> usize,
    ) -> Result<Block> {
        let ctx = &self.ctx;
        let img = crate::iwasawa::series::phi_block(ctx, b)?;
        let routes: Vec<(u64, usize)> = (0..b.slots)
            .map(|i| {
                let (s, gp) = self.twisted_power_class(elem(i), ctx.p);
                (s, dest(gp))
            })
            .collect();
        let smax = routes.iter().map(|r| r.0).max().unwrap_or(0) as usize;
        let one_t = Series::from_int_coeffs(ctx, 0, &[1, 1]);
        let pows: Vec<Block> = (0..=smax).map(|s| one_t.pow(ctx, s as u64).b).collect();
        let scal = Block::from_slots(ctx, &pows);
        let route = |i: usize, j: usize| (routes[i].0 as usize == j).then_some((routes[i].1, false));
        Ok(Block::product(&img, &scal, ctx, out_slots, &route))
    }

    /// φ applied to every coefficient, group elements fixed.
    pub fn phi_coefficients(&self, x: &TwistedRingElement) -> Result<TwistedRingElement> {
        let b = crate::iwasawa::series::phi_block(&self.ctx, &x.b)?;
        Ok(self.wrap(b, x.tag, x.support))
    }

    /// Image in the residue field F_q under T ↦ 0, ḡ ↦ 1 (integral ring only).
    pub fn residue(&self, x: &TwistedRingElement) -> Result<Vec<u64>> {
        let ctx = &self.ctx;
        if x.b.denom > 0 || x.b.min_degree(ctx).map_or(false, |d| d < 0) {
            return Err(Error::InvalidInput("residue needs an integral element".into()));
        }
        let mut r = vec![0u64; ctx.f];
        for g in 0..self.order() {
            let c = x.b.coef_vec(ctx, g, 0);
            for (t, v) in r.iter_mut().enumerate() {
                *v = (*v + c[t]) % ctx.p;
            }
        }
        Ok(r)
    }

    /// Image of x under H ↦ 1, placed back on the elements (1, a).
    pub fn gamma_projection(&self, x: &TwistedRingElement) -> TwistedRingElement {
        let nh = self.group.h.order;
        let b = x.b.regroup(&self.ctx, self.order(), |g| Some(nh * (g / nh)));
        self.wrap(b, x.tag, None)
    }

    /// Inverse of an element of the commutative subring spanned by the (1, a),
    /// via Cayley–Hamilton on its multiplication matrix.
    fn invert_gamma_part(&self, y: &TwistedRingElement) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        let g = &self.group;
        let pe = g.pe;
        let nh = g.h.order;
        let cs: Vec<Series> = (0..pe).map(|a| self.coeff(y, nh * a)).collect();
        let one_t = Series::from_int_coeffs(ctx, 0, &[1, 1]);
        let mut mat = vec![vec![Series::zero(ctx); pe]; pe];
        for j in 0..pe {
            for (a, c) in cs.iter().enumerate() {
                let i = (a + j) % pe;
                let entry = if a + j >= pe { c.mul(&one_t, ctx) } else { c.clone() };
                mat[i][j] = mat[i][j].add(&entry, ctx);
            }
        }
        let chi = berkowitz_charpoly(&SeriesRing(ctx), &mat)?;
        let cn = chi[pe].clone();
        let inv_cn = match y.tag {
            RingTag::Integral => cn.invert_series(ctx)?,
            RingTag::Completed => cn.invert_laurent(ctx)?,
        };
        // y^{n-1} + c1 y^{n-2} + ... + c_{n-1}, by Horner
        let mut acc = self.one(y.tag);
        for c in chi.iter().take(pe).skip(1) {
            acc = self.add(&self.m(&acc, y), &self.scalar(c, y.tag));
        }
        Ok(self.neg(&self.scale(&acc, &inv_cn)))
    }

    fn newton_inverse(&self, x: &TwistedRingElement, seed: TwistedRingElement) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        let two = self.scalar(&Series::from_int(ctx, 2), x.tag);
        let mut z = seed;
        for _ in 0..128 {
            let xz = self.m(x, &z);
            let zn = self.m(&z, &self.sub(&two, &xz));
            if (zn.b.low as i64) < ctx.capacity {
                return Err(Error::CapacityExceeded { degree: zn.b.low as i64, capacity: ctx.capacity });
            }
            let mut zc = z.b.clone();
            zc.meet_precision(ctx, &zn.b);
            if zc == zn.b {
                return Ok(TwistedRingElement { tag: x.tag, support: x.support, ..zn });
            }
            z = zn;
        }
        Err(Error::IterationCap(128))
    }

    pub fn is_unit(&self, x: &TwistedRingElement) -> bool {
        match x.tag {
            RingTag::Integral => self.residue(x).map_or(false, |r| r.iter().any(|&v| v != 0)),
            RingTag::Completed => self.invert_gamma_part(&self.gamma_projection(x)).is_ok(),
        }
    }

    /// Two-sided inverse at working precision.
    pub fn ring_invert(&self, x: &TwistedRingElement) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        if (1..self.order()).all(|g| x.b.slot_is_zero(ctx, g)) {
            let c = self.coeff(x, 0);
            let inv = match x.tag {
                RingTag::Integral => c.invert_series(ctx)?,
                RingTag::Completed => c.invert_laurent(ctx)?,
            };
            return Ok(TwistedRingElement { support: x.support, ..self.scalar(&inv, x.tag) });
        }
        match x.tag {
            RingTag::Integral => {
                let r = self.residue(x)?;
                if r.iter().all(|&v| v == 0) {
                    return Err(Error::NotAUnit("residue is zero".into()));
                }
                let t = ctx.o.teichmuller(&r)?;
                let t_inv = ctx.o.inverse(&t).ok_or_else(|| Error::Internal("Teichmüller lift not a unit".into()))?;
                let seed = self.scalar(&Series::constant(ctx, &t_inv), x.tag);
                self.newton_inverse(x, seed)
            }
            RingTag::Completed => {
                if x.b.denom > 0 {
                    let num = TwistedRingElement { b: Block { denom: 0, ..x.b.clone() }, ..x.clone() };
                    return Ok(self.mul_p(&self.ring_invert(&num)?, x.b.denom));
                }
                let y = self.gamma_projection(x);
                let seed = self.invert_gamma_part(&y).map_err(|e| match e {
                    Error::NotAUnit(_) => Error::NotAUnit("Γ-part is not invertible".into()),
                    other => other,
                })?;
                self.newton_inverse(x, seed)
            }
        }
    }

    /// ḡ x ḡ^{-1}, which permutes coefficients without scalars.
    pub fn conjugate(&self, g: usize, x: &TwistedRingElement) -> TwistedRingElement {
        let grp = &self.group;
        let b = x.b.regroup(&self.ctx, self.order(), |k| Some(grp.conj(g, k)));
        self.wrap(b, x.tag, None)
    }

    /// Sums coefficients over conjugacy classes.
    pub fn to_conj(&self, x: &TwistedRingElement) -> ConjModuleElement {
        let grp = &self.group;
        let b = x.b.regroup(&self.ctx, grp.num_classes(), |g| Some(grp.class_of[g]));
        ConjModuleElement { b, tag: x.tag }
    }

    pub fn agree(&self, x: &TwistedRingElement, y: &TwistedRingElement, digits: u32, upto: i32) -> Agreement {
        x.b.agree(&y.b, &self.ctx, digits, upto)
    }

    /// Equality at every digit both sides know.
    pub fn same_value(&self, x: &TwistedRingElement, y: &TwistedRingElement) -> bool {
        self.agree(x, y, self.ctx.k, self.ctx.m as i32).equal
    }

    pub(crate) fn howell_for(&self, scale: u32, prec: u32) -> Arc<HowellForm> {
        let mut cache = self.howell.lock().expect("howell cache poisoned");
        cache
            .entry((scale, prec))
            .or_insert_with(|| Arc::new(commutator::difference_howell(self, scale, prec)))
            .clone()
    }
}
