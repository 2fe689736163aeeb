//! α_P, u^G, the conditions M1–M3 cutting out Φ^G, the map ℒ and the
//! comparison β∘L = ℒ∘θ.
//!
//! The order-p character of P used by α_P is called `chi` here; the cokernel
//! map on the class module keeps the name ω (`omega_cokernel`).

use serde::Serialize;

use crate::additive::AdditiveTuple;
use crate::error::{Error, Result};
use crate::padic::{zmod, CyclotomicElement};
use crate::twisted::{RingTag, TwistedAlgebra, TwistedRingElement};

/// One unit of R[P]^τ for every cyclic subgroup P, indexed by subgroup id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeTuple {
    pub components: Vec<TwistedRingElement>,
    pub tag: RingTag,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PhiReport {
    pub m1: bool,
    pub m2: bool,
    pub m3: bool,
    pub witnesses: Vec<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.m1 && self.m2 && self.m3
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub passed: bool,
    /// Digits required for equality.
    pub digits: u32,
    /// Fewest digits actually compared over all components.
    pub compared: u32,
    pub witnesses: Vec<String>,
}

impl TwistedAlgebra {
    /// χ(π) ∈ Z/p for π in P: the stored generator goes to 1 through P/P^p.
    fn chi(&self, s: usize) -> Vec<Option<u64>> {
        let g = &self.group;
        let sub = &g.lattice.subgroups[s];
        let mut out = vec![None; self.order()];
        let mut y = 0usize;
        for i in 0..sub.order {
            out[y] = Some(i as u64 % self.ctx.p);
            y = g.mul(y, sub.generator);
        }
        out
    }

    fn check_tuple(&self, t: &MultiplicativeTuple) -> Result<()> {
        if t.components.len() != self.group.lattice.len() {
            return Err(Error::DimensionMismatch("tuple is not indexed by C(G)".into()));
        }
        Ok(())
    }

    /// α_P(x) = x^p / Π_k ω^k(x) for P ≠ 1, and α_1(x) = x^p/φ(x).
    pub fn alpha(&self, x: &TwistedRingElement, s: usize) -> Result<TwistedRingElement> {
        self.alpha_with_character(x, s, 1)
    }

    /// α_P with the character ω replaced by ω^j.
    pub fn alpha_with_character(&self, x: &TwistedRingElement, s: usize, j: u64) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        let p = ctx.p;
        let l = &self.group.lattice;
        if s >= l.len() {
            return Err(Error::InvalidInput(format!("no cyclic subgroup with id {s}")));
        }
        if j % p == 0 {
            return Err(Error::InvalidInput("the character power must be prime to p".into()));
        }
        let sub = &l.subgroups[s];
        if (0..self.order()).any(|g| !sub.member[g] && !x.b.slot_is_zero(ctx, g)) {
            return Err(Error::InvalidInput(format!("element is not supported on subgroup {s}")));
        }
        if x.b.denom > 0 {
            return Err(Error::InvalidInput("α needs an integral unit".into()));
        }
        let xp = self.pow(x, p);
        let den = if s == l.trivial() { self.phi_ring(x)? } else { self.character_product(x, s, j)? };
        let r = self.m(&xp, &self.ring_invert(&den)?);
        Ok(TwistedRingElement { support: Some(s), tag: x.tag, ..r })
    }

    /// Π_{k<p} ω^{jk}(x), computed in R[P]^τ ⊗ O[z]/(z^p − 1) and certified to lie
    /// in R[P]^τ after passing to O[ζ_p].
    fn character_product(&self, x: &TwistedRingElement, s: usize, j: u64) -> Result<TwistedRingElement> {
        let ctx = &self.ctx;
        let p = ctx.p as usize;
        let chi = self.chi(s);
        let els = self.group.lattice.subgroups[s].elements.clone();
        let zero = TwistedRingElement { support: Some(s), ..self.zero(x.tag) };
        // twist[i] = part of ω^m(x) sitting on ζ^i
        let twist = |m: u64| -> Vec<TwistedRingElement> {
            (0..p)
                .map(|i| {
                    let terms: Vec<(usize, usize, i64)> = els
                        .iter()
                        .filter(|&&g| (m * chi[g].expect("element of P")) as usize % p == i)
                        .map(|&g| (g, g, 1))
                        .collect();
                    TwistedRingElement { b: x.b.linear_map(ctx, self.order(), &terms), ..zero.clone() }
                })
                .collect()
        };
        let mut acc: Vec<TwistedRingElement> = (0..p).map(|i| if i == 0 { x.clone() } else { zero.clone() }).collect();
        for k in 1..p as u64 {
            let w = twist(j * k);
            let mut next = vec![zero.clone(); p];
            for (a, u) in acc.iter().enumerate() {
                if u.is_zero() {
                    continue;
                }
                for (b, v) in w.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    next[(a + b) % p] = self.add(&next[(a + b) % p], &self.m(u, v));
                }
            }
            acc = next;
        }
        // pass to O[ζ]: z^{p−1} = −(1 + z + ... + z^{p−2})
        let top = acc[p - 1].clone();
        let reduced: Vec<TwistedRingElement> = acc[..p - 1].iter().map(|u| self.sub(u, &top)).collect();
        let o = &ctx.o;
        for deg in reduced[0].b.low.min(0)..ctx.m as i32 {
            let pr = reduced.iter().map(|u| u.b.prec_at(ctx, deg)).min().unwrap_or(0);
            if pr == 0 {
                continue;
            }
            let md = ctx.pp(pr);
            for &g in &els {
                let mut c = CyclotomicElement::zero(o);
                for (i, u) in reduced.iter().enumerate() {
                    let v: Vec<u64> = u.b.coef_vec(ctx, g, deg).iter().map(|a| a % md).collect();
                    c.add_zeta_pow(o, i as u64, &v);
                }
                if c.to_base(o).is_none() {
                    return Err(Error::Internal(format!(
                        "character product leaves a ζ-component at element {g}, degree {deg}"
                    )));
                }
            }
        }
        Ok(reduced.into_iter().next().expect("p >= 2"))
    }

    /// α applied componentwise.
    pub fn alpha_tuple(&self, t: &MultiplicativeTuple) -> Result<MultiplicativeTuple> {
        self.check_tuple(t)?;
        let components = t.components.iter().enumerate().map(|(s, x)| self.alpha(x, s)).collect::<Result<_>>()?;
        Ok(MultiplicativeTuple { components, tag: t.tag })
    }

    /// u^G_P((x_C)) = Π_{P'^p = P} ver^{P'}_P(x_{P'}).
    pub fn u_map(&self, t: &MultiplicativeTuple, s: usize) -> Result<TwistedRingElement> {
        self.check_tuple(t)?;
        let mut acc = TwistedRingElement { support: Some(s), ..self.one(t.tag) };
        for p_prime in self.group.lattice.p_roots(s) {
            let v = self.ver_transfer(&t.components[p_prime], p_prime, s)?;
            acc = self.m(&acc, &v);
        }
        Ok(TwistedRingElement { support: Some(s), tag: t.tag, ..acc })
    }

    /// θ^G(x) = (θ^G_P(x))_P.
    pub fn theta(&self, x: &TwistedRingElement) -> Result<MultiplicativeTuple> {
        let components = (0..self.group.lattice.len()).map(|s| self.norm_theta(x, s)).collect::<Result<_>>()?;
        Ok(MultiplicativeTuple { components, tag: x.tag })
    }

    pub fn one_tuple(&self, tag: RingTag) -> MultiplicativeTuple {
        let components =
            (0..self.group.lattice.len()).map(|s| TwistedRingElement { support: Some(s), ..self.one(tag) }).collect();
        MultiplicativeTuple { components, tag }
    }

    /// The same tuple read in the other coefficient ring.
    pub fn retag_tuple(&self, t: &MultiplicativeTuple, tag: RingTag) -> MultiplicativeTuple {
        MultiplicativeTuple { components: t.components.iter().map(|x| self.with_tag(x, tag)).collect(), tag }
    }

    fn mismatch_note(&self, x: &TwistedRingElement, y: &TwistedRingElement) -> String {
        match self.agree(x, y, self.ctx.k, self.ctx.m as i32).mismatch {
            Some((g, d)) => format!("first difference at element {g}, degree {d}"),
            None => "no coefficient difference".into(),
        }
    }

    /// M3 at P: α_P(x_P) − u^G_P(α(x)) ∈ p·T_P.
    fn m3_holds(&self, alpha: &MultiplicativeTuple, s: usize) -> Result<bool> {
        let u = self.u_map(alpha, s)?;
        let d = self.sub(&alpha.components[s], &u);
        self.trace_ideal_membership(&d, s, 1)
    }

    /// Checks M1 (norm compatibility on every inclusion), M2 (conjugation by
    /// generators of G) and M3 (the α/u congruence modulo p·T_P).
    pub fn phi_check(&self, t: &MultiplicativeTuple) -> Result<PhiReport> {
        self.check_tuple(t)?;
        let g = &self.group;
        let l = &g.lattice;
        let mut rep = PhiReport { m1: true, m2: true, m3: true, witnesses: Vec::new() };
        for &(p, p1) in &l.inclusions {
            let nr = self.norm_between(&t.components[p1], p1, p)?;
            if !self.same_value(&nr, &t.components[p]) {
                rep.m1 = false;
                rep.witnesses.push(format!(
                    "M1: norm from subgroup {p1} to {p} differs; {}",
                    self.mismatch_note(&nr, &t.components[p])
                ));
            }
        }
        for x in g.generators() {
            for s in 0..l.len() {
                let moved = self.conjugate(x, &t.components[s]);
                let target = l.conj_action[x][s];
                if !self.same_value(&moved, &t.components[target]) {
                    rep.m2 = false;
                    rep.witnesses.push(format!("M2: conjugation by {x} maps component {s} off component {target}"));
                }
            }
        }
        let alpha = self.alpha_tuple(t)?;
        for s in 0..l.len() {
            if !self.m3_holds(&alpha, s)? {
                rep.m3 = false;
                rep.witnesses.push(format!("M3: congruence fails at subgroup {s}"));
            }
        }
        Ok(rep)
    }

    /// ℒ_P = (1/p)·log(α_P(x_P)/u^G_P(α(x))).
    pub fn script_l(&self, t: &MultiplicativeTuple) -> Result<AdditiveTuple> {
        self.check_tuple(t)?;
        let ctx = &self.ctx;
        let alpha = self.alpha_tuple(t)?;
        let mut components = Vec::with_capacity(t.components.len());
        for s in 0..t.components.len() {
            if !self.m3_holds(&alpha, s)? {
                return Err(Error::InvalidInput(format!("M3 fails at subgroup {s}")));
            }
            let u = self.u_map(&alpha, s)?;
            let q = self.m(&alpha.components[s], &self.ring_invert(&u)?);
            let one = TwistedRingElement { support: Some(s), ..self.one(t.tag) };
            let lg = self.log_one_plus(&self.sub(&q, &one), crate::twisted::IdealSpec::Full)?;
            let mut b = lg.b.clone();
            b.denom += 1;
            b.canonicalize(ctx);
            if b.denom > 0 {
                return Err(Error::Integrality(format!("component {s} keeps denominator p^{}", b.denom)));
            }
            components.push(TwistedRingElement { b, tag: t.tag, support: Some(s) });
        }
        Ok(AdditiveTuple { components, tag: t.tag })
    }

    /// Digits at which β∘L and ℒ∘θ are compared: N − v_p(|G|) − 1.
    pub fn relation_digits(&self) -> u32 {
        let v = zmod::int_valuation(self.order() as u64, self.ctx.p);
        self.ctx.n.saturating_sub(v + 1)
    }

    /// Compares β(L(x)) with ℒ(θ^G(x)) componentwise.
    pub fn relation_check(&self, x: &TwistedRingElement) -> Result<RelationReport> {
        let digits = self.relation_digits();
        let lhs = self.beta(&self.integral_log_l(x)?)?;
        let rhs = self.script_l(&self.theta(x)?)?;
        let mut rep = RelationReport { passed: true, digits, compared: digits, witnesses: Vec::new() };
        for (s, (a, b)) in lhs.components.iter().zip(&rhs.components).enumerate() {
            let ag = self.agree(a, b, digits, self.ctx.m as i32);
            rep.compared = rep.compared.min(ag.digits);
            if !ag.equal {
                rep.passed = false;
                let (g, d) = ag.mismatch.unwrap_or((0, 0));
                rep.witnesses.push(format!("subgroup {s}: first difference at element {g}, degree {d}"));
            } else if ag.short > 0 {
                rep.passed = false;
                rep.witnesses.push(format!("subgroup {s}: only {} digits available", ag.digits));
            }
        }
        Ok(rep)
    }
}
