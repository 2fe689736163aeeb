//! The additive side: t^G_P, η_P, β = (η_P ∘ t^G_P)_P, its left inverse δ,
//! trace ideals T_P, subgroup traces, the conditions A1–A3 cutting out ψ^G,
//! the maps ver and v, and the cokernel map ω.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::iwasawa::Block;
use crate::padic::{zmod, HowellForm, ModMatrix};
use crate::twisted::{ConjModuleElement, RingTag, TwistedAlgebra, TwistedRingElement};

/// One element of R[P]^τ for every cyclic subgroup P, indexed by subgroup id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveTuple {
    pub components: Vec<TwistedRingElement>,
    pub tag: RingTag,
}

/// Outcome of checking the conditions defining ψ^G.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub a1: bool,
    pub a2: bool,
    pub a3: bool,
    pub witnesses: Vec<String>,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.a1 && self.a2 && self.a3
    }
}

/// ((−1)^{p−1})^{sign_exp} times an element of G^{ab} in exponent coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaValue {
    pub sign_exp: u8,
    pub abelian_part: Vec<usize>,
}

impl OmegaValue {
    pub fn is_identity(&self) -> bool {
        self.sign_exp == 0 && self.abelian_part.iter().all(|&v| v == 0)
    }
}

impl TwistedAlgebra {
    fn check_subgroup(&self, s: usize) -> Result<()> {
        if s >= self.group.lattice.len() {
            return Err(Error::InvalidInput(format!("no cyclic subgroup with id {s}")));
        }
        Ok(())
    }

    fn on_support(&self, b: Block, tag: RingTag, s: usize) -> TwistedRingElement {
        TwistedRingElement { b, tag, support: Some(s) }
    }

    /// Left coset representatives of K2 inside the set K1 (in increasing order).
    pub fn left_coset_reps(&self, k1: &[usize], k2: &[usize]) -> Vec<usize> {
        let g = &self.group;
        let mut covered = vec![false; g.order];
        let mut reps = Vec::new();
        for &x in k1 {
            if !covered[x] {
                reps.push(x);
                for &y in k2 {
                    covered[g.mul(x, y)] = true;
                }
            }
        }
        reps
    }

    /// Σ_k c_k Σ_{x ∈ reps} {(x^{-1}kx)‾ : x^{-1}kx ∈ K2}, on a G-dense block.
    fn trace_between(&self, b: &Block, k2_member: &[bool], reps: &[usize]) -> Block {
        let g = &self.group;
        let ctx = &self.ctx;
        let mut terms = Vec::new();
        for k in 0..g.order {
            if b.slot_is_zero(ctx, k) {
                continue;
            }
            for &x in reps {
                let y = g.conj(g.inv(x), k);
                if k2_member[y] {
                    terms.push((k, y, 1));
                }
            }
        }
        b.linear_map(ctx, g.order, &terms)
    }

    /// Places the class coefficients of `a` on the class representatives.
    fn expand_classes(&self, a: &ConjModuleElement) -> Block {
        let g = &self.group;
        let terms: Vec<(usize, usize, i64)> = (0..g.num_classes()).map(|c| (c, g.class_rep(c), 1)).collect();
        a.b.linear_map(&self.ctx, g.order, &terms)
    }

    /// t^G_P.
    pub fn trace_to_subgroup(&self, a: &ConjModuleElement, s: usize) -> Result<TwistedRingElement> {
        self.check_subgroup(s)?;
        let reps = self.group.lattice.coset_reps[s].clone();
        self.trace_to_subgroup_with_reps(a, s, &reps)
    }

    /// t^G_P computed with a caller-supplied set of left coset representatives.
    pub fn trace_to_subgroup_with_reps(&self, a: &ConjModuleElement, s: usize, reps: &[usize]) -> Result<TwistedRingElement> {
        self.check_subgroup(s)?;
        let sub = &self.group.lattice.subgroups[s];
        if reps.len() * sub.order != self.order() {
            return Err(Error::InvalidInput("wrong number of coset representatives".into()));
        }
        let b = self.trace_between(&self.expand_classes(a), &sub.member, reps);
        Ok(self.on_support(b, a.tag, s))
    }

    /// t^{K1}_{K2} on an element of R[K1]^τ (any subgroups K2 ≤ K1 given by elements).
    pub fn trace_between_subgroups(&self, x: &TwistedRingElement, k1: &[usize], k2: &[usize]) -> TwistedRingElement {
        let mut member = vec![false; self.order()];
        for &y in k2 {
            member[y] = true;
        }
        let reps = self.left_coset_reps(k1, k2);
        let b = self.trace_between(&x.b, &member, &reps);
        TwistedRingElement { b, tag: x.tag, support: None }
    }

    /// η_P: keeps the coefficients at generators of P.
    pub fn eta_restrict(&self, x: &TwistedRingElement, s: usize) -> Result<TwistedRingElement> {
        self.check_subgroup(s)?;
        let terms: Vec<(usize, usize, i64)> =
            self.group.lattice.subgroups[s].generators.iter().map(|&g| (g, g, 1)).collect();
        Ok(self.on_support(x.b.linear_map(&self.ctx, self.order(), &terms), x.tag, s))
    }

    /// β^G_P = η_P ∘ t^G_P.
    pub fn beta_component(&self, a: &ConjModuleElement, s: usize) -> Result<TwistedRingElement> {
        self.eta_restrict(&self.trace_to_subgroup(a, s)?, s)
    }

    pub fn beta(&self, a: &ConjModuleElement) -> Result<AdditiveTuple> {
        let components = (0..self.group.lattice.len()).map(|s| self.beta_component(a, s)).collect::<Result<_>>()?;
        Ok(AdditiveTuple { components, tag: a.tag })
    }

    pub fn zero_tuple(&self, tag: RingTag) -> AdditiveTuple {
        let components =
            (0..self.group.lattice.len()).map(|s| TwistedRingElement { support: Some(s), ..self.zero(tag) }).collect();
        AdditiveTuple { components, tag }
    }

    /// δ_P(x) = [x]/[G:P].
    pub fn delta_component(&self, x: &TwistedRingElement, s: usize) -> Result<ConjModuleElement> {
        self.check_subgroup(s)?;
        let index = self.order() / self.group.lattice.subgroups[s].order;
        let v = zmod::int_valuation(index as u64, self.ctx.p);
        self.conj_divide_by_p(&self.to_conj(x), v)
    }

    /// δ = Σ_P δ_P.
    pub fn delta(&self, t: &AdditiveTuple) -> Result<ConjModuleElement> {
        let mut acc = self.conj_zero(t.tag);
        for (s, x) in t.components.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            acc = self.conj_add(&acc, &self.delta_component(x, s)?);
        }
        Ok(acc)
    }

    /// tr(x) = Σ_{w ∈ W_G P} w̄ x w̄^{-1} on R[P]^τ.
    pub fn weyl_trace(&self, x: &TwistedRingElement, s: usize) -> Result<TwistedRingElement> {
        self.check_subgroup(s)?;
        let g = &self.group;
        let l = &g.lattice;
        let mut terms = Vec::new();
        for &h in &l.subgroups[s].elements {
            for &w in &l.weyl_reps[s] {
                terms.push((h, g.conj(w, h), 1));
            }
        }
        Ok(self.on_support(x.b.linear_map(&self.ctx, self.order(), &terms), x.tag, s))
    }

    fn weyl_howell(&self, s: usize, scale: u32, prec: u32) -> Arc<HowellForm> {
        let mut cache = self.trace_howell.lock().expect("trace cache poisoned");
        cache
            .entry((s, scale, prec))
            .or_insert_with(|| {
                let g = &self.group;
                let l = &g.lattice;
                let els = &l.subgroups[s].elements;
                let n = els.len();
                let pos = |y: usize| els.binary_search(&y).expect("conjugate stays in P");
                let md = self.ctx.pp(prec);
                let ps = if scale >= prec { 0 } else { self.ctx.pp(scale) };
                let mut a = ModMatrix::zeros(n, n);
                for (j, &h) in els.iter().enumerate() {
                    for &w in &l.weyl_reps[s] {
                        let i = pos(g.conj(w, h));
                        a.set(i, j, (a.get(i, j) + ps) % md);
                    }
                }
                Arc::new(HowellForm::new(&a, self.ctx.p, prec))
            })
            .clone()
    }

    /// Decides x ∈ p^k·T_P by solving p^k·tr(b) = x slice by slice.
    pub fn trace_ideal_membership(&self, x: &TwistedRingElement, s: usize, k: u32) -> Result<bool> {
        self.check_subgroup(s)?;
        let ctx = &self.ctx;
        let sub = &self.group.lattice.subgroups[s];
        if (0..self.order()).any(|g| !sub.member[g] && !x.b.slot_is_zero(ctx, g)) {
            return Ok(false);
        }
        let scale = k + x.b.denom;
        for deg in x.b.low..ctx.m as i32 {
            let pi = x.b.prec_at(ctx, deg);
            if pi == 0 {
                continue;
            }
            let md = ctx.pp(pi);
            for t in 0..ctx.f {
                let b: Vec<u64> =
                    sub.elements.iter().map(|&g| x.b.coef(ctx, g, deg).map_or(0, |c| c[t] % md)).collect();
                if b.iter().all(|&v| v == 0) {
                    continue;
                }
                if !self.weyl_howell(s, scale.min(pi), pi).contains(&b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Closed form of the same test: coefficients constant on W-orbits of P and
    /// divisible by p^k·|Stab_W(h)|.
    pub fn trace_ideal_membership_by_orbits(&self, x: &TwistedRingElement, s: usize, k: u32) -> bool {
        let ctx = &self.ctx;
        let g = &self.group;
        let l = &g.lattice;
        let sub = &l.subgroups[s];
        if (0..self.order()).any(|y| !sub.member[y] && !x.b.slot_is_zero(ctx, y)) {
            return false;
        }
        let scale = k + x.b.denom;
        for &h in &sub.elements {
            let orbit: Vec<usize> = l.weyl_reps[s].iter().map(|&w| g.conj(w, h)).collect();
            let stab = orbit.iter().filter(|&&y| y == h).count() as u64;
            let v = scale + zmod::int_valuation(stab, ctx.p);
            for deg in x.b.low..ctx.m as i32 {
                let pi = x.b.prec_at(ctx, deg);
                let md = ctx.pp(pi);
                let c = x.b.coef_vec(ctx, h, deg);
                for &y in &orbit {
                    let d = x.b.coef_vec(ctx, y, deg);
                    if c.iter().zip(&d).any(|(a, b)| a % md != b % md) {
                        return false;
                    }
                }
                let need = ctx.pp(v.min(pi));
                if c.iter().any(|&a| (a % md) % need != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// tr^{P1}_P: trace of right multiplication by x on R[P1]^τ as a free left
    /// R[P]^τ-module on right coset representatives.
    pub fn subgroup_trace(&self, x: &TwistedRingElement, p1: usize, p: usize) -> Result<TwistedRingElement> {
        let g = &self.group;
        let l = &g.lattice;
        if p1 != p && !l.inclusions.contains(&(p, p1)) {
            return Err(Error::InvalidInput(format!("subgroup {p} is not contained in {p1}")));
        }
        let big = &l.subgroups[p1];
        let small = &l.subgroups[p];
        // right coset representatives of P in P1
        let mut covered = vec![false; g.order];
        let mut reps = Vec::new();
        for &c in &big.elements {
            if !covered[c] {
                reps.push(c);
                for &y in &small.elements {
                    covered[g.mul(y, c)] = true;
                }
            }
        }
        let rep_of = |y: usize| -> (usize, usize) {
            // y = π·c with c a representative and π in P
            for &c in &reps {
                let pi = g.mul(y, g.inv(c));
                if small.member[pi] {
                    return (pi, c);
                }
            }
            unreachable!("coset representatives cover P1")
        };
        // c̄·h̄ = τ(c,h)·(ch)‾ = τ(c,h)·τ(π,c)^{-1}·π̄·c̄ when ch = πc
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        let mut same = Vec::new();
        for &h in &big.elements {
            for &c in &reps {
                let (pi, c2) = rep_of(g.mul(c, h));
                if c2 != c {
                    continue;
                }
                match (g.carry(c, h), g.carry(pi, c)) {
                    (true, false) => plus.push((h, pi)),
                    (false, true) => minus.push((h, pi)),
                    _ => same.push((h, pi, 1)),
                }
            }
        }
        let ctx = &self.ctx;
        let mut b = x.b.linear_map(ctx, self.order(), &same);
        if !plus.is_empty() {
            let t: Vec<_> = plus.iter().map(|&(h, pi)| (h, pi, 1)).collect();
            let part = x.b.linear_map(ctx, self.order(), &t);
            let one_t = crate::iwasawa::Series::from_int_coeffs(ctx, 0, &[1, 1]);
            b = b.add(&Block::product(&part, &one_t.b, ctx, self.order(), &|i, _| Some((i, false))), ctx);
        }
        if !minus.is_empty() {
            let t: Vec<_> = minus.iter().map(|&(h, pi)| (h, pi, 1)).collect();
            let part = x.b.linear_map(ctx, self.order(), &t);
            let inv = crate::iwasawa::Series::from_int_coeffs(ctx, 0, &[1, 1]).invert_series(ctx)?;
            b = b.add(&Block::product(&part, &inv.b, ctx, self.order(), &|i, _| Some((i, false))), ctx);
        }
        Ok(self.on_support(b, x.tag, p))
    }

    /// Checks A1 (traces to smaller subgroups vanish), A2 (invariance under
    /// conjugation by generators of G) and A3 (a_P ∈ T_P).
    pub fn psi_check(&self, t: &AdditiveTuple) -> Result<PsiReport> {
        let g = &self.group;
        let l = &g.lattice;
        if t.components.len() != l.len() {
            return Err(Error::DimensionMismatch("tuple is not indexed by C(G)".into()));
        }
        let mut rep = PsiReport { a1: true, a2: true, a3: true, witnesses: Vec::new() };
        for &(p, p1) in &l.inclusions {
            let tr = self.subgroup_trace(&t.components[p1], p1, p)?;
            if !tr.is_zero() {
                rep.a1 = false;
                rep.witnesses.push(format!("A1: trace from subgroup {p1} to {p} is nonzero"));
            }
        }
        for x in g.generators() {
            for s in 0..l.len() {
                let moved = self.conjugate(x, &t.components[s]);
                let target = l.conj_action[x][s];
                if !self.same_value(&moved, &t.components[target]) {
                    rep.a2 = false;
                    rep.witnesses.push(format!("A2: conjugation by {x} maps component {s} off component {target}"));
                }
            }
        }
        for s in 0..l.len() {
            if !self.trace_ideal_membership(&t.components[s], s, 0)? {
                rep.a3 = false;
                rep.witnesses.push(format!("A3: component {s} is not in the trace ideal"));
            }
        }
        Ok(rep)
    }

    /// ver^{P'}_P: φ on coefficients and h̄ ↦ h̄^p.
    pub fn ver_transfer(&self, x: &TwistedRingElement, p_prime: usize, p: usize) -> Result<TwistedRingElement> {
        let l = &self.group.lattice;
        if !l.p_power_pairs.contains(&(p_prime, p)) {
            return Err(Error::InvalidInput(format!("({p_prime}, {p}) is not a p-power pair")));
        }
        let b = self.phi_power_map(&x.b, self.order(), |i| i, |y| y)?;
        Ok(self.on_support(b, x.tag, p))
    }

    /// v^G_P((x_C)) = p·Σ_{P'^p = P} ver^{P'}_P(x_{P'}).
    pub fn v_map(&self, t: &AdditiveTuple, p: usize) -> Result<TwistedRingElement> {
        self.check_subgroup(p)?;
        let mut acc = TwistedRingElement { support: Some(p), ..self.zero(t.tag) };
        for p_prime in self.group.lattice.p_roots(p) {
            let v = self.ver_transfer(&t.components[p_prime], p_prime, p)?;
            acc = self.add(&acc, &v);
        }
        Ok(TwistedRingElement { support: Some(p), ..self.mul_p(&acc, 1) })
    }

    /// ω(a) = Π_c ((−1)^{p−1} g_c)^{tr(a_c(0))}.
    pub fn omega_cokernel(&self, a: &ConjModuleElement) -> Result<OmegaValue> {
        let ctx = &self.ctx;
        let g = &self.group;
        if a.b.denom > 0 {
            return Err(Error::InvalidInput("ω needs an element without denominator".into()));
        }
        let orders = &g.ab.orders;
        let mut sign = 0u64;
        let mut ab = vec![0usize; orders.len()];
        for c in 0..g.num_classes() {
            let tr = ctx.o.trace(&a.b.coef_vec(ctx, c, 0));
            if tr == 0 {
                continue;
            }
            sign = (sign + (ctx.p - 1) * tr) % 2;
            let v = g.ab.map(g.class_rep(c));
            for (i, &o) in orders.iter().enumerate() {
                let e = ((tr % o as u64) as usize * v[i]) % o;
                ab[i] = (ab[i] + e) % o;
            }
        }
        Ok(OmegaValue { sign_exp: sign as u8, abelian_part: ab })
    }
}
