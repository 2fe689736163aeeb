use crate::error::{Error, Result};
use crate::iwasawa::{Block, Series};
use crate::padic::{det_berkowitz, det_unit_pivot, CommRing, LocalRing};
use crate::twisted::{RingTag, TwistedAlgebra, TwistedRingElement};

/// Matrix size up to which determinants use Berkowitz; larger ones use
/// unit-pivot elimination.
pub const BERKOWITZ_MAX: usize = 8;

/// The commutative ring R[P]^τ (or its completion) for a cyclic subgroup P,
/// stored compactly with one slot per element of P.
pub struct SubgroupRing<'a> {
    pub alg: &'a TwistedAlgebra,
    pub sub: usize,
    pub tag: RingTag,
    elems: Vec<usize>,
    slot_of: Vec<Option<usize>>,
    table: Vec<(usize, bool)>,
}

impl<'a> SubgroupRing<'a> {
    pub fn new(alg: &'a TwistedAlgebra, sub: usize, tag: RingTag) -> Self {
        let g = &alg.group;
        let elems = g.lattice.subgroups[sub].elements.clone();
        let mut slot_of = vec![None; g.order];
        for (i, &e) in elems.iter().enumerate() {
            slot_of[e] = Some(i);
        }
        let table = elems
            .iter()
            .flat_map(|&a| elems.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (slot_of[g.mul(a, b)].expect("subgroup is closed"), g.carry(a, b)))
            .collect();
        SubgroupRing { alg, sub, tag, elems, slot_of, table }
    }

    /// Compact form of an element supported on P; other coefficients are dropped.
    pub fn embed(&self, x: &TwistedRingElement) -> Block {
        x.b.regroup(&self.alg.ctx, self.elems.len(), |g| self.slot_of[g])
    }

    pub fn lift(&self, b: &Block) -> TwistedRingElement {
        let b = b.regroup(&self.alg.ctx, self.alg.order(), |s| Some(self.elems[s]));
        TwistedRingElement { b, tag: self.tag, support: Some(self.sub) }
    }

    fn from_terms(&self, terms: &[(usize, Series)]) -> Block {
        let ctx = &self.alg.ctx;
        let mut parts = vec![Series::zero(ctx).b; self.elems.len()];
        for (g, c) in terms {
            parts[self.slot_of[*g].expect("term inside the subgroup")] = c.b.clone();
        }
        Block::from_slots(ctx, &parts)
    }
}

impl CommRing for SubgroupRing<'_> {
    type Elem = Block;
    fn zero(&self) -> Block {
        Block::zero(&self.alg.ctx, self.elems.len())
    }
    fn one(&self) -> Block {
        self.embed(&self.alg.one(self.tag))
    }
    fn add(&self, a: &Block, b: &Block) -> Block {
        a.add(b, &self.alg.ctx)
    }
    fn sub(&self, a: &Block, b: &Block) -> Block {
        a.sub(b, &self.alg.ctx)
    }
    fn mul(&self, a: &Block, b: &Block) -> Block {
        let n = self.elems.len();
        Block::product(a, b, &self.alg.ctx, n, &|i, j| Some(self.table[i * n + j]))
    }
}

impl LocalRing for SubgroupRing<'_> {
    fn is_unit(&self, a: &Block) -> bool {
        self.alg.is_unit(&self.lift(a))
    }
    fn inverse(&self, a: &Block) -> Result<Block> {
        let x = self.lift(a);
        if self.tag == RingTag::Completed {
            return Ok(self.embed(&self.alg.ring_invert(&x)?));
        }
        // Newton from the Teichmüller inverse of the residue, inside R[P]^τ
        let ctx = &self.alg.ctx;
        let r = self.alg.residue(&x)?;
        if r.iter().all(|&v| v == 0) {
            return Err(Error::NotAUnit("residue is zero".into()));
        }
        let t = ctx.o.teichmuller(&r)?;
        let t_inv = ctx.o.inverse(&t).ok_or_else(|| Error::Internal("Teichmüller lift not a unit".into()))?;
        let mut z = self.embed(&self.alg.scalar(&Series::constant(ctx, &t_inv), self.tag));
        let two = self.embed(&self.alg.scalar(&Series::from_int(ctx, 2), self.tag));
        for _ in 0..128 {
            let zn = self.mul(&z, &self.sub(&two, &self.mul(a, &z)));
            let mut zc = z.clone();
            zc.meet_precision(ctx, &zn);
            if zc == zn {
                return Ok(zn);
            }
            z = zn;
        }
        Err(Error::IterationCap(128))
    }
}

impl TwistedAlgebra {
    /// Representatives c of the right cosets Pc inside the subgroup `big`.
    fn right_reps_in(&self, big: &[usize], s: usize) -> Vec<usize> {
        let g = &self.group;
        let small = &g.lattice.subgroups[s];
        let mut covered = vec![false; g.order];
        let mut reps = Vec::new();
        for &c in big {
            if !covered[c] {
                reps.push(c);
                for &y in &small.elements {
                    covered[g.mul(y, c)] = true;
                }
            }
        }
        reps
    }

    /// Matrix of v ↦ v·x on the left R[P]^τ-module ⊕_c R[P]^τ·c̄, rows indexed
    /// by the right coset representatives of P in `big`.
    pub fn norm_matrix(&self, x: &TwistedRingElement, big: &[usize], s: usize) -> Vec<Vec<TwistedRingElement>> {
        let ring = SubgroupRing::new(self, s, x.tag);
        self.norm_matrix_in(&ring, x, big).iter().map(|row| row.iter().map(|b| ring.lift(b)).collect()).collect()
    }

    fn norm_matrix_in(&self, ring: &SubgroupRing, x: &TwistedRingElement, big: &[usize]) -> Vec<Vec<Block>> {
        let s = ring.sub;
        let g = &self.group;
        let ctx = &self.ctx;
        let small = &g.lattice.subgroups[s];
        let reps = self.right_reps_in(big, s);
        let pos = |c: usize| reps.iter().position(|&r| r == c).expect("representative");
        let one_t = Series::from_int_coeffs(ctx, 0, &[1, 1]);
        let inv_t = one_t.invert_series(ctx).expect("1+T is a unit");
        let coeffs: Vec<(usize, Series)> =
            big.iter().filter(|&&h| !x.b.slot_is_zero(ctx, h)).map(|&h| (h, self.coeff(x, h))).collect();
        let n = reps.len();
        let mut terms: Vec<Vec<Vec<(usize, Series)>>> = vec![vec![Vec::new(); n]; n];
        for (i, &c) in reps.iter().enumerate() {
            for (h, ch) in &coeffs {
                let d = g.mul(c, *h);
                // d = π·c' with c' a representative and π in P
                let (pi, c2) = reps
                    .iter()
                    .find_map(|&r| {
                        let pi = g.mul(d, g.inv(r));
                        small.member[pi].then_some((pi, r))
                    })
                    .expect("representatives cover the subgroup");
                // c̄·h̄ = τ(c,h)·τ(π,c')^{-1}·π̄·c̄'
                let e = g.carry(c, *h) as i32 - g.carry(pi, c2) as i32;
                let v = match e {
                    1 => ch.mul(&one_t, ctx),
                    -1 => ch.mul(&inv_t, ctx),
                    _ => ch.clone(),
                };
                terms[i][pos(c2)].push((pi, v));
            }
        }
        terms.iter().map(|row| row.iter().map(|t| ring.from_terms(t)).collect()).collect()
    }

    fn norm_in(&self, x: &TwistedRingElement, big: &[usize], s: usize) -> Result<TwistedRingElement> {
        if !self.is_unit(x) {
            return Err(Error::NotAUnit("norm of a non-unit".into()));
        }
        let ring = SubgroupRing::new(self, s, x.tag);
        let a = self.norm_matrix_in(&ring, x, big);
        let d = if a.len() <= BERKOWITZ_MAX { det_berkowitz(&ring, &a)? } else { det_unit_pivot(&ring, &a)? };
        Ok(ring.lift(&d))
    }

    /// θ^G_P(x): the norm from R[G]^τ to R[P]^τ.
    pub fn norm_theta(&self, x: &TwistedRingElement, s: usize) -> Result<TwistedRingElement> {
        if s >= self.group.lattice.len() {
            return Err(Error::InvalidInput(format!("no cyclic subgroup with id {s}")));
        }
        let all: Vec<usize> = (0..self.order()).collect();
        self.norm_in(x, &all, s)
    }

    /// nr^{P1}_P(x) for x supported on P1 ⊇ P.
    pub fn norm_between(&self, x: &TwistedRingElement, p1: usize, p: usize) -> Result<TwistedRingElement> {
        let l = &self.group.lattice;
        if p1 != p && !l.inclusions.contains(&(p, p1)) {
            return Err(Error::InvalidInput(format!("subgroup {p} is not contained in {p1}")));
        }
        let big = &l.subgroups[p1];
        if (0..self.order()).any(|g| !big.member[g] && !x.b.slot_is_zero(&self.ctx, g)) {
            return Err(Error::InvalidInput(format!("element is not supported on subgroup {p1}")));
        }
        self.norm_in(x, &big.elements, p)
    }
}
