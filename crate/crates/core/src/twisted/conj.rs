use super::{RingTag, TwistedAlgebra};
use crate::error::Result;
use crate::iwasawa::{Agreement, Block, Series};

/// Σ_c a_c [c] over conjugacy classes, keyed by class index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjModuleElement {
    pub(crate) b: Block,
    pub tag: RingTag,
}

impl ConjModuleElement {
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

impl TwistedAlgebra {
    pub fn conj_zero(&self, tag: RingTag) -> ConjModuleElement {
        ConjModuleElement { b: Block::zero(&self.ctx, self.group.num_classes()), tag }
    }

    /// [ḡ] for the class of g.
    pub fn conj_basis(&self, g: usize, tag: RingTag) -> ConjModuleElement {
        self.to_conj(&self.basis(g, tag))
    }

    pub fn conj_from_coeffs(&self, tag: RingTag, terms: &[(usize, Series)]) -> ConjModuleElement {
        let ctx = &self.ctx;
        let n = self.group.num_classes();
        let mut parts = vec![Series::zero(ctx); n];
        for (c, s) in terms {
            parts[*c] = parts[*c].add(s, ctx);
        }
        let blocks: Vec<Block> = parts.into_iter().map(|s| s.b).collect();
        ConjModuleElement { b: Block::from_slots(ctx, &blocks), tag }
    }

    /// Coefficient of the class with index c.
    pub fn conj_coeff(&self, a: &ConjModuleElement, c: usize) -> Series {
        let mut b = a.b.slot(&self.ctx, c);
        b.canonicalize(&self.ctx);
        Series::from_block(b)
    }

    pub fn conj_add(&self, a: &ConjModuleElement, b: &ConjModuleElement) -> ConjModuleElement {
        ConjModuleElement { b: a.b.add(&b.b, &self.ctx), tag: a.tag }
    }

    pub fn conj_sub(&self, a: &ConjModuleElement, b: &ConjModuleElement) -> ConjModuleElement {
        ConjModuleElement { b: a.b.sub(&b.b, &self.ctx), tag: a.tag }
    }

    pub fn conj_neg(&self, a: &ConjModuleElement) -> ConjModuleElement {
        ConjModuleElement { b: a.b.neg(&self.ctx), tag: a.tag }
    }

    pub fn conj_scale(&self, a: &ConjModuleElement, c: &Series) -> ConjModuleElement {
        let b = Block::product(&a.b, &c.b, &self.ctx, a.b.slots, &|i, _| Some((i, false)));
        ConjModuleElement { b, tag: a.tag }
    }

    pub fn conj_scale_int(&self, a: &ConjModuleElement, c: i64) -> ConjModuleElement {
        ConjModuleElement { b: a.b.scale_int(&self.ctx, c), tag: a.tag }
    }

    pub fn conj_divide_by_p(&self, a: &ConjModuleElement, k: u32) -> Result<ConjModuleElement> {
        let mut b = a.b.clone();
        b.denom += k;
        b.canonicalize(&self.ctx);
        let best = b.prec.iter().copied().max().unwrap_or(0) as i64;
        if best - b.denom as i64 <= 0 {
            return Err(crate::error::Error::PrecisionExhausted(format!("division by p^{k} leaves no digits")));
        }
        Ok(ConjModuleElement { b, tag: a.tag })
    }

    pub fn conj_agree(&self, a: &ConjModuleElement, b: &ConjModuleElement, digits: u32, upto: i32) -> Agreement {
        a.b.agree(&b.b, &self.ctx, digits, upto)
    }

    /// φ on R[Conj(G)]^τ: φ on coefficients and [ḡ] ↦ [ḡ^p], where
    /// ḡ^p = (1+T)^s·(g^p)‾ contributes the scalar (1+T)^s.
    pub fn phi_conj(&self, a: &ConjModuleElement) -> Result<ConjModuleElement> {
        let grp = &self.group;
        let b = self.phi_power_map(&a.b, grp.num_classes(), |c| grp.class_rep(c), |g| grp.class_of[g])?;
        Ok(ConjModuleElement { b, tag: a.tag })
    }
}
