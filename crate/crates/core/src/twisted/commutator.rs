//! Membership in commutator submodules [R[G]^τ, I] for I = R[G]^τ, J, pJ.
//!
//! The commutators [ḡ, h̄] = τ(g,h)·((gh)‾ − (hg)‾) span, over R, the same module
//! as the differences k̄ − k̄' of conjugate elements. Since R acts through
//! T-degrees and O-coordinates, membership splits into one linear system over
//! Z/p^π per (degree, coordinate) slice. [R[G], J] equals [R[G], R[G]] because
//! R[G] = O·1̄ + J with O central, and [R[G], pJ] = p·[R[G], R[G]].

use super::{TwistedAlgebra, TwistedRingElement};
use crate::error::{Error, Result};
use crate::padic::{HowellForm, ModMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdealSpec {
    Full,
    J,
    PJ,
}

impl IdealSpec {
    pub fn parse(s: &str) -> Result<IdealSpec> {
        match s {
            "full" => Ok(IdealSpec::Full),
            "J" => Ok(IdealSpec::J),
            "pJ" => Ok(IdealSpec::PJ),
            other => Err(Error::InvalidInput(format!("unsupported ideal '{other}'"))),
        }
    }
}

/// Howell form of p^scale times the matrix of class differences, mod p^prec.
pub(crate) fn difference_howell(alg: &TwistedAlgebra, scale: u32, prec: u32) -> HowellForm {
    let g = &alg.group;
    let n = g.order;
    let cols: Vec<usize> = (0..n).filter(|&k| g.class_rep(g.class_of[k]) != k).collect();
    let md = alg.ctx.pp(prec);
    let ps = if scale >= prec { 0 } else { alg.ctx.pp(scale) };
    let mut a = ModMatrix::zeros(n, cols.len().max(1));
    for (j, &k) in cols.iter().enumerate() {
        let r = g.class_rep(g.class_of[k]);
        a.set(k, j, ps % md);
        a.set(r, j, (md - ps % md) % md);
    }
    HowellForm::new(&a, alg.ctx.p, prec)
}

impl TwistedAlgebra {
    /// Decides x ∈ [R[G]^τ, I] at the precision carried by x.
    pub fn commutator_membership(&self, x: &TwistedRingElement, ideal: IdealSpec) -> Result<bool> {
        let ctx = &self.ctx;
        let scale = x.b.denom + (ideal == IdealSpec::PJ) as u32;
        let n = self.order();
        for deg in x.b.low..ctx.m as i32 {
            let pi = x.b.prec_at(ctx, deg);
            if pi == 0 {
                continue;
            }
            let form = self.howell_for(scale.min(pi), pi);
            let md = ctx.pp(pi);
            for t in 0..ctx.f {
                let b: Vec<u64> = (0..n).map(|g| x.b.coef(ctx, g, deg).map_or(0, |c| c[t] % md)).collect();
                if b.iter().all(|&v| v == 0) {
                    continue;
                }
                if !form.contains(&b)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
