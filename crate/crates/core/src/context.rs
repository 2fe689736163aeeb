use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iwasawa::series::PhiCache;
use crate::padic::{zmod, UnramRing};

/// User-facing parameters of an [`ArithmeticContext`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextParams {
    pub p: u64,
    /// Degree of the unramified coefficient ring O over Z_p.
    pub f: usize,
    /// Γ^{p^e} acts trivially on H.
    pub e: u32,
    /// Working p-adic precision in digits.
    pub n: u32,
    /// T-adic truncation: degrees >= m are discarded.
    pub m: usize,
    /// Negative Laurent degrees admitted in inputs to the completed ring.
    pub lneg: usize,
    pub guard: u32,
    /// Optional non-leading coefficients of the residue-field modulus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl Default for ContextParams {
    fn default() -> Self {
        ContextParams { p: 3, f: 1, e: 1, n: 8, m: 16, lneg: 16, guard: 4, modulus: None }
    }
}

impl ContextParams {
    pub fn new(p: u64, f: usize, e: u32) -> Self {
        ContextParams { p, f, e, ..Default::default() }
    }
}

#[derive(Debug)]
pub struct ArithmeticContext {
    pub p: u64,
    pub f: usize,
    pub e: u32,
    pub n: u32,
    pub m: usize,
    pub lneg: usize,
    pub guard: u32,
    /// Internal digits, n + guard.
    pub k: u32,
    pub pk: u64,
    pub o: UnramRing,
    /// Lowest Laurent degree any intermediate may reach.
    pub capacity: i64,
    pow_p: Vec<u64>,
    pub(crate) phi_cache: Mutex<PhiCache>,
}

pub type Ctx = Arc<ArithmeticContext>;

impl ArithmeticContext {
    pub fn new(params: &ContextParams) -> Result<Ctx> {
        let p = params.p;
        if !zmod::is_prime(p) {
            return Err(Error::InvalidContext(format!("p = {p} is not prime")));
        }
        if params.f == 0 || params.n == 0 || params.m == 0 {
            return Err(Error::InvalidContext("f, N and M must be at least 1".into()));
        }
        if params.m > 4096 {
            return Err(Error::InvalidContext("T-adic truncation too large".into()));
        }
        let k = params.n + params.guard;
        let o = UnramRing::new(p, params.f, k, params.modulus.clone())?;
        let pow_p = (0..=k).map(|i| p.pow(i)).collect();
        let capacity = -((p as i64) * (params.lneg as i64 + k as i64 + 1));
        Ok(Arc::new(ArithmeticContext {
            p,
            f: params.f,
            e: params.e,
            n: params.n,
            m: params.m,
            lneg: params.lneg,
            guard: params.guard,
            k,
            pk: o.pk,
            o,
            capacity,
            pow_p,
            phi_cache: Mutex::new(PhiCache::default()),
        }))
    }

    pub fn params(&self) -> ContextParams {
        ContextParams {
            p: self.p,
            f: self.f,
            e: self.e,
            n: self.n,
            m: self.m,
            lneg: self.lneg,
            guard: self.guard,
            modulus: None,
        }
    }

    /// p^i for 0 <= i <= K.
    #[inline]
    pub fn pp(&self, i: u32) -> u64 {
        self.pow_p[i as usize]
    }

    /// q = p^f, the size of the residue field.
    pub fn q(&self) -> u64 {
        self.o.q()
    }

    /// p^e, the order of the Γ-quotient of G.
    pub fn pe(&self) -> usize {
        (self.p as usize).pow(self.e)
    }
}
