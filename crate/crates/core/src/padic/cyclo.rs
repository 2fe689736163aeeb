//! O[ζ_p] = O[z]/(1 + z + ... + z^{p-1}), used for the values of order-p characters.

use super::unram::UnramRing;

/// An element of O[ζ_p] mod p^K: coefficients of z^0 .. z^{p-2}, each an element of O.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicElement {
    pub coeffs: Vec<Vec<u64>>,
}

impl CyclotomicElement {
    pub fn zero(ring: &UnramRing) -> Self {
        let d = (ring.p - 1) as usize;
        CyclotomicElement { coeffs: vec![ring.zero(); d] }
    }

    pub fn from_base(ring: &UnramRing, c: &[u64]) -> Self {
        let mut z = Self::zero(ring);
        z.coeffs[0] = c.to_vec();
        z
    }

    /// ζ^m in the power basis.
    pub fn zeta_pow(ring: &UnramRing, m: u64) -> Self {
        let mut out = Self::zero(ring);
        out.add_zeta_pow(ring, m, &ring.one());
        out
    }

    /// Adds c·ζ^m in place, rewriting ζ^{p-1} = -(1 + ζ + ... + ζ^{p-2}).
    pub fn add_zeta_pow(&mut self, ring: &UnramRing, m: u64, c: &[u64]) {
        let p = ring.p;
        let m = (m % p) as usize;
        if m < (p - 1) as usize {
            self.coeffs[m] = ring.add(&self.coeffs[m], c);
        } else {
            for slot in self.coeffs.iter_mut() {
                *slot = ring.sub(slot, c);
            }
        }
    }

    pub fn add(&self, other: &Self, ring: &UnramRing) -> Self {
        CyclotomicElement {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| ring.add(a, b)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, ring: &UnramRing) -> Self {
        let mut out = Self::zero(ring);
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.add_zeta_pow(ring, (i + j) as u64, &ring.mul(a, b));
            }
        }
        out
    }

    /// Returns the O-component if the element lies in the base ring.
    pub fn to_base(&self, ring: &UnramRing) -> Option<Vec<u64>> {
        if self.coeffs[1..].iter().all(|c| ring.is_zero(c)) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }
}
