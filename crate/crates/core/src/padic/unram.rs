//! The unramified coefficient ring O/p^K, O = Z_p[u]/(g(u)) for a monic lift
//! g of an irreducible polynomial over F_p.

use super::zmod;
use crate::error::{Error, Result};

/// Conway polynomials for small fields, lowest coefficient first, monic term omitted.
const CONWAY: &[(u64, usize, &[u64])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (5, 2, &[2, 4]),
    (5, 3, &[3, 3, 0]),
    (7, 2, &[3, 6]),
];

#[derive(Clone, Debug)]
pub struct UnramRing {
    pub p: u64,
    pub f: usize,
    pub k: u32,
    pub pk: u64,
    /// g_0 .. g_{f-1} of the monic modulus, reduced mod p^K.
    modulus: Vec<u64>,
    /// frob[i] = Frobenius image of u^i.
    frob: Vec<Vec<u64>>,
}

/// An element of O/p^K in the power basis 1, u, ..., u^{f-1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnramifiedElement {
    pub coeffs: Vec<u64>,
}

fn poly_mod_p_is_irreducible(g: &[u64], p: u64) -> bool {
    // g monic of degree f = g.len(); trial division by every monic polynomial of degree <= f/2.
    let f = g.len();
    if f <= 1 {
        return true;
    }
    let mut full: Vec<u64> = g.iter().map(|c| c % p).collect();
    full.push(1);
    for d in 1..=f / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut h = Vec::with_capacity(d + 1);
            let mut t = idx;
            for _ in 0..d {
                h.push(t % p);
                t /= p;
            }
            h.push(1);
            // remainder of full by h over F_p
            let mut r = full.clone();
            for top in (d..r.len()).rev() {
                let c = r[top];
                if c != 0 {
                    for j in 0..=d {
                        let pos = top - d + j;
                        r[pos] = zmod::sub(r[pos], zmod::mul(c, h[j], p), p);
                    }
                }
            }
            if r[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The default modulus for F_{p^f}: a Conway polynomial when tabulated, else the
/// lexicographically first irreducible monic polynomial.
pub fn default_modulus(p: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0];
    }
    if let Some((_, _, g)) = CONWAY.iter().find(|(q, d, _)| *q == p && *d == f) {
        return g.to_vec();
    }
    let total = p.pow(f as u32);
    for idx in 0..total {
        let mut g = Vec::with_capacity(f);
        let mut t = idx;
        for _ in 0..f {
            g.push(t % p);
            t /= p;
        }
        if g[0] != 0 && poly_mod_p_is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl UnramRing {
    pub fn new(p: u64, f: usize, k: u32, modulus: Option<Vec<u64>>) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidContext("f must be >= 1".into()));
        }
        let pk = p
            .checked_pow(k)
            .filter(|&m| m < (1 << 31))
            .ok_or_else(|| Error::InvalidContext(format!("p^K = {p}^{k} exceeds 2^31")))?;
        let modulus = modulus.unwrap_or_else(|| default_modulus(p, f));
        if modulus.len() != f {
            return Err(Error::InvalidContext(format!(
                "modulus must have {f} non-leading coefficients"
            )));
        }
        if f > 1 && !poly_mod_p_is_irreducible(&modulus, p) {
            return Err(Error::InvalidContext("modulus is reducible mod p".into()));
        }
        let mut ring = UnramRing {
            p,
            f,
            k,
            pk,
            modulus: modulus.iter().map(|c| c % pk).collect(),
            frob: vec![],
        };
        ring.frob = ring.compute_frobenius_images();
        Ok(ring)
    }

    fn compute_frobenius_images(&self) -> Vec<Vec<u64>> {
        let f = self.f;
        if f == 1 {
            return vec![vec![1]];
        }
        let u = self.basis(1);
        // u^p is the Frobenius image mod p; Newton-lift the matching root of g.
        let mut r = self.pow(&u, self.p);
        for _ in 0..64 {
            let (gr, dgr) = self.eval_modulus_and_derivative(&r);
            let inv = self
                .inverse(&dgr)
                .expect("modulus is separable mod p, derivative at a root is a unit");
            let step = self.mul(&gr, &inv);
            let next = self.sub(&r, &step);
            if next == r {
                break;
            }
            r = next;
        }
        let mut out = Vec::with_capacity(f);
        let mut acc = self.one();
        for _ in 0..f {
            out.push(acc.clone());
            acc = self.mul(&acc, &r);
        }
        out
    }

    fn eval_modulus_and_derivative(&self, r: &[u64]) -> (Vec<u64>, Vec<u64>) {
        // Horner on g(x) = x^f + sum g_i x^i and on g'(x).
        let f = self.f;
        let mut val = self.one();
        let mut der = self.scalar(f as u64);
        for i in (0..f).rev() {
            val = self.mul(&val, r);
            val[0] = zmod::add(val[0], self.modulus[i], self.pk);
        }
        // derivative: f x^{f-1} + sum_{i>=1} i g_i x^{i-1}
        let mut acc = self.zero();
        let mut xp = self.one();
        for i in 1..f {
            let c = zmod::mul(i as u64 % self.pk, self.modulus[i], self.pk);
            let term = self.scale(&xp, c);
            acc = self.add(&acc, &term);
            xp = self.mul(&xp, r);
        }
        // xp = r^{f-1}
        der = self.mul(&der, &xp);
        der = self.add(&der, &acc);
        (val, der)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.f]
    }

    pub fn one(&self) -> Vec<u64> {
        self.scalar(1)
    }

    pub fn scalar(&self, c: u64) -> Vec<u64> {
        let mut v = vec![0; self.f];
        v[0] = c % self.pk;
        v
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.f];
        if self.f == 1 {
            v[0] = if i == 0 { 1 } else { 0 };
            return v;
        }
        v[i] = 1;
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| zmod::add(x, y, self.pk)).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| zmod::sub(x, y, self.pk)).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| zmod::neg(x, self.pk)).collect()
    }

    pub fn scale(&self, a: &[u64], c: u64) -> Vec<u64> {
        a.iter().map(|&x| zmod::mul(x, c, self.pk)).collect()
    }

    /// Reduces an unreduced product buffer of length 2f-1 (entries < p^K) modulo g.
    pub fn reduce_wide(&self, buf: &mut [u64]) {
        let f = self.f;
        let pk = self.pk;
        for top in (f..buf.len()).rev() {
            let c = buf[top];
            if c != 0 {
                buf[top] = 0;
                // u^top = -sum g_i u^{top-f+i}
                for i in 0..f {
                    let pos = top - f + i;
                    buf[pos] = zmod::sub(buf[pos], zmod::mul(c, self.modulus[i], pk), pk);
                }
            }
        }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.f;
        if f == 1 {
            return vec![zmod::mul(a[0], b[0], self.pk)];
        }
        let mut buf = vec![0u64; 2 * f - 1];
        for i in 0..f {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f {
                buf[i + j] = zmod::add(buf[i + j], zmod::mul(a[i], b[j], self.pk), self.pk);
            }
        }
        self.reduce_wide(&mut buf);
        buf.truncate(f);
        buf
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self, a: &[u64]) -> bool {
        a.iter().any(|&c| c % self.p != 0)
    }

    pub fn valuation(&self, a: &[u64]) -> u32 {
        a.iter()
            .map(|&c| zmod::valuation(c, self.p, self.k))
            .min()
            .unwrap_or(self.k)
    }

    /// Inverse of a unit: residue-field inverse by x^{q-2}, then Newton lifting.
    pub fn inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        if !self.is_unit(a) {
            return None;
        }
        if self.f == 1 {
            return zmod::inv(a[0], self.pk).map(|x| vec![x]);
        }
        let q = self.p.pow(self.f as u32);
        let mut z = self.pow(a, q - 2);
        let two = self.scalar(2);
        for _ in 0..64 {
            let az = self.mul(a, &z);
            if az == self.one() {
                return Some(z);
            }
            z = self.mul(&z, &self.sub(&two, &az));
        }
        None
    }

    /// Semilinear Frobenius: the automorphism lifting x -> x^p on the residue field.
    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        if self.f == 1 {
            return a.to_vec();
        }
        let mut out = self.zero();
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                for j in 0..self.f {
                    out[j] = zmod::add(out[j], zmod::mul(c, self.frob[i][j], self.pk), self.pk);
                }
            }
        }
        out
    }

    /// Sum of the f Frobenius conjugates, an element of Z/p^K.
    pub fn trace(&self, a: &[u64]) -> u64 {
        let mut acc = self.zero();
        let mut x = a.to_vec();
        for _ in 0..self.f {
            acc = self.add(&acc, &x);
            x = self.frobenius(&x);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0));
        acc[0]
    }

    /// Teichmüller lift of a nonzero residue-field element.
    pub fn teichmuller(&self, r: &[u64]) -> Result<Vec<u64>> {
        let r: Vec<u64> = r.iter().map(|c| c % self.p).collect();
        if r.iter().all(|&c| c == 0) {
            return Err(Error::InvalidInput("teichmuller of zero residue".into()));
        }
        let q = self.p.pow(self.f as u32);
        let mut x = r;
        for _ in 0..(self.k + 2) {
            let next = self.pow(&x, q);
            if next == x {
                break;
            }
            x = next;
        }
        Ok(x)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.f as u32)
    }
}

impl UnramifiedElement {
    pub fn new(ring: &UnramRing, coeffs: &[u64]) -> Self {
        assert_eq!(coeffs.len(), ring.f);
        UnramifiedElement { coeffs: coeffs.iter().map(|c| c % ring.pk).collect() }
    }

    pub fn from_int(ring: &UnramRing, c: i64) -> Self {
        UnramifiedElement { coeffs: ring.scalar(zmod::from_i64(c, ring.pk)) }
    }

    pub fn add(&self, other: &Self, ring: &UnramRing) -> Self {
        UnramifiedElement { coeffs: ring.add(&self.coeffs, &other.coeffs) }
    }

    pub fn mul(&self, other: &Self, ring: &UnramRing) -> Self {
        UnramifiedElement { coeffs: ring.mul(&self.coeffs, &other.coeffs) }
    }

    pub fn frobenius(&self, ring: &UnramRing) -> Self {
        UnramifiedElement { coeffs: ring.frobenius(&self.coeffs) }
    }

    pub fn trace(&self, ring: &UnramRing) -> u64 {
        ring.trace(&self.coeffs)
    }

    pub fn teichmuller(residue: &[u64], ring: &UnramRing) -> Result<Self> {
        Ok(UnramifiedElement { coeffs: ring.teichmuller(residue)? })
    }

    pub fn inverse(&self, ring: &UnramRing) -> Result<Self> {
        ring.inverse(&self.coeffs)
            .map(|coeffs| UnramifiedElement { coeffs })
            .ok_or_else(|| Error::NotAUnit("unramified element".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_of_u_for_u2_plus_1() {
        let ring = UnramRing::new(3, 2, 8, Some(vec![1, 0])).unwrap();
        let u = UnramifiedElement::new(&ring, &[0, 1]);
        let fu = u.frobenius(&ring);
        assert_eq!(fu.coeffs, vec![0, ring.pk - 1]);
        assert_eq!(u.trace(&ring), 0);
        assert_eq!(UnramifiedElement::from_int(&ring, 1).trace(&ring), 2);
    }

    #[test]
    fn frobenius_is_identity_for_f1() {
        let ring = UnramRing::new(5, 1, 6, None).unwrap();
        for a in 0..50 {
            assert_eq!(ring.frobenius(&[a]), vec![a]);
        }
    }

    #[test]
    fn frobenius_order_f_and_mod_p_power() {
        let ring = UnramRing::new(2, 3, 10, None).unwrap();
        let x = vec![5, 3, 7];
        let mut y = x.clone();
        for _ in 0..3 {
            y = ring.frobenius(&y);
        }
        assert_eq!(x, y);
        let fx = ring.frobenius(&x);
        let xp = ring.pow(&x, 2);
        assert!(ring.sub(&fx, &xp).iter().all(|c| c % 2 == 0));
    }

    #[test]
    fn teichmuller_examples() {
        let ring = UnramRing::new(3, 1, 8, None).unwrap();
        assert_eq!(ring.teichmuller(&[2]).unwrap(), vec![ring.pk - 1]);
        assert_eq!(ring.teichmuller(&[1]).unwrap(), vec![1]);
        assert!(ring.teichmuller(&[0]).is_err());
        // p = 5, N = 3: iterate x <- x^5 to its fixed point mod 125.
        let ring = UnramRing::new(5, 1, 3, None).unwrap();
        let mut x = 2u64;
        loop {
            let y = zmod::pow(x, 5, 125);
            if y == x {
                break;
            }
            x = y;
        }
        assert_eq!(ring.teichmuller(&[2]).unwrap(), vec![x]);
        assert_eq!(zmod::pow(x, 4, 125), 1);
    }

    #[test]
    fn teichmuller_is_root_of_unity_and_frobenius_stable() {
        let ring = UnramRing::new(3, 2, 9, None).unwrap();
        for r in [[1u64, 1], [2, 0], [0, 1], [2, 2]] {
            let t = ring.teichmuller(&r).unwrap();
            assert_eq!(ring.pow(&t, 8), ring.one());
            assert_eq!(ring.frobenius(&t), ring.pow(&t, 3));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let ring = UnramRing::new(3, 2, 9, None).unwrap();
        let a = vec![4, 7];
        let b = ring.inverse(&a).unwrap();
        assert_eq!(ring.mul(&a, &b), ring.one());
        assert!(ring.inverse(&[3, 6]).is_none());
    }
}
