//! Determinants over commutative rings: division-free Berkowitz and unit-pivot
//! elimination for local rings.

use super::zmod;
use crate::error::{Error, Result};

pub trait CommRing {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }
}

/// A commutative local ring: non-units form the maximal ideal.
pub trait LocalRing: CommRing {
    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

fn check_square<E>(a: &[Vec<E>]) -> Result<usize> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    Ok(n)
}

/// Coefficients of det(λI − A), leading coefficient first.
pub fn berkowitz_charpoly<R: CommRing>(ring: &R, a: &[Vec<R::Elem>]) -> Result<Vec<R::Elem>> {
    let n = check_square(a)?;
    let mut v = vec![ring.one()];
    for r in 0..n {
        // leading block is r×r; column C = a[0..r][r], row R = a[r][0..r]
        let mut t = Vec::with_capacity(r + 2);
        t.push(ring.one());
        t.push(ring.neg(&a[r][r]));
        let mut w: Vec<R::Elem> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let mut s = ring.zero();
            for j in 0..r {
                s = ring.add(&s, &ring.mul(&a[r][j], &w[j]));
            }
            t.push(ring.neg(&s));
            let next: Vec<R::Elem> = (0..r)
                .map(|i| {
                    let mut acc = ring.zero();
                    for j in 0..r {
                        acc = ring.add(&acc, &ring.mul(&a[i][j], &w[j]));
                    }
                    acc
                })
                .collect();
            w = next;
        }
        let mut nv = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = ring.zero();
            for j in 0..=i.min(r) {
                acc = ring.add(&acc, &ring.mul(&t[i - j], &v[j]));
            }
            nv.push(acc);
        }
        v = nv;
    }
    Ok(v)
}

pub fn det_berkowitz<R: CommRing>(ring: &R, a: &[Vec<R::Elem>]) -> Result<R::Elem> {
    let n = check_square(a)?;
    let cp = berkowitz_charpoly(ring, a)?;
    let c0 = cp[n].clone();
    Ok(if n % 2 == 0 { c0 } else { ring.neg(&c0) })
}

/// Determinant by Gaussian elimination with unit pivots; fails when a column has
/// no unit entry (the matrix is then singular modulo the maximal ideal).
pub fn det_unit_pivot<R: LocalRing>(ring: &R, a: &[Vec<R::Elem>]) -> Result<R::Elem> {
    let n = check_square(a)?;
    let mut m: Vec<Vec<R::Elem>> = a.to_vec();
    let mut det = ring.one();
    for c in 0..n {
        let pr = (c..n)
            .find(|&r| ring.is_unit(&m[r][c]))
            .ok_or_else(|| Error::NotAUnit(format!("no unit pivot in column {c}")))?;
        if pr != c {
            m.swap(pr, c);
            det = ring.neg(&det);
        }
        let piv = m[c][c].clone();
        det = ring.mul(&det, &piv);
        let inv = ring.inverse(&piv)?;
        for r in c + 1..n {
            let factor = ring.mul(&m[r][c], &inv);
            for j in c + 1..n {
                let d = ring.mul(&factor, &m[c][j]);
                m[r][j] = ring.sub(&m[r][j], &d);
            }
        }
    }
    Ok(det)
}

/// Z/p^k as a local ring, used by tests and the oracle suite.
#[derive(Clone, Copy, Debug)]
pub struct Zpk {
    pub p: u64,
    pub m: u64,
}

impl CommRing for Zpk {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.m
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        zmod::add(*a, *b, self.m)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        zmod::sub(*a, *b, self.m)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        zmod::mul(*a, *b, self.m)
    }
}

impl LocalRing for Zpk {
    fn is_unit(&self, a: &u64) -> bool {
        a % self.p != 0
    }
    fn inverse(&self, a: &u64) -> Result<u64> {
        zmod::inv(*a, self.m).ok_or_else(|| Error::NotAUnit(format!("{a} mod {}", self.m)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_cases() {
        let r = Zpk { p: 3, m: 243 };
        assert_eq!(det_berkowitz(&r, &[vec![17]]).unwrap(), 17);
        let (a, b, c, d) = (5u64, 7, 11, 13);
        let expect = zmod::sub(a * d % 243, b * c % 243, 243);
        assert_eq!(det_berkowitz(&r, &[vec![a, b], vec![c, d]]).unwrap(), expect);
        assert!(det_berkowitz(&r, &[vec![1, 2]]).is_err());
        assert_eq!(det_berkowitz::<Zpk>(&r, &[]).unwrap(), 1);
    }

    #[test]
    fn berkowitz_matches_elimination_and_is_multiplicative() {
        let r = Zpk { p: 3, m: 243 };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut tested = 0;
        while tested < 40 {
            let a: Vec<Vec<u64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(0..243)).collect()).collect();
            let b: Vec<Vec<u64>> = (0..4).map(|_| (0..4).map(|_| rng.gen_range(0..243)).collect()).collect();
            let Ok(de) = det_unit_pivot(&r, &a) else { continue };
            let da = det_berkowitz(&r, &a).unwrap();
            assert_eq!(da, de);
            let ab: Vec<Vec<u64>> = (0..4)
                .map(|i| (0..4).map(|j| (0..4).fold(0, |s, k| (s + a[i][k] * b[k][j]) % 243)).collect())
                .collect();
            let db = det_berkowitz(&r, &b).unwrap();
            assert_eq!(det_berkowitz(&r, &ab).unwrap(), da * db % 243);
            tested += 1;
        }
    }
}
