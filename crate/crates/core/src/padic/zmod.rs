//! Scalar arithmetic in Z/p^k on `u64` residues.
//!
//! Moduli are kept below 2^31 so that a product of two reduced residues fits
//! in a `u64`.

#[inline]
pub fn add(a: u64, b: u64, m: u64) -> u64 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

#[inline]
pub fn neg(a: u64, m: u64) -> u64 {
    if a == 0 {
        0
    } else {
        m - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64, m: u64) -> u64 {
    (a * b) % m
}

pub fn pow(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, m);
        }
        a = mul(a, a, m);
        e >>= 1;
    }
    r
}

/// Reduces a signed integer into `[0, m)`.
pub fn from_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// p-adic valuation of `a` as an element of Z/p^k; returns `k` for zero.
pub fn valuation(mut a: u64, p: u64, k: u32) -> u32 {
    if a == 0 {
        return k;
    }
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v.min(k)
}

/// p-adic valuation of a nonzero integer.
pub fn int_valuation(mut a: u64, p: u64) -> u32 {
    assert!(a != 0);
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    v
}

/// Inverse of a unit modulo `m` by the extended Euclidean algorithm.
pub fn inv(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
