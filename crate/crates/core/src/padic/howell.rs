//! Howell forms over Z/p^k and exact membership tests for column spans.

use super::zmod;
use crate::error::{Error, Result};

/// A dense matrix over Z/p^k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u64>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ModMatrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ModMatrix { rows: rows.len(), cols, entries: rows.concat() })
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, x: &[u64], m: u64) -> Vec<u64> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(0, |acc, c| zmod::add(acc, zmod::mul(self.get(r, c) % m, x[c] % m, m), m))
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Pivot {
    col: usize,
    val: u32,
    row: Vec<u64>,
    combo: Vec<u64>,
}

/// Howell form of the span of the columns of a matrix, with the combination of
/// original columns that produced each pivot row.
#[derive(Clone, Debug)]
pub struct HowellForm {
    p: u64,
    k: u32,
    m: u64,
    dim: usize,
    ncols: usize,
    pivots: Vec<Pivot>,
}

fn scale_into(dst: &mut [u64], src: &[u64], t: u64, m: u64) {
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = zmod::sub(*d, zmod::mul(s, t, m), m);
        }
    }
}

impl HowellForm {
    /// Builds the form of the column span of `a` over Z/p^k.
    pub fn new(a: &ModMatrix, p: u64, k: u32) -> Self {
        let m = p.pow(k);
        let dim = a.rows;
        let n = a.cols;
        let mut pending: Vec<(Vec<u64>, Vec<u64>)> = (0..n)
            .map(|j| {
                let row = (0..dim).map(|i| a.get(i, j) % m).collect::<Vec<_>>();
                let mut combo = vec![0; n];
                combo[j] = 1 % m;
                (row, combo)
            })
            .filter(|(r, _)| r.iter().any(|&x| x != 0))
            .collect();
        let mut pivots = Vec::new();
        for col in 0..dim {
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, (r, _))| r[col] != 0)
                .min_by_key(|(_, (r, _))| zmod::valuation(r[col], p, k))
                .map(|(i, _)| i);
            let Some(bi) = best else { continue };
            let (mut row, mut combo) = pending.swap_remove(bi);
            let v = zmod::valuation(row[col], p, k);
            let pv = p.pow(v);
            let unit = row[col] / pv;
            let uinv = zmod::inv(unit, m).expect("unit part is invertible");
            for x in row.iter_mut() {
                *x = zmod::mul(*x, uinv, m);
            }
            for x in combo.iter_mut() {
                *x = zmod::mul(*x, uinv, m);
            }
            for (r, c) in pending.iter_mut() {
                let e = r[col];
                if e != 0 {
                    let t = e / pv;
                    scale_into(r, &row, t, m);
                    scale_into(c, &combo, t, m);
                }
            }
            if v > 0 {
                let s = p.pow(k - v);
                let srow: Vec<u64> = row.iter().map(|&x| zmod::mul(x, s, m)).collect();
                if srow.iter().any(|&x| x != 0) {
                    let scombo = combo.iter().map(|&x| zmod::mul(x, s, m)).collect();
                    pending.push((srow, scombo));
                }
            }
            pending.retain(|(r, _)| r.iter().any(|&x| x != 0));
            pivots.push(Pivot { col, val: v, row, combo });
        }
        HowellForm { p, k, m, dim, ncols: n, pivots }
    }

    /// Returns `x` with `A x = b` over Z/p^k, or `None` when `b` is outside the span.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.dim
            )));
        }
        let m = self.m;
        let mut res: Vec<u64> = b.iter().map(|&x| x % m).collect();
        let mut x = vec![0; self.ncols];
        for pv in &self.pivots {
            let e = res[pv.col];
            if e == 0 {
                continue;
            }
            if zmod::valuation(e, self.p, self.k) < pv.val {
                return Ok(None);
            }
            let t = e / self.p.pow(pv.val);
            scale_into(&mut res, &pv.row, t, m);
            for (xi, &ci) in x.iter_mut().zip(&pv.combo) {
                *xi = zmod::add(*xi, zmod::mul(ci, t, m), m);
            }
        }
        if res.iter().any(|&r| r != 0) {
            return Ok(None);
        }
        Ok(Some(x))
    }

    pub fn contains(&self, b: &[u64]) -> Result<bool> {
        Ok(self.solve(b)?.is_some())
    }

    /// Pivot columns and their p-adic pivot valuations.
    pub fn pivot_profile(&self) -> Vec<(usize, u32)> {
        self.pivots.iter().map(|p| (p.col, p.val)).collect()
    }
}

/// One-shot solve of `A x = b` over Z/p^k.
pub fn howell_solve(a: &ModMatrix, b: &[u64], p: u64, k: u32) -> Result<Option<Vec<u64>>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, vector has {}",
            a.rows,
            b.len()
        )));
    }
    HowellForm::new(a, p, k).solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        let a = ModMatrix::from_rows(&[vec![2, 3], vec![1, 5]]).unwrap();
        assert_eq!(howell_solve(&a, &[0, 0], 3, 4).unwrap(), Some(vec![0, 0]));
        let id = ModMatrix::identity(3);
        assert_eq!(howell_solve(&id, &[4, 5, 6], 2, 3).unwrap(), Some(vec![4, 5, 6]));
        assert!(howell_solve(&id, &[1, 2], 2, 3).is_err());
    }

    #[test]
    fn two_x_mod_eight() {
        let a = ModMatrix::from_rows(&[vec![2]]).unwrap();
        let x = howell_solve(&a, &[4], 2, 3).unwrap().unwrap();
        assert_eq!(x[0] % 4, 2);
        assert_eq!(howell_solve(&a, &[1], 2, 3).unwrap(), None);
    }

    fn brute_force_member(a: &ModMatrix, b: &[u64], m: u64) -> bool {
        let n = a.cols;
        let total = m.pow(n as u32);
        (0..total).any(|mut idx| {
            let mut x = vec![0; n];
            for xi in x.iter_mut() {
                *xi = idx % m;
                idx /= m;
            }
            a.mul_vec(&x, m) == b
        })
    }

    #[test]
    fn agrees_with_enumeration_p2() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in 1..=3u32 {
            let m = 2u64.pow(k);
            for _ in 0..150 {
                let rows = rng.gen_range(1..=3);
                let cols = rng.gen_range(1..=3);
                let mut a = ModMatrix::zeros(rows, cols);
                for e in a.entries.iter_mut() {
                    *e = rng.gen_range(0..m) * if rng.gen_bool(0.3) { 2 } else { 1 } % m;
                }
                let b: Vec<u64> = (0..rows).map(|_| rng.gen_range(0..m)).collect();
                let sol = howell_solve(&a, &b, 2, k).unwrap();
                assert_eq!(sol.is_some(), brute_force_member(&a, &b, m), "{a:?} {b:?}");
                if let Some(x) = sol {
                    assert_eq!(a.mul_vec(&x, m), b);
                }
            }
        }
    }
}
