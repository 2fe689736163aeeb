use super::GroupG;
use crate::error::{Error, Result};

/// G^{ab} = G/[G,G] written as a product of cyclic groups.
#[derive(Clone, Debug, Default)]
pub struct AbelianizationMap {
    /// Elements of G whose images form a basis of G^{ab}.
    pub generators: Vec<usize>,
    pub orders: Vec<usize>,
    /// Exponent vector of every element of G.
    pub vectors: Vec<Vec<usize>>,
    /// Elements of the commutator subgroup.
    pub commutator: Vec<usize>,
}

impl AbelianizationMap {
    pub(crate) fn build(g: &GroupG) -> Result<AbelianizationMap> {
        let n = g.order;
        let mut inside = vec![false; n];
        inside[0] = true;
        let mut comm = vec![0];
        for x in 0..n {
            for y in 0..n {
                let c = g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)));
                if !inside[c] {
                    inside[c] = true;
                    comm.push(c);
                }
            }
        }
        // close under multiplication
        let mut i = 0;
        while i < comm.len() {
            for j in 0..=i {
                for c in [g.mul(comm[i], comm[j]), g.mul(comm[j], comm[i])] {
                    if !inside[c] {
                        inside[c] = true;
                        comm.push(c);
                    }
                }
            }
            i += 1;
        }
        comm.sort_unstable();
        // coset id of every element
        let mut coset = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset[x] == usize::MAX {
                for &c in &comm {
                    coset[g.mul(x, c)] = reps.len();
                }
                reps.push(x);
            }
        }
        let q = reps.len();
        let qmul = |a: usize, b: usize| coset[g.mul(reps[a], reps[b])];
        let qpow = |a: usize, k: usize| (0..k).fold(0usize, |acc, _| qmul(acc, a));
        let qorder = |a: usize| {
            let mut k = 1;
            let mut y = a;
            while y != 0 {
                y = qmul(y, a);
                k += 1;
            }
            k
        };
        // greedy basis: repeatedly take an element of maximal order meeting the span trivially
        let mut span = vec![false; q];
        span[0] = true;
        let mut gens = Vec::new();
        let mut orders = Vec::new();
        let mut size = 1;
        while size < q {
            let mut best: Option<(usize, usize)> = None;
            for a in 0..q {
                let o = qorder(a);
                let meets = (1..o).any(|k| span[qpow(a, k)]);
                if !meets && best.map_or(true, |(_, bo)| o > bo) {
                    best = Some((a, o));
                }
            }
            let (a, o) = best.ok_or_else(|| Error::Internal("abelianization basis search failed".into()))?;
            let old: Vec<usize> = (0..q).filter(|&x| span[x]).collect();
            for &x in &old {
                for k in 0..o {
                    span[qmul(x, qpow(a, k))] = true;
                }
            }
            size = span.iter().filter(|&&b| b).count();
            gens.push(a);
            orders.push(o);
        }
        if orders.iter().product::<usize>() != q {
            return Err(Error::Internal("abelianization basis is not a direct decomposition".into()));
        }
        // exponent vectors of quotient elements
        let mut qvec = vec![Vec::new(); q];
        let total: usize = orders.iter().product();
        for code in 0..total {
            let mut v = Vec::with_capacity(gens.len());
            let mut t = code;
            let mut el = 0;
            for (i, &o) in orders.iter().enumerate() {
                let k = t % o;
                t /= o;
                v.push(k);
                el = qmul(el, qpow(gens[i], k));
            }
            qvec[el] = v;
        }
        Ok(AbelianizationMap {
            generators: gens.iter().map(|&a| reps[a]).collect(),
            orders,
            vectors: (0..n).map(|x| qvec[coset[x]].clone()).collect(),
            commutator: comm,
        })
    }

    /// |G^{ab}|.
    pub fn order(&self) -> usize {
        self.orders.iter().product()
    }

    pub fn map(&self, x: usize) -> &[usize] {
        &self.vectors[x]
    }
}
