//! The finite quotient G = H ⋊ Z/p^e of 𝒢 = H ⋊ Γ by Γ^{p^e}.
//!
//! Elements are indexed by `h + |H|·a` with 0 <= a < p^e. The product
//! (h1,a1)(h2,a2) = (h1·σ^{a1}(h2), a1+a2 mod p^e) also reports whether
//! a1 + a2 overflowed p^e, which is the carry into γ^{p^e} = 1 + T.

mod abelian;
mod lattice;
mod table;

use std::sync::Arc;

pub use abelian::AbelianizationMap;
pub use lattice::{CyclicSubgroup, SubgroupLattice};
pub use table::{catalog_spec, FiniteGroupTable, GroupSpec, CATALOG};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub h: usize,
    pub a: usize,
}

#[derive(Debug)]
pub struct GroupG {
    pub p: u64,
    pub e: u32,
    pub pe: usize,
    pub h: FiniteGroupTable,
    pub order: usize,
    mul: Vec<u32>,
    carry: Vec<bool>,
    inv: Vec<usize>,
    /// classes[i] lists the elements of the i-th conjugacy class in increasing order.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub lattice: SubgroupLattice,
    pub ab: AbelianizationMap,
}

pub type Group = Arc<GroupG>;

impl GroupG {
    pub fn build(spec: &GroupSpec) -> Result<Group> {
        let t = spec.table();
        t.validate(spec.p, spec.e)?;
        let pe = (spec.p as usize).pow(spec.e);
        let nh = t.order;
        let order = nh * pe;
        if order > 4096 {
            return Err(Error::InvalidGroup(format!("|G| = {order} is too large")));
        }
        let mut sig = vec![(0..nh).collect::<Vec<usize>>()];
        for a in 1..pe {
            let prev: &Vec<usize> = &sig[a - 1];
            sig.push(prev.iter().map(|&x| t.gamma_action[x]).collect());
        }
        let mut mul = vec![0u32; order * order];
        let mut carry = vec![false; order * order];
        for g1 in 0..order {
            let (h1, a1) = (g1 % nh, g1 / nh);
            for g2 in 0..order {
                let (h2, a2) = (g2 % nh, g2 / nh);
                let h = t.table[h1][sig[a1][h2]];
                let s = a1 + a2;
                mul[g1 * order + g2] = (h + nh * (s % pe)) as u32;
                carry[g1 * order + g2] = s >= pe;
            }
        }
        let inv = (0..order)
            .map(|g| (0..order).find(|&x| mul[g * order + x] == 0).expect("group has inverses"))
            .collect::<Vec<_>>();
        let mut g = GroupG {
            p: spec.p,
            e: spec.e,
            pe,
            h: t,
            order,
            mul,
            carry,
            inv,
            classes: Vec::new(),
            class_of: Vec::new(),
            lattice: SubgroupLattice::default(),
            ab: AbelianizationMap::default(),
        };
        g.compute_classes();
        g.lattice = SubgroupLattice::build(&g);
        g.ab = AbelianizationMap::build(&g)?;
        Ok(Arc::new(g))
    }

    pub fn from_catalog(name: &str, p: u64, e: u32) -> Result<Group> {
        GroupG::build(&catalog_spec(name, p, e, 1)?)
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y] as usize
    }

    /// Whether the product of x and y carries a factor γ^{p^e}.
    #[inline]
    pub fn carry(&self, x: usize, y: usize) -> bool {
        self.carry[x * self.order + y]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    /// x g x^{-1}.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn element(&self, idx: usize) -> GroupElement {
        GroupElement { h: idx % self.h.order, a: idx / self.h.order }
    }

    pub fn index(&self, g: GroupElement) -> usize {
        g.h + self.h.order * g.a
    }

    /// Γ-exponent a of an element (h, a).
    #[inline]
    pub fn gamma_part(&self, x: usize) -> usize {
        x / self.h.order
    }

    /// The p^e-th order element γ̄ = (1, 1) when p^e > 1.
    pub fn gamma(&self) -> usize {
        if self.pe > 1 {
            self.h.order
        } else {
            0
        }
    }

    /// g^k in G together with the number of carries, so that the lift of
    /// g to 𝒢 satisfies ĝ^k = γ^{p^e·carries}·(lift of g^k).
    pub fn power(&self, g: usize, k: u64) -> (usize, u64) {
        let mut x = 0usize;
        let mut c = 0u64;
        for _ in 0..k {
            c += self.carry(x, g) as u64;
            x = self.mul(x, g);
        }
        (x, c)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (0..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Elements of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut els = vec![0];
        let mut i = 0;
        while i < els.len() {
            for &g in gens {
                let y = self.mul(els[i], g);
                if !inside[y] {
                    inside[y] = true;
                    els.push(y);
                }
            }
            i += 1;
        }
        els.sort_unstable();
        els
    }

    /// A generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for x in 0..self.order {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Exponent of G^{ab}.
    pub fn ab_exponent(&self) -> usize {
        self.ab.orders.iter().copied().max().unwrap_or(1)
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut cl: Vec<usize> = (0..n).map(|x| self.conj(x, g)).collect();
            cl.sort_unstable();
            cl.dedup();
            for &y in &cl {
                class_of[y] = classes.len();
            }
            classes.push(cl);
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Least element of the class, used as its representative.
    pub fn class_rep(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    /// g ↦ g^p on an element of U_{P'} with P'^p = P: returns g^p and the
    /// number of carries into γ^{p^e}.
    pub fn transfer_exponent(&self, g: usize, p_prime: usize, p_sub: usize) -> Result<(usize, u64)> {
        let l = &self.lattice;
        if !l.p_power_pairs.contains(&(p_prime, p_sub)) && !(p_prime == p_sub && l.subgroups[p_sub].order == 1) {
            return Err(Error::InvalidInput("subgroups do not satisfy P'^p = P".into()));
        }
        if !l.subgroups[p_prime].member[g] {
            return Err(Error::InvalidInput(format!("element {g} is not in P'")));
        }
        let (x, c) = self.power(g, self.p);
        debug_assert!(l.subgroups[p_sub].member[x]);
        Ok((x, c))
    }
}
