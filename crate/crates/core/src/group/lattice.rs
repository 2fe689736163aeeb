use super::GroupG;

/// A cyclic subgroup P of G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicSubgroup {
    pub id: usize,
    /// The least element generating P.
    pub generator: usize,
    pub order: usize,
    /// Elements in increasing order.
    pub elements: Vec<usize>,
    pub member: Vec<bool>,
    /// Elements that generate P, in increasing order.
    pub generators: Vec<usize>,
}

/// The cyclic subgroups C(G) with their inclusions, normalizers, Weyl groups,
/// conjugation action and coset representatives.
#[derive(Clone, Debug, Default)]
pub struct SubgroupLattice {
    pub subgroups: Vec<CyclicSubgroup>,
    /// Pairs (P, P1) with P a proper subgroup of P1.
    pub inclusions: Vec<(usize, usize)>,
    /// Pairs (P', P) with P'^p = P and P' != P.
    pub p_power_pairs: Vec<(usize, usize)>,
    /// Elements of N_G(P).
    pub normalizers: Vec<Vec<usize>>,
    /// Representatives of N_G(P)/P.
    pub weyl_reps: Vec<Vec<usize>>,
    /// G-orbits on C(G).
    pub conj_orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    /// conj_action[x][P] = x P x^{-1}.
    pub conj_action: Vec<Vec<usize>>,
    /// Representatives x of the left cosets xP.
    pub coset_reps: Vec<Vec<usize>>,
    /// Representatives c of the right cosets Pc.
    pub right_coset_reps: Vec<Vec<usize>>,
    /// by_generator[g] = id of the subgroup generated by g.
    pub by_generator: Vec<usize>,
}

fn cyclic_closure(g: &GroupG, x: usize) -> Vec<usize> {
    let mut out = vec![0];
    let mut y = x;
    while y != 0 {
        out.push(y);
        y = g.mul(y, x);
    }
    out.sort_unstable();
    out
}

impl SubgroupLattice {
    pub(crate) fn build(g: &GroupG) -> SubgroupLattice {
        let n = g.order;
        let mut subs: Vec<CyclicSubgroup> = Vec::new();
        let mut by_generator = vec![0; n];
        for x in 0..n {
            let els = cyclic_closure(g, x);
            let id = match subs.iter().position(|s| s.elements == els) {
                Some(id) => id,
                None => {
                    let mut member = vec![false; n];
                    for &y in &els {
                        member[y] = true;
                    }
                    subs.push(CyclicSubgroup {
                        id: subs.len(),
                        generator: x,
                        order: els.len(),
                        elements: els,
                        member,
                        generators: Vec::new(),
                    });
                    subs.len() - 1
                }
            };
            subs[id].generators.push(x);
            by_generator[x] = id;
        }
        let k = subs.len();
        let mut inclusions = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a != b && subs[a].order < subs[b].order && subs[a].elements.iter().all(|&y| subs[b].member[y]) {
                    inclusions.push((a, b));
                }
            }
        }
        let mut p_power_pairs = Vec::new();
        for a in 0..k {
            let (gp, _) = g.power(subs[a].generator, g.p);
            let b = by_generator[gp];
            if b != a {
                p_power_pairs.push((a, b));
            }
        }
        let conj_action: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..k).map(|s| by_generator[g.conj(x, subs[s].generator)]).collect())
            .collect();
        let normalizers: Vec<Vec<usize>> = (0..k).map(|s| (0..n).filter(|&x| conj_action[x][s] == s).collect()).collect();
        let left_reps = |within: &[usize], s: &CyclicSubgroup| -> Vec<usize> {
            let mut covered = vec![false; n];
            let mut reps = Vec::new();
            for &x in within {
                if !covered[x] {
                    reps.push(x);
                    for &y in &s.elements {
                        covered[g.mul(x, y)] = true;
                    }
                }
            }
            reps
        };
        let all: Vec<usize> = (0..n).collect();
        let weyl_reps = (0..k).map(|s| left_reps(&normalizers[s], &subs[s])).collect();
        let coset_reps = (0..k).map(|s| left_reps(&all, &subs[s])).collect();
        let right_coset_reps = (0..k)
            .map(|s| {
                let mut covered = vec![false; n];
                let mut reps = Vec::new();
                for x in 0..n {
                    if !covered[x] {
                        reps.push(x);
                        for &y in &subs[s].elements {
                            covered[g.mul(y, x)] = true;
                        }
                    }
                }
                reps
            })
            .collect();
        let mut orbit_of = vec![usize::MAX; k];
        let mut conj_orbits = Vec::new();
        for s in 0..k {
            if orbit_of[s] != usize::MAX {
                continue;
            }
            let mut orb: Vec<usize> = (0..n).map(|x| conj_action[x][s]).collect();
            orb.sort_unstable();
            orb.dedup();
            for &t in &orb {
                orbit_of[t] = conj_orbits.len();
            }
            conj_orbits.push(orb);
        }
        SubgroupLattice {
            subgroups: subs,
            inclusions,
            p_power_pairs,
            normalizers,
            weyl_reps,
            conj_orbits,
            orbit_of,
            conj_action,
            coset_reps,
            right_coset_reps,
            by_generator,
        }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// The subgroup with exactly these elements, if cyclic.
    pub fn find(&self, elements: &[usize]) -> Option<usize> {
        let mut e = elements.to_vec();
        e.sort_unstable();
        self.subgroups.iter().position(|s| s.elements == e)
    }

    /// The subgroup generated by x.
    pub fn generated(&self, x: usize) -> usize {
        self.by_generator[x]
    }

    pub fn trivial(&self) -> usize {
        0
    }

    /// |W_G P|.
    pub fn weyl_order(&self, s: usize) -> usize {
        self.weyl_reps[s].len()
    }

    /// The P' with P'^p = P.
    pub fn p_roots(&self, s: usize) -> Vec<usize> {
        self.p_power_pairs.iter().filter(|&&(_, b)| b == s).map(|&(a, _)| a).collect()
    }

    /// Orbit representatives of C(G)/G (least id in each orbit).
    pub fn orbit_reps(&self) -> Vec<usize> {
        self.conj_orbits.iter().map(|o| o[0]).collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::group::{GroupG, CATALOG};

    #[test]
    fn lattice_invariants() {
        for &(name, _) in CATALOG {
            let p = if name == "dihedral8" || name == "quaternion8" { 2 } else { 3 };
            let g = GroupG::from_catalog(name, p, 1).unwrap();
            let l = &g.lattice;
            for s in &l.subgroups {
                for &x in &s.elements {
                    for &y in &s.elements {
                        assert!(s.member[g.mul(x, y)]);
                    }
                }
                assert_eq!(g.order % l.normalizers[s.id].len(), 0);
                assert_eq!(l.weyl_order(s.id) * s.order, l.normalizers[s.id].len());
                assert_eq!(l.coset_reps[s.id].len() * s.order, g.order);
                assert_eq!(l.right_coset_reps[s.id].len() * s.order, g.order);
                for x in 0..g.order {
                    let t = l.conj_action[x][s.id];
                    assert_eq!(l.subgroups[t].order, s.order);
                    assert_eq!(l.orbit_of[t], l.orbit_of[s.id]);
                    for &y in &s.elements {
                        assert!(l.subgroups[t].member[g.conj(x, y)]);
                    }
                }
            }
        }
    }
}
