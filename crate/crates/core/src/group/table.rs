use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::zmod;

/// A finite group H given by its multiplication table together with the
/// automorphism σ by which a topological generator γ of Γ acts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
    pub gamma_action: Vec<usize>,
}

/// The JSON form of a group: H by table and γ-action, plus the ring data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub p: u64,
    pub e: u32,
    #[serde(default = "one")]
    pub f: usize,
    #[serde(rename = "H_order")]
    pub h_order: usize,
    #[serde(rename = "H_table")]
    pub h_table: Vec<Vec<usize>>,
    pub gamma_action: Vec<usize>,
}

fn one() -> usize {
    1
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<GroupSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidGroup(format!("malformed group file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group spec serializes")
    }

    pub fn table(&self) -> FiniteGroupTable {
        FiniteGroupTable { order: self.h_order, table: self.h_table.clone(), gamma_action: self.gamma_action.clone() }
    }
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

impl FiniteGroupTable {
    /// Checks the group axioms and that σ is an automorphism with σ^{p^e} = 1.
    pub fn validate(&self, p: u64, e: u32) -> Result<()> {
        let n = self.order;
        let bad = |s: String| Err(Error::InvalidGroup(s));
        if n == 0 {
            return bad("H_order must be positive".into());
        }
        if !zmod::is_prime(p) {
            return bad(format!("p = {p} is not prime"));
        }
        if !is_p_power(n, p as usize) {
            return bad(format!("|H| = {n} is not a power of {p}"));
        }
        if self.table.len() != n || self.table.iter().any(|r| r.len() != n) {
            return bad(format!("H_table must be {n} x {n}"));
        }
        for (i, row) in self.table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return bad(format!("closure: entry ({i},{j}) = {v} out of range"));
                }
            }
        }
        for i in 0..n {
            if self.table[0][i] != i || self.table[i][0] != i {
                return bad(format!("identity: index 0 is not neutral for element {i}"));
            }
        }
        for i in 0..n {
            if !(0..n).any(|j| self.table[i][j] == 0 && self.table[j][i] == 0) {
                return bad(format!("inverse: element {i} has no two-sided inverse"));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.table[a][b];
                for c in 0..n {
                    if self.table[ab][c] != self.table[a][self.table[b][c]] {
                        return bad(format!("associativity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        let s = &self.gamma_action;
        if s.len() != n {
            return bad(format!("gamma_action must have {n} entries"));
        }
        let mut seen = vec![false; n];
        for (i, &v) in s.iter().enumerate() {
            if v >= n || seen[v] {
                return bad(format!("gamma_action is not a permutation (index {i})"));
            }
            seen[v] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if s[self.table[a][b]] != self.table[s[a]][s[b]] {
                    return bad(format!("gamma_action is not a homomorphism at ({a},{b})"));
                }
            }
        }
        let pe = (p as usize).pow(e);
        for x in 0..n {
            let mut y = x;
            for _ in 0..pe {
                y = s[y];
            }
            if y != x {
                return bad(format!("gamma_action^{pe} moves element {x}"));
            }
        }
        Ok(())
    }
}

/// Names and one-line descriptions of the built-in groups.
pub const CATALOG: &[(&str, &str)] = &[
    ("trivial_H", "H = 1, G = Z/p^e"),
    ("cyclic_p", "H = Z/p, trivial action"),
    ("cyclic_p2", "H = Z/p^2, trivial action"),
    ("cyclic_p2_twist", "H = Z/p^2, gamma acts by multiplication with 1+p"),
    ("elem_p2", "H = (Z/p)^2, trivial action"),
    ("heisenberg", "H = (Z/p)^2, gamma acts by (x,y) -> (x+y,y); G has order p^3 for e = 1"),
    ("heisenberg_H", "H = Heisenberg group of order p^3, trivial action"),
    ("dihedral8", "p = 2: H = Z/4, gamma acts by inversion; G is dihedral of order 8 for e = 1"),
    ("quaternion8", "p = 2: H = quaternion group of order 8, gamma acts by conjugation with i"),
];

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
}

fn product_table(n1: usize, n2: usize) -> Vec<Vec<usize>> {
    // index x + n1*y
    let n = n1 * n2;
    (0..n)
        .map(|i| (0..n).map(|j| (i % n1 + j % n1) % n1 + n1 * ((i / n1 + j / n1) % n2)).collect())
        .collect()
}

fn quaternion_table() -> Vec<Vec<usize>> {
    // index = 4*sign + unit, units 1, i, j, k
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    (0..8)
        .map(|a| {
            (0..8)
                .map(|b| {
                    let (s, u) = UNIT[a % 4][b % 4];
                    let sign = (a / 4 + b / 4 + s) % 2;
                    4 * sign + u
                })
                .collect()
        })
        .collect()
}

/// Builds the spec of a catalog group.
pub fn catalog_spec(name: &str, p: u64, e: u32, f: usize) -> Result<GroupSpec> {
    let pu = p as usize;
    let need_p2 = |what: &str| -> Result<()> {
        if p != 2 {
            Err(Error::InvalidGroup(format!("{what} is only defined for p = 2")))
        } else {
            Ok(())
        }
    };
    let (table, action): (Vec<Vec<usize>>, Vec<usize>) = match name {
        "trivial_H" => (cyclic(1), vec![0]),
        "cyclic_p" => (cyclic(pu), (0..pu).collect()),
        "cyclic_p2" => (cyclic(pu * pu), (0..pu * pu).collect()),
        "cyclic_p2_twist" => {
            let n = pu * pu;
            (cyclic(n), (0..n).map(|x| x * (1 + pu) % n).collect())
        }
        "elem_p2" => (product_table(pu, pu), (0..pu * pu).collect()),
        "heisenberg" => {
            let n = pu * pu;
            let act = (0..n).map(|i| ((i % pu + i / pu) % pu) + pu * (i / pu)).collect();
            (product_table(pu, pu), act)
        }
        "heisenberg_H" => {
            // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab'), index a + p b + p^2 c
            let n = pu * pu * pu;
            let dec = |i: usize| (i % pu, (i / pu) % pu, i / (pu * pu));
            let t = (0..n)
                .map(|i| {
                    let (a, b, c) = dec(i);
                    (0..n)
                        .map(|j| {
                            let (a2, b2, c2) = dec(j);
                            (a + a2) % pu + pu * ((b + b2) % pu) + pu * pu * ((c + c2 + a * b2) % pu)
                        })
                        .collect()
                })
                .collect();
            (t, (0..n).collect())
        }
        "dihedral8" => {
            need_p2(name)?;
            (cyclic(4), vec![0, 3, 2, 1])
        }
        "quaternion8" => {
            need_p2(name)?;
            let t = quaternion_table();
            // x -> i x i^{-1}, i^{-1} = -i = index 5
            let act = (0..8).map(|x| t[t[1][x]][5]).collect();
            (t, act)
        }
        _ => return Err(Error::InvalidGroup(format!("unknown catalog group '{name}'"))),
    };
    Ok(GroupSpec { p, e, f, h_order: table.len(), h_table: table, gamma_action: action })
}
