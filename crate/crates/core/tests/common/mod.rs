#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use iwalog_core::harness::RunConfig;
use iwalog_core::iwasawa::Agreement;
use iwalog_core::twisted::TwistedAlgebra;

/// Groups small enough for many property-test cases: (catalog id, p).
pub const SMALL: &[(&str, u64)] = &[
    ("trivial_H", 2),
    ("trivial_H", 3),
    ("cyclic_p", 2),
    ("cyclic_p", 3),
    ("cyclic_p2", 2),
    ("cyclic_p2_twist", 2),
    ("elem_p2", 2),
    ("heisenberg", 2),
    ("heisenberg", 3),
    ("dihedral8", 2),
];

pub fn config(group: &str, p: u64, f: usize) -> RunConfig {
    RunConfig { group: group.into(), p, f, n: 6, m: 8, lneg: 8, ..RunConfig::default() }
}

/// Algebras are cached so that Howell forms and φ tables are built once per process.
pub fn algebra(group: &str, p: u64, f: usize) -> Arc<TwistedAlgebra> {
    static CACHE: OnceLock<Mutex<HashMap<(String, u64, usize), Arc<TwistedAlgebra>>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry((group.to_string(), p, f))
        .or_insert_with(|| Arc::new(config(group, p, f).build_algebra().unwrap()))
        .clone()
}

pub fn exact(ag: &Agreement) -> bool {
    ag.equal && ag.short == 0
}

pub fn tracked(ag: &Agreement) -> bool {
    ag.equal && ag.digits > 0
}
