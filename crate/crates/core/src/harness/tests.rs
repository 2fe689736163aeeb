use super::*;
use crate::group::CATALOG;

fn small(group: &str, p: u64) -> RunConfig {
    RunConfig { group: group.into(), p, n: 6, m: 8, lneg: 8, trials: 3, deterministic: true, ..RunConfig::default() }
}

#[test]
fn same_seed_same_sample() {
    let alg = small("cyclic_p", 3).build_algebra().unwrap();
    let a = sample_unit(&mut Sampler::for_trial(7, 2), &alg, RingTag::Integral);
    let b = sample_unit(&mut Sampler::for_trial(7, 2), &alg, RingTag::Integral);
    let c = sample_unit(&mut Sampler::for_trial(7, 3), &alg, RingTag::Integral);
    assert!(alg.same_value(&a, &b));
    assert!(!alg.same_value(&a, &c));
}

#[test]
fn samples_are_units() {
    let alg = small("heisenberg", 3).build_algebra().unwrap();
    let mut s = Sampler::new(1);
    for tag in [RingTag::Integral, RingTag::Completed] {
        for _ in 0..5 {
            assert!(alg.is_unit(&sample_unit(&mut s, &alg, tag)));
        }
    }
}

#[test]
fn residues_look_uniform() {
    let alg = small("trivial_H", 3).build_algebra().unwrap();
    let ctx = alg.ctx();
    let mut s = Sampler::new(99);
    let mut counts = [0f64; 3];
    let draws = 10_000;
    for _ in 0..draws {
        counts[(s.o_element(ctx)[0] % 3) as usize] += 1.0;
    }
    let expect = draws as f64 / 3.0;
    let chi2: f64 = counts.iter().map(|c| (c - expect).powi(2) / expect).sum();
    // 2 degrees of freedom, p-value 0.001
    assert!(chi2 < 13.82, "chi2 = {chi2}");
}

#[test]
fn unknown_suite_is_rejected() {
    let cfg = small("trivial_H", 3);
    assert!(matches!(run_suite("no-such-suite", &cfg), Err(Error::InvalidInput(_))));
    let bad = RunConfig { suites: vec!["nope".into()], ..cfg.clone() };
    assert!(bad.validate().is_err());
    let zero = RunConfig { trials: 0, ..cfg };
    assert!(zero.validate().is_err());
}

#[test]
fn bad_group_is_rejected() {
    assert!(small("dihedral8", 3).build_algebra().is_err());
    assert!(small("no_such_group", 3).build_algebra().is_err());
}

#[test]
fn deterministic_reports_are_identical() {
    let cfg = small("cyclic_p", 3);
    let a = run_suite("relation", &cfg).unwrap();
    let b = run_suite("relation", &cfg).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.ms, 0);
    let back: CheckReport = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn every_suite_passes_on_small_groups() {
    for (group, p) in [("trivial_H", 3), ("cyclic_p", 2), ("heisenberg", 2)] {
        let cfg = small(group, p);
        let alg = cfg.build_algebra().unwrap();
        for suite in SUITES {
            let r = run_suite_on(&alg, suite, &cfg).unwrap();
            assert!(r.passed(), "{group} p={p} {suite}: {:?}", r.failures);
            assert_eq!(r.passes, cfg.trials);
        }
    }
}

#[test]
fn exit_codes() {
    let cfg = small("trivial_H", 3);
    let ok = run_suite("log-exp", &cfg).unwrap();
    assert_eq!(exit_code(std::slice::from_ref(&ok)), 0);
    let mut bad = ok.clone();
    bad.failures.push(Failure { trial: 0, check: "exp_log".into(), witness: String::new() });
    assert_eq!(exit_code(&[ok.clone(), bad.clone()]), 1);
    bad.failures.push(Failure { trial: 1, check: "internal".into(), witness: String::new() });
    assert_eq!(exit_code(&[ok, bad]), 3);
}

/// Per-suite wall time on every catalog group; run with --ignored --nocapture.
#[test]
#[ignore]
fn timing_table() {
    for &(group, _) in CATALOG {
        for p in [2u64, 3] {
            let cfg = RunConfig { group: group.into(), p, trials: 2, ..RunConfig::default() };
            let Ok(alg) = cfg.build_algebra() else { continue };
            for suite in SUITES {
                let r = run_suite_on(&alg, suite, &cfg).unwrap();
                println!("{group:16} p={p} {suite:20} {:6} ms  pass={}", r.ms, r.passed());
                if !r.passed() {
                    println!("    {:?}", r.failures);
                }
            }
        }
    }
}
