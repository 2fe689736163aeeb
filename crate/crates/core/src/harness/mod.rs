//! Run configuration, verification suites and JSON reports.

mod suites;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::context::{ArithmeticContext, ContextParams};
use crate::error::{Error, Result};
use crate::group::{catalog_spec, GroupG, GroupSpec};
use crate::sample::Sampler;
use crate::twisted::{RingTag, TwistedAlgebra, TwistedRingElement};

pub const SUITES: &[&str] = &[
    "additive-iso",
    "log-exp",
    "integral-log",
    "relation",
    "theta-congruences",
    "hat-ring",
    "omega-exactness",
    "oracle-crosschecks",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Catalog id or path to a group file.
    pub group: String,
    pub p: u64,
    pub e: u32,
    pub f: usize,
    pub n: u32,
    pub m: usize,
    pub lneg: usize,
    pub guard: u32,
    pub suites: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    /// Writes 0 for wall time so that reports are byte-identical across runs.
    #[serde(default)]
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: "trivial_H".into(),
            p: 3,
            e: 1,
            f: 1,
            n: 8,
            m: 16,
            lneg: 16,
            guard: 4,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            trials: 100,
            seed: 42,
            deterministic: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("trials must be at least 1".into()));
        }
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return Err(Error::InvalidInput(format!("unknown suite '{s}'")));
            }
        }
        Ok(())
    }

    pub fn context_params(&self) -> ContextParams {
        ContextParams { p: self.p, f: self.f, e: self.e, n: self.n, m: self.m, lneg: self.lneg, guard: self.guard, modulus: None }
    }

    /// The group spec named by `group`: a catalog id, or a JSON file path.
    pub fn group_spec(&self) -> Result<GroupSpec> {
        let path = Path::new(&self.group);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", self.group)))?;
            let spec = GroupSpec::from_json(&text)?;
            if spec.p != self.p || spec.e != self.e {
                return Err(Error::InvalidInput(format!(
                    "group file has p = {}, e = {} but the run uses p = {}, e = {}",
                    spec.p, spec.e, self.p, self.e
                )));
            }
            return Ok(GroupSpec { f: self.f, ..spec });
        }
        catalog_spec(&self.group, self.p, self.e, self.f)
    }

    pub fn build_algebra(&self) -> Result<TwistedAlgebra> {
        let ctx = ArithmeticContext::new(&self.context_params())?;
        let group = GroupG::build(&self.group_spec()?)?;
        TwistedAlgebra::new(ctx, group)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub trial: usize,
    pub check: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub config: RunConfig,
    pub trials: usize,
    pub passes: usize,
    pub failures: Vec<Failure>,
    pub precision_effective: u32,
    pub ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// True when some trial hit an internal consistency failure.
    pub fn internal_failure(&self) -> bool {
        self.failures.iter().any(|f| f.check == "internal")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// 0 when every trial passed, 3 on an internal consistency failure, 1 otherwise.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.internal_failure()) {
        3
    } else if reports.iter().all(|r| r.passed()) {
        0
    } else {
        1
    }
}

/// A unit: Teichmüller scalar times 1 + (element of J) in the integral ring,
/// or a random unit of the completed ring.
pub fn sample_unit(s: &mut Sampler, alg: &TwistedAlgebra, tag: RingTag) -> TwistedRingElement {
    let deg = alg.ctx().m;
    match tag {
        RingTag::Integral => s.integral_unit(alg, deg),
        RingTag::Completed => s.completed_unit(alg, deg),
    }
}

/// Outcome of one trial: `None` on success, otherwise the failing check.
pub(crate) type Trial = Option<(String, String)>;

pub(crate) fn run_trials(
    alg: &TwistedAlgebra,
    cfg: &RunConfig,
    suite: &str,
    body: impl Fn(&TwistedAlgebra, &mut Sampler, usize) -> Result<Trial>,
) -> Vec<Failure> {
    let mut failures = Vec::new();
    // distinct suites draw from distinct streams
    let offset = SUITES.iter().position(|s| *s == suite).unwrap_or(0) as u64 * 1_000_003;
    for trial in 0..cfg.trials {
        let mut s = Sampler::for_trial(cfg.seed.wrapping_add(offset), trial as u64);
        let outcome = match body(alg, &mut s, trial) {
            Ok(None) => continue,
            Ok(Some((check, witness))) => (check, witness),
            Err(Error::Internal(w)) => ("internal".to_string(), w),
            Err(e) => ("error".to_string(), e.to_string()),
        };
        failures.push(Failure { trial, check: outcome.0, witness: outcome.1 });
    }
    failures
}

/// Runs one suite on an already built algebra.
pub fn run_suite_on(alg: &TwistedAlgebra, name: &str, cfg: &RunConfig) -> Result<CheckReport> {
    if !SUITES.contains(&name) {
        return Err(Error::InvalidInput(format!("unknown suite '{name}'")));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let start = Instant::now();
    let (failures, digits) = suites::dispatch(alg, name, cfg);
    let ms = if cfg.deterministic { 0 } else { start.elapsed().as_millis() as u64 };
    Ok(CheckReport {
        suite: name.to_string(),
        config: RunConfig { suites: vec![name.to_string()], ..cfg.clone() },
        trials: cfg.trials,
        passes: cfg.trials - failures.len(),
        failures,
        precision_effective: digits,
        ms,
    })
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let alg = cfg.build_algebra()?;
    run_suite_on(&alg, name, cfg)
}

#[cfg(test)]
mod tests;
