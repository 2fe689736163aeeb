//! Acceptance gate. Every criterion runs over the whole catalog and prints one
//! PASS/FAIL line; the test fails if any criterion does.

use std::io::Write;
use std::time::{Duration, Instant};

use iwalog_core::harness::{run_suite_on, sample_unit, CheckReport, RunConfig};
use iwalog_core::padic::det::Zpk;
use iwalog_core::padic::{det_berkowitz, det_unit_pivot, zmod, LocalRing};
use iwalog_core::sample::Sampler;
use iwalog_core::twisted::{IdealSpec, RingTag, TwistedAlgebra};
use iwalog_core::Series;

const N: u32 = 8;
const M: usize = 16;
const GUARD: u32 = 4;
const SEED: u64 = 20_240_601;

const TRIALS: usize = 100;
const RELATION_TRIALS: usize = 25;
const MATRICES: usize = 200;
const MAX_DIM: usize = 8;
const PERMUTATIONS: usize = 50;
/// Wall-clock limit for the additive checks on one group.
const ADDITIVE_BUDGET: Duration = Duration::from_secs(60);

const I: RingTag = RingTag::Integral;
const C: RingTag = RingTag::Completed;

fn config(group: &str, p: u64, f: usize, trials: usize) -> RunConfig {
    RunConfig {
        group: group.into(),
        p,
        f,
        n: N,
        m: M,
        lneg: M,
        guard: GUARD,
        trials,
        seed: SEED,
        deterministic: true,
        ..RunConfig::default()
    }
}

struct Case {
    group: &'static str,
    p: u64,
    f: usize,
    alg: TwistedAlgebra,
}

impl Case {
    fn label(&self) -> String {
        format!("{} p={} f={}", self.group, self.p, self.f)
    }

    fn config(&self, trials: usize) -> RunConfig {
        config(self.group, self.p, self.f, trials)
    }

    fn sampler(&self, criterion: u64) -> Sampler {
        Sampler::new(SEED ^ (criterion << 32) ^ (self.p << 8) ^ self.f as u64)
    }
}

fn catalog() -> Vec<Case> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        for f in [1usize, 2] {
            let mut groups = vec!["trivial_H", "cyclic_p", "cyclic_p2", "elem_p2", "heisenberg"];
            if p == 2 {
                groups.extend(["dihedral8", "quaternion8"]);
            }
            for group in groups {
                let alg = config(group, p, f, 1).build_algebra().expect("catalog group builds");
                out.push(Case { group, p, f, alg });
            }
        }
    }
    out
}

/// Failures collected for one criterion.
#[derive(Default)]
struct Outcome {
    checks: usize,
    problems: Vec<String>,
}

impl Outcome {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.problems.push(what());
        }
    }

    fn absorb(&mut self, case: &Case, r: &CheckReport) {
        self.checks += r.trials;
        for f in &r.failures {
            self.problems.push(format!("{}: trial {} [{}] {}", case.label(), f.trial, f.check, f.witness));
        }
    }
}

fn additive_digits(alg: &TwistedAlgebra) -> u32 {
    let ctx = alg.ctx();
    ctx.n - zmod::int_valuation(alg.order() as u64, ctx.p).min(ctx.n)
}

fn exact(ag: &iwalog_core::iwasawa::Agreement) -> bool {
    ag.equal && ag.short == 0
}

/// δ∘β = id on random class-module elements and β∘δ = id on members of ψ^G.
fn additive_theorem(cases: &[Case]) -> Outcome {
    let mut out = Outcome::default();
    for case in cases {
        let alg = &case.alg;
        let d = additive_digits(alg);
        let mut s = case.sampler(1);
        let start = Instant::now();
        for trial in 0..TRIALS {
            let a = alg.to_conj(&s.twisted(alg, I, M));
            let back = alg.delta(&alg.beta(&a).unwrap()).unwrap();
            out.check(exact(&alg.conj_agree(&back, &a, d, M as i32)), || format!("{}: δβ ≠ id at trial {trial}", case.label()));
            let member = alg.beta(&alg.to_conj(&s.twisted(alg, I, M))).unwrap();
            let again = alg.beta(&alg.delta(&member).unwrap()).unwrap();
            let same = again.components.iter().zip(&member.components).all(|(x, y)| exact(&alg.agree(x, y, d, M as i32)));
            out.check(same, || format!("{}: βδ ≠ id at trial {trial}", case.label()));
        }
        let spent = start.elapsed();
        out.check(spent < ADDITIVE_BUDGET, || format!("{}: took {spent:?}", case.label()));
    }
    out
}

/// β-images satisfy A1–A3, and adding a term outside the trace ideal is caught.
fn psi_conditions(cases: &[Case]) -> Outcome {
    let mut out = Outcome::default();
    for case in cases {
        let alg = &case.alg;
        let l = &alg.group.lattice;
        let mut s = case.sampler(2);
        for trial in 0..TRIALS {
            let t = alg.beta(&alg.to_conj(&s.twisted(alg, I, M))).unwrap();
            let rep = alg.psi_check(&t).unwrap();
            out.check(rep.passed(), || format!("{}: trial {trial}: {}", case.label(), rep.witnesses.join("; ")));
            // a random element of R[P]^τ outside T_P, on a random P with
            // nontrivial Weyl group; 1̄ is never in T_P there
            let movable: Vec<usize> = (0..l.len()).filter(|&q| l.weyl_order(q) > 1).collect();
            let q = movable[s.below(movable.len() as u64) as usize];
            let bad_term = (0..16)
                .map(|_| {
                    let terms: Vec<(usize, Series)> =
                        l.subgroups[q].elements.iter().map(|&h| (h, s.series(alg.ctx(), 3))).collect();
                    alg.with_support(&alg.from_coeffs(I, &terms), q).unwrap()
                })
                .find(|x| !alg.trace_ideal_membership(x, q, 0).unwrap())
                .unwrap_or_else(|| alg.with_support(&alg.one(I), q).unwrap());
            let mut bad = t.clone();
            bad.components[q] = alg.with_support(&alg.add(&bad.components[q], &bad_term), q).unwrap();
            out.check(!alg.psi_check(&bad).unwrap().passed(), || {
                format!("{}: trial {trial}: mutation at subgroup {q} not caught", case.label())
            });
        }
    }
    out
}

fn suite(cases: &[Case], name: &str, trials: usize) -> Outcome {
    let mut out = Outcome::default();
    for case in cases {
        let r = run_suite_on(&case.alg, name, &case.config(trials)).unwrap();
        out.absorb(case, &r);
    }
    out
}

/// exp∘log = id on 1 + pJ and log is additive modulo commutators.
fn log_exp(cases: &[Case]) -> Outcome {
    suite(cases, "log-exp", TRIALS)
}

/// L(x) is p-integral, vanishes on ζ·ḡ for abelian G, and ω(L(x)) = 1.
fn integral_log(cases: &[Case]) -> Outcome {
    suite(cases, "integral-log", TRIALS)
}

/// β_P(L(x)) = ℒ_P(θ(x)) for every P at N − v_p|G| − 1 digits.
fn relation(cases: &[Case]) -> Outcome {
    let mut out = suite(cases, "relation", RELATION_TRIALS);
    for case in cases {
        let want = N.saturating_sub(zmod::int_valuation(case.alg.order() as u64, case.p) + 1);
        out.check(case.alg.relation_digits() == want, || format!("{}: compared at the wrong precision", case.label()));
    }
    out
}

/// θ(x) satisfies M1–M3 in both rings; for G = Z/p the congruence at the
/// trivial subgroup is the classical one modulo p².
fn theta_congruences(cases: &[Case]) -> Outcome {
    let mut out = suite(cases, "theta-congruences", TRIALS);
    for case in cases.iter().filter(|c| c.group == "trivial_H") {
        let alg = &case.alg;
        let p = case.p;
        let triv = alg.group.lattice.trivial();
        let pp = p * p;
        let mut s = case.sampler(6);
        for trial in 0..TRIALS {
            let x = sample_unit(&mut s, alg, I);
            let alpha = alg.alpha_tuple(&alg.theta(&x).unwrap()).unwrap();
            let d = alg.sub(&alpha.components[triv], &alg.u_map(&alpha, triv).unwrap());
            let ok = d.denom_exp() == 0 && d.block().data.iter().all(|&v| v % pp == 0);
            out.check(ok, || format!("{}: trial {trial}: α₁ − u₁ not divisible by p²", case.label()));
        }
    }
    out
}

/// Laurent units satisfy y^p ≡ φ(y) mod p; the splitting x = u·y; L̂.
fn completed_ring(cases: &[Case]) -> Outcome {
    let mut out = suite(cases, "hat-ring", TRIALS);
    // the splitting must reproduce x with nothing but the product in between
    for case in cases {
        let alg = &case.alg;
        let mut s = case.sampler(7);
        for trial in 0..10 {
            let x = sample_unit(&mut s, alg, C);
            let sp = alg.split_unit_hat(&x).unwrap();
            let back = alg.mul(&sp.u, &sp.y).unwrap();
            let ag = alg.agree(&back, &x, N, M as i32 / 2);
            out.check(ag.equal && ag.digits > 0, || format!("{}: trial {trial}: split does not reconstruct", case.label()));
        }
    }
    out
}

fn random_invertible(s: &mut Sampler, r: &Zpk, n: usize) -> Vec<Vec<u64>> {
    loop {
        let a: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| s.below(r.m)).collect()).collect();
        if r.is_unit(&det_berkowitz(r, &a).unwrap()) {
            return a;
        }
    }
}

/// Independent algorithms agree: two determinants, traces under reordered
/// coset representatives, twisted powers against repeated multiplication.
fn oracles(cases: &[Case]) -> Outcome {
    let mut out = Outcome::default();
    for p in [2u64, 3] {
        let r = Zpk { p, m: p.pow(N + GUARD) };
        let mut s = Sampler::new(SEED ^ p);
        for i in 0..MATRICES {
            let n = 1 + i % MAX_DIM;
            let a = random_invertible(&mut s, &r, n);
            let (d1, d2) = (det_berkowitz(&r, &a).unwrap(), det_unit_pivot(&r, &a).unwrap());
            out.check(d1 == d2, || format!("p={p}: {n}×{n} determinants {d1} vs {d2}"));
        }
    }
    for case in cases {
        let alg = &case.alg;
        let g = &alg.group;
        let l = &g.lattice;
        let mut s = case.sampler(8);
        for (q, sub) in l.subgroups.iter().enumerate() {
            let a = alg.to_conj(&s.twisted(alg, I, M));
            let reference = alg.trace_to_subgroup(&a, q).unwrap();
            for k in 0..PERMUTATIONS {
                let mut reps: Vec<usize> = l.coset_reps[q]
                    .iter()
                    .map(|&x| g.mul(x, sub.elements[s.below(sub.order as u64) as usize]))
                    .collect();
                for i in (1..reps.len()).rev() {
                    reps.swap(i, s.below(i as u64 + 1) as usize);
                }
                let t = alg.trace_to_subgroup_with_reps(&a, q, &reps).unwrap();
                out.check(alg.same_value(&t, &reference), || format!("{}: subgroup {q}, permutation {k}", case.label()));
            }
        }
        let ctx = alg.ctx();
        let one_t = Series::from_int_coeffs(ctx, 0, &[1, 1]);
        for h in 0..alg.order() {
            let base = alg.basis(h, I);
            let mut iterated = alg.one(I);
            for k in 1..=case.p * case.p {
                iterated = alg.mul(&iterated, &base).unwrap();
                let (c, hk) = alg.twisted_power_class(h, k);
                let closed = alg.scale(&alg.basis(hk, I), &one_t.pow(ctx, c));
                out.check(alg.same_value(&iterated, &closed), || format!("{}: ḡ^{k} for g = {h}", case.label()));
            }
        }
        // commutator test is used by the log/exp criterion; sanity-check it here too
        let x = s.twisted(alg, I, 4);
        let y = s.twisted(alg, I, 4);
        let c = alg.sub(&alg.mul(&x, &y).unwrap(), &alg.mul(&y, &x).unwrap());
        out.check(alg.commutator_membership(&c, IdealSpec::Full).unwrap(), || format!("{}: [x, y]", case.label()));
    }
    out
}

#[test]
fn acceptance() {
    let cases = catalog();
    let criteria: [(&str, fn(&[Case]) -> Outcome); 8] = [
        ("additive theorem", additive_theorem),
        ("psi conditions and mutations", psi_conditions),
        ("log and exp", log_exp),
        ("integral logarithm", integral_log),
        ("relation between the two sides", relation),
        ("theta congruences", theta_congruences),
        ("completed ring", completed_ring),
        ("oracle cross-checks", oracles),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run(&cases);
        let status = if o.problems.is_empty() { "PASS" } else { "FAIL" };
        // written to the handle directly so the summary survives output capture
        writeln!(
            stdout,
            "criterion {}: {status}  {name}  ({} checks, {} failures, {:.1} s)",
            i + 1,
            o.checks,
            o.problems.len(),
            start.elapsed().as_secs_f64()
        )
        .unwrap();
        for p in o.problems.iter().take(5) {
            writeln!(stdout, "    {p}").unwrap();
        }
        if !o.problems.is_empty() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
