use super::{run_trials, sample_unit, Failure, RunConfig, Trial};
use crate::error::Result;
use crate::iwasawa::{Agreement, Series};
use crate::padic::det::Zpk;
use crate::padic::{det_berkowitz, det_unit_pivot, zmod, LocalRing};
use crate::sample::Sampler;
use crate::twisted::{IdealSpec, RingTag, TwistedAlgebra, TwistedRingElement};

const I: RingTag = RingTag::Integral;
const C: RingTag = RingTag::Completed;

fn fail(check: &str, witness: impl Into<String>) -> Result<Trial> {
    Ok(Some((check.to_string(), witness.into())))
}

fn describe(ag: &Agreement) -> String {
    match ag.mismatch {
        Some((slot, deg)) => format!("first difference at slot {slot}, degree {deg}"),
        None => format!("only {} digits available", ag.digits),
    }
}

/// Equal on every compared digit, with the requested digits available.
fn exact(ag: &Agreement) -> bool {
    ag.equal && ag.short == 0
}

/// Equal on every tracked digit. In the completed ring truncation above
/// degree M costs precision at lower degrees, so fewer than the requested
/// digits may be available; at least one is required everywhere.
fn tracked(ag: &Agreement) -> bool {
    ag.equal && ag.digits > 0
}

fn degree_cap(alg: &TwistedAlgebra) -> i32 {
    alg.ctx().m as i32
}

fn half_cap(alg: &TwistedAlgebra) -> i32 {
    alg.ctx().m as i32 / 2
}

/// Digits available after dividing by an index [G:P].
fn additive_digits(alg: &TwistedAlgebra) -> u32 {
    let ctx = alg.ctx();
    ctx.n - zmod::int_valuation(alg.order() as u64, ctx.p).min(ctx.n)
}

pub(super) fn dispatch(alg: &TwistedAlgebra, name: &str, cfg: &RunConfig) -> (Vec<Failure>, u32) {
    let n = alg.ctx().n;
    match name {
        "additive-iso" => (run_trials(alg, cfg, name, additive_iso), additive_digits(alg)),
        "log-exp" => (run_trials(alg, cfg, name, log_exp), n),
        "integral-log" => (run_trials(alg, cfg, name, integral_log), alg.relation_digits()),
        "relation" => (run_trials(alg, cfg, name, relation), alg.relation_digits()),
        "theta-congruences" => (run_trials(alg, cfg, name, theta_congruences), n),
        "hat-ring" => (run_trials(alg, cfg, name, hat_ring), alg.relation_digits()),
        "omega-exactness" => (run_trials(alg, cfg, name, omega_exactness), n),
        "oracle-crosschecks" => (run_trials(alg, cfg, name, oracle_crosschecks), n),
        _ => unreachable!("suite names are checked by the caller"),
    }
}

fn additive_iso(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let m = alg.ctx().m;
    let d = additive_digits(alg);
    let a = alg.to_conj(&s.twisted(alg, I, m));
    let t = alg.beta(&a)?;
    let rep = alg.psi_check(&t)?;
    if !rep.passed() {
        return fail("beta_in_psi", rep.witnesses.join("; "));
    }
    let back = alg.delta(&t)?;
    let ag = alg.conj_agree(&back, &a, d, degree_cap(alg));
    if !exact(&ag) {
        return fail("delta_beta", describe(&ag));
    }
    let member = alg.beta(&alg.to_conj(&s.twisted(alg, I, m)))?;
    let again = alg.beta(&alg.delta(&member)?)?;
    for (sub, (x, y)) in again.components.iter().zip(&member.components).enumerate() {
        let ag = alg.agree(x, y, d, degree_cap(alg));
        if !exact(&ag) {
            return fail("beta_delta", format!("subgroup {sub}: {}", describe(&ag)));
        }
    }
    // 1̄ is outside T_P whenever |W_G P| > 1
    let l = &alg.group.lattice;
    let targets: Vec<usize> = (0..l.len()).filter(|&q| l.weyl_order(q) > 1).collect();
    if !targets.is_empty() {
        let q = targets[s.below(targets.len() as u64) as usize];
        let mut bad = member.clone();
        bad.components[q] = TwistedRingElement { support: Some(q), ..alg.add(&bad.components[q], &alg.one(I)) };
        if alg.psi_check(&bad)?.passed() {
            return fail("psi_mutation", format!("adding 1 at subgroup {q} was not detected"));
        }
    }
    Ok(None)
}

fn p_radical(alg: &TwistedAlgebra, s: &mut Sampler) -> TwistedRingElement {
    alg.mul_p(&s.radical(alg, alg.ctx().m), 1)
}

fn log_exp(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let one = alg.one(I);
    let x = p_radical(alg, s);
    let y = p_radical(alg, s);
    let lx = alg.log_one_plus(&x, IdealSpec::PJ)?;
    let e = alg.exp_ideal(&lx)?;
    let ag = alg.agree(&e, &alg.add(&one, &x), alg.ctx().n, degree_cap(alg));
    if !exact(&ag) {
        return fail("exp_log", describe(&ag));
    }
    let ly = alg.log_one_plus(&y, IdealSpec::PJ)?;
    let xy = alg.sub(&alg.m(&alg.add(&one, &x), &alg.add(&one, &y)), &one);
    let lxy = alg.log_one_plus(&xy, IdealSpec::PJ)?;
    let d = alg.sub(&lxy, &alg.add(&lx, &ly));
    if !alg.commutator_membership(&d, IdealSpec::PJ)? {
        return fail("log_additive", "log(1+x)(1+y) − log(1+x) − log(1+y) is not in the commutator submodule");
    }
    Ok(None)
}

fn integral_log(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let ctx = alg.ctx();
    let x = sample_unit(s, alg, I);
    let l = alg.integral_log_l(&x)?;
    if l.denom_exp() != 0 {
        return fail("integrality", format!("denominator p^{}", l.denom_exp()));
    }
    let w = alg.omega_cokernel(&l)?;
    if !w.is_identity() {
        return fail("omega", format!("ω(L(x)) = {w:?}"));
    }
    if alg.group.is_abelian() {
        let g = s.below(alg.order() as u64) as usize;
        let z = ctx.o.teichmuller(&s.residue_unit(ctx))?;
        let lg = alg.integral_log_l(&alg.scale_o(&alg.basis(g, I), &z))?;
        if !lg.is_zero() {
            return fail("kernel", format!("L(ζ·g) ≠ 0 for g = {g}"));
        }
    }
    Ok(None)
}

fn relation(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let x = sample_unit(s, alg, I);
    let rep = alg.relation_check(&x)?;
    if !rep.passed {
        return fail("beta_L_equals_script_L", rep.witnesses.join("; "));
    }
    Ok(None)
}

fn theta_congruences(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let x = sample_unit(s, alg, I);
    let t = alg.theta(&x)?;
    let rep = alg.phi_check(&t)?;
    if !rep.passed() {
        return fail("phi_integral", rep.witnesses.join("; "));
    }
    let rep = alg.phi_check(&alg.retag_tuple(&t, C))?;
    if !rep.passed() {
        return fail("phi_completed", rep.witnesses.join("; "));
    }
    Ok(None)
}

fn hat_ring(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let ctx = alg.ctx();
    let half = half_cap(alg);
    let triv = alg.group.lattice.trivial();
    let y = alg.scalar(&s.laurent_unit(ctx, 4, ctx.m), C);
    if !alg.is_one_mod_p(&alg.alpha(&y, triv)?) {
        return fail("frobenius_mod_p", "y^p/φ(y) is not 1 mod p");
    }
    let x = sample_unit(s, alg, C);
    let sp = alg.split_unit_hat(&x)?;
    let ag = alg.agree(&alg.m(&sp.u, &sp.y), &x, ctx.n, half);
    if !tracked(&ag) {
        return fail("split_reconstructs", describe(&ag));
    }
    let ag = alg.agree(&alg.gamma_projection(&sp.u), &alg.one(C), ctx.n, half);
    if !tracked(&ag) {
        return fail("split_u_in_1_plus_j", describe(&ag));
    }
    let lh = alg.integral_log_hat(&x)?;
    if lh.denom_exp() != 0 {
        return fail("hat_integrality", format!("denominator p^{}", lh.denom_exp()));
    }
    let xi = sample_unit(s, alg, I);
    let ag = alg.conj_agree(&alg.integral_log_hat(&xi)?, &alg.integral_log_l(&xi)?, alg.relation_digits(), half);
    if !exact(&ag) {
        return fail("hat_matches_integral", describe(&ag));
    }
    Ok(None)
}

fn omega_exactness(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let ctx = alg.ctx();
    let g = &alg.group;
    let x = sample_unit(s, alg, I);
    let w = alg.omega_cokernel(&alg.integral_log_l(&x)?)?;
    if !w.is_identity() {
        return fail("omega_of_image", format!("ω(L(x)) = {w:?}"));
    }
    // ω([ḡ]) = ((−1)^{p−1}, ḡ) and ω is additive
    let h = s.below(alg.order() as u64) as usize;
    let wg = alg.omega_cokernel(&alg.conj_basis(h, I))?;
    let sign = ((ctx.p - 1) % 2) as u8;
    if wg.sign_exp != sign || wg.abelian_part != g.ab.map(h) {
        return fail("omega_basis", format!("ω([{h}]) = {wg:?}"));
    }
    let a = alg.to_conj(&s.twisted(alg, I, 3));
    let b = alg.to_conj(&s.twisted(alg, I, 3));
    let (wa, wb, wab) = (alg.omega_cokernel(&a)?, alg.omega_cokernel(&b)?, alg.omega_cokernel(&alg.conj_add(&a, &b))?);
    let orders = &g.ab.orders;
    let sum: Vec<usize> = (0..orders.len()).map(|i| (wa.abelian_part[i] + wb.abelian_part[i]) % orders[i]).collect();
    if wab.abelian_part != sum || wab.sign_exp != (wa.sign_exp + wb.sign_exp) % 2 {
        return fail("omega_additive", "ω(a + b) ≠ ω(a)·ω(b)");
    }
    Ok(None)
}

fn random_invertible(s: &mut Sampler, r: &Zpk, n: usize) -> Vec<Vec<u64>> {
    loop {
        let a: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| s.below(r.m)).collect()).collect();
        if det_berkowitz(r, &a).map_or(false, |d| r.is_unit(&d)) {
            return a;
        }
    }
}

fn oracle_crosschecks(alg: &TwistedAlgebra, s: &mut Sampler, _: usize) -> Result<Trial> {
    let ctx = alg.ctx();
    let g = &alg.group;
    let l = &g.lattice;
    let r = Zpk { p: ctx.p, m: ctx.pk };
    for _ in 0..2 {
        let n = 1 + s.below(8) as usize;
        let a = random_invertible(s, &r, n);
        let (d1, d2) = (det_berkowitz(&r, &a)?, det_unit_pivot(&r, &a)?);
        if d1 != d2 {
            return fail("determinants", format!("{n}×{n}: Berkowitz {d1}, elimination {d2}"));
        }
    }
    let a = alg.to_conj(&s.twisted(alg, I, 4));
    for q in 0..l.len() {
        let sub = &l.subgroups[q];
        let mut reps: Vec<usize> = l.coset_reps[q]
            .iter()
            .map(|&x| g.mul(x, sub.elements[s.below(sub.order as u64) as usize]))
            .collect();
        for i in (1..reps.len()).rev() {
            reps.swap(i, s.below(i as u64 + 1) as usize);
        }
        let t1 = alg.trace_to_subgroup(&a, q)?;
        let t2 = alg.trace_to_subgroup_with_reps(&a, q, &reps)?;
        if !alg.same_value(&t1, &t2) {
            return fail("trace_representatives", format!("subgroup {q}, representatives {reps:?}"));
        }
    }
    let h = s.below(alg.order() as u64) as usize;
    let base = alg.basis(h, I);
    let one_t = Series::from_int_coeffs(ctx, 0, &[1, 1]);
    let mut acc = alg.one(I);
    for k in 0..=ctx.p * ctx.p {
        let (c, gk) = alg.twisted_power_class(h, k);
        let expect = alg.scale(&alg.basis(gk, I), &one_t.pow(ctx, c));
        if !alg.same_value(&acc, &expect) {
            return fail("twisted_power", format!("element {h}, exponent {k}"));
        }
        acc = alg.mul(&acc, &base)?;
    }
    Ok(None)
}
