//! The thirteen verification suites. Draws are taken sequentially from the
//! suite's stream; the checks then run in parallel and are collected in draw
//! order.

use std::time::{Instant, SystemTime, UNIX_EPOCH};

use heunkit_core::gauss::{apply_gauss_rule, close_gauss, compose_gauss_rules, kummer_rules, GaussRule};
use heunkit_core::heun::{
    apply_hl_rule, derivative_identity_check, generate_hl_group, mobius_hl_rules, qbar_of, rule_domain_ok, HlRule,
};
use heunkit_core::hyper3f2::{
    bailey_involution_check, bailey_slater_check, dual_psymbols, euler_like_rule, f32_rule_residual,
    family_stability_check, pfaff_like_rule, reduce_to_2f1, restricted_group, shared_exponents,
    very_well_poised_reduction, F32Rule, Restricted3F2Params,
};
use heunkit_core::numeric::classify::{forward_2term, forward_3term};
use heunkit_core::psymbol::{
    derivative_symbol, f_homotopy, fuchs_sum, mobius_lift, normalize, MobiusMap, PSymbol, SpherePoint,
};
use heunkit_core::quadratic::{
    biquad_map_s, biquad_map_s_forms, biquadratic_psymbol_check, biquadratic_rule, constraint_residual,
    h_duplication_check, lift_from_t, quad_map_r, quadratic_psymbol_check, quadratic_rule, QuadraticLiftData,
};
use heunkit_core::reduction::{
    c2_consistency, contiguity_residual, curve_point, curve_residual, difference_factorization_residual,
    differential_factorization_residual, eval_g, g_two_representations, ApparentCurvePoint,
};
use heunkit_core::scalar::{dist_to_nonpositive_integer, lex_cmp, mixed_diff, r, rel_diff};
use heunkit_core::{
    check_domain, classify_2term, classify_3term, eval_2f1, eval_3f2, eval_hl, EvalPolicy, GaussParams, HeunError,
    HeunParams, ThreeF2Params, C64,
};
use rayon::prelude::*;

use crate::plan::SamplePlan;
use crate::report::{IdentityCase, IdentityReport, Meta, SuiteCases};
use crate::sampling::{Sampler, POLE_GAP};
use crate::VerifyError;

type SuiteFn = fn(&SamplePlan, &mut Sampler) -> Vec<Job>;

/// Suite names in execution order. The position doubles as the RNG stream.
pub const SUITES: [(&str, SuiteFn); 13] = [
    ("gauss", gauss),
    ("heun-group", heun_group),
    ("quadratic", quadratic),
    ("biquadratic", biquadratic),
    ("h-dup", h_dup),
    ("reduction", reduction),
    ("factorization", factorization),
    ("f32-pfaff", f32_pfaff),
    ("f32-euler", f32_euler),
    ("f32-corollaries", f32_corollaries),
    ("derivative", derivative),
    ("classifier", classifier),
    ("psymbol", psymbol),
];

pub const IDENTITY_TOL: f64 = 1e-9;
pub const QBAR_TOL: f64 = 1e-10;
pub const REDUCTION_TOL: f64 = 1e-10;
pub const EXACT_TOL: f64 = 1e-12;

const MAX_ATTEMPTS: usize = 100_000;

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

pub fn run_suite(name: &str, plan: &SamplePlan) -> Result<IdentityReport, VerifyError> {
    run_suites(&[name], plan)
}

pub fn run_all(plan: &SamplePlan) -> Result<IdentityReport, VerifyError> {
    let names: Vec<&str> = suite_names().collect();
    run_suites(&names, plan)
}

pub fn run_suites(names: &[&str], plan: &SamplePlan) -> Result<IdentityReport, VerifyError> {
    plan.validate()?;
    let mut picked = Vec::with_capacity(names.len());
    for n in names {
        let idx = SUITES.iter().position(|(s, _)| s == n).ok_or_else(|| VerifyError::UnknownSuite(n.to_string()))?;
        picked.push(idx);
    }
    let start = Instant::now();
    let suites = picked
        .into_iter()
        .map(|idx| {
            let (name, f) = SUITES[idx];
            let mut s = Sampler::new(plan, idx as u64);
            let jobs = f(plan, &mut s);
            let cases = jobs.into_par_iter().map(|j| j.run(name, plan)).collect();
            SuiteCases { name: name.into(), cases }
        })
        .collect();
    let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = Meta { timestamp_unix, wall_time_seconds: start.elapsed().as_secs_f64() };
    Ok(IdentityReport::new(*plan, suites, meta))
}

type Check = Box<dyn Fn() -> heunkit_core::Result<f64> + Send + Sync>;

pub struct Job {
    rule: String,
    params: Vec<(String, C64)>,
    point: Option<C64>,
    tol: f64,
    check: Check,
}

impl Job {
    fn new(
        rule: impl Into<String>,
        params: &[(&str, C64)],
        point: Option<C64>,
        tol: f64,
        check: impl Fn() -> heunkit_core::Result<f64> + Send + Sync + 'static,
    ) -> Self {
        let params = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Self { rule: rule.into(), params, point, tol, check: Box::new(check) }
    }

    /// A yes/no property: residual 0 when it holds, 1 otherwise.
    fn property(rule: impl Into<String>, params: &[(&str, C64)], holds: bool) -> Self {
        Self::new(rule, params, None, 0.0, move || Ok(if holds { 0.0 } else { 1.0 }))
    }

    fn run(self, suite: &str, plan: &SamplePlan) -> IdentityCase {
        let outcome = (self.check)().map_err(|e| e.to_string());
        IdentityCase::new(suite, self.rule, self.params, self.point, outcome, plan.tol(self.tol))
    }
}

fn pol() -> EvalPolicy {
    EvalPolicy::default()
}

/// Parameter or point choices that the identity excludes, as opposed to
/// numerical failures.
fn inadmissible(e: &HeunError) -> bool {
    matches!(
        e,
        HeunError::InvalidParameter(_)
            | HeunError::Domain { .. }
            | HeunError::Degenerate(_)
            | HeunError::Puncture(_)
            | HeunError::Pole(_)
            | HeunError::SingularEMap(_)
            | HeunError::ZeroLeadingCoefficient
    )
}

fn redraw<T>(s: &mut Sampler, what: &str, mut draw: impl FnMut(&mut Sampler) -> Option<T>) -> T {
    for _ in 0..MAX_ATTEMPTS {
        if let Some(v) = draw(s) {
            return v;
        }
    }
    panic!("no admissible {what} after {MAX_ATTEMPTS} attempts")
}

/// Halves x until `ok` accepts it; None once |x| drops below 1e-6.
fn shrink(mut x: C64, ok: impl Fn(C64) -> bool) -> Option<C64> {
    while !ok(x) {
        x *= 0.5;
        if x.norm() < 1e-6 {
            return None;
        }
    }
    Some(x)
}

/// Draws x in the disk of `radius` and shrinks it on domain errors of `check`.
/// None when the check rejects the parameters themselves.
fn admissible_point(s: &mut Sampler, radius: f64, check: impl Fn(C64) -> heunkit_core::Result<f64>) -> Option<C64> {
    let mut x = s.point(radius);
    loop {
        match check(x) {
            Err(HeunError::Domain { .. }) => {
                x *= 0.5;
                if x.norm() < 1e-6 {
                    return None;
                }
            }
            Err(e) if inadmissible(&e) => return None,
            _ => return Some(x),
        }
    }
}

fn heun_named(p: &HeunParams) -> Vec<(&'static str, C64)> {
    vec![("a", p.a), ("q", p.q), ("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma), ("delta", p.delta)]
}

fn f32_named(p: &Restricted3F2Params) -> Vec<(&'static str, C64)> {
    vec![("a1", p.a1), ("a2", p.a2), ("b1", p.b1), ("e", p.e)]
}

fn gauss_chain_ok(rule: &GaussRule, x: C64) -> bool {
    let mut y = x;
    for st in &rule.steps {
        if check_domain(y, 1.0, &pol()).is_err() {
            return false;
        }
        y = st.arg(y);
    }
    check_domain(y, 1.0, &pol()).is_ok()
}

fn f32_chain_ok(rule: &F32Rule, p: &Restricted3F2Params, x: C64) -> bool {
    let mut y = x;
    for st in &rule.steps {
        if check_domain(y, 1.0, &pol()).is_err() {
            return false;
        }
        y = st.arg(y);
    }
    check_domain(y, 1.0, &pol()).is_ok() && rule.transform(p, x).is_ok()
}

fn gauss(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for rule in kummer_rules(true) {
        for _ in 0..plan.draws_per_rule {
            let (p, x) = redraw(s, "2F1 draw", |s| {
                let p = GaussParams::new(s.param(), s.param(), s.lower_param());
                p.validate().ok()?;
                let x = shrink(s.point(1.0), |x| gauss_chain_ok(&rule, x))?;
                Some((p, x))
            });
            let rl = rule.clone();
            let named = [("alpha", p.alpha), ("beta", p.beta), ("gamma", p.gamma)];
            jobs.push(Job::new(format!("{} {}", rule.label, rule.name), &named, Some(x), IDENTITY_TOL, move || {
                Ok(rel_diff(eval_2f1(&p, x, &pol())?, apply_gauss_rule(&rl, &p, x, &pol())?))
            }));
        }
    }
    let order = close_gauss(&kummer_rules(true), 64).map(|g| g.len());
    jobs.push(Job::new("closure order 8", &[], None, 0.0, move || order.clone().map(|n| (n as f64 - 8.0).abs())));
    let d2 = kummer_rules(false);
    for rule in &d2[1..] {
        let sq = compose_gauss_rules(rule, rule);
        jobs.push(Job::property(format!("involution {}", rule.name), &[], sq.label.is_identity()));
    }
    // D2 = {id, e, p, t}: the product of two distinct involutions is the third
    for (i, ri) in d2.iter().enumerate().skip(1) {
        for (j, rj) in d2.iter().enumerate().skip(1) {
            let want = if i == j { 0 } else { 6 - i - j };
            let got = compose_gauss_rules(ri, rj);
            jobs.push(Job::property(
                format!("klein table {} . {}", ri.name, rj.name),
                &[],
                got.label == d2[want].label,
            ));
        }
    }
    jobs
}

fn heun_admissible_x(s: &mut Sampler, rule: &HlRule, p: &HeunParams) -> Option<C64> {
    shrink(s.point(p.radius()), |x| rule_domain_ok(rule, p, x, &pol()).is_ok())
}

fn heun_group(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    let group = match generate_hl_group() {
        Ok(g) => g,
        Err(e) => {
            jobs.push(Job::new("closure order 24", &[], None, 0.0, move || Err(e.clone())));
            return jobs;
        }
    };
    jobs.push(Job::new("closure order 24", &[], None, 0.0, {
        let n = group.len() as f64;
        move || Ok((n - 24.0).abs())
    }));
    let odd = group.iter().filter(|g| !g.label.is_even_signed()).count();
    jobs.push(Job::property("labels even-signed", &[], odd == 0));
    for rule in &group {
        for _ in 0..plan.draws_per_rule {
            let (p, x) = redraw(s, "Hl draw", |s| {
                let p = s.heun_params();
                let x = heun_admissible_x(s, rule, &p)?;
                Some((p, x))
            });
            let rl = rule.clone();
            jobs.push(Job::new(
                format!("{} {}", rule.label, rule.name),
                &heun_named(&p),
                Some(x),
                IDENTITY_TOL,
                move || Ok(rel_diff(eval_hl(&p, x, &pol())?, apply_hl_rule(&rl, &p, x, &pol())?)),
            ));
        }
    }
    let mobius = mobius_hl_rules();
    for _ in 0..plan.at_least(50) {
        let (p, qb) = redraw(s, "Qbar draw", |s| {
            let p = s.heun_params();
            qbar_of(&p).ok().map(|qb| (p, qb))
        });
        for rule in &mobius {
            let rl = rule.clone();
            jobs.push(Job::new(
                format!("qbar {} {}", rule.label, rule.name),
                &heun_named(&p),
                None,
                QBAR_TOL,
                move || {
                    let got = qbar_of(&rl.param_map(&p))?;
                    let (mut q, mut want) = (p, qb);
                    for st in &rl.steps {
                        want = st
                            .qbar_shadow(q.a, want)
                            .ok_or_else(|| HeunError::Degenerate("Qbar shadow undefined".into()))?;
                        q = st.params(&q);
                    }
                    Ok(mixed_diff(got, want))
                },
            ));
        }
    }
    jobs
}

fn lift_draw(s: &mut Sampler) -> Option<(C64, QuadraticLiftData)> {
    let t = s.param();
    let d = lift_from_t(t).ok()?;
    let (ma, mb) = (d.a.norm(), d.a_prime.norm());
    if !(0.05..=1e3).contains(&ma) || !(0.05..=1e3).contains(&mb) {
        return None;
    }
    Some((t, d))
}

fn quadratic(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for _ in 0..plan.draws_per_rule {
        let (t, d, alpha, gamma, q, x) = redraw(s, "quadratic draw", |s| {
            let (t, d) = lift_draw(s)?;
            let (alpha, gamma, q) = (s.param(), s.lower_param(), s.param());
            let rb = d.a_prime.norm().min(1.0);
            let x = shrink(s.point(d.a.norm().min(1.0)), |x| {
                quad_map_r(&d, x).map(|y| y.norm() <= 0.5 * rb).unwrap_or(false)
            })?;
            quadratic_rule(&d, alpha, gamma, q, x, &pol()).ok()?;
            Some((t, d, alpha, gamma, q, x))
        });
        let named = [("t", t), ("alpha", alpha), ("gamma", gamma), ("q", q)];
        jobs.push(Job::new("quadratic", &named, Some(x), IDENTITY_TOL, move || {
            let (l, rr) = quadratic_rule(&d, alpha, gamma, q, x, &pol())?;
            Ok(rel_diff(l, rr))
        }));
    }
    for _ in 0..plan.at_least(50) {
        let (t, d) = redraw(s, "t draw", lift_draw);
        jobs.push(Job::new("modular constraint", &[("t", t)], None, EXACT_TOL, move || {
            let scale = (d.a * d.a * (r(1.0) - d.a_prime).powi(2)).norm().max(1e-300);
            Ok(constraint_residual(d.a, d.a_prime).norm() / scale)
        }));
        jobs.push(Job::new("A from (a, a')", &[("t", t)], None, EXACT_TOL, move || {
            let adef = (r(1.0) + d.a_prime) / ((r(2.0) - d.a) * 2.0);
            Ok(rel_diff(adef, d.big_a))
        }));
    }
    jobs
}

fn s_admissible(a: C64, x: C64) -> bool {
    biquad_map_s(a, x).map(|y| y.norm() <= 0.5).unwrap_or(false) && (r(1.0) - x * x / a).re > 0.0
}

fn biquadratic(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for _ in 0..plan.draws_per_rule {
        let (a, q, gamma, x) = redraw(s, "biquadratic draw", |s| {
            let (a, q, gamma) = (s.heun_a(), s.param(), s.lower_param());
            let x = shrink(s.point(1.0), |x| s_admissible(a, x))?;
            biquadratic_rule(a, q, gamma, x, &pol()).ok()?;
            Some((a, q, gamma, x))
        });
        jobs.push(Job::new("biquadratic", &[("a", a), ("q", q), ("gamma", gamma)], Some(x), IDENTITY_TOL, move || {
            let (l, rr) = biquadratic_rule(a, q, gamma, x, &pol())?;
            Ok(rel_diff(l, rr))
        }));
    }
    for _ in 0..plan.at_least(50) {
        let (a, x) = redraw(s, "S-form draw", |s| {
            let a = s.param();
            let x = C64::new(s.uniform(-1.0, 1.0), s.uniform(-1.0, 1.0));
            biquad_map_s_forms(a, x).ok()?;
            Some((a, x))
        });
        jobs.push(Job::new("S forms agree", &[("a", a)], Some(x), EXACT_TOL, move || {
            let [f1, f2, f3] = biquad_map_s_forms(a, x)?;
            let scale = f1.norm().max(a.norm()).max(1.0);
            Ok((f1 - f2).norm().max((f1 - f3).norm()) / scale)
        }));
    }
    jobs
}

fn h_dup(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for _ in 0..plan.draws_per_rule {
        let (a, q, x) = redraw(s, "H draw", |s| {
            let (a, q) = (s.heun_a(), s.param());
            let x = shrink(s.point(1.0), |x| s_admissible(a, x))?;
            h_duplication_check(a, q, x, &pol()).ok()?;
            Some((a, q, x))
        });
        jobs.push(Job::new("H(a,q;x) = H(a,q/4;S(x))", &[("a", a), ("q", q)], Some(x), IDENTITY_TOL, move || {
            h_duplication_check(a, q, x, &pol())
        }));
    }
    jobs
}

fn curve_draw(s: &mut Sampler) -> Option<ApparentCurvePoint> {
    let (alpha, beta, gamma, e) = (s.param(), s.param(), s.lower_param(), s.param());
    if dist_to_nonpositive_integer(e) <= POLE_GAP || dist_to_nonpositive_integer(gamma - 1.0) <= POLE_GAP {
        return None;
    }
    let cp = curve_point(alpha, beta, gamma, e).ok()?;
    if (cp.a - 1.0).norm() < 0.05 || !(0.05..=1e3).contains(&cp.a.norm()) {
        return None;
    }
    Some(cp)
}

fn curve_named(cp: &ApparentCurvePoint) -> Vec<(&'static str, C64)> {
    vec![("alpha", cp.alpha), ("beta", cp.beta), ("gamma", cp.gamma), ("e", cp.e)]
}

fn reduction(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for _ in 0..plan.at_least(50) {
        let cp = redraw(s, "curve point", curve_draw);
        let named = curve_named(&cp);
        jobs.push(Job::new("(a, q) on curve", &named, None, EXACT_TOL, move || {
            let scale = cp.q.norm_sqr().max(1.0);
            Ok(curve_residual(cp.a, cp.q, cp.alpha, cp.beta, cp.gamma).norm() / scale)
        }));
        let radius = cp.a.norm().min(1.0);
        for _ in 0..10 {
            let x = s.point(radius);
            jobs.push(Job::new("Hl = 3F2", &named, Some(x), REDUCTION_TOL, move || {
                Ok(rel_diff(eval_g(&cp, x, &pol())?, eval_3f2(&cp.three_f2_params(), x, &pol())?))
            }));
        }
        let x = s.point(radius);
        jobs.push(Job::new("two 2F1 forms", &named, Some(x), REDUCTION_TOL, move || {
            let (r1, r2) = g_two_representations(&cp, x, &pol())?;
            let g = eval_g(&cp, x, &pol())?;
            Ok(rel_diff(r1, g).max(rel_diff(r2, g)))
        }));
        jobs.push(Job::new("contiguity", &named, Some(x), REDUCTION_TOL, move || {
            contiguity_residual(&ThreeF2Params::new(cp.alpha, cp.beta, cp.e, cp.gamma, cp.e), x, &pol())
        }));
        jobs.push(Job::new("c(2) consistency at a", &named, None, REDUCTION_TOL, move || {
            let (lead0, rest) = c2_consistency(&cp);
            Ok(lead0.max(rest))
        }));
    }
    jobs
}

/// Sample indices for the difference-operator comparison.
pub const FACTORIZATION_NS: [i64; 7] = [0, 1, 2, 3, 4, 5, 6];
/// Highest monomial degree for the differential-operator comparison.
pub const FACTORIZATION_K: usize = 6;

fn factorization(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for _ in 0..plan.draws_per_rule {
        let cp = redraw(s, "curve point", |s| {
            let cp = curve_draw(s)?;
            difference_factorization_residual(&cp, &FACTORIZATION_NS).ok()?;
            Some(cp)
        });
        let named = curve_named(&cp);
        jobs.push(Job::new("difference operator", &named, None, EXACT_TOL, move || {
            difference_factorization_residual(&cp, &FACTORIZATION_NS)
        }));
        jobs.push(Job::new("differential operator", &named, None, EXACT_TOL, move || {
            differential_factorization_residual(&cp, FACTORIZATION_K)
        }));
    }
    jobs
}

fn f32_draw(s: &mut Sampler, rule: &F32Rule) -> Option<(Restricted3F2Params, C64)> {
    let p = Restricted3F2Params::new(s.param(), s.param(), s.lower_param(), s.lower_param());
    p.validate().ok()?;
    let x = shrink(s.point(1.0), |x| f32_chain_ok(rule, &p, x))?;
    Some((p, x))
}

fn f32_rule_jobs(jobs: &mut Vec<Job>, s: &mut Sampler, rule: &F32Rule, n: usize) {
    for _ in 0..n {
        let (p, x) = redraw(s, "3F2 draw", |s| f32_draw(s, rule));
        let rl = rule.clone();
        jobs.push(Job::new(
            format!("{} {}", rule.label, rule.name),
            &f32_named(&p),
            Some(x),
            IDENTITY_TOL,
            move || f32_rule_residual(&rl, &p, x, &pol()),
        ));
    }
}

fn f32_pfaff(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    let rule = pfaff_like_rule();
    f32_rule_jobs(&mut jobs, s, &rule, plan.draws_per_rule);
    let sq = heunkit_core::hyper3f2::compose_f32_rules(&rule, &rule);
    jobs.push(Job::property("pfaff-like is an involution", &[], sq.label.is_identity()));
    jobs
}

fn f32_euler(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    let rule = euler_like_rule();
    f32_rule_jobs(&mut jobs, s, &rule, plan.draws_per_rule);
    let sq = heunkit_core::hyper3f2::compose_f32_rules(&rule, &rule);
    jobs.push(Job::property("euler-like is an involution", &[], sq.label.is_identity()));
    for (swap, want) in [(false, 4usize), (true, 8)] {
        let n = restricted_group(swap).len();
        jobs.push(Job::new(format!("restricted group order {want}"), &[], None, 0.0, move || {
            Ok((n as f64 - want as f64).abs())
        }));
    }
    for rule in restricted_group(true) {
        f32_rule_jobs(&mut jobs, s, &rule, 5);
    }
    jobs
}

fn f32_corollaries(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    let n = plan.draws_per_rule;
    for _ in 0..n {
        let (a1, a2, b1, x) = redraw(s, "corserpentis draw", |s| {
            let (a1, a2, b1) = (s.param(), s.param(), s.lower_param());
            let x = admissible_point(s, 1.0, |x| bailey_slater_check(a1, a2, b1, x, &pol()))?;
            Some((a1, a2, b1, x))
        });
        jobs.push(Job::new("corserpentis", &[("a1", a1), ("a2", a2), ("b1", b1)], Some(x), IDENTITY_TOL, move || {
            bailey_slater_check(a1, a2, b1, x, &pol())
        }));
    }
    for _ in 0..n {
        let (a1, a2, b1, x) = redraw(s, "cor0 draw", |s| {
            let (a1, a2, b1) = (s.param(), s.param(), s.lower_param());
            let x = admissible_point(s, 1.0, |x| reduce_to_2f1(a1, a2, b1, x, &pol()).map(|_| 0.0))?;
            Some((a1, a2, b1, x))
        });
        jobs.push(Job::new("cor0", &[("a1", a1), ("a2", a2), ("b1", b1)], Some(x), IDENTITY_TOL, move || {
            let (l, rr) = reduce_to_2f1(a1, a2, b1, x, &pol())?;
            Ok(rel_diff(l, rr))
        }));
    }
    let one = r(1.0);
    for _ in 0..10 {
        let x = s.point(1.0);
        jobs.push(Job::new("cor0 closed form 1/(1-x)", &[], Some(x), EXACT_TOL, move || {
            let want = one / (one - x);
            let (l, rr) = reduce_to_2f1(one, one, r(2.0), x, &pol())?;
            let direct = eval_3f2(&ThreeF2Params::new(one, one, r(2.0), r(2.0), one), x, &pol())?;
            Ok(rel_diff(l, want).max(rel_diff(rr, want)).max(rel_diff(direct, want)))
        }));
    }
    for _ in 0..n {
        let (alpha, beta, x) = redraw(s, "cor draw", |s| {
            let (alpha, beta) = (s.param(), s.param());
            let x = admissible_point(s, 1.0, |x| very_well_poised_reduction(alpha, beta, x, &pol()).map(|_| 0.0))?;
            Some((alpha, beta, x))
        });
        jobs.push(Job::new(
            "cor very-well-poised",
            &[("alpha", alpha), ("beta", beta)],
            Some(x),
            IDENTITY_TOL,
            move || {
                let (l, rr) = very_well_poised_reduction(alpha, beta, x, &pol())?;
                Ok(rel_diff(l, rr))
            },
        ));
    }
    for _ in 0..plan.at_least(5) {
        let (alpha, beta, st, t, x) = redraw(s, "cor1 draw", |s| {
            let (alpha, beta, st, t) = (s.param(), s.param(), s.param(), s.param());
            let x = admissible_point(s, 1.0, |x| family_stability_check(alpha, beta, st, t, x, &pol()))?;
            Some((alpha, beta, st, t, x))
        });
        let named = [("alpha", alpha), ("beta", beta), ("s", st), ("t", t)];
        jobs.push(Job::new("cor1 (s, t) family", &named, Some(x), IDENTITY_TOL, move || {
            family_stability_check(alpha, beta, st, t, x, &pol())
        }));
    }
    for _ in 0..n {
        let (alpha, beta, x) = redraw(s, "involution draw", |s| {
            let (alpha, beta) = (s.param(), s.param());
            let x = admissible_point(s, 1.0, |x| bailey_involution_check(alpha, beta, x, &pol()))?;
            Some((alpha, beta, x))
        });
        jobs.push(Job::new(
            "alpha <-> beta involution",
            &[("alpha", alpha), ("beta", beta)],
            Some(x),
            IDENTITY_TOL,
            move || bailey_involution_check(alpha, beta, x, &pol()),
        ));
    }
    jobs
}

fn derivative(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for n in 1..=4usize {
        for _ in 0..plan.at_least(10) {
            let mut p = s.heun_params();
            p.alpha = r(1.0 - n as f64);
            jobs.push(Job::new(format!("D^{n}"), &heun_named(&p), None, IDENTITY_TOL, move || {
                derivative_identity_check(&p, n, &pol()).map(|(_, res)| res)
            }));
        }
    }
    jobs
}

fn sorted(x: C64, y: C64) -> (C64, C64) {
    if lex_cmp(&x, &y).is_le() {
        (x, y)
    } else {
        (y, x)
    }
}

fn nonzero(s: &mut Sampler) -> C64 {
    redraw(s, "nonzero scale", |s| Some(s.param()).filter(|z| z.norm() > 0.1))
}

fn heun_mismatch(big_a: C64, got_a: C64, got: &HeunParams, want_a: C64, want: &HeunParams) -> f64 {
    let (x, y) = sorted(want.alpha, want.beta);
    [
        mixed_diff(got_a, big_a),
        mixed_diff(got.a, want_a),
        mixed_diff(got.q, want.q),
        mixed_diff(got.gamma, want.gamma),
        mixed_diff(got.delta, want.delta),
        mixed_diff(got.alpha, x),
        mixed_diff(got.beta, y),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn classifier(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    let n = plan.at_least(100);
    for _ in 0..n {
        let (g, big_a, lam) = redraw(s, "2-term draw", |s| {
            let g = GaussParams::new(s.param(), s.param(), s.lower_param());
            ((g.alpha - g.beta).norm() >= 0.1).then_some(())?;
            Some((g, nonzero(s), nonzero(s)))
        });
        let named = [("alpha", g.alpha), ("beta", g.beta), ("gamma", g.gamma), ("A", big_a), ("lambda", lam)];
        jobs.push(Job::new("2-term round trip", &named, None, IDENTITY_TOL, move || {
            let (p1, p0) = forward_2term(big_a, &g, lam);
            let (a_got, got) = classify_2term(&p1, &p0)?;
            let (x, y) = sorted(g.alpha, g.beta);
            Ok([
                mixed_diff(a_got, big_a),
                mixed_diff(got.gamma, g.gamma),
                mixed_diff(got.alpha, x),
                mixed_diff(got.beta, y),
            ]
            .into_iter()
            .fold(0.0, f64::max))
        }));
    }
    for small in [false, true] {
        for _ in 0..n {
            let (p, big_a, lam) = redraw(s, "3-term draw", |s| {
                let mut p = s.heun_params();
                if small {
                    p.a = r(1.0) / p.a;
                }
                ((p.a - 1.0).norm() > 0.3 && (p.alpha - p.beta).norm() >= 0.1).then_some(())?;
                Some((p, nonzero(s), nonzero(s)))
            });
            let mut named = heun_named(&p);
            named.extend([("A", big_a), ("lambda", lam)]);
            let rule = if small { "3-term round trip, |a| < 1 image" } else { "3-term round trip" };
            jobs.push(Job::new(rule, &named, None, IDENTITY_TOL, move || {
                let (p2, p1, p0) = forward_3term(big_a, &p, lam);
                let (a_got, got) = classify_3term(&p2, &p1, &p0)?;
                if small {
                    // x -> x/a exchanges the singular points 1 and a
                    let image = HeunParams::new(r(1.0) / p.a, p.q / p.a, p.alpha, p.beta, p.gamma, p.epsilon());
                    Ok(heun_mismatch(big_a / p.a, a_got, &got, image.a, &image))
                } else {
                    Ok(heun_mismatch(big_a, a_got, &got, p.a, &p))
                }
            }));
        }
    }
    for _ in 0..plan.draws_per_rule {
        let mut p = s.heun_params();
        p.a = r(1.0);
        let (big_a, lam) = (nonzero(s), nonzero(s));
        let (p2, p1, p0) = forward_3term(big_a, &p, lam);
        let rejected = matches!(classify_3term(&p2, &p1, &p0), Err(HeunError::Degenerate(_)));
        let mut named = heun_named(&p);
        named.extend([("A", big_a), ("lambda", lam)]);
        jobs.push(Job::property("confluent a = 1 rejected", &named, rejected));
    }
    jobs
}

fn random_mobius(s: &mut Sampler) -> MobiusMap {
    redraw(s, "Mobius map", |s| {
        let (a, b, c, d) = (s.param(), s.param(), s.param(), s.param());
        if (a * d - b * c).norm() < 0.1 {
            return None;
        }
        MobiusMap::new(a, b, c, d).ok()
    })
}

fn fuchs_shift(before: C64, after: &PSymbol) -> f64 {
    (fuchs_sum(after) - before).norm() / before.norm().max(1.0)
}

fn psymbol(plan: &SamplePlan, s: &mut Sampler) -> Vec<Job> {
    let mut jobs = Vec::new();
    for _ in 0..plan.draws_per_rule {
        let hp = s.heun_params();
        let m = random_mobius(s);
        let zeta = s.param();
        let named = heun_named(&hp);
        let p = PSymbol::heun(&hp);
        let s0 = fuchs_sum(&p);
        let target = p.fuchs_target();
        jobs.push(Job::new("Fuchs relation", &named, None, EXACT_TOL, move || {
            Ok((s0 - target).norm() / target.norm().max(1.0))
        }));
        let pm = p.clone();
        jobs.push(Job::new("Fuchs sum under mobius_lift", &named, None, EXACT_TOL, move || {
            Ok(fuchs_shift(s0, &mobius_lift(&pm, &m)))
        }));
        let pf = p.clone();
        jobs.push(Job::new("Fuchs sum under f_homotopy", &named, None, EXACT_TOL, move || {
            Ok(fuchs_shift(s0, &f_homotopy(&pf, SpherePoint::Finite(hp.a), zeta, false)?))
        }));
        jobs.push(Job::new("Fuchs sum under normalize", &named, None, EXACT_TOL, move || {
            Ok(fuchs_shift(s0, &normalize(&mobius_lift(&p, &m))?.0))
        }));
    }
    for _ in 0..plan.draws_per_rule {
        let (t, d) = redraw(s, "t draw", lift_draw);
        let (alpha, gamma) = (s.param(), s.lower_param());
        jobs.push(Job::new("lift along R", &[("t", t), ("alpha", alpha), ("gamma", gamma)], None, 0.0, move || {
            quadratic_psymbol_check(&d, alpha, gamma, 1e-9).map(|ok| if ok { 0.0 } else { 1.0 })
        }));
    }
    for _ in 0..plan.draws_per_rule {
        let (a, gamma) = (s.heun_a(), s.lower_param());
        jobs.push(Job::new("lift along S", &[("a", a), ("gamma", gamma)], None, 0.0, move || {
            biquadratic_psymbol_check(a, gamma, 1e-9).map(|ok| if ok { 0.0 } else { 1.0 })
        }));
    }
    for n in 0..=3usize {
        for _ in 0..plan.draws_per_rule {
            let mut hp = s.heun_params();
            hp.alpha = r(1.0 - n as f64);
            jobs.push(Job::new(format!("derivative symbol N={n}"), &heun_named(&hp), None, 0.0, move || {
                let got = derivative_symbol(&PSymbol::heun(&hp), n)?;
                let k = n as f64;
                let fin = SpherePoint::Finite;
                let want = PSymbol::new(
                    2,
                    vec![
                        (fin(r(0.0)), vec![r(0.0), 1.0 - k - hp.gamma]),
                        (fin(r(1.0)), vec![r(0.0), 1.0 - k - hp.delta]),
                        (fin(hp.a), vec![r(0.0), 1.0 - k - hp.epsilon()]),
                        (SpherePoint::Infinity, vec![r(k + 1.0), hp.beta + k]),
                    ],
                )?;
                Ok(if got.equivalent(&want, 1e-12) { 0.0 } else { 1.0 })
            }));
        }
    }
    for _ in 0..plan.draws_per_rule {
        let (alpha, beta) = redraw(s, "dual symbol draw", |s| {
            let (a, b) = (s.param(), s.param());
            ((a - b).norm() > 0.1).then_some((a, b))
        });
        let named = [("alpha", alpha), ("beta", beta)];
        let (p1, p2) = dual_psymbols(alpha, beta);
        let shared = shared_exponents(&p1, &p2, 1e-12);
        jobs.push(Job::property("dual symbols share two exponents per point", &named, shared == [2, 2, 2]));
        jobs.push(Job::new("dual symbols satisfy Fuchs", &named, None, EXACT_TOL, move || {
            Ok([&p1, &p2].iter().map(|p| fuchs_shift(p.fuchs_target(), p)).fold(0.0, f64::max))
        }));
    }
    jobs
}
