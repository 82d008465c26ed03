//! Transformations of the local Heun function Hl that fix x = 0.
//!
//! Six Möbius rules permute the singular points 1, a, ∞; one F-homotopy rule
//! at x = 1 flips exponent signs. Their closure is the order-24 group of
//! even-signed permutations of {1, a, ∞}. Rules are chains of these
//! generators, labelled by the signed permutation they induce on the exponent
//! differences (1-delta, 1-epsilon, beta-alpha).

use std::collections::VecDeque;

use crate::error::{HeunError, Result};
use crate::numeric::{check_domain, eval_hl, eval_series, heun_coeffs, series_derivative, EvalPolicy, HeunParams};
use crate::scalar::{is_nonpositive_integer, one_minus_pow, r, C64};
use crate::signed_perm::{SignedPermutation, HEUN_POINTS};

/// Generators of the Hl transformation group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeunStep {
    /// [1+inf+][a+]: (1-x)^(-alpha) Hl(a/(a-1), (-q+gamma alpha a)/(a-1); alpha, alpha-delta+1; gamma, alpha-beta+1; x/(x-1))
    SwapOneInf,
    /// [1+][a+inf+]: (1-x/a)^(-alpha) Hl(1-a, -q+gamma alpha; alpha, -beta+gamma+delta; gamma, delta; (1-a)x/(x-a))
    SwapAInf,
    /// [1+a+][inf+]: Hl(1/a, q/a; alpha, beta; gamma, epsilon; x/a)
    SwapOneA,
    /// [1+a+inf+]: (1-x/a)^(-alpha) Hl(1/(1-a), (q-gamma alpha)/(a-1); alpha, -beta+gamma+delta; gamma, alpha-beta+1; x/(x-a))
    CycleOneAInf,
    /// [1+inf+a+]: (1-x)^(-alpha) Hl((a-1)/a, (-q+gamma alpha a)/a; alpha, alpha-delta+1; gamma, epsilon; (a-1)x/(a(x-1)))
    CycleOneInfA,
    /// [1-][a+][inf-]: (1-x)^(1-delta) Hl(a, q-(delta-1)gamma a; beta-delta+1, alpha-delta+1; gamma, 2-delta; x)
    HomotopyOne,
}

pub const MOBIUS_STEPS: [HeunStep; 5] =
    [HeunStep::SwapOneInf, HeunStep::SwapAInf, HeunStep::SwapOneA, HeunStep::CycleOneAInf, HeunStep::CycleOneInfA];

impl HeunStep {
    pub fn label(&self) -> SignedPermutation {
        let s = match self {
            HeunStep::SwapOneInf => "[1+inf+][a+]",
            HeunStep::SwapAInf => "[1+][a+inf+]",
            HeunStep::SwapOneA => "[1+a+][inf+]",
            HeunStep::CycleOneAInf => "[1+a+inf+]",
            HeunStep::CycleOneInfA => "[1+inf+a+]",
            HeunStep::HomotopyOne => "[1-][a+][inf-]",
        };
        SignedPermutation::parse(HEUN_POINTS, s).expect("static label")
    }

    pub fn is_mobius(&self) -> bool {
        !matches!(self, HeunStep::HomotopyOne)
    }

    pub fn params(&self, p: &HeunParams) -> HeunParams {
        let HeunParams { a, q, alpha, beta, gamma, delta } = *p;
        let eps = p.epsilon();
        let one = r(1.0);
        match self {
            HeunStep::SwapOneInf => HeunParams::new(
                a / (a - 1.0),
                (-q + gamma * alpha * a) / (a - 1.0),
                alpha,
                alpha - delta + 1.0,
                gamma,
                alpha - beta + 1.0,
            ),
            HeunStep::SwapAInf => {
                HeunParams::new(one - a, -q + gamma * alpha, alpha, -beta + gamma + delta, gamma, delta)
            }
            HeunStep::SwapOneA => HeunParams::new(one / a, q / a, alpha, beta, gamma, eps),
            HeunStep::CycleOneAInf => HeunParams::new(
                one / (one - a),
                (q - gamma * alpha) / (a - 1.0),
                alpha,
                -beta + gamma + delta,
                gamma,
                alpha - beta + 1.0,
            ),
            HeunStep::CycleOneInfA => {
                HeunParams::new((a - 1.0) / a, (-q + gamma * alpha * a) / a, alpha, alpha - delta + 1.0, gamma, eps)
            }
            HeunStep::HomotopyOne => HeunParams::new(
                a,
                q - (delta - 1.0) * gamma * a,
                beta - delta + 1.0,
                alpha - delta + 1.0,
                gamma,
                2.0 - delta,
            ),
        }
    }

    pub fn arg(&self, a: C64, x: C64) -> C64 {
        match self {
            HeunStep::SwapOneInf => x / (x - 1.0),
            HeunStep::SwapAInf => (r(1.0) - a) * x / (x - a),
            HeunStep::SwapOneA => x / a,
            HeunStep::CycleOneAInf => x / (x - a),
            HeunStep::CycleOneInfA => (a - 1.0) * x / (a * (x - 1.0)),
            HeunStep::HomotopyOne => x,
        }
    }

    pub fn prefactor(&self, p: &HeunParams, x: C64) -> C64 {
        match self {
            HeunStep::SwapOneInf | HeunStep::CycleOneInfA => one_minus_pow(x, -p.alpha),
            HeunStep::SwapAInf | HeunStep::CycleOneAInf => one_minus_pow(x / p.a, -p.alpha),
            HeunStep::SwapOneA => r(1.0),
            HeunStep::HomotopyOne => one_minus_pow(x, r(1.0) - p.delta),
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            HeunStep::SwapOneInf => {
                "(1-x)^(-alpha) Hl(a/(a-1), (-q+gamma*alpha*a)/(a-1); alpha, alpha-delta+1; gamma, alpha-beta+1; x/(x-1))"
            }
            HeunStep::SwapAInf => {
                "(1-x/a)^(-alpha) Hl(1-a, -q+gamma*alpha; alpha, -beta+gamma+delta; gamma, delta; (1-a)x/(x-a))"
            }
            HeunStep::SwapOneA => "Hl(1/a, q/a; alpha, beta; gamma, epsilon; x/a)",
            HeunStep::CycleOneAInf => {
                "(1-x/a)^(-alpha) Hl(1/(1-a), (q-gamma*alpha)/(a-1); alpha, -beta+gamma+delta; gamma, alpha-beta+1; x/(x-a))"
            }
            HeunStep::CycleOneInfA => {
                "(1-x)^(-alpha) Hl((a-1)/a, (-q+gamma*alpha*a)/a; alpha, alpha-delta+1; gamma, epsilon; (a-1)x/(a(x-1)))"
            }
            HeunStep::HomotopyOne => {
                "(1-x)^(1-delta) Hl(a, q-(delta-1)*gamma*a; beta-delta+1, alpha-delta+1; gamma, 2-delta; x)"
            }
        }
    }

    /// Affine action on Q-bar induced by a Möbius step, evaluated at the source a.
    pub fn qbar_shadow(&self, a: C64, qbar: C64) -> Option<C64> {
        let one = r(1.0);
        match self {
            HeunStep::SwapOneInf => Some((a - qbar) / (a - 1.0)),
            HeunStep::SwapAInf => Some(one - qbar),
            HeunStep::SwapOneA => Some(qbar / a),
            HeunStep::CycleOneAInf => Some((one - qbar) / (one - a)),
            HeunStep::CycleOneInfA => Some((a - qbar) / a),
            HeunStep::HomotopyOne => None,
        }
    }
}

/// An executable identity Hl(p; x) = prefactor * Hl(p'; x').
#[derive(Debug, Clone, PartialEq)]
pub struct HlRule {
    pub name: String,
    pub label: SignedPermutation,
    pub steps: Vec<HeunStep>,
}

impl HlRule {
    pub fn identity() -> Self {
        Self { name: "identity".into(), label: SignedPermutation::identity(HEUN_POINTS), steps: Vec::new() }
    }

    pub fn from_step(name: &str, step: HeunStep) -> Self {
        Self { name: name.into(), label: step.label(), steps: vec![step] }
    }

    pub fn param_map(&self, p: &HeunParams) -> HeunParams {
        self.steps.iter().fold(*p, |q, s| s.params(&q))
    }

    pub fn arg_map(&self, p: &HeunParams, x: C64) -> C64 {
        self.transform(p, x).1
    }

    pub fn prefactor(&self, p: &HeunParams, x: C64) -> C64 {
        self.transform(p, x).2
    }

    /// Transformed parameters, argument and accumulated prefactor.
    pub fn transform(&self, p: &HeunParams, x: C64) -> (HeunParams, C64, C64) {
        let mut pre = r(1.0);
        let (mut q, mut y) = (*p, x);
        for s in &self.steps {
            pre *= s.prefactor(&q, y);
            y = s.arg(q.a, y);
            q = s.params(&q);
        }
        (q, y, pre)
    }

    pub fn formula(&self) -> String {
        match self.steps.len() {
            0 => "Hl(a, q; alpha, beta; gamma, delta; x)".into(),
            1 => self.steps[0].formula().into(),
            _ => self.steps.iter().map(|s| s.formula()).collect::<Vec<_>>().join("\n  then  "),
        }
    }

    pub fn is_mobius(&self) -> bool {
        self.steps.iter().all(|s| s.is_mobius())
    }
}

/// The identity and five nontrivial Möbius rules.
pub fn mobius_hl_rules() -> Vec<HlRule> {
    let mut out = vec![HlRule::identity()];
    let names = ["swap-1-inf", "swap-a-inf", "swap-1-a", "cycle-1-a-inf", "cycle-1-inf-a"];
    for (step, name) in MOBIUS_STEPS.iter().zip(names) {
        out.push(HlRule::from_step(name, *step));
    }
    out
}

pub fn fhomotopy_hl_rule_at_1() -> HlRule {
    HlRule::from_step("homotopy-1", HeunStep::HomotopyOne)
}

/// "r1, then r2": r2 is applied to the function produced by r1.
pub fn compose_hl_rules(r1: &HlRule, r2: &HlRule) -> HlRule {
    let mut steps = r1.steps.clone();
    steps.extend(r2.steps.iter().copied());
    let name = match (r1.steps.is_empty(), r2.steps.is_empty()) {
        (true, _) => r2.name.clone(),
        (_, true) => r1.name.clone(),
        _ => format!("{} . {}", r1.name, r2.name),
    };
    HlRule { name, label: r1.label.then(&r2.label), steps }
}

/// Breadth-first closure of `gens` keyed by label; fails once `limit` labels are exceeded.
pub fn close_hl(gens: &[HlRule], limit: usize) -> Result<Vec<HlRule>> {
    let mut found = vec![HlRule::identity()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let cand = compose_hl_rules(&found[i], g);
            if found.iter().any(|f| f.label == cand.label) {
                continue;
            }
            if found.len() >= limit {
                return Err(HeunError::ClosureOverflow(limit));
            }
            found.push(cand);
            queue.push_back(found.len() - 1);
        }
    }
    Ok(found)
}

/// The 24 rules generated by the Möbius rules and the F-homotopy at x = 1.
pub fn generate_hl_group() -> Result<Vec<HlRule>> {
    let mut gens: Vec<HlRule> = mobius_hl_rules().into_iter().skip(1).collect();
    gens.push(fhomotopy_hl_rule_at_1());
    close_hl(&gens, 24)
}

fn check_disk(x: C64, a: C64, policy: &EvalPolicy) -> Result<()> {
    check_domain(x, a.norm().min(1.0), policy)
}

/// Checks every intermediate argument of the chain against its own disk.
pub fn rule_domain_ok(rule: &HlRule, p: &HeunParams, x: C64, policy: &EvalPolicy) -> Result<()> {
    let (mut q, mut y) = (*p, x);
    check_disk(y, q.a, policy)?;
    for s in &rule.steps {
        y = s.arg(q.a, y);
        q = s.params(&q);
        q.validate()?;
        check_disk(y, q.a, policy)?;
    }
    Ok(())
}

/// prefactor(p, x) * Hl(p'; x').
pub fn apply_hl_rule(rule: &HlRule, p: &HeunParams, x: C64, policy: &EvalPolicy) -> Result<C64> {
    p.validate()?;
    rule_domain_ok(rule, p, x, policy)?;
    let (q, y, pre) = rule.transform(p, x);
    Ok(pre * eval_hl(&q, y, policy)?)
}

/// Q-bar = [beta Q + (epsilon - beta) a + (delta - beta)] / (alpha - gamma + 1), Q = q/(alpha beta).
pub fn qbar_of(p: &HeunParams) -> Result<C64> {
    let den = p.alpha - p.gamma + 1.0;
    if p.alpha.norm() <= 1e-12 || p.beta.norm() <= 1e-12 || den.norm() <= 1e-12 {
        return Err(HeunError::Degenerate("Q-bar needs alpha, beta and alpha-gamma+1 nonzero".into()));
    }
    let big_q = p.q / (p.alpha * p.beta);
    Ok((p.beta * big_q + (p.epsilon() - p.beta) * p.a + (p.delta - p.beta)) / den)
}

/// Inverse of [`qbar_of`]: the accessory parameter q with the other parameters of `p`.
pub fn q_of_qbar(qbar: C64, p: &HeunParams) -> C64 {
    let den = p.alpha - p.gamma + 1.0;
    p.alpha * (qbar * den - (p.epsilon() - p.beta) * p.a - (p.delta - p.beta))
}

/// Parameters of the zero-exponent local solution at x = a, expressed as an Hl
/// in the variable (a - x)/a.
pub fn local_solution_at_a_params(p: &HeunParams) -> HeunParams {
    let a = p.a;
    HeunParams::new((a - 1.0) / a, (-p.q + p.beta * p.alpha * a) / a, p.alpha, p.beta, p.epsilon(), p.gamma)
}

/// Hl((a-1)/a, (-q+alpha beta a)/a; alpha, beta; epsilon, gamma; (a-x)/a).
pub fn local_solution_at_a(p: &HeunParams, x: C64, policy: &EvalPolicy) -> Result<C64> {
    p.validate()?;
    let lp = local_solution_at_a_params(p);
    eval_hl(&lp, (p.a - x) / p.a, policy)
}

/// q' = q + N(N-1)(a+1) + N[(a+1)gamma + a delta + epsilon].
pub fn derivative_q_prime(p: &HeunParams, n: usize) -> C64 {
    let nn = n as f64;
    p.q + nn * (nn - 1.0) * (p.a + 1.0) + nn * ((p.a + 1.0) * p.gamma + p.a * p.delta + p.epsilon())
}

/// Parameters of the right-hand side of the N-th derivative identity.
pub fn derivative_target(p: &HeunParams, n: usize) -> HeunParams {
    let nn = n as f64;
    HeunParams::new(p.a, derivative_q_prime(p, n), r(1.0 + nn), p.beta + nn, p.gamma + nn, p.delta + nn)
}

/// Number of coefficients compared by [`derivative_identity_check`].
pub const DERIVATIVE_CHECK_TERMS: usize = 40;

/// Compares the coefficients of D^N Hl(a, q; 1-N, beta; gamma, delta; x) with
/// those of Hl(a, q'; 1+N, beta+N; gamma+N, delta+N; x).
///
/// Returns the proportionality constant and the largest coefficient mismatch,
/// each index scaled by the largest coefficient modulus seen so far.
pub fn derivative_identity_check(p: &HeunParams, n: usize, _policy: &EvalPolicy) -> Result<(C64, f64)> {
    p.validate()?;
    if (p.alpha - (1.0 - n as f64)).norm() > 1e-12 {
        return Err(HeunError::InvalidParameter(format!("alpha must equal 1 - N = {}", 1.0 - n as f64)));
    }
    let target = derivative_target(p, n);
    if is_nonpositive_integer(target.gamma) {
        return Err(HeunError::InvalidParameter("gamma + N is a nonpositive integer".into()));
    }
    let lhs = series_derivative(&heun_coeffs(p, DERIVATIVE_CHECK_TERMS + n)?, n)?;
    let rhs = heun_coeffs(&target, DERIVATIVE_CHECK_TERMS)?;
    let lmax = lhs.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let constant = lhs.coeffs[0];
    if constant.norm() <= 1e-14 * lmax.max(1e-300) {
        return Err(HeunError::ZeroLeadingCoefficient);
    }
    let mut scale = 0.0f64;
    let mut worst = 0.0f64;
    for (l, rr) in lhs.coeffs.iter().zip(&rhs.coeffs) {
        let rc = constant * rr;
        scale = scale.max(l.norm()).max(rc.norm());
        let d = (l - rc).norm();
        if d > 0.0 {
            worst = worst.max(d / scale);
        }
    }
    Ok((constant, worst))
}

/// Residual of the HE at x for the local solution at a, using series
/// derivatives of the transformed Hl. Scaled by the largest term.
pub fn local_solution_ode_residual(p: &HeunParams, x: C64, policy: &EvalPolicy) -> Result<f64> {
    let lp = local_solution_at_a_params(p);
    let z = (p.a - x) / p.a;
    let c = heun_coeffs(&lp, policy.max_terms.min(600))?;
    let h0 = eval_series(&c, z, policy)?.value;
    let h1 = eval_series(&series_derivative(&c, 1)?, z, policy)?.value;
    let h2 = eval_series(&series_derivative(&c, 2)?, z, policy)?.value;
    let a = p.a;
    let (y, y1, y2) = (h0, -h1 / a, h2 / (a * a));
    let m = x * (x - 1.0) * (x - a);
    let t2 = m * y2;
    let t1 = (p.gamma * (x - 1.0) * (x - a) + p.delta * x * (x - a) + p.epsilon() * x * (x - 1.0)) * y1;
    let t0 = (p.alpha * p.beta * x - p.q) * y;
    let scale = t2.norm().max(t1.norm()).max(t0.norm()).max(1e-300);
    Ok((t2 + t1 + t0).norm() / scale)
}
