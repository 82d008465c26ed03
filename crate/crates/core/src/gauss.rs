//! The Kummer transformations of 2F1 that fix x = 0: the Klein four-group of
//! Euler and Pfaff transformations and its order-8 extension by alpha <-> beta.

use std::collections::VecDeque;

use crate::error::{HeunError, Result};
use crate::numeric::{eval_2f1, EvalPolicy, GaussParams};
use crate::scalar::{one_minus_pow, r, C64};
use crate::signed_perm::{SignedPermutation, GAUSS_POINTS};

/// Elementary Kummer steps. Each maps (p, x) to a prefactor and a new (p', x').
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaussStep {
    /// (1-x)^(gamma-alpha-beta) 2F1(gamma-alpha, gamma-beta; gamma; x)
    Euler,
    /// (1-x)^(-alpha) 2F1(alpha, gamma-beta; gamma; x/(x-1))
    Pfaff,
    /// (1-x)^(-beta) 2F1(gamma-alpha, beta; gamma; x/(x-1))
    TwistedPfaff,
    /// 2F1(beta, alpha; gamma; x)
    Swap,
}

impl GaussStep {
    pub fn label(&self) -> SignedPermutation {
        let s = match self {
            GaussStep::Euler => "[1-][inf-]",
            GaussStep::Pfaff => "[1+inf+]",
            GaussStep::TwistedPfaff => "[1-inf-]",
            GaussStep::Swap => "[1+][inf-]",
        };
        SignedPermutation::parse(GAUSS_POINTS, s).expect("static label")
    }

    pub fn params(&self, p: &GaussParams) -> GaussParams {
        let (al, be, ga) = (p.alpha, p.beta, p.gamma);
        match self {
            GaussStep::Euler => GaussParams::new(ga - al, ga - be, ga),
            GaussStep::Pfaff => GaussParams::new(al, ga - be, ga),
            GaussStep::TwistedPfaff => GaussParams::new(ga - al, be, ga),
            GaussStep::Swap => GaussParams::new(be, al, ga),
        }
    }

    pub fn arg(&self, x: C64) -> C64 {
        match self {
            GaussStep::Pfaff | GaussStep::TwistedPfaff => x / (x - 1.0),
            GaussStep::Euler | GaussStep::Swap => x,
        }
    }

    pub fn prefactor(&self, p: &GaussParams, x: C64) -> C64 {
        match self {
            GaussStep::Euler => one_minus_pow(x, p.gamma - p.alpha - p.beta),
            GaussStep::Pfaff => one_minus_pow(x, -p.alpha),
            GaussStep::TwistedPfaff => one_minus_pow(x, -p.beta),
            GaussStep::Swap => r(1.0),
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            GaussStep::Euler => "(1-x)^(gamma-alpha-beta) 2F1(gamma-alpha, gamma-beta; gamma; x)",
            GaussStep::Pfaff => "(1-x)^(-alpha) 2F1(alpha, gamma-beta; gamma; x/(x-1))",
            GaussStep::TwistedPfaff => "(1-x)^(-beta) 2F1(gamma-alpha, beta; gamma; x/(x-1))",
            GaussStep::Swap => "2F1(beta, alpha; gamma; x)",
        }
    }
}

/// An executable identity 2F1(p; x) = prefactor * 2F1(p'; x').
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub name: String,
    pub label: SignedPermutation,
    pub steps: Vec<GaussStep>,
}

impl GaussRule {
    pub fn identity() -> Self {
        Self { name: "identity".into(), label: SignedPermutation::identity(GAUSS_POINTS), steps: Vec::new() }
    }

    fn from_steps(name: &str, steps: Vec<GaussStep>) -> Self {
        let label = steps.iter().fold(SignedPermutation::identity(GAUSS_POINTS), |acc, s| acc.then(&s.label()));
        Self { name: name.into(), label, steps }
    }

    /// Transformed parameters, argument and accumulated prefactor.
    pub fn transform(&self, p: &GaussParams, x: C64) -> (GaussParams, C64, C64) {
        let mut pre = r(1.0);
        let (mut p, mut x) = (*p, x);
        for s in &self.steps {
            pre *= s.prefactor(&p, x);
            p = s.params(&p);
            x = s.arg(x);
        }
        (p, x, pre)
    }

    pub fn param_map(&self, p: &GaussParams) -> GaussParams {
        self.transform(p, r(0.0)).0
    }

    pub fn arg_map(&self, x: C64) -> C64 {
        self.steps.iter().fold(x, |x, s| s.arg(x))
    }

    pub fn formula(&self) -> String {
        match self.steps.len() {
            0 => "2F1(alpha, beta; gamma; x)".into(),
            1 => self.steps[0].formula().into(),
            _ => self.steps.iter().map(|s| s.formula()).collect::<Vec<_>>().join("  then  "),
        }
    }
}

/// The four rules of the Klein four-group, or all eight with alpha <-> beta.
pub fn kummer_rules(include_swap: bool) -> Vec<GaussRule> {
    use GaussStep::*;
    let mut out = vec![
        GaussRule::identity(),
        GaussRule::from_steps("euler", vec![Euler]),
        GaussRule::from_steps("pfaff", vec![Pfaff]),
        GaussRule::from_steps("twisted-pfaff", vec![TwistedPfaff]),
    ];
    if include_swap {
        out.push(GaussRule::from_steps("swap", vec![Swap]));
        out.push(GaussRule::from_steps("swap-euler", vec![Swap, Euler]));
        out.push(GaussRule::from_steps("swap-pfaff", vec![Swap, Pfaff]));
        out.push(GaussRule::from_steps("swap-twisted-pfaff", vec![Swap, TwistedPfaff]));
    }
    out
}

/// prefactor(p, x) * 2F1(p'; x'), refusing arguments outside the safe disk.
pub fn apply_gauss_rule(rule: &GaussRule, p: &GaussParams, x: C64, policy: &EvalPolicy) -> Result<C64> {
    p.validate()?;
    let (mut q, mut y) = (*p, x);
    let mut pre = r(1.0);
    for s in &rule.steps {
        check_disk(y, policy)?;
        pre *= s.prefactor(&q, y);
        q = s.params(&q);
        y = s.arg(y);
    }
    Ok(pre * eval_2f1(&q, y, policy)?)
}

fn check_disk(x: C64, policy: &EvalPolicy) -> Result<()> {
    let limit = 1.0 - policy.domain_margin;
    if x.norm() < limit {
        Ok(())
    } else {
        Err(HeunError::Domain { abs_x: x.norm(), limit })
    }
}

/// "r1, then r2": r2 is applied to the function produced by r1.
pub fn compose_gauss_rules(r1: &GaussRule, r2: &GaussRule) -> GaussRule {
    let mut steps = r1.steps.clone();
    steps.extend(r2.steps.iter().copied());
    GaussRule { name: format!("{} . {}", r1.name, r2.name), label: r1.label.then(&r2.label), steps }
}

/// Closure of `gens` under composition, keyed by label.
pub fn close_gauss(gens: &[GaussRule], limit: usize) -> Result<Vec<GaussRule>> {
    let mut found: Vec<GaussRule> = vec![GaussRule::identity()];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in gens {
            let cand = compose_gauss_rules(&found[i], g);
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
