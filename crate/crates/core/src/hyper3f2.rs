//! Transformations of the restricted family 3F2(a1, a2, e+1; b1, e; x),
//! poisedness, and the reductions and involutions that follow from them.

use std::collections::VecDeque;

use crate::error::{HeunError, Result};
use crate::numeric::{eval_2f1, eval_3f2, EvalPolicy, GaussParams, ThreeF2Params};
use crate::psymbol::{PSymbol, SpherePoint};
use crate::scalar::{is_finite, is_nonpositive_integer, one_minus_pow, r, rel_diff, C64};
use crate::signed_perm::{SignedPermutation, GAUSS_POINTS};

const EMAP_TOL: f64 = 1e-12;
const POISED_TOL: f64 = 1e-10;
const COR1_TOL: f64 = 1e-8;

/// Parameters of 3F2(a1, a2, e+1; b1, e; x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Restricted3F2Params {
    pub a1: C64,
    pub a2: C64,
    pub b1: C64,
    pub e: C64,
}

impl Restricted3F2Params {
    pub fn new(a1: C64, a2: C64, b1: C64, e: C64) -> Self {
        Self { a1, a2, b1, e }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2), ("b1", self.b1), ("e", self.e)] {
            if !is_finite(v) {
                return Err(HeunError::InvalidParameter(format!("{name} is not finite")));
            }
        }
        if self.e.norm() <= EMAP_TOL {
            return Err(HeunError::InvalidParameter("e = 0".into()));
        }
        if is_nonpositive_integer(self.b1) || is_nonpositive_integer(self.e) {
            return Err(HeunError::InvalidParameter("b1 or e is a nonpositive integer".into()));
        }
        Ok(())
    }

    pub fn to_three_f2(&self) -> ThreeF2Params {
        ThreeF2Params::new(self.a1, self.a2, self.e + 1.0, self.b1, self.e)
    }
}

/// Generators of the transformation group of the restricted family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum F32Step {
    /// (1-x)^(-a1) 3F2(a1, b1-a2-1, e'+1; b1, e'; x/(x-1)), e' = (b1-a2-1)e/(e-a2)
    PfaffLike,
    /// (1-x)^(b1-a1-a2-1) 3F2(b1-a1-1, b1-a2-1, e''+1; b1, e''; x),
    /// e'' = (b1-a1-1)(b1-a2-1)e/((b1-a1-a2-1)e + a1 a2)
    EulerLike,
    /// a1 <-> a2
    Swap,
}

impl F32Step {
    pub fn label(&self) -> SignedPermutation {
        let s = match self {
            F32Step::PfaffLike => "[1+inf+]",
            F32Step::EulerLike => "[1-][inf-]",
            F32Step::Swap => "[1+][inf-]",
        };
        SignedPermutation::parse(GAUSS_POINTS, s).expect("static label")
    }

    /// Coefficients (A, C, D) of the e-map e -> A e/(C e + D).
    pub fn e_map(&self, p: &Restricted3F2Params) -> (C64, C64, C64) {
        let (a1, a2, b1) = (p.a1, p.a2, p.b1);
        match self {
            F32Step::PfaffLike => (b1 - a2 - 1.0, r(1.0), -a2),
            F32Step::EulerLike => ((b1 - a1 - 1.0) * (b1 - a2 - 1.0), b1 - a1 - a2 - 1.0, a1 * a2),
            F32Step::Swap => (r(1.0), r(0.0), r(1.0)),
        }
    }

    /// Transformed parameters; fails when the e-map is singular at p or the
    /// image leaves the admissible set.
    pub fn params(&self, p: &Restricted3F2Params) -> Result<Restricted3F2Params> {
        let (big_a, big_c, big_d) = self.e_map(p);
        if (big_a * big_d).norm() <= EMAP_TOL {
            return Err(HeunError::SingularEMap(format!("{:?}: degenerate map at {:?}", self, p)));
        }
        let den = big_c * p.e + big_d;
        if den.norm() <= EMAP_TOL * (big_c * p.e).norm().max(big_d.norm()).max(1.0) {
            return Err(HeunError::SingularEMap(format!("{:?}: image of e is infinite", self)));
        }
        let e = big_a * p.e / den;
        let (a1, a2, b1) = (p.a1, p.a2, p.b1);
        let out = match self {
            F32Step::PfaffLike => Restricted3F2Params::new(a1, b1 - a2 - 1.0, b1, e),
            F32Step::EulerLike => Restricted3F2Params::new(b1 - a1 - 1.0, b1 - a2 - 1.0, b1, e),
            F32Step::Swap => Restricted3F2Params::new(a2, a1, b1, p.e),
        };
        out.validate().map_err(|err| HeunError::SingularEMap(format!("{:?}: {err}", self)))?;
        Ok(out)
    }

    pub fn prefactor_exponent(&self, p: &Restricted3F2Params) -> C64 {
        match self {
            F32Step::PfaffLike => -p.a1,
            F32Step::EulerLike => p.b1 - p.a1 - p.a2 - 1.0,
            F32Step::Swap => r(0.0),
        }
    }

    pub fn arg(&self, x: C64) -> C64 {
        match self {
            F32Step::PfaffLike => x / (x - 1.0),
            _ => x,
        }
    }

    pub fn formula(&self) -> &'static str {
        match self {
            F32Step::PfaffLike => "(1-x)^(-a1) 3F2(a1, b1-a2-1, e'+1; b1, e'; x/(x-1)), e' = (b1-a2-1)e/(e-a2)",
            F32Step::EulerLike => {
                "(1-x)^(b1-a1-a2-1) 3F2(b1-a1-1, b1-a2-1, e''+1; b1, e''; x), e'' = (b1-a1-1)(b1-a2-1)e/((b1-a1-a2-1)e+a1*a2)"
            }
            F32Step::Swap => "3F2(a2, a1, e+1; b1, e; x)",
        }
    }
}

/// A chain of generator steps with its induced label.
#[derive(Debug, Clone, PartialEq)]
pub struct F32Rule {
    pub name: String,
    pub label: SignedPermutation,
    pub steps: Vec<F32Step>,
}

impl F32Rule {
    pub fn identity() -> Self {
        Self { name: "identity".into(), label: SignedPermutation::identity(GAUSS_POINTS), steps: Vec::new() }
    }

    pub fn from_step(name: &str, step: F32Step) -> Self {
        Self { name: name.into(), label: step.label(), steps: vec![step] }
    }

    /// Transformed parameters, argument and prefactor at x.
    pub fn transform(&self, p: &Restricted3F2Params, x: C64) -> Result<(Restricted3F2Params, C64, C64)> {
        let (mut q, mut y, mut pre) = (*p, x, r(1.0));
        for s in &self.steps {
            pre *= one_minus_pow(y, s.prefactor_exponent(&q));
            q = s.params(&q)?;
            y = s.arg(y);
        }
        Ok((q, y, pre))
    }

    pub fn formula(&self) -> String {
        match self.steps.len() {
            0 => "3F2(a1, a2, e+1; b1, e; x)".into(),
            _ => self.steps.iter().map(|s| s.formula()).collect::<Vec<_>>().join("\n  then  "),
        }
    }
}

pub fn compose_f32_rules(r1: &F32Rule, r2: &F32Rule) -> F32Rule {
    let mut steps = r1.steps.clone();
    steps.extend(r2.steps.iter().copied());
    let name = match (r1.steps.is_empty(), r2.steps.is_empty()) {
        (true, _) => r2.name.clone(),
        (_, true) => r1.name.clone(),
        _ => format!("{} . {}", r1.name, r2.name),
    };
    F32Rule { name, label: r1.label.then(&r2.label), steps }
}

pub fn pfaff_like_rule() -> F32Rule {
    F32Rule::from_step("pfaff-like", F32Step::PfaffLike)
}

pub fn euler_like_rule() -> F32Rule {
    F32Rule::from_step("euler-like", F32Step::EulerLike)
}

/// (p', prefactor exponent) of the Pfaff-like identity; the argument map is x/(x-1).
pub fn pfaff_like(p: &Restricted3F2Params) -> Result<(Restricted3F2Params, C64)> {
    p.validate()?;
    Ok((F32Step::PfaffLike.params(p)?, F32Step::PfaffLike.prefactor_exponent(p)))
}

/// (p'', prefactor exponent) of the Euler-like identity; the argument is unchanged.
pub fn euler_like(p: &Restricted3F2Params) -> Result<(Restricted3F2Params, C64)> {
    p.validate()?;
    Ok((F32Step::EulerLike.params(p)?, F32Step::EulerLike.prefactor_exponent(p)))
}

/// Closure of the Pfaff-like and Euler-like rules (and a1 <-> a2): 4 or 8 rules.
pub fn restricted_group(include_swap: bool) -> Vec<F32Rule> {
    let mut gens = vec![pfaff_like_rule(), euler_like_rule()];
    if include_swap {
        gens.push(F32Rule::from_step("swap", F32Step::Swap));
    }
    let mut found = vec![F32Rule::identity()];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let cand = compose_f32_rules(&found[i], g);
            if !found.iter().any(|f| f.label == cand.label) {
                found.push(cand);
                queue.push_back(found.len() - 1);
            }
        }
    }
    found
}

/// prefactor * 3F2(p'; x') with x and every intermediate argument inside the safe disk.
pub fn apply_f32_rule(rule: &F32Rule, p: &Restricted3F2Params, x: C64, policy: &EvalPolicy) -> Result<C64> {
    p.validate()?;
    let limit = 1.0 - policy.domain_margin;
    let mut y = x;
    for s in &rule.steps {
        if y.norm() >= limit {
            return Err(HeunError::Domain { abs_x: y.norm(), limit });
        }
        y = s.arg(y);
    }
    let (q, y, pre) = rule.transform(p, x)?;
    Ok(pre * eval_3f2(&q.to_three_f2(), y, policy)?)
}

/// Relative mismatch between 3F2(p; x) and the rule's right side.
pub fn f32_rule_residual(rule: &F32Rule, p: &Restricted3F2Params, x: C64, policy: &EvalPolicy) -> Result<f64> {
    let lhs = eval_3f2(&p.to_three_f2(), x, policy)?;
    Ok(rel_diff(lhs, apply_f32_rule(rule, p, x, policy)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PoisednessClass {
    General,
    Nearly,
    NearlyVeryWell,
    Well,
    VeryWell,
}

impl PoisednessClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PoisednessClass::General => "general",
            PoisednessClass::Nearly => "nearly",
            PoisednessClass::NearlyVeryWell => "nearly_very_well",
            PoisednessClass::Well => "well",
            PoisednessClass::VeryWell => "very_well",
        }
    }
}

fn close(x: C64, y: C64) -> bool {
    (x - y).norm() <= POISED_TOL * x.norm().max(y.norm()).max(1.0)
}

const PERM3: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Strongest poisedness class over all orderings of the upper and lower parameters.
pub fn classify_poisedness(p: &ThreeF2Params) -> PoisednessClass {
    let (up, lo) = (p.upper(), p.lower());
    let mut best = PoisednessClass::General;
    for pu in PERM3 {
        for pl in [[0usize, 1], [1, 0]] {
            let (a1, a2, a3) = (up[pu[0]], up[pu[1]], up[pu[2]]);
            let (b1, b2) = (lo[pl[0]], lo[pl[1]]);
            let first = close(a1 + 1.0, a2 + b1);
            if !first {
                continue;
            }
            let half = a1 / 2.0;
            let class = if close(a1 + 1.0, a3 + b2) {
                if close(b1, half) || close(b2, half) {
                    PoisednessClass::VeryWell
                } else {
                    PoisednessClass::Well
                }
            } else if close(b1, half) {
                PoisednessClass::NearlyVeryWell
            } else {
                PoisednessClass::Nearly
            };
            best = best.max(class);
        }
    }
    best
}

fn check_x(x: C64, policy: &EvalPolicy) -> Result<()> {
    let limit = 1.0 - policy.domain_margin;
    for y in [x, x / (x - 1.0)] {
        if y.norm() >= limit {
            return Err(HeunError::Domain { abs_x: y.norm(), limit });
        }
    }
    Ok(())
}

/// Relative mismatch in
/// 3F2(a1, a2, -a2+1; b1, -a2; x) = (1-x)^(-a1) 3F2(a1, b1-a2-1, (b1-a2+1)/2; b1, (b1-a2-1)/2; x/(x-1)).
pub fn bailey_slater_check(a1: C64, a2: C64, b1: C64, x: C64, policy: &EvalPolicy) -> Result<f64> {
    check_x(x, policy)?;
    let lhs = eval_3f2(&ThreeF2Params::new(a1, a2, r(1.0) - a2, b1, -a2), x, policy)?;
    let u = b1 - a2 - 1.0;
    let rp = ThreeF2Params::new(a1, u, (u + 2.0) / 2.0, b1, u / 2.0);
    let rhs = one_minus_pow(x, -a1) * eval_3f2(&rp, x / (x - 1.0), policy)?;
    Ok(rel_diff(lhs, rhs))
}

/// e = a1 a2/(a1+a2-b1+1) of the reduction to a single 2F1.
pub fn reduction_e(a1: C64, a2: C64, b1: C64) -> Result<C64> {
    let den = a1 + a2 - b1 + 1.0;
    if den.norm() <= EMAP_TOL {
        return Err(HeunError::InvalidParameter("a1 + a2 - b1 + 1 = 0".into()));
    }
    Ok(a1 * a2 / den)
}

/// lhs = 3F2(a1, a2, e+1; b1, e; x), rhs = (1-x) 2F1(a1+1, a2+1; b1; x).
pub fn reduce_to_2f1(a1: C64, a2: C64, b1: C64, x: C64, policy: &EvalPolicy) -> Result<(C64, C64)> {
    let e = reduction_e(a1, a2, b1)?;
    let p = Restricted3F2Params::new(a1, a2, b1, e);
    p.validate()?;
    let lhs = eval_3f2(&p.to_three_f2(), x, policy)?;
    let rhs = (r(1.0) - x) * eval_2f1(&GaussParams::new(a1 + 1.0, a2 + 1.0, b1), x, policy)?;
    Ok((lhs, rhs))
}

/// The very-well-poised reduction:
/// 3F2(alpha, beta, alpha/2+1; alpha-beta+1, alpha/2; x) = (1-x) 2F1(alpha+1, beta+1; alpha-beta+1; x).
pub fn very_well_poised_reduction(alpha: C64, beta: C64, x: C64, policy: &EvalPolicy) -> Result<(C64, C64)> {
    let p = ThreeF2Params::new(alpha, beta, alpha / 2.0 + 1.0, alpha - beta + 1.0, alpha / 2.0);
    let lhs = eval_3f2(&p, x, policy)?;
    let rhs = (r(1.0) - x) * eval_2f1(&GaussParams::new(alpha + 1.0, beta + 1.0, alpha - beta + 1.0), x, policy)?;
    Ok((lhs, rhs))
}

/// Parameters and prefactor exponent of the (s, t) family:
/// (1-x)^(2 alpha - 1) 3F2(2 alpha - 1, A, e+1; B, e; x) with
/// A = (1-s) alpha - (1+s) beta - (1/2 - t), B = (1-s) alpha + (1-s) beta + (1/2 + t),
/// e = (alpha - 1/2) A/(alpha - beta - 1/2).
pub fn family_params(alpha: C64, beta: C64, s: C64, t: C64) -> Result<(ThreeF2Params, C64)> {
    let den = alpha - beta - 0.5;
    if den.norm() <= COR1_TOL {
        return Err(HeunError::InvalidParameter("alpha - beta - 1/2 = 0".into()));
    }
    let one = r(1.0);
    let big_a = (one - s) * alpha - (one + s) * beta - (r(0.5) - t);
    let big_b = (one - s) * alpha + (one - s) * beta + (r(0.5) + t);
    let e = (alpha - 0.5) * big_a / den;
    Ok((ThreeF2Params::new(alpha * 2.0 - 1.0, big_a, e + 1.0, big_b, e), alpha * 2.0 - 1.0))
}

fn family_value(alpha: C64, beta: C64, s: C64, t: C64, x: C64, policy: &EvalPolicy) -> Result<C64> {
    let (p, k) = family_params(alpha, beta, s, t)?;
    Ok(one_minus_pow(x, k) * eval_3f2(&p, x, policy)?)
}

/// Relative mismatch of the (s, t) family under alpha <-> beta.
pub fn family_stability_check(alpha: C64, beta: C64, s: C64, t: C64, x: C64, policy: &EvalPolicy) -> Result<f64> {
    let u = family_value(alpha, beta, s, t, x, policy)?;
    let v = family_value(beta, alpha, s, t, x, policy)?;
    Ok(rel_diff(u, v))
}

/// Relative mismatch in
/// (1-x)^(2a-1) 3F2(2a-1, a-b-1/2, a+1/2; a+b+1/2, a-1/2; x) = (same with a <-> b).
pub fn bailey_involution_check(alpha: C64, beta: C64, x: C64, policy: &EvalPolicy) -> Result<f64> {
    let side = |a: C64, b: C64| -> Result<C64> {
        let p = ThreeF2Params::new(a * 2.0 - 1.0, a - b - 0.5, a + 0.5, a + b + 0.5, a - 0.5);
        Ok(one_minus_pow(x, a * 2.0 - 1.0) * eval_3f2(&p, x, policy)?)
    };
    Ok(rel_diff(side(alpha, beta)?, side(beta, alpha)?))
}

/// P-symbol of (1-x)^c 3F2(a1, a2, a3; b1, b2; x): exponents 0, 1-b1, 1-b2 at 0;
/// c, 1+c, s+c at 1; a1-c, a2-c, a3-c at infinity.
pub fn three_f2_psymbol(p: &ThreeF2Params, c: C64) -> PSymbol {
    let s = p.excess();
    PSymbol::new(
        3,
        vec![
            (SpherePoint::Finite(r(0.0)), vec![r(0.0), r(1.0) - p.b1, r(1.0) - p.b2]),
            (SpherePoint::Finite(r(1.0)), vec![c, c + 1.0, s + c]),
            (SpherePoint::Infinity, vec![p.a1 - c, p.a2 - c, p.a3 - c]),
        ],
    )
    .expect("three distinct points")
}

/// The symbols of the two sides of the alpha <-> beta involution.
pub fn dual_psymbols(alpha: C64, beta: C64) -> (PSymbol, PSymbol) {
    let side = |a: C64, b: C64| {
        let p = ThreeF2Params::new(a * 2.0 - 1.0, a - b - 0.5, a + 0.5, a + b + 0.5, a - 0.5);
        three_f2_psymbol(&p, a * 2.0 - 1.0)
    };
    (side(alpha, beta), side(beta, alpha))
}

/// Per column, the number of exponents the two symbols share (as multisets).
pub fn shared_exponents(p1: &PSymbol, p2: &PSymbol, tol: f64) -> Vec<usize> {
    p1.columns()
        .iter()
        .map(|col| {
            let Some(other) = p2.column_at(&col.location) else { return 0 };
            let mut used = vec![false; other.exponents.len()];
            let mut n = 0;
            for x in &col.exponents {
                if let Some(j) = (0..used.len()).find(|&j| !used[j] && (other.exponents[j] - x).norm() <= tol) {
                    used[j] = true;
                    n += 1;
                }
            }
            n
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psymbol::fuchs_sum;
    use crate::scalar::{c, dist_to_nonpositive_integer};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pol() -> EvalPolicy {
        EvalPolicy::default()
    }

    fn rc(rng: &mut ChaCha8Rng, m: f64) -> C64 {
        c(rng.gen_range(-m..m), rng.gen_range(-m..m))
    }

    fn draw(rng: &mut ChaCha8Rng) -> Restricted3F2Params {
        loop {
            let p = Restricted3F2Params::new(rc(rng, 3.0), rc(rng, 3.0), rc(rng, 3.0), rc(rng, 3.0));
            if p.validate().is_ok() && dist_to_nonpositive_integer(p.b1) > 0.1 && dist_to_nonpositive_integer(p.e) > 0.1
            {
                return p;
            }
        }
    }

    #[test]
    fn e_map_examples() {
        let p = Restricted3F2Params::new(r(1.0), r(2.0), r(5.0), r(3.0));
        let (q, k) = pfaff_like(&p).unwrap();
        assert_eq!(q, Restricted3F2Params::new(r(1.0), r(2.0), r(5.0), r(6.0)));
        assert_eq!(k, r(-1.0));
        let (q2, _) = pfaff_like(&q).unwrap();
        assert!(rel_diff(q2.e, p.e) < 1e-15 && q2.a2 == p.a2);
        let (e, k) = euler_like(&p).unwrap();
        assert!((e.e - r(18.0 / 5.0)).norm() < 1e-15);
        assert_eq!((e.a1, e.a2, e.b1, k), (r(3.0), r(2.0), r(5.0), r(1.0)));
        let (e2, _) = euler_like(&e).unwrap();
        assert!(rel_diff(e2.e, p.e) < 1e-14 && e2.a1 == p.a1 && e2.a2 == p.a2);
        // lower triangular: e = 0 is fixed
        for s in [F32Step::PfaffLike, F32Step::EulerLike] {
            let (big_a, _, big_d) = s.e_map(&p);
            assert!(big_d.norm() > 0.0);
            assert_eq!(big_a * r(0.0) / (s.e_map(&p).1 * r(0.0) + big_d), r(0.0));
        }
        let bad = Restricted3F2Params::new(r(1.0), r(3.0), r(5.0), r(3.0));
        assert!(matches!(pfaff_like(&bad), Err(HeunError::SingularEMap(_))));
    }

    #[test]
    fn identities_at_fixed_point() {
        let p = Restricted3F2Params::new(r(1.0), r(2.0), r(5.0), r(3.0));
        for rule in [pfaff_like_rule(), euler_like_rule()] {
            assert!(f32_rule_residual(&rule, &p, r(0.2), &pol()).unwrap() <= 1e-10);
            let twice = compose_f32_rules(&rule, &rule);
            assert!(twice.label.is_identity());
            assert!(f32_rule_residual(&twice, &p, r(0.2), &pol()).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn randomized_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut done = 0;
        while done < 20 {
            let p = draw(&mut rng);
            let x = C64::from_polar(0.3 * rng.gen::<f64>(), rng.gen_range(0.0..6.3));
            for rule in [pfaff_like_rule(), euler_like_rule()] {
                match f32_rule_residual(&rule, &p, x, &pol()) {
                    Ok(res) => assert!(res <= 1e-9, "{}: {res} at {p:?}", rule.name),
                    Err(HeunError::SingularEMap(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
            done += 1;
        }
    }

    #[test]
    fn group_orders_and_table() {
        let g4 = restricted_group(false);
        let g8 = restricted_group(true);
        assert_eq!((g4.len(), g8.len()), (4, 8));
        let ep = compose_f32_rules(&euler_like_rule(), &pfaff_like_rule());
        assert_eq!(ep.label.to_string(), "[1-inf-]");
        let p = Restricted3F2Params::new(c(0.4, 0.1), r(1.3), c(2.6, -0.2), c(0.9, 0.3));
        let twisted = Restricted3F2Params::new(p.a2, p.b1 - p.a1 - 1.0, p.b1, (p.b1 - p.a1 - 1.0) * p.e / (p.e - p.a1));
        let x = r(0.2);
        let via_chain = apply_f32_rule(&ep, &p, x, &pol()).unwrap();
        let direct = one_minus_pow(x, -p.a2) * eval_3f2(&twisted.to_three_f2(), x / (x - 1.0), &pol()).unwrap();
        assert!(rel_diff(via_chain, direct) < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for rule in &g8 {
            for _ in 0..5 {
                let p = draw(&mut rng);
                let x = C64::from_polar(0.2 * rng.gen::<f64>(), rng.gen_range(0.0..6.3));
                if let Ok(res) = f32_rule_residual(rule, &p, x, &pol()) {
                    assert!(res <= 1e-9, "{}: {res}", rule.name);
                }
            }
        }
    }

    #[test]
    fn poisedness() {
        let (al, be) = (c(0.7, 0.2), c(-0.3, 1.1));
        let vw = ThreeF2Params::new(al, be, al / 2.0 + 1.0, al - be + 1.0, al / 2.0);
        assert_eq!(classify_poisedness(&vw), PoisednessClass::VeryWell);
        let (a1, a2, b1) = (c(0.4, 0.3), c(1.2, -0.5), c(2.3, 0.7));
        let u = b1 - a2 - 1.0;
        let nvw = ThreeF2Params::new(a1, u, (u + 2.0) / 2.0, b1, u / 2.0);
        assert_eq!(classify_poisedness(&nvw), PoisednessClass::NearlyVeryWell);
        let well = ThreeF2Params::new(r(1.5), r(0.3), r(0.9), r(2.2), r(1.6));
        assert_eq!(classify_poisedness(&well), PoisednessClass::Well);
        let nearly = ThreeF2Params::new(r(1.5), r(0.3), r(0.9), r(2.2), r(1.7));
        assert_eq!(classify_poisedness(&nearly), PoisednessClass::Nearly);
        let generic = ThreeF2Params::new(c(0.31, 0.2), r(1.17), c(-0.4, 0.9), r(2.21), c(0.5, -0.6));
        assert_eq!(classify_poisedness(&generic), PoisednessClass::General);
        assert!(PoisednessClass::VeryWell > PoisednessClass::Well);
        assert!(PoisednessClass::Well > PoisednessClass::NearlyVeryWell);
    }

    #[test]
    fn corollary_chain() {
        let p = pol();
        assert_eq!(bailey_slater_check(r(0.7), r(0.3), r(2.1), r(0.0), &p).unwrap(), 0.0);
        assert!(bailey_slater_check(r(0.7), r(0.3), r(2.1), r(0.2), &p).unwrap() <= 1e-10);
        // same as the Pfaff-like identity at e = -a2
        let q = Restricted3F2Params::new(r(0.7), r(0.3), r(2.1), r(-0.3));
        let (q2, _) = pfaff_like(&q).unwrap();
        assert!((q2.e - (r(2.1) - 0.3 - 1.0) / 2.0).norm() < 1e-15);
        assert!(f32_rule_residual(&pfaff_like_rule(), &q, r(0.2), &p).unwrap() <= 1e-10);

        assert_eq!(reduction_e(r(1.0), r(1.0), r(2.0)).unwrap(), r(1.0));
        let x = r(0.3);
        let (l, rr) = reduce_to_2f1(r(1.0), r(1.0), r(2.0), x, &p).unwrap();
        let want = r(1.0 / 0.7);
        assert!(rel_diff(l, want) < 1e-14 && rel_diff(rr, want) < 1e-14);
        let (l, rr) = reduce_to_2f1(r(1.0), r(1.0), r(2.0), r(0.0), &p).unwrap();
        assert_eq!((l, rr), (r(1.0), r(1.0)));

        let (al, be) = (c(0.6, 0.2), c(0.25, -0.3));
        let (l, rr) = very_well_poised_reduction(al, be, c(0.2, 0.1), &p).unwrap();
        assert!(rel_diff(l, rr) <= 1e-10);
        let (l2, _) = reduce_to_2f1(al, be, al - be + 1.0, c(0.2, 0.1), &p).unwrap();
        assert!(rel_diff(l, l2) <= 1e-10);

        assert_eq!(bailey_involution_check(r(0.8), r(0.8), r(0.15), &p).unwrap(), 0.0);
        assert!(bailey_involution_check(r(0.8), r(0.3), r(0.15), &p).unwrap() <= 1e-10);
        let z = r(0.0);
        // alpha - beta - 1/2 = 0 at (0.8, 0.3): the family's e is undefined there
        assert!(family_stability_check(r(0.8), r(0.3), z, z, r(0.15), &p).is_err());
        let fam = family_stability_check(r(0.9), r(0.3), z, z, r(0.15), &p).unwrap();
        let inv = bailey_involution_check(r(0.9), r(0.3), r(0.15), &p).unwrap();
        assert!(fam <= 1e-10 && inv <= 1e-10);
        let (fp, k) = family_params(r(0.9), r(0.3), z, z).unwrap();
        let direct = ThreeF2Params::new(r(0.8), r(0.1), r(1.4), r(1.7), r(0.4));
        assert!((k - r(0.8)).norm() < 1e-15);
        for (u, v) in fp.upper().iter().chain(&fp.lower()).zip(direct.upper().iter().chain(&direct.lower())) {
            assert!((u - v).norm() < 1e-15);
        }
        for (s, t) in [(c(0.3, 0.1), c(-0.2, 0.4)), (r(-0.7), r(0.25))] {
            assert!(family_stability_check(c(0.8, 0.1), c(0.3, -0.2), s, t, c(0.15, 0.05), &p).unwrap() <= 1e-10);
        }
        assert!(family_params(r(1.0), r(0.5), z, z).is_err());
        assert!(bailey_involution_check(c(0.7, 0.2), c(0.1, -0.3), c(0.1, 0.2), &p).unwrap() <= 1e-10);
    }

    #[test]
    fn dual_symbols() {
        let (al, be) = (c(0.8, 0.1), c(0.3, -0.2));
        let (p1, p2) = dual_psymbols(al, be);
        for p in [&p1, &p2] {
            assert!((fuchs_sum(p) - p.fuchs_target()).norm() < 1e-13);
        }
        assert_eq!(shared_exponents(&p1, &p2, 1e-12), vec![2, 2, 2]);
        let at1 = p1.column_at(&SpherePoint::Finite(r(1.0))).unwrap();
        for want in [al * 2.0, be * 2.0, al * 2.0 - 1.0] {
            assert!(at1.exponents.iter().any(|x| (x - want).norm() < 1e-14));
        }
        let (q1, q2) = dual_psymbols(al, al);
        assert_eq!(shared_exponents(&q1, &q2, 1e-12), vec![3, 3, 3]);
    }
}
