//! Quadratic and biquadratic transformations of Hl.
//!
//! The quadratic rule pulls an HE on the x'-sphere back along
//! R(x) = A x(a-x)/(1-x); it exists only when (a, a') lies on the curve
//! a^2 (1-a')^2 = 16 (1-a) a', which is parametrized by t.

use crate::error::{HeunError, Result};
use crate::numeric::{check_domain, eval_hl, EvalPolicy, HeunParams};
use crate::psymbol::{
    f_homotopy, quadratic_branching, quadratic_map, quartic_branching, quartic_map, rational_lift, PSymbol, SpherePoint,
};
use crate::scalar::{one_minus_pow, r, rel_diff, C64};

const PUNCTURE_TOL: f64 = 1e-10;
const POLE_REL_TOL: f64 = 1e-12;

/// A point (a, a') on the quadratic-transformation curve with its multiplier A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticLiftData {
    pub a: C64,
    pub a_prime: C64,
    pub big_a: C64,
    pub t: Option<C64>,
}

impl QuadraticLiftData {
    /// Builds the data from a pair on the curve; A = (1+a')/(2(2-a)).
    pub fn from_pair(a: C64, a_prime: C64) -> Result<Self> {
        for (name, v) in [("a", a), ("a'", a_prime)] {
            if v.norm() <= PUNCTURE_TOL || (v - 1.0).norm() <= PUNCTURE_TOL {
                return Err(HeunError::InvalidParameter(format!("{name} must avoid 0 and 1")));
            }
        }
        let lhs = a * a * (r(1.0) - a_prime) * (r(1.0) - a_prime);
        let rhs = (r(1.0) - a) * a_prime * 16.0;
        if rel_diff(lhs, rhs) > 1e-10 {
            return Err(HeunError::InvalidParameter(format!("({a}, {a_prime}) is off the curve")));
        }
        if (a - 2.0).norm() <= PUNCTURE_TOL {
            return Err(HeunError::Puncture("a = 2".into()));
        }
        let big_a = (r(1.0) + a_prime) / ((r(2.0) - a) * 2.0);
        Ok(Self { a, a_prime, big_a, t: None })
    }
}

/// a^2 (1-a')^2 - 16 (1-a) a'.
pub fn constraint_residual(a: C64, a_prime: C64) -> C64 {
    a * a * (r(1.0) - a_prime).powi(2) - (r(1.0) - a) * a_prime * 16.0
}

/// a = t(t+8)/(t+4)^2, a' = t^2/(t+8)^2, A = ((t+4)/(t+8))^2.
pub fn lift_from_t(t: C64) -> Result<QuadraticLiftData> {
    if !(t.re.is_finite() && t.im.is_finite()) {
        return Err(HeunError::Puncture("t = infinity".into()));
    }
    for p in [0.0, -4.0, -8.0] {
        if (t - p).norm() <= PUNCTURE_TOL {
            return Err(HeunError::Puncture(format!("t = {p}")));
        }
    }
    let (t4, t8) = (t + 4.0, t + 8.0);
    Ok(QuadraticLiftData { a: t * t8 / (t4 * t4), a_prime: t * t / (t8 * t8), big_a: (t4 / t8).powi(2), t: Some(t) })
}

/// R(x) = A x(a-x)/(1-x).
pub fn quad_map_r(d: &QuadraticLiftData, x: C64) -> Result<C64> {
    let den = r(1.0) - x;
    if den.norm() <= POLE_REL_TOL * x.norm().max(1.0) {
        return Err(HeunError::Pole("R has a pole at x = 1".into()));
    }
    Ok(d.big_a * x * (d.a - x) / den)
}

/// Left side Hl(a, q; 2 alpha, gamma; gamma, 2 alpha - gamma + 1; x).
pub fn quadratic_lhs_params(d: &QuadraticLiftData, alpha: C64, gamma: C64, q: C64) -> HeunParams {
    HeunParams::new(d.a, q, alpha * 2.0, gamma, gamma, alpha * 2.0 - gamma + 1.0)
}

/// Right side Hl(a', A(q - gamma alpha a); alpha, gamma - alpha; gamma, 1/2; .).
pub fn quadratic_rhs_params(d: &QuadraticLiftData, alpha: C64, gamma: C64, q: C64) -> HeunParams {
    HeunParams::new(d.a_prime, d.big_a * (q - gamma * alpha * d.a), alpha, gamma - alpha, gamma, r(0.5))
}

/// Both sides of Hl(lhs; x) = (1-x)^(-alpha) Hl(rhs; R(x)).
pub fn quadratic_rule(
    d: &QuadraticLiftData,
    alpha: C64,
    gamma: C64,
    q: C64,
    x: C64,
    policy: &EvalPolicy,
) -> Result<(C64, C64)> {
    let lp = quadratic_lhs_params(d, alpha, gamma, q);
    let rp = quadratic_rhs_params(d, alpha, gamma, q);
    check_domain(x, lp.radius(), policy)?;
    let y = quad_map_r(d, x)?;
    check_domain(y, rp.radius(), policy)?;
    let lhs = eval_hl(&lp, x, policy)?;
    let rhs = one_minus_pow(x, -alpha) * eval_hl(&rp, y, policy)?;
    Ok((lhs, rhs))
}

/// S(x) = 4a x(1-x)(a-x)/(a-x^2)^2.
pub fn biquad_map_s(a: C64, x: C64) -> Result<C64> {
    let den = a - x * x;
    if den.norm() <= POLE_REL_TOL * a.norm().max(x.norm_sqr()).max(1.0) {
        return Err(HeunError::Pole("S has a double pole at x^2 = a".into()));
    }
    Ok(a * x * (r(1.0) - x) * (a - x) * 4.0 / (den * den))
}

/// The three algebraic forms of S: the product form, 1 - (a-2ax+x^2)^2/(a-x^2)^2
/// and a - a(a-2x+x^2)^2/(a-x^2)^2.
pub fn biquad_map_s_forms(a: C64, x: C64) -> Result<[C64; 3]> {
    let s = biquad_map_s(a, x)?;
    let den2 = (a - x * x).powi(2);
    let f2 = r(1.0) - (a - a * x * 2.0 + x * x).powi(2) / den2;
    let f3 = a - a * (a - x * 2.0 + x * x).powi(2) / den2;
    Ok([s, f2, f3])
}

/// Left side Hl(a, q; 2 gamma - 1, gamma; gamma, gamma; x).
pub fn biquadratic_lhs_params(a: C64, q: C64, gamma: C64) -> HeunParams {
    HeunParams::new(a, q, gamma * 2.0 - 1.0, gamma, gamma, gamma)
}

/// Right side Hl(a, q/4; gamma/2 - 1/4, gamma/2 + 1/4; gamma, 1/2; .).
pub fn biquadratic_rhs_params(a: C64, q: C64, gamma: C64) -> HeunParams {
    HeunParams::new(a, q / 4.0, gamma / 2.0 - 0.25, gamma / 2.0 + 0.25, gamma, r(0.5))
}

/// Both sides of Hl(lhs; x) = (1 - x^2/a)^(1/2 - gamma) Hl(rhs; S(x)).
pub fn biquadratic_rule(a: C64, q: C64, gamma: C64, x: C64, policy: &EvalPolicy) -> Result<(C64, C64)> {
    let lp = biquadratic_lhs_params(a, q, gamma);
    let rp = biquadratic_rhs_params(a, q, gamma);
    check_domain(x, lp.radius(), policy)?;
    let y = biquad_map_s(a, x)?;
    check_domain(y, rp.radius(), policy)?;
    let lhs = eval_hl(&lp, x, policy)?;
    let rhs = one_minus_pow(x * x / a, r(0.5) - gamma) * eval_hl(&rp, y, policy)?;
    Ok((lhs, rhs))
}

/// Relative mismatch in H(a, q; x) = H(a, q/4; S(x)), with H = Hl(a, q; 0, 1/2; 1/2, 1/2; .).
pub fn h_duplication_check(a: C64, q: C64, x: C64, policy: &EvalPolicy) -> Result<f64> {
    let (lhs, rhs) = biquadratic_rule(a, q, r(0.5), x, policy)?;
    Ok(rel_diff(lhs, rhs))
}

/// Lifts the right-side P-symbol along R, absorbs the factor (1-x)^(-alpha),
/// and compares with the left-side symbol.
pub fn quadratic_psymbol_check(d: &QuadraticLiftData, alpha: C64, gamma: C64, tol: f64) -> Result<bool> {
    let rp = quadratic_rhs_params(d, alpha, gamma, r(0.0));
    let lp = quadratic_lhs_params(d, alpha, gamma, r(0.0));
    let rm = quadratic_map(d.a, d.big_a)?;
    let table = quadratic_branching(d.a, d.big_a)?;
    let lifted = rational_lift(&PSymbol::heun(&rp), &rm, &table)?;
    let lifted = f_homotopy(&lifted, SpherePoint::Finite(r(1.0)), alpha, false)?;
    Ok(lifted.equivalent(&PSymbol::heun(&lp), tol))
}

/// Lifts the right-side P-symbol along S, absorbs (1 - x^2/a)^(1/2 - gamma)
/// at the double poles, drops the ordinary columns and compares with the left side.
pub fn biquadratic_psymbol_check(a: C64, gamma: C64, tol: f64) -> Result<bool> {
    let rp = biquadratic_rhs_params(a, r(0.0), gamma);
    let lp = biquadratic_lhs_params(a, r(0.0), gamma);
    let lifted = rational_lift(&PSymbol::heun(&rp), &quartic_map(a)?, &quartic_branching(a))?;
    let sa = a.sqrt();
    let zeta = gamma - 0.5;
    let sym = f_homotopy(&lifted, SpherePoint::Finite(sa), zeta, false)?;
    let sym = f_homotopy(&sym, SpherePoint::Finite(-sa), zeta, false)?.drop_ordinary();
    Ok(sym.equivalent(&PSymbol::heun(&lp), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pol() -> EvalPolicy {
        EvalPolicy::default()
    }

    fn rc(rng: &mut ChaCha8Rng, m: f64) -> C64 {
        C64::from_polar(m * rng.gen::<f64>(), rng.gen_range(0.0..std::f64::consts::TAU))
    }

    #[test]
    fn curve_examples() {
        assert!(constraint_residual(r(9.0 / 25.0), r(1.0 / 81.0)).norm() < 1e-15);
        assert!(constraint_residual(c(0.3, 0.4), c(-0.2, 0.7)).norm() > 1e-3);
        let d = lift_from_t(r(1.0)).unwrap();
        assert!((d.a - r(9.0 / 25.0)).norm() < 1e-15);
        assert!((d.a_prime - r(1.0 / 81.0)).norm() < 1e-15);
        assert!((d.big_a - r(25.0 / 81.0)).norm() < 1e-15);
        let from_adef = (r(1.0) + 1.0 / 81.0) / (r(2.0) * (2.0 - 9.0 / 25.0));
        assert!((from_adef - r(25.0 / 81.0)).norm() < 1e-15);
        let e = QuadraticLiftData::from_pair(d.a, d.a_prime).unwrap();
        assert!(rel_diff(e.big_a, d.big_a) < 1e-14);
        for t in [0.0, -4.0, -8.0] {
            assert!(matches!(lift_from_t(r(t)), Err(HeunError::Puncture(_))));
        }
        assert!(matches!(lift_from_t(r(f64::INFINITY)), Err(HeunError::Puncture(_))));
        assert!(QuadraticLiftData::from_pair(c(0.3, 0.4), c(-0.2, 0.7)).is_err());
    }

    #[test]
    fn t_curve_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let t = rc(&mut rng, 12.0);
            let Ok(d) = lift_from_t(t) else { continue };
            let scale = (d.a * d.a * (r(1.0) - d.a_prime).powi(2)).norm().max(1e-300);
            assert!(constraint_residual(d.a, d.a_prime).norm() / scale <= 1e-12);
            let adef = (r(1.0) + d.a_prime) / ((r(2.0) - d.a) * 2.0);
            assert!(rel_diff(adef, d.big_a) <= 1e-12);
        }
    }

    #[test]
    fn map_r_examples() {
        let d = lift_from_t(r(1.0)).unwrap();
        assert_eq!(quad_map_r(&d, r(0.0)).unwrap(), r(0.0));
        assert!(quad_map_r(&d, d.a).unwrap().norm() < 1e-16);
        let want = 25.0 / 81.0 * 0.05 * 0.31 / 0.95;
        assert!((quad_map_r(&d, r(0.05)).unwrap() - r(want)).norm() < 1e-15);
        assert!((want - 0.00503571).abs() < 5e-8);
        assert!(matches!(quad_map_r(&d, r(1.0)), Err(HeunError::Pole(_))));
    }

    #[test]
    fn quadratic_rule_examples() {
        let d = lift_from_t(r(1.0)).unwrap();
        let (l, rr) = quadratic_rule(&d, r(0.5), r(1.0), r(0.2), r(0.0), &pol()).unwrap();
        assert_eq!((l, rr), (r(1.0), r(1.0)));
        let (l, rr) = quadratic_rule(&d, r(0.5), r(1.0), r(0.2), r(0.05), &pol()).unwrap();
        assert!(rel_diff(l, rr) <= 1e-10, "{l} vs {rr}");
        let rp = quadratic_rhs_params(&d, r(0.5), r(1.0), r(0.2));
        assert!((rp.q - r(25.0 / 81.0 * (0.2 - 0.5 * 9.0 / 25.0))).norm() < 1e-15);
        assert!(matches!(quadratic_rule(&d, r(0.5), r(1.0), r(0.2), r(0.2), &pol()), Err(HeunError::Domain { .. })));
    }

    #[test]
    fn quadratic_rule_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut done = 0;
        while done < 10 {
            let Ok(d) = lift_from_t(rc(&mut rng, 6.0)) else { continue };
            let (alpha, gamma, q) = (rc(&mut rng, 2.0), rc(&mut rng, 2.0), rc(&mut rng, 2.0));
            if crate::scalar::dist_to_nonpositive_integer(gamma) < 0.1 {
                continue;
            }
            let x = C64::from_polar(0.1 * d.a.norm().min(1.0) * rng.gen::<f64>(), rng.gen_range(0.0..6.3));
            let Ok(y) = quad_map_r(&d, x) else { continue };
            if y.norm() > 0.5 * d.a_prime.norm().min(1.0) {
                continue;
            }
            let (l, rr) = quadratic_rule(&d, alpha, gamma, q, x, &pol()).unwrap();
            assert!(rel_diff(l, rr) <= 1e-9, "{l} vs {rr}");
            assert!(quadratic_psymbol_check(&d, alpha, gamma, 1e-9).unwrap());
            done += 1;
        }
    }

    #[test]
    fn s_forms() {
        for a in [r(2.0), c(1.5, 0.8), r(-3.0)] {
            assert_eq!(biquad_map_s(a, r(0.0)).unwrap(), r(0.0));
            assert!(biquad_map_s(a, r(1.0)).unwrap().norm() < 1e-15);
            assert!(biquad_map_s(a, a).unwrap().norm() < 1e-14);
            assert!(matches!(biquad_map_s(a, a.sqrt()), Err(HeunError::Pole(_))));
        }
        let s = biquad_map_s(r(2.0), r(0.1)).unwrap();
        assert!((s - r(1.368 / 3.9601)).norm() < 1e-15);
        assert!((s.re - 0.345446).abs() < 1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let (a, x) = (rc(&mut rng, 3.0), rc(&mut rng, 1.0));
            let Ok([f1, f2, f3]) = biquad_map_s_forms(a, x) else { continue };
            let scale = f1.norm().max(a.norm()).max(1.0);
            assert!((f1 - f2).norm() / scale < 1e-12 && (f1 - f3).norm() / scale < 1e-12);
        }
    }

    #[test]
    fn biquadratic_examples() {
        let (l, rr) = biquadratic_rule(r(2.0), r(0.3), r(0.75), r(0.0), &pol()).unwrap();
        assert_eq!((l, rr), (r(1.0), r(1.0)));
        let (l, rr) = biquadratic_rule(r(2.0), r(0.3), r(0.75), r(0.08), &pol()).unwrap();
        assert!(rel_diff(l, rr) <= 1e-9);
        assert_eq!(h_duplication_check(r(2.0), r(0.0), r(0.1), &pol()).unwrap(), 0.0);
        assert!(h_duplication_check(r(2.0), r(0.3), r(0.1), &pol()).unwrap() <= 1e-10);
        assert!(h_duplication_check(r(-3.0), r(0.5), r(0.1), &pol()).unwrap() <= 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let mut done = 0;
        while done < 10 {
            let a = C64::from_polar(rng.gen_range(1.5..3.0), rng.gen_range(0.0..6.3));
            let (q, gamma) = (rc(&mut rng, 2.0), rc(&mut rng, 2.0));
            if crate::scalar::dist_to_nonpositive_integer(gamma) < 0.1 {
                continue;
            }
            let x = C64::from_polar(0.1 * rng.gen::<f64>(), rng.gen_range(0.0..6.3));
            if biquad_map_s(a, x).unwrap().norm() > 0.5 || (r(1.0) - x * x / a).re <= 0.0 {
                continue;
            }
            let (l, rr) = biquadratic_rule(a, q, gamma, x, &pol()).unwrap();
            assert!(rel_diff(l, rr) <= 1e-9);
            assert!(biquadratic_psymbol_check(a, gamma, 1e-9).unwrap());
            done += 1;
        }
    }
}
