//! Identification of two- and three-term recurrences with quadratic
//! coefficients as 2F1 or Hl coefficient recurrences.

use std::fmt;

use crate::error::{HeunError, Result};
use crate::scalar::{is_nonpositive_integer, lex_cmp, quadratic_roots, r, C64};

use super::params::{GaussParams, HeunParams};

/// c2 n^2 + c1 n + c0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPoly {
    pub c2: C64,
    pub c1: C64,
    pub c0: C64,
}

impl QuadraticPoly {
    pub fn new(c2: C64, c1: C64, c0: C64) -> Self {
        Self { c2, c1, c0 }
    }

    /// k (n + u)(n + v).
    pub fn from_factors(k: C64, u: C64, v: C64) -> Self {
        Self { c2: k, c1: k * (u + v), c0: k * u * v }
    }

    pub fn eval(&self, n: C64) -> C64 {
        (self.c2 * n + self.c1) * n + self.c0
    }

    pub fn scale(&self, k: C64) -> Self {
        Self { c2: self.c2 * k, c1: self.c1 * k, c0: self.c0 * k }
    }

    fn magnitude(&self) -> f64 {
        self.c2.norm().max(self.c1.norm()).max(self.c0.norm())
    }

    /// Both roots, ordered lexicographically. Requires c2 != 0.
    pub fn roots(&self) -> (C64, C64) {
        let (x1, x2) = quadratic_roots(self.c2, self.c1, self.c0);
        if lex_cmp(&x1, &x2).is_le() {
            (x1, x2)
        } else {
            (x2, x1)
        }
    }
}

impl fmt::Display for QuadraticPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) n^2 + ({}) n + ({})", self.c2, self.c1, self.c0)
    }
}

const SHAPE_TOL: f64 = 1e-10;

fn require_degree2(name: &str, p: &QuadraticPoly) -> Result<()> {
    if p.c2.norm() <= SHAPE_TOL * p.magnitude() || p.c2 == r(0.0) {
        return Err(HeunError::Shape(format!("{name} must have degree 2")));
    }
    Ok(())
}

fn require_root(name: &str, p: &QuadraticPoly, root: f64) -> Result<()> {
    if p.eval(r(root)).norm() > SHAPE_TOL * p.magnitude() {
        return Err(HeunError::Shape(format!("{name} does not vanish at n = {root}")));
    }
    Ok(())
}

fn negated_roots_sorted(p: &QuadraticPoly) -> (C64, C64) {
    let (x1, x2) = quadratic_roots(p.c2, p.c1, p.c0);
    let mut v = [-x1, -x2];
    v.sort_by(lex_cmp);
    (v[0], v[1])
}

/// Solves `P1(n) c(n+1) + P0(n) c(n) = 0` as the coefficient recurrence of
/// 2F1(alpha, beta; gamma; A x).
///
/// The returned alpha, beta are ordered lexicographically by (re, im).
pub fn classify_2term(p1: &QuadraticPoly, p0: &QuadraticPoly) -> Result<(C64, GaussParams)> {
    require_degree2("P1", p1)?;
    require_degree2("P0", p0)?;
    require_root("P1", p1, -1.0)?;
    let lambda = p1.c2;
    // roots of P1 sum to -c1/c2; one of them is -1
    let other = -p1.c1 / lambda + 1.0;
    let gamma = -other;
    if is_nonpositive_integer(gamma) {
        return Err(HeunError::Shape(format!("other root {other} of P1 is an integer > -1")));
    }
    let a_scale = -p0.c2 / lambda;
    let (alpha, beta) = negated_roots_sorted(p0);
    Ok((a_scale, GaussParams::new(alpha, beta, gamma)))
}

/// Solves `P2(n) c(n+2) + P1(n) c(n+1) + P0(n) c(n) = 0` as the coefficient
/// recurrence of Hl(a, q; alpha, beta; gamma, delta; A x).
///
/// The characteristic roots of the recurrence are A and A/a; of the two ways
/// to assign them the one with |a| >= 1 is returned, ties broken by the
/// lexicographically smaller a.
pub fn classify_3term(p2: &QuadraticPoly, p1: &QuadraticPoly, p0: &QuadraticPoly) -> Result<(C64, HeunParams)> {
    require_degree2("P2", p2)?;
    require_degree2("P0", p0)?;
    require_root("P2", p2, -2.0)?;
    let other = -p2.c1 / p2.c2 + 2.0;
    let gamma = -other - 1.0;
    if is_nonpositive_integer(gamma) {
        return Err(HeunError::Shape(format!("other root {other} of P2 is an integer > -2")));
    }

    let (z1, z2) = quadratic_roots(p2.c2, p1.c2, p0.c2);
    let cand = [(z1, z1 / z2), (z2, z2 / z1)];
    let (big_a, a) = {
        let m0 = cand[0].1.norm();
        let m1 = cand[1].1.norm();
        if (m0 - 1.0).abs() <= 1e-12 && (m1 - 1.0).abs() <= 1e-12 {
            if lex_cmp(&cand[0].1, &cand[1].1).is_le() {
                cand[0]
            } else {
                cand[1]
            }
        } else if m0 >= m1 {
            cand[0]
        } else {
            cand[1]
        }
    };
    // a double root of the characteristic polynomial means a = 1
    if (a - 1.0).norm() <= 1e-6 {
        return Err(HeunError::Degenerate("characteristic roots coincide (confluent case)".into()));
    }

    let lambda = p2.c2 / a;
    let tail = p0.scale(r(1.0) / (lambda * big_a * big_a));
    let (alpha, beta) = negated_roots_sorted(&tail);
    let mid = p1.scale(r(-1.0) / (lambda * big_a));
    let q = mid.eval(r(-1.0));
    let delta = (mid.c1 - a * (gamma + 1.0) - alpha - beta - 2.0) / (a - 1.0);
    Ok((big_a, HeunParams::new(a, q, alpha, beta, gamma, delta)))
}

/// Recurrence polynomials of 2F1(alpha, beta; gamma; A x), scaled by `lambda`.
pub fn forward_2term(a_scale: C64, p: &GaussParams, lambda: C64) -> (QuadraticPoly, QuadraticPoly) {
    let p1 = QuadraticPoly::from_factors(lambda, p.gamma, r(1.0));
    let p0 = QuadraticPoly::from_factors(-lambda * a_scale, p.alpha, p.beta);
    (p1, p0)
}

/// Recurrence polynomials of Hl(p; A x), scaled by `lambda`.
pub fn forward_3term(a_scale: C64, p: &HeunParams, lambda: C64) -> (QuadraticPoly, QuadraticPoly, QuadraticPoly) {
    let eps = p.epsilon();
    let p2 = QuadraticPoly::from_factors(lambda * p.a, p.gamma + 1.0, r(2.0));
    // (n+1)(n+g+d) a + (n+1)(n+g+e) + q
    let mid = QuadraticPoly::new(
        p.a + 1.0,
        p.a * (p.gamma + p.delta + 1.0) + (p.gamma + eps + 1.0),
        p.a * (p.gamma + p.delta) + (p.gamma + eps) + p.q,
    );
    let p1 = mid.scale(-lambda * a_scale);
    let p0 = QuadraticPoly::from_factors(lambda * a_scale * a_scale, p.alpha, p.beta);
    (p2, p1, p0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::series::heun_recurrence_row;
    use crate::scalar::c;
    use proptest::prelude::*;

    fn close(x: C64, y: C64, tol: f64) -> bool {
        (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0)
    }

    #[test]
    fn two_term_examples() {
        let p1 = QuadraticPoly::from_factors(r(1.0), r(2.0), r(1.0));
        let p0 = QuadraticPoly::from_factors(r(-1.0), r(1.0), r(3.0));
        let (a, g) = classify_2term(&p1, &p0).unwrap();
        assert!(close(a, r(1.0), 1e-14));
        assert!(close(g.alpha, r(1.0), 1e-14) && close(g.beta, r(3.0), 1e-14));
        assert!(close(g.gamma, r(2.0), 1e-14));

        let p0 = QuadraticPoly::from_factors(r(-2.0), r(1.0), r(3.0));
        let (a, _) = classify_2term(&p1, &p0).unwrap();
        assert!(close(a, r(2.0), 1e-14));

        // gamma = 1: P1 = (n+1)^2
        let p1 = QuadraticPoly::from_factors(r(1.0), r(1.0), r(1.0));
        assert!(classify_2term(&p1, &p0).is_ok());
    }

    #[test]
    fn two_term_shape_errors() {
        let p0 = QuadraticPoly::from_factors(r(-1.0), r(1.0), r(3.0));
        let no_root = QuadraticPoly::from_factors(r(1.0), r(2.0), r(3.0));
        assert!(matches!(classify_2term(&no_root, &p0), Err(HeunError::Shape(_))));
        // other root 0 -> gamma = 0
        let bad = QuadraticPoly::from_factors(r(1.0), r(0.0), r(1.0));
        assert!(matches!(classify_2term(&bad, &p0), Err(HeunError::Shape(_))));
        let linear = QuadraticPoly::new(r(0.0), r(1.0), r(1.0));
        assert!(matches!(classify_2term(&linear, &p0), Err(HeunError::Shape(_))));
    }

    #[test]
    fn forward_3term_matches_recurrence_row() {
        let p = HeunParams::new(c(2.0, 0.5), c(0.3, -0.2), c(1.1, 0.4), r(-0.6), c(0.7, 0.1), r(1.3));
        let (p2, p1, p0) = forward_3term(r(1.0), &p, r(1.0));
        for n in 0..5 {
            let (lead, mid, tail) = heun_recurrence_row(&p, n as f64);
            let nn = r(n as f64);
            assert!(close(p2.eval(nn), lead, 1e-14));
            assert!(close(p1.eval(nn), -mid, 1e-14));
            assert!(close(p0.eval(nn), tail, 1e-14));
        }
    }

    #[test]
    fn three_term_examples() {
        let p = HeunParams::new(r(2.0), r(1.0), r(1.0), r(1.0), r(1.0), r(1.0));
        for big_a in [1.0, 3.0] {
            let (p2, p1, p0) = forward_3term(r(big_a), &p, r(1.0));
            let (a_got, got) = classify_3term(&p2, &p1, &p0).unwrap();
            assert!(close(a_got, r(big_a), 1e-12));
            for (x, y) in got.as_array().iter().zip(p.as_array()) {
                assert!(close(*x, y, 1e-12), "{got} vs {p}");
            }
        }
    }

    #[test]
    fn three_term_confluent_rejected() {
        let p = HeunParams::new(r(1.0), r(0.5), r(1.0), r(2.0), r(1.5), r(0.5));
        let (p2, p1, p0) = forward_3term(r(1.0), &p, r(1.0));
        assert!(matches!(classify_3term(&p2, &p1, &p0), Err(HeunError::Degenerate(_))));
    }

    #[test]
    fn three_term_small_a_gives_delta_epsilon_image() {
        let p = HeunParams::new(c(0.4, 0.2), c(0.3, 0.1), c(0.5, -0.3), c(-1.2, 0.4), c(1.4, 0.2), c(0.2, 0.6));
        let big_a = c(1.5, -0.5);
        let (p2, p1, p0) = forward_3term(big_a, &p, c(0.7, 0.2));
        let (a_got, got) = classify_3term(&p2, &p1, &p0).unwrap();
        assert!(close(a_got, big_a / p.a, 1e-12));
        assert!(close(got.a, r(1.0) / p.a, 1e-12));
        assert!(close(got.q, p.q / p.a, 1e-12));
        assert!(close(got.gamma, p.gamma, 1e-12));
        assert!(close(got.delta, p.epsilon(), 1e-12));
    }

    fn cplx(bound: f64) -> impl Strategy<Value = C64> {
        (-bound..bound, -bound..bound).prop_map(|(a, b)| c(a, b))
    }

    fn sorted_pair(x: C64, y: C64) -> (C64, C64) {
        if lex_cmp(&x, &y).is_le() {
            (x, y)
        } else {
            (y, x)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn two_term_round_trip(al in cplx(3.0), be in cplx(3.0), ga in cplx(3.0), big_a in cplx(3.0), lam in cplx(2.0)) {
            prop_assume!(!is_nonpositive_integer(ga) && crate::scalar::dist_to_nonpositive_integer(ga) > 1e-3);
            prop_assume!(big_a.norm() > 0.1 && lam.norm() > 0.1);
            let g = GaussParams::new(al, be, ga);
            let (p1, p0) = forward_2term(big_a, &g, lam);
            let (a_got, got) = classify_2term(&p1, &p0).unwrap();
            let (x, y) = sorted_pair(al, be);
            prop_assert!(close(a_got, big_a, 1e-10));
            prop_assert!(close(got.gamma, ga, 1e-10));
            prop_assert!(close(got.alpha, x, 1e-7) && close(got.beta, y, 1e-7));
        }

        #[test]
        fn three_term_round_trip(
            a in cplx(3.0), q in cplx(2.0), al in cplx(2.0), be in cplx(2.0),
            ga in cplx(2.0), de in cplx(2.0), big_a in cplx(2.0), lam in cplx(2.0),
        ) {
            prop_assume!(a.norm() >= 1.2 && (a - 1.0).norm() > 0.3);
            prop_assume!(crate::scalar::dist_to_nonpositive_integer(ga) > 1e-3);
            prop_assume!(big_a.norm() > 0.1 && lam.norm() > 0.1);
            let p = HeunParams::new(a, q, al, be, ga, de);
            let (p2, p1, p0) = forward_3term(big_a, &p, lam);
            let (a_got, got) = classify_3term(&p2, &p1, &p0).unwrap();
            let (x, y) = sorted_pair(al, be);
            prop_assert!(close(a_got, big_a, 1e-9));
            prop_assert!(close(got.a, a, 1e-9));
            prop_assert!(close(got.q, q, 1e-8));
            prop_assert!(close(got.gamma, ga, 1e-9));
            prop_assert!(close(got.delta, de, 1e-7));
            prop_assert!(close(got.alpha, x, 1e-6) && close(got.beta, y, 1e-6));
        }
    }
}
