//! Complex scalar helpers shared by every module.

pub use num_complex::Complex64 as C64;

use crate::error::{HeunError, Result};

/// Distance below which a parameter counts as a nonpositive integer.
pub const POLE_TOL: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Distance from `z` to the nearest element of {0, -1, -2, ...}.
pub fn dist_to_nonpositive_integer(z: C64) -> f64 {
    let nearest = if z.re > 0.0 { 0.0 } else { z.re.round() };
    (z - r(nearest)).norm()
}

pub fn is_nonpositive_integer(z: C64) -> bool {
    dist_to_nonpositive_integer(z) <= POLE_TOL
}

pub fn check_finite(name: &str, z: C64) -> Result<()> {
    if is_finite(z) {
        Ok(())
    } else {
        Err(HeunError::InvalidParameter(format!("{name} is not finite: {z}")))
    }
}

/// |x - y| / max(|x|, |y|, 1e-300). Zero when both vanish.
pub fn rel_diff(x: C64, y: C64) -> f64 {
    let d = (x - y).norm();
    if d == 0.0 {
        return 0.0;
    }
    d / x.norm().max(y.norm()).max(1e-300)
}

/// |x - y| / max(1, |x|, |y|): absolute near zero, relative away from it.
pub fn mixed_diff(x: C64, y: C64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1.0)
}

/// Lexicographic (re, im) total order, used for canonical parameter ordering.
pub fn lex_cmp(x: &C64, y: &C64) -> std::cmp::Ordering {
    x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
}

/// Principal-branch power (1 - z)^mu.
pub fn one_minus_pow(z: C64, mu: C64) -> C64 {
    let base = r(1.0) - z;
    if mu == C64::new(0.0, 0.0) {
        return r(1.0);
    }
    base.powc(mu)
}

/// Roots of c2 n^2 + c1 n + c0 with c2 != 0, computed without cancellation.
pub fn quadratic_roots(c2: C64, c1: C64, c0: C64) -> (C64, C64) {
    let disc = (c1 * c1 - 4.0 * c2 * c0).sqrt();
    // choose the sign that avoids cancellation in -c1 -/+ disc
    let s = if (c1.conj() * disc).re >= 0.0 { -c1 - disc } else { -c1 + disc };
    if s.norm() == 0.0 {
        // c1 = 0 and c0 = 0
        return (r(0.0), r(0.0));
    }
    let x1 = s / (2.0 * c2);
    let x2 = (2.0 * c0) / s;
    (x1, x2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonpositive_integer_detection() {
        assert!(is_nonpositive_integer(r(0.0)));
        assert!(is_nonpositive_integer(r(-3.0)));
        assert!(is_nonpositive_integer(c(-2.0, 1e-9)));
        assert!(!is_nonpositive_integer(r(1.0)));
        assert!(!is_nonpositive_integer(r(-2.5)));
        assert!(!is_nonpositive_integer(c(-2.0, 1e-6)));
        assert!(!is_nonpositive_integer(r(1e-7)));
    }

    #[test]
    fn quadratic_roots_recover_factors() {
        // (n + 1)(n + 3) = n^2 + 4n + 3
        let (x1, x2) = quadratic_roots(r(1.0), r(4.0), r(3.0));
        let mut v = [x1, x2];
        v.sort_by(lex_cmp);
        assert!((v[0] - r(-3.0)).norm() < 1e-14);
        assert!((v[1] - r(-1.0)).norm() < 1e-14);

        let a = c(0.3, -1.2);
        let b = c(-2.0, 0.5);
        let k = c(1.5, 0.25);
        let (x1, x2) = quadratic_roots(k, -k * (a + b), k * a * b);
        let mut v = [x1, x2];
        v.sort_by(lex_cmp);
        assert!((v[0] - b).norm() < 1e-13);
        assert!((v[1] - a).norm() < 1e-13);
    }
}
