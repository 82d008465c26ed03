//! Heun equations with an apparent singular point at x = a (epsilon = -1)
//! and their reduction to 3F2(alpha, beta, e+1; gamma, e; x).

use crate::error::{HeunError, Result};
use crate::heun::local_solution_at_a_params;
use crate::numeric::{
    eval_2f1, eval_3f2, eval_hl, heun_recurrence_row, EvalPolicy, GaussParams, HeunParams, ThreeF2Params,
};
use crate::poly::Poly;
use crate::scalar::{is_finite, is_nonpositive_integer, r, rel_diff, C64};

/// Minimum distance from e to a puncture of the parameter sphere.
pub const PUNCTURE_TOL: f64 = 1e-6;

/// A point of the (a, q) curve at fixed alpha, beta, gamma, given by its parameter e.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApparentCurvePoint {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub e: C64,
    pub a: C64,
    pub q: C64,
}

impl ApparentCurvePoint {
    /// delta = alpha + beta - gamma + 2, so that epsilon = -1.
    pub fn delta(&self) -> C64 {
        self.alpha + self.beta - self.gamma + 2.0
    }

    pub fn heun_params(&self) -> HeunParams {
        HeunParams::new(self.a, self.q, self.alpha, self.beta, self.gamma, self.delta())
    }

    /// (alpha, beta, e+1; gamma, e).
    pub fn three_f2_params(&self) -> ThreeF2Params {
        ThreeF2Params::new(self.alpha, self.beta, self.e + 1.0, self.gamma, self.e)
    }

    /// e(e-gamma+1)/((e-alpha)(e-beta)), the multiplier of E in the left factor.
    pub fn e_ratio(&self) -> C64 {
        let e = self.e;
        e * (e - self.gamma + 1.0) / ((e - self.alpha) * (e - self.beta))
    }
}

/// The six punctures of the e-sphere other than infinity.
pub fn punctures(alpha: C64, beta: C64, gamma: C64) -> Vec<C64> {
    let mut out = vec![r(0.0), gamma - 1.0, alpha, beta];
    let den = alpha + beta - gamma + 1.0;
    if den.norm() > 1e-300 {
        out.push(alpha * beta / den);
    }
    out
}

/// a = e(e-gamma+1)/((e-alpha)(e-beta)), q = alpha beta (e+1)(e-gamma+1)/((e-alpha)(e-beta)).
pub fn curve_point(alpha: C64, beta: C64, gamma: C64, e: C64) -> Result<ApparentCurvePoint> {
    if !is_finite(e) {
        return Err(HeunError::Puncture("e = infinity".into()));
    }
    for p in punctures(alpha, beta, gamma) {
        if (e - p).norm() <= PUNCTURE_TOL {
            return Err(HeunError::Puncture(format!("e = {p} is excluded")));
        }
    }
    let den = (e - alpha) * (e - beta);
    let a = e * (e - gamma + 1.0) / den;
    let q = alpha * beta * (e + 1.0) * (e - gamma + 1.0) / den;
    Ok(ApparentCurvePoint { alpha, beta, gamma, e, a, q })
}

/// q^2 + [(gamma-1) - (2 alpha beta + alpha + beta) a] q + alpha beta a [(alpha beta + alpha + beta + 1) a - gamma].
pub fn curve_residual(a: C64, q: C64, alpha: C64, beta: C64, gamma: C64) -> C64 {
    let ab = alpha * beta;
    q * q + ((gamma - 1.0) - (ab * 2.0 + alpha + beta) * a) * q + ab * a * ((ab + alpha + beta + 1.0) * a - gamma)
}

/// The same condition in the relabelled local variables at x = a:
/// q'^2 + [(alpha'+beta'-delta'+1) + (delta'-1) a'] q' + alpha' beta' a'.
pub fn primed_curve_residual(p: &HeunParams) -> C64 {
    let (a, q, al, be, de) = (p.a, p.q, p.alpha, p.beta, p.delta);
    q * q + ((al + be - de + 1.0) + (de - 1.0) * a) * q + al * be * a
}

/// Hl(a, q; alpha, beta; gamma, alpha+beta-gamma+2; x) at a curve point.
pub fn eval_g(cp: &ApparentCurvePoint, x: C64, policy: &EvalPolicy) -> Result<C64> {
    eval_hl(&cp.heun_params(), x, policy)
}

/// Max mismatch, over the sampled n, between the E^2, E^1, E^0 coefficients of
///   1/(n+e+1) {rho E - 1} {(n+gamma)(n+e)(n+1) E - (n+alpha)(n+beta)(n+e+1)}
/// and those of the Hl recurrence operator built from (cp.a, cp.q). Each
/// coefficient's mismatch is scaled by max(1, |coefficient|).
pub fn difference_factorization_residual(cp: &ApparentCurvePoint, n_samples: &[i64]) -> Result<f64> {
    let (al, be, ga, e) = (cp.alpha, cp.beta, cp.gamma, cp.e);
    let rho = cp.e_ratio();
    let r1 = |n: C64| (n + ga) * (n + e) * (n + 1.0);
    let r0 = |n: C64| (n + al) * (n + be) * (n + e + 1.0);
    let hp = cp.heun_params();
    let mut worst = 0.0f64;
    for &n in n_samples {
        let nc = r(n as f64);
        let w = nc + e + 1.0;
        if w.norm() <= 1e-12 {
            return Err(HeunError::Pole(format!("n + e + 1 = 0 at n = {n}")));
        }
        let f2 = rho * r1(nc + 1.0) / w;
        let f1 = -(rho * r0(nc + 1.0) + r1(nc)) / w;
        let f0 = r0(nc) / w;
        let (lead, mid, tail) = heun_recurrence_row(&hp, n as f64);
        for (u, v) in [(f2, lead), (f1, -mid), (f0, tail)] {
            worst = worst.max((u - v).norm() / u.norm().max(v.norm()).max(1.0));
        }
    }
    Ok(worst)
}

/// A polynomial with a coefficient-wise bound on the moduli of the terms
/// summed to produce it, used to judge rounding in the comparison below.
#[derive(Debug, Clone)]
struct Tracked {
    val: Poly,
    mag: Poly,
}

impl Tracked {
    fn exact(p: Poly) -> Self {
        let mag = Poly::new(p.coeffs.iter().map(|z| r(z.norm())).collect());
        Self { val: p, mag }
    }

    fn zero() -> Self {
        Self::exact(Poly::zero())
    }

    fn scale(&self, k: C64) -> Self {
        Self { val: self.val.scale(k), mag: self.mag.scale(r(k.norm())) }
    }

    fn add(&self, o: &Tracked) -> Self {
        Self { val: &self.val + &o.val, mag: &self.mag + &o.mag }
    }

    fn sub(&self, o: &Tracked) -> Self {
        Self { val: &self.val - &o.val, mag: &self.mag + &o.mag }
    }

    fn mul(&self, o: &Tracked) -> Self {
        Self { val: &self.val * &o.val, mag: &self.mag * &o.mag }
    }
}

/// x^i (x-1)^j (x-a)^k.
fn factor_poly(i: usize, j: usize, k: usize, a: C64) -> Tracked {
    let mut p = Tracked::exact(Poly::constant(r(1.0)));
    for _ in 0..i {
        p = p.mul(&Tracked::exact(Poly::x()));
    }
    for _ in 0..j {
        p = p.mul(&Tracked::exact(Poly::linear_root(r(1.0))));
    }
    for _ in 0..k {
        p = p.mul(&Tracked::exact(Poly::linear_root(a)));
    }
    p
}

/// D^j x^k as a polynomial (zero when j > k).
fn d_monomial(k: usize, j: usize) -> Tracked {
    if j > k {
        return Tracked::zero();
    }
    let c: f64 = (0..j).map(|i| (k - i) as f64).product();
    Tracked::exact(Poly::monomial(k - j, r(c)))
}

type WTerm = (C64, [usize; 3]);

/// Coefficient polynomials, times W = x^2 (x-1)^2 (x-a)^2, of the operators
/// applied to x^k: (left factor) o (Heun operator), and the 3F2 operator.
fn cleared_operators(cp: &ApparentCurvePoint, k: usize) -> (Tracked, Tracked) {
    let (al, be, ga, de, e, a, q) = (cp.alpha, cp.beta, cp.gamma, cp.delta(), cp.e, cp.a, cp.q);
    let eps = r(-1.0);
    // W / (x^i (x-1)^j (x-a)^k)
    let w = |[i, j, k]: [usize; 3]| factor_poly(2 - i, 2 - j, 2 - k, a);
    let sum = |terms: &[WTerm]| terms.iter().fold(Tracked::zero(), |acc, (c, idx)| acc.add(&w(*idx).scale(*c)));
    // products of two such terms divided by W only add the indices
    let product_over_w = |xs: &[WTerm], ys: &[WTerm]| {
        let mut out = Vec::new();
        for (cx, ix) in xs {
            for (cy, iy) in ys {
                out.push((cx * cy, [ix[0] + iy[0], ix[1] + iy[1], ix[2] + iy[2]]));
            }
        }
        sum(&out)
    };
    let one = r(1.0);
    let big_w = w([0, 0, 0]);

    let c1_terms = [(e + 1.0, [1, 0, 0]), (one, [0, 1, 0]), (one, [0, 0, 1])];
    let p_terms = [(ga, [1, 0, 0]), (de, [0, 1, 0]), (eps, [0, 0, 1])];
    let wc1 = sum(&c1_terms);
    let wp = sum(&p_terms);
    let wdp = sum(&[(-ga, [2, 0, 0]), (-de, [0, 2, 0]), (-eps, [0, 0, 2])]);
    let num_r = Tracked::exact(Poly::new(vec![-q, al * be]));
    let wr = num_r.mul(&w([1, 1, 1]));
    let g = factor_poly(1, 1, 1, a);
    let g_prime = Tracked::exact(g.val.derivative());
    let wdr = g.scale(al * be).sub(&num_r.mul(&g_prime));
    let wc1p = product_over_w(&c1_terms, &p_terms);
    let wc1r = num_r.mul(&product_over_w(&c1_terms, &[(one, [1, 1, 1])]));

    let c3 = big_w.mul(&d_monomial(k, 3));
    let lhs = c3
        .add(&wp.add(&wc1).mul(&d_monomial(k, 2)))
        .add(&wdp.add(&wr).add(&wc1p).mul(&d_monomial(k, 1)))
        .add(&wdr.add(&wc1r).mul(&d_monomial(k, 0)));

    let (a1, a2, a3, b1, b2) = (al, be, e + 1.0, ga, e);
    let s1 = a1 + a2 + a3;
    let s2 = a1 * a2 + a2 * a3 + a3 * a1;
    let k2 = sum(&[(s1 + 3.0, [0, 1, 0]), (-(b1 + b2 + 1.0), [1, 1, 0])]);
    let k1 = sum(&[(s2 + s1 + 1.0, [1, 1, 0]), (-(b1 * b2), [2, 1, 0])]);
    let k0 = w([2, 1, 0]).scale(a1 * a2 * a3);
    let rhs = c3.add(&k2.mul(&d_monomial(k, 2))).add(&k1.mul(&d_monomial(k, 1))).add(&k0.mul(&d_monomial(k, 0)));
    (lhs, rhs)
}

/// Max coefficient mismatch between {D + (e+1)/x + 1/(x-1) + 1/(x-a)} o (Heun
/// operator) and the 3F2 operator, applied to x^k for k = 0..=k_max with
/// denominators cleared. Each coefficient's mismatch is divided by the summed
/// moduli of the terms that produced it (at least 1).
pub fn differential_factorization_residual(cp: &ApparentCurvePoint, k_max: usize) -> Result<f64> {
    if k_max < 3 {
        return Err(HeunError::InvalidParameter("k_max must be at least 3".into()));
    }
    let mut worst = 0.0f64;
    for k in 0..=k_max {
        let (lhs, rhs) = cleared_operators(cp, k);
        let n = lhs.val.degree().max(rhs.val.degree());
        for j in 0..=n {
            let d = (lhs.val.coeff(j) - rhs.val.coeff(j)).norm();
            let scale = lhs.mag.coeff(j).re.max(rhs.mag.coeff(j).re).max(1.0);
            worst = worst.max(d / scale);
        }
    }
    Ok(worst)
}

/// The cleared polynomials for a single monomial x^k, left and right.
pub fn differential_factorization_terms(cp: &ApparentCurvePoint, k: usize) -> (Poly, Poly) {
    let (lhs, rhs) = cleared_operators(cp, k);
    (lhs.val, rhs.val)
}

/// r1 = 2F1(alpha,beta;gamma;x) + (alpha beta/(gamma e)) x 2F1(alpha+1,beta+1;gamma+1;x),
/// r2 = [(e-gamma+1)/e] 2F1(alpha,beta;gamma;x) + [(gamma-1)/e] 2F1(alpha,beta;gamma-1;x).
pub fn g_two_representations(cp: &ApparentCurvePoint, x: C64, policy: &EvalPolicy) -> Result<(C64, C64)> {
    let (al, be, ga, e) = (cp.alpha, cp.beta, cp.gamma, cp.e);
    if e.norm() <= PUNCTURE_TOL {
        return Err(HeunError::Pole("e = 0".into()));
    }
    if is_nonpositive_integer(ga - 1.0) {
        return Err(HeunError::Pole("gamma - 1 is a nonpositive integer".into()));
    }
    let f = eval_2f1(&GaussParams::new(al, be, ga), x, policy)?;
    let f_up = eval_2f1(&GaussParams::new(al + 1.0, be + 1.0, ga + 1.0), x, policy)?;
    let f_down = eval_2f1(&GaussParams::new(al, be, ga - 1.0), x, policy)?;
    let r1 = f + al * be / (ga * e) * x * f_up;
    let r2 = (e - ga + 1.0) / e * f + (ga - 1.0) / e * f_down;
    Ok((r1, r2))
}

/// Relative mismatch in F(a3+) = [(a3-b1+1)/a3] F + [(b1-1)/a3] F(b1-).
pub fn contiguity_residual(p: &ThreeF2Params, x: C64, policy: &EvalPolicy) -> Result<f64> {
    if p.a3.norm() <= 1e-300 {
        return Err(HeunError::Pole("a3 = 0".into()));
    }
    let f = eval_3f2(p, x, policy)?;
    let f_up = eval_3f2(&ThreeF2Params::new(p.a1, p.a2, p.a3 + 1.0, p.b1, p.b2), x, policy)?;
    let f_down = eval_3f2(&ThreeF2Params::new(p.a1, p.a2, p.a3, p.b1 - 1.0, p.b2), x, policy)?;
    let rhs = (p.a3 - p.b1 + 1.0) / p.a3 * f + (p.b1 - 1.0) / p.a3 * f_down;
    Ok(rel_diff(f_up, rhs))
}

/// The n = 0 row of the recurrence of the local solution at x = a, whose
/// gamma is -1: returns (coefficient of c(2), right side), both of which
/// vanish on the curve, scaled by max(1, |terms|).
pub fn c2_consistency(cp: &ApparentCurvePoint) -> (f64, f64) {
    let lp = local_solution_at_a_params(&cp.heun_params());
    let (lead_m1, mid_m1, _) = heun_recurrence_row(&lp, -1.0);
    let c1 = mid_m1 / lead_m1;
    let (lead0, mid0, tail0) = heun_recurrence_row(&lp, 0.0);
    let scale = (mid0 * c1).norm().max(tail0.norm()).max(1.0);
    (lead0.norm(), (mid0 * c1 - tail0).norm() / scale)
}
