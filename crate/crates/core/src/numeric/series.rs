//! Coefficient recurrences and truncated power-series evaluation.
//!
//! Coefficients are generated from the first-order recurrences of 2F1 and 3F2
//! and from the three-term recurrence of the local Heun function. Evaluation
//! works on scaled terms c(n) x^n produced directly by the recurrence, so
//! coefficients growing like |a|^-n never overflow before the terms decay.

use crate::error::{HeunError, Result};
use crate::scalar::{r, C64};

use super::params::{EvalPolicy, GaussParams, HeunParams, ThreeF2Params};

/// Which recurrence produced a [`CoefficientSequence`].
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSource {
    Gauss(GaussParams),
    Heun(HeunParams),
    ThreeF2(ThreeF2Params),
    Derivative { base: Box<SeriesSource>, order: usize },
    Custom { label: String, radius: f64 },
}

impl SeriesSource {
    /// Declared radius of convergence of the associated power series.
    pub fn radius(&self) -> f64 {
        match self {
            SeriesSource::Gauss(_) | SeriesSource::ThreeF2(_) => 1.0,
            SeriesSource::Heun(p) => p.radius(),
            SeriesSource::Derivative { base, .. } => base.radius(),
            SeriesSource::Custom { radius, .. } => *radius,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            SeriesSource::Gauss(p) => format!("2F1{p}"),
            SeriesSource::Heun(p) => format!("Hl{p}"),
            SeriesSource::ThreeF2(p) => format!("3F2{p}"),
            SeriesSource::Derivative { base, order } => format!("D^{order} {}", base.tag()),
            SeriesSource::Custom { label, .. } => label.clone(),
        }
    }
}

/// Truncated coefficients c(0..=N) together with the recurrence that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    pub coeffs: Vec<C64>,
    pub source: SeriesSource,
}

impl CoefficientSequence {
    pub fn custom(coeffs: Vec<C64>, label: &str, radius: f64) -> Self {
        Self { coeffs, source: SeriesSource::Custom { label: label.to_string(), radius } }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.source.radius()
    }
}

/// Result of summing a power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    pub err_estimate: f64,
    pub terms: usize,
}

/// Terms c(n) x^n of 2F1(alpha, beta; gamma; x).
#[derive(Debug, Clone)]
pub struct GaussTerms {
    p: GaussParams,
    x: C64,
    n: usize,
    term: C64,
}

impl GaussTerms {
    pub fn new(p: GaussParams, x: C64) -> Self {
        Self { p, x, n: 0, term: r(1.0) }
    }
}

impl Iterator for GaussTerms {
    type Item = C64;

    fn next(&mut self) -> Option<C64> {
        let out = self.term;
        let n = self.n as f64;
        let num = (self.p.alpha + n) * (self.p.beta + n);
        let den = (self.p.gamma + n) * (n + 1.0);
        self.term = out * num / den * self.x;
        self.n += 1;
        Some(out)
    }
}

/// Terms d(n) x^n of 3F2(a1, a2, a3; b1, b2; x).
#[derive(Debug, Clone)]
pub struct ThreeF2Terms {
    p: ThreeF2Params,
    x: C64,
    n: usize,
    term: C64,
}

impl ThreeF2Terms {
    pub fn new(p: ThreeF2Params, x: C64) -> Self {
        Self { p, x, n: 0, term: r(1.0) }
    }
}

impl Iterator for ThreeF2Terms {
    type Item = C64;

    fn next(&mut self) -> Option<C64> {
        let out = self.term;
        let n = self.n as f64;
        let p = &self.p;
        let num = (p.a1 + n) * (p.a2 + n) * (p.a3 + n);
        let den = (p.b1 + n) * (p.b2 + n) * (n + 1.0);
        self.term = out * num / den * self.x;
        self.n += 1;
        Some(out)
    }
}

/// Coefficients of the three-term Heun recurrence at index n:
/// `lead(n) c(n+2) - mid(n) c(n+1) + tail(n) c(n) = 0`.
pub fn heun_recurrence_row(p: &HeunParams, n: f64) -> (C64, C64, C64) {
    let eps = p.epsilon();
    let lead = (p.gamma + n + 1.0) * (n + 2.0) * p.a;
    let mid = (n + 1.0) * (p.gamma + p.delta + n) * p.a + (n + 1.0) * (p.gamma + eps + n) + p.q;
    let tail = (p.alpha + n) * (p.beta + n);
    (lead, mid, tail)
}

/// Terms c(n) x^n of Hl(a, q; alpha, beta; gamma, delta; x), with c(-1) = 0.
#[derive(Debug, Clone)]
pub struct HeunTerms {
    p: HeunParams,
    x: C64,
    n: usize,
    prev: C64,
    cur: C64,
}

impl HeunTerms {
    pub fn new(p: HeunParams, x: C64) -> Self {
        Self { p, x, n: 0, prev: r(0.0), cur: r(1.0) }
    }
}

impl Iterator for HeunTerms {
    type Item = C64;

    fn next(&mut self) -> Option<C64> {
        let out = self.cur;
        // row at index n - 1 links t(n-1), t(n), t(n+1)
        let (lead, mid, tail) = heun_recurrence_row(&self.p, self.n as f64 - 1.0);
        let next = (mid * self.x * self.cur - tail * self.x * self.x * self.prev) / lead;
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        Some(out)
    }
}

/// Sums a stream of terms with the tail-majorization stopping rule.
///
/// Stops once |t(n)| < abs_tol and |t(n)| <= rel_tol |S(n)| for three consecutive n.
/// The error estimate is |last term| / (1 - rho), rho being the largest ratio of
/// consecutive term moduli over the final five terms, clamped to 0.99.
pub fn sum_terms<I>(terms: I, policy: &EvalPolicy) -> Result<SeriesValue>
where
    I: IntoIterator<Item = C64>,
{
    let mut sum = r(0.0);
    let mut small_run = 0usize;
    let mut recent: [f64; 6] = [0.0; 6];
    let mut count = 0usize;
    let mut last = 0.0f64;

    for t in terms.into_iter().take(policy.max_terms) {
        if !(t.re.is_finite() && t.im.is_finite()) {
            return Err(HeunError::InvalidParameter(format!("non-finite series term at index {count}")));
        }
        sum += t;
        let m = t.norm();
        recent.rotate_left(1);
        recent[5] = m;
        count += 1;
        last = m;
        if m < policy.abs_tol && m <= policy.rel_tol * sum.norm() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            return Ok(SeriesValue { value: sum, err_estimate: tail_bound(&recent, count, last), terms: count });
        }
    }
    Err(HeunError::NoConvergence { terms: count, tail: tail_bound(&recent, count, last) })
}

fn tail_bound(recent: &[f64; 6], count: usize, last: f64) -> f64 {
    let avail = count.min(6);
    let window = &recent[6 - avail..];
    let mut rho = 0.0f64;
    for w in window.windows(2) {
        let ratio = if w[0] > 0.0 {
            w[1] / w[0]
        } else if w[1] == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        rho = rho.max(ratio);
    }
    last / (1.0 - rho.min(0.99))
}

/// Rejects |x| >= radius * (1 - margin).
pub fn check_domain(x: C64, radius: f64, policy: &EvalPolicy) -> Result<()> {
    let limit = radius * (1.0 - policy.domain_margin);
    if x.norm() < limit {
        Ok(())
    } else {
        Err(HeunError::Domain { abs_x: x.norm(), limit })
    }
}

/// 2F1 coefficients c(0..=n_max).
pub fn gauss_coeffs(p: &GaussParams, n_max: usize) -> Result<CoefficientSequence> {
    p.validate()?;
    let coeffs: Vec<C64> = GaussTerms::new(*p, r(1.0)).take(n_max + 1).collect();
    Ok(CoefficientSequence { coeffs, source: SeriesSource::Gauss(*p) })
}

/// Hl coefficients c(0..=n_max) from the three-term recurrence.
pub fn heun_coeffs(p: &HeunParams, n_max: usize) -> Result<CoefficientSequence> {
    p.validate()?;
    let coeffs: Vec<C64> = HeunTerms::new(*p, r(1.0)).take(n_max + 1).collect();
    if let Some(i) = coeffs.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(HeunError::InvalidParameter(format!("Heun coefficient {i} overflowed")));
    }
    Ok(CoefficientSequence { coeffs, source: SeriesSource::Heun(*p) })
}

/// 3F2 coefficients d(0..=n_max).
pub fn p3f2_coeffs(p: &ThreeF2Params, n_max: usize) -> Result<CoefficientSequence> {
    p.validate()?;
    let coeffs: Vec<C64> = ThreeF2Terms::new(*p, r(1.0)).take(n_max + 1).collect();
    Ok(CoefficientSequence { coeffs, source: SeriesSource::ThreeF2(*p) })
}

/// Sums a stored coefficient sequence at `x`.
///
/// Running out of stored coefficients before the stopping rule fires is a
/// `NoConvergence` error, as is exceeding `policy.max_terms`.
pub fn eval_series(c: &CoefficientSequence, x: C64, policy: &EvalPolicy) -> Result<SeriesValue> {
    policy.validate()?;
    check_domain(x, c.radius(), policy)?;
    if x == r(0.0) {
        let value = c.coeffs.first().copied().unwrap_or(r(0.0));
        return Ok(SeriesValue { value, err_estimate: 0.0, terms: 1 });
    }
    let mut xn = r(1.0);
    let terms = c.coeffs.iter().map(move |&cn| {
        let t = cn * xn;
        xn *= x;
        t
    });
    sum_terms(terms, policy)
}

pub fn eval_2f1_detailed(p: &GaussParams, x: C64, policy: &EvalPolicy) -> Result<SeriesValue> {
    p.validate()?;
    policy.validate()?;
    check_domain(x, 1.0, policy)?;
    sum_terms(GaussTerms::new(*p, x), policy)
}

pub fn eval_hl_detailed(p: &HeunParams, x: C64, policy: &EvalPolicy) -> Result<SeriesValue> {
    p.validate()?;
    policy.validate()?;
    check_domain(x, p.radius(), policy)?;
    sum_terms(HeunTerms::new(*p, x), policy)
}

pub fn eval_3f2_detailed(p: &ThreeF2Params, x: C64, policy: &EvalPolicy) -> Result<SeriesValue> {
    p.validate()?;
    policy.validate()?;
    check_domain(x, 1.0, policy)?;
    sum_terms(ThreeF2Terms::new(*p, x), policy)
}

/// 2F1(alpha, beta; gamma; x) on |x| < 1 - margin.
pub fn eval_2f1(p: &GaussParams, x: C64, policy: &EvalPolicy) -> Result<C64> {
    eval_2f1_detailed(p, x, policy).map(|v| v.value)
}

/// Hl(a, q; alpha, beta; gamma, delta; x) on |x| < min(1, |a|) (1 - margin).
pub fn eval_hl(p: &HeunParams, x: C64, policy: &EvalPolicy) -> Result<C64> {
    eval_hl_detailed(p, x, policy).map(|v| v.value)
}

/// 3F2(a1, a2, a3; b1, b2; x) on |x| < 1 - margin.
pub fn eval_3f2(p: &ThreeF2Params, x: C64, policy: &EvalPolicy) -> Result<C64> {
    eval_3f2_detailed(p, x, policy).map(|v| v.value)
}

/// Coefficients of the N-th derivative: k -> c(k+N) (k+N)!/k!.
pub fn series_derivative(c: &CoefficientSequence, order: usize) -> Result<CoefficientSequence> {
    if order > c.len() {
        return Err(HeunError::InvalidParameter(format!(
            "derivative order {order} exceeds sequence length {}",
            c.len()
        )));
    }
    if order == 0 {
        return Ok(c.clone());
    }
    let coeffs = c.coeffs[order..]
        .iter()
        .enumerate()
        .map(|(k, &ck)| {
            let falling: f64 = (1..=order).map(|j| (k + j) as f64).product();
            ck * falling
        })
        .collect();
    Ok(CoefficientSequence { coeffs, source: SeriesSource::Derivative { base: Box::new(c.source.clone()), order } })
}
