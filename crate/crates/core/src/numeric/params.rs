use std::fmt;

use crate::error::{HeunError, Result};
use crate::scalar::{check_finite, is_nonpositive_integer, C64, POLE_TOL};

/// Parameters (alpha, beta; gamma) of the Gauss function 2F1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussParams {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
}

impl GaussParams {
    pub fn new(alpha: C64, beta: C64, gamma: C64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("alpha", self.alpha)?;
        check_finite("beta", self.beta)?;
        check_finite("gamma", self.gamma)?;
        if is_nonpositive_integer(self.gamma) {
            return Err(HeunError::InvalidParameter(format!("gamma = {} is a nonpositive integer", self.gamma)));
        }
        Ok(())
    }

    /// The exponent at x = 1 fixed by the Fuchs relation of the Gauss equation.
    pub fn delta(&self) -> C64 {
        self.alpha + self.beta - self.gamma + 1.0
    }
}

impl fmt::Display for GaussParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {})", self.alpha, self.beta, self.gamma)
    }
}

/// Parameters (a, q; alpha, beta; gamma, delta) of the local Heun function.
///
/// `epsilon` is never stored; it is recomputed from the Fuchs relation on every call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams {
    pub a: C64,
    pub q: C64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
}

impl HeunParams {
    pub fn new(a: C64, q: C64, alpha: C64, beta: C64, gamma: C64, delta: C64) -> Self {
        Self { a, q, alpha, beta, gamma, delta }
    }

    /// epsilon = alpha + beta - gamma - delta + 1.
    pub fn epsilon(&self) -> C64 {
        self.alpha + self.beta - self.gamma - self.delta + 1.0
    }

    /// Radius of convergence min(1, |a|) of the series at x = 0.
    pub fn radius(&self) -> f64 {
        self.a.norm().min(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a", self.a),
            ("q", self.q),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            check_finite(name, v)?;
        }
        if self.a.norm() <= POLE_TOL || (self.a - 1.0).norm() <= POLE_TOL {
            return Err(HeunError::InvalidParameter(format!("a = {} must avoid 0 and 1", self.a)));
        }
        if is_nonpositive_integer(self.gamma) {
            return Err(HeunError::InvalidParameter(format!("gamma = {} is a nonpositive integer", self.gamma)));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [C64; 6] {
        [self.a, self.q, self.alpha, self.beta, self.gamma, self.delta]
    }
}

impl fmt::Display for HeunParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {}; {}, {})", self.a, self.q, self.alpha, self.beta, self.gamma, self.delta)
    }
}

/// Parameters (a1, a2, a3; b1, b2) of 3F2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeF2Params {
    pub a1: C64,
    pub a2: C64,
    pub a3: C64,
    pub b1: C64,
    pub b2: C64,
}

impl ThreeF2Params {
    pub fn new(a1: C64, a2: C64, a3: C64, b1: C64, b2: C64) -> Self {
        Self { a1, a2, a3, b1, b2 }
    }

    /// Parametric excess s = b1 + b2 - a1 - a2 - a3.
    pub fn excess(&self) -> C64 {
        self.b1 + self.b2 - self.a1 - self.a2 - self.a3
    }

    pub fn upper(&self) -> [C64; 3] {
        [self.a1, self.a2, self.a3]
    }

    pub fn lower(&self) -> [C64; 2] {
        [self.b1, self.b2]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2), ("a3", self.a3), ("b1", self.b1), ("b2", self.b2)] {
            check_finite(name, v)?;
        }
        for (name, b) in [("b1", self.b1), ("b2", self.b2)] {
            if is_nonpositive_integer(b) {
                return Err(HeunError::InvalidParameter(format!("{name} = {b} is a nonpositive integer")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ThreeF2Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}; {}, {})", self.a1, self.a2, self.a3, self.b1, self.b2)
    }
}

/// Truncation and domain policy for series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    pub max_terms: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Evaluation is refused when |x| >= radius * (1 - domain_margin).
    pub domain_margin: f64,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self { max_terms: 4096, abs_tol: 1e-15, rel_tol: 1e-17, domain_margin: 0.05 }
    }
}

impl EvalPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 8 {
            return Err(HeunError::InvalidParameter("max_terms must be at least 8".into()));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(HeunError::InvalidParameter("tolerances must be positive".into()));
        }
        if !(self.domain_margin > 0.0 && self.domain_margin < 1.0) {
            return Err(HeunError::InvalidParameter("domain_margin must lie in (0, 1)".into()));
        }
        Ok(())
    }
}
