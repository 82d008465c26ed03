//! Dense complex polynomials in ascending-coefficient form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{r, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    /// coeffs[k] multiplies x^k.
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(v: C64) -> Self {
        Self::new(vec![v])
    }

    /// x
    pub fn x() -> Self {
        Self::new(vec![r(0.0), r(1.0)])
    }

    pub fn monomial(k: usize, v: C64) -> Self {
        let mut coeffs = vec![r(0.0); k + 1];
        coeffs[k] = v;
        Self::new(coeffs)
    }

    /// x - root
    pub fn linear_root(root: C64) -> Self {
        Self::new(vec![-root, r(1.0)])
    }

    /// prod (x - root_i)
    pub fn from_roots(roots: &[C64]) -> Self {
        roots.iter().fold(Self::constant(r(1.0)), |acc, &z| &acc * &Self::linear_root(z))
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|z| *z == r(0.0)) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or(r(0.0))
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(r(0.0))
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.coeffs.iter().rev().fold(r(0.0), |acc, &c| acc * x + c)
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Euclidean division, returning (quotient, remainder). Panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dl = d.leading();
        let dd = d.degree();
        let mut quot = vec![r(0.0); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let f = rem[k + dd] / dl;
            quot[k] = f;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= f * dc;
            }
            rem[k + dd] = r(0.0);
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Resultant of two polynomials via the Sylvester determinant.
    pub fn resultant(&self, other: &Poly) -> C64 {
        let m = self.degree();
        let n = other.degree();
        if self.is_zero() || other.is_zero() {
            return r(0.0);
        }
        if m == 0 {
            return self.leading().powu(n as u32);
        }
        if n == 0 {
            return other.leading().powu(m as u32);
        }
        let size = m + n;
        let mut mat = vec![vec![r(0.0); size]; size];
        for (i, row) in mat.iter_mut().enumerate().take(n) {
            for k in 0..=m {
                row[i + k] = self.coeffs[m - k];
            }
        }
        for i in 0..m {
            for k in 0..=n {
                mat[n + i][i + k] = other.coeffs[n - k];
            }
        }
        determinant(mat)
    }
}

fn determinant(mut m: Vec<Vec<C64>>) -> C64 {
    let n = m.len();
    let mut det = r(1.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i][col].norm().total_cmp(&m[j][col].norm())).unwrap();
        if m[pivot][col] == r(0.0) {
            return r(0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for r in rest.iter_mut() {
            let f = r[col] / pivot_row[col];
            for (x, v) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * v;
            }
        }
    }
    det
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![r(0.0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(r(-1.0))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != r(0.0))
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c}) x"),
                _ => format!("({c}) x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn arithmetic_and_eval() {
        let p = Poly::from_roots(&[r(1.0), r(2.0)]);
        assert_eq!(p.coeffs, vec![r(2.0), r(-3.0), r(1.0)]);
        assert_eq!(p.eval(r(3.0)), r(2.0));
        assert_eq!(p.derivative().coeffs, vec![r(-3.0), r(2.0)]);
        let q = &p * &Poly::x();
        assert_eq!(q.degree(), 3);
        assert!((&q - &q).is_zero());
    }

    #[test]
    fn division_round_trip() {
        let a = Poly::new(vec![c(1.0, 2.0), r(-0.5), c(0.3, 0.1), r(2.0), r(1.0)]);
        let d = Poly::new(vec![r(3.0), c(0.0, 1.0), r(1.5)]);
        let (q, rem) = a.divrem(&d);
        assert!(rem.degree() < d.degree());
        let back = &(&q * &d) + &rem;
        for k in 0..5 {
            assert!((back.coeff(k) - a.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn resultant_detects_common_roots() {
        let p = Poly::from_roots(&[r(1.0), r(2.0)]);
        let q = Poly::from_roots(&[r(2.0), r(5.0)]);
        assert!(p.resultant(&q).norm() < 1e-12);
        let q = Poly::from_roots(&[r(3.0), r(5.0)]);
        // Res = prod (a_i - b_j) = (1-3)(1-5)(2-3)(2-5) = 24
        assert!((p.resultant(&q) - r(24.0)).norm() < 1e-10);
    }
}
