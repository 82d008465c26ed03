//! Signed permutations of the labelled singular points, written in bracket
//! cycle notation such as `[1+inf+][a+]`.
//!
//! A signed permutation w acts on a vector of exponent differences by
//! `theta'[sigma(p)] = s_p * theta[p]`.

use std::fmt;

use crate::error::{HeunError, Result};

/// Points permuted by Kummer-group labels.
pub const GAUSS_POINTS: &[&str] = &["1", "inf"];
/// Points permuted by Hl-group labels.
pub const HEUN_POINTS: &[&str] = &["1", "a", "inf"];

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    points: &'static [&'static str],
    image: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(points: &'static [&'static str]) -> Self {
        Self { points, image: (0..points.len()).collect(), signs: vec![1; points.len()] }
    }

    /// Builds from an image table and a sign table; rejects non-bijections.
    pub fn new(points: &'static [&'static str], image: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let n = points.len();
        if image.len() != n || signs.len() != n {
            return Err(HeunError::InvalidParameter("signed permutation has wrong length".into()));
        }
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(HeunError::InvalidParameter("image table is not a bijection".into()));
            }
            seen[i] = true;
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(HeunError::InvalidParameter("signs must be +1 or -1".into()));
        }
        Ok(Self { points, image, signs })
    }

    /// Parses bracket notation, e.g. `[1+inf+][a+]` or `[1-][a+][∞-]`.
    /// Points omitted from the label are fixed with sign +.
    pub fn parse(points: &'static [&'static str], label: &str) -> Result<Self> {
        let bad = |msg: &str| HeunError::InvalidParameter(format!("bad label {label:?}: {msg}"));
        let n = points.len();
        let mut image: Vec<Option<usize>> = vec![None; n];
        let mut signs = vec![1i8; n];
        let text = label.replace('∞', "inf").replace(char::is_whitespace, "");
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let inner_end = rest.find(']').ok_or_else(|| bad("unclosed bracket"))?;
            if !rest.starts_with('[') {
                return Err(bad("expected '['"));
            }
            let mut body = &rest[1..inner_end];
            rest = &rest[inner_end + 1..];
            let mut cycle = Vec::new();
            while !body.is_empty() {
                let cut = body.find(['+', '-']).ok_or_else(|| bad("missing sign"))?;
                let name = &body[..cut];
                let idx = points.iter().position(|p| *p == name).ok_or_else(|| bad("unknown point"))?;
                signs[idx] = if body.as_bytes()[cut] == b'+' { 1 } else { -1 };
                cycle.push(idx);
                body = &body[cut + 1..];
            }
            if cycle.is_empty() {
                return Err(bad("empty cycle"));
            }
            for (k, &p) in cycle.iter().enumerate() {
                if image[p].is_some() {
                    return Err(bad("point repeated"));
                }
                image[p] = Some(cycle[(k + 1) % cycle.len()]);
            }
        }
        let image = image.iter().enumerate().map(|(i, v)| v.unwrap_or(i)).collect();
        Self::new(points, image, signs)
    }

    pub fn points(&self) -> &'static [&'static str] {
        self.points
    }

    pub fn image(&self, p: usize) -> usize {
        self.image[p]
    }

    pub fn sign(&self, p: usize) -> i8 {
        self.signs[p]
    }

    /// Composite "self, then `next`".
    pub fn then(&self, next: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.points, next.points, "composing labels over different point sets");
        let n = self.image.len();
        let image = (0..n).map(|p| next.image[self.image[p]]).collect();
        let signs = (0..n).map(|p| self.signs[p] * next.signs[self.image[p]]).collect();
        SignedPermutation { points: self.points, image, signs }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let n = self.image.len();
        let mut image = vec![0; n];
        let mut signs = vec![1; n];
        for p in 0..n {
            image[self.image[p]] = p;
            signs[self.image[p]] = self.signs[p];
        }
        SignedPermutation { points: self.points, image, signs }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v) && self.signs.iter().all(|&s| s == 1)
    }

    /// Even-signed: an even number of minus signs.
    pub fn is_even_signed(&self) -> bool {
        self.signs.iter().filter(|&&s| s < 0).count() % 2 == 0
    }

    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.then(self);
            k += 1;
        }
        k
    }

    /// theta'[sigma(p)] = s_p theta[p].
    pub fn act<T>(&self, theta: &[T]) -> Vec<T>
    where
        T: Copy + std::ops::Neg<Output = T>,
    {
        let mut out = theta.to_vec();
        for p in 0..self.image.len() {
            let v = theta[p];
            out[self.image[p]] = if self.signs[p] > 0 { v } else { -v };
        }
        out
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.image.len();
        let mut done = vec![false; n];
        for start in 0..n {
            if done[start] {
                continue;
            }
            write!(f, "[")?;
            let mut p = start;
            loop {
                done[p] = true;
                write!(f, "{}{}", self.points[p], if self.signs[p] > 0 { '+' } else { '-' })?;
                p = self.image[p];
                if p == start {
                    break;
                }
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
