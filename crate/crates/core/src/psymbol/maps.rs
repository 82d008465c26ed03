//! Möbius and rational maps of the Riemann sphere, with branch tables.

use std::fmt;

use crate::error::{HeunError, Result};
use crate::poly::Poly;
use crate::scalar::{r, C64};

use super::SpherePoint;

/// x -> (a x + b) / (c x + d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MobiusMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let m = Self { a, b, c, d };
        let scale = a.norm().max(b.norm()).max(c.norm()).max(d.norm());
        if m.det().norm() <= 1e-14 * scale * scale {
            return Err(HeunError::Degenerate(format!("Möbius map has vanishing determinant: {m}")));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self { a: r(1.0), b: r(0.0), c: r(0.0), d: r(1.0) }
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, x: SpherePoint) -> SpherePoint {
        match x {
            SpherePoint::Infinity => {
                if self.c == r(0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.a / self.c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == r(0.0) {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &MobiusMap) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// The unique map sending z1, z2, z3 to 0, 1, ∞.
    pub fn to_zero_one_inf(z1: SpherePoint, z2: SpherePoint, z3: SpherePoint) -> Result<Self> {
        use SpherePoint::*;
        let one = r(1.0);
        let m = match (z1, z2, z3) {
            (Finite(p), Finite(q), Finite(s)) => {
                // (x - p)(q - s) / ((x - s)(q - p))
                Self { a: q - s, b: -p * (q - s), c: q - p, d: -s * (q - p) }
            }
            (Infinity, Finite(q), Finite(s)) => Self { a: r(0.0), b: q - s, c: one, d: -s },
            (Finite(p), Infinity, Finite(s)) => Self { a: one, b: -p, c: one, d: -s },
            (Finite(p), Finite(q), Infinity) => Self { a: one, b: -p, c: r(0.0), d: q - p },
            _ => return Err(HeunError::Degenerate("points must be distinct".into())),
        };
        Self::new(m.a, m.b, m.c, m.d)
    }

    pub fn as_rational(&self) -> RationalMap {
        RationalMap { num: Poly::new(vec![self.b, self.a]), den: Poly::new(vec![self.d, self.c]) }
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> (({}) x + ({})) / (({}) x + ({}))", self.a, self.b, self.c, self.d)
    }
}

/// A nonconstant rational map num(x) / den(x) in lowest terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    pub num: Poly,
    pub den: Poly,
}

impl RationalMap {
    /// Rejects constant maps and representations with a common root.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(HeunError::InvalidParameter("zero denominator".into()));
        }
        let m = Self { num, den };
        if m.degree() == 0 {
            return Err(HeunError::InvalidParameter("rational map is constant".into()));
        }
        let res = m.num.resultant(&m.den);
        let scale = m.num.max_abs().powi(m.den.degree() as i32) * m.den.max_abs().powi(m.num.degree() as i32);
        if res.norm() <= 1e-10 * scale {
            return Err(HeunError::InvalidParameter("numerator and denominator share a root".into()));
        }
        Ok(m)
    }

    pub fn degree(&self) -> usize {
        if self.num.is_zero() {
            return 0;
        }
        self.num.degree().max(self.den.degree())
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn apply(&self, x: SpherePoint) -> SpherePoint {
        match x {
            SpherePoint::Finite(z) => {
                let d = self.den.eval(z);
                // evaluation scale of den at z, to recognise roots computed in floating point
                let scale: f64 =
                    self.den.coeffs.iter().enumerate().map(|(k, c)| c.norm() * z.norm().powi(k as i32)).sum();
                if d.norm() <= 1e-12 * scale {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(self.num.eval(z) / d)
                }
            }
            SpherePoint::Infinity => {
                let (dn, dd) = (self.num.degree(), self.den.degree());
                if dn > dd {
                    SpherePoint::Infinity
                } else if dn == dd {
                    SpherePoint::Finite(self.num.leading() / self.den.leading())
                } else {
                    SpherePoint::Finite(r(0.0))
                }
            }
        }
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

/// A point of the source sphere lying over `image` with the given ramification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub preimage: SpherePoint,
    pub image: SpherePoint,
    pub multiplicity: usize,
}

impl BranchPoint {
    pub fn new(preimage: SpherePoint, image: SpherePoint, multiplicity: usize) -> Self {
        Self { preimage, image, multiplicity }
    }
}

/// R(x) = A x (a - x) / (1 - x).
pub fn quadratic_map(a: C64, big_a: C64) -> Result<RationalMap> {
    let num = Poly::new(vec![r(0.0), big_a * a, -big_a]);
    let den = Poly::new(vec![r(1.0), r(-1.0)]);
    RationalMap::new(num, den)
}

/// Branch table of R(x) = A x (a - x)/(1 - x): 0 over 0 and a, ∞ over 1 and ∞,
/// and the two critical points 1 ± sqrt(1 - a) over their critical values.
pub fn quadratic_branching(a: C64, big_a: C64) -> Result<Vec<BranchPoint>> {
    let rm = quadratic_map(a, big_a)?;
    let f = |z: C64| SpherePoint::Finite(z);
    let zero = f(r(0.0));
    let s = (r(1.0) - a).sqrt();
    let mut out = vec![
        BranchPoint::new(zero, zero, 1),
        BranchPoint::new(f(a), zero, 1),
        BranchPoint::new(f(r(1.0)), SpherePoint::Infinity, 1),
        BranchPoint::new(SpherePoint::Infinity, SpherePoint::Infinity, 1),
    ];
    for crit in [r(1.0) + s, r(1.0) - s] {
        out.push(BranchPoint::new(f(crit), rm.apply(f(crit)), 2));
    }
    Ok(out)
}

/// S(x) = 4 a x (1 - x)(a - x) / (a - x^2)^2.
pub fn quartic_map(a: C64) -> Result<RationalMap> {
    let num = &(&Poly::new(vec![r(0.0), 4.0 * a]) * &Poly::new(vec![r(1.0), r(-1.0)])) * &Poly::new(vec![a, r(-1.0)]);
    let base = Poly::new(vec![a, r(0.0), r(-1.0)]);
    RationalMap::new(num, &base * &base)
}

/// Branch table of S over 0, 1, a, ∞ (schema 1+1+1+1 = 2+2 = 2+2 = 2+2).
pub fn quartic_branching(a: C64) -> Vec<BranchPoint> {
    let f = |z: C64| SpherePoint::Finite(z);
    let zero = f(r(0.0));
    let one = f(r(1.0));
    let sa = a.sqrt();
    let s1 = (a * a - a).sqrt();
    let s2 = (r(1.0) - a).sqrt();
    vec![
        BranchPoint::new(zero, zero, 1),
        BranchPoint::new(one, zero, 1),
        BranchPoint::new(f(a), zero, 1),
        BranchPoint::new(SpherePoint::Infinity, zero, 1),
        BranchPoint::new(f(sa), SpherePoint::Infinity, 2),
        BranchPoint::new(f(-sa), SpherePoint::Infinity, 2),
        BranchPoint::new(f(a + s1), one, 2),
        BranchPoint::new(f(a - s1), one, 2),
        BranchPoint::new(f(r(1.0) + s2), f(a), 2),
        BranchPoint::new(f(r(1.0) - s2), f(a), 2),
    ]
}
