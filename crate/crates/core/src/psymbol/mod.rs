//! Riemann P-symbols and their exponent calculus.
//!
//! A symbol is a list of columns, each holding a point of the sphere and the
//! characteristic exponents there. Exponents at ∞ follow the convention that
//! a solution behaves like x^(-rho), so an ordinary point has exponents
//! 0, 1, ..., k-1 wherever it sits.

mod maps;

use std::fmt;

use crate::error::{HeunError, Result};
use crate::numeric::{GaussParams, HeunParams};
use crate::scalar::{lex_cmp, r, C64};

pub use maps::{
    quadratic_branching, quadratic_map, quartic_branching, quartic_map, BranchPoint, MobiusMap, RationalMap,
};

/// Tolerance for matching locations and exponents.
pub const LOCATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(C64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64) -> Self {
        SpherePoint::Finite(r(re))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<C64> {
        match self {
            SpherePoint::Finite(z) => Some(*z),
            SpherePoint::Infinity => None,
        }
    }

    /// Relative comparison for finite points, exact for ∞.
    pub fn approx_eq(&self, other: &SpherePoint, tol: f64) -> bool {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => true,
            (SpherePoint::Finite(x), SpherePoint::Finite(y)) => (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0),
            _ => false,
        }
    }

    /// Lexicographic order by (re, im) with ∞ last.
    pub fn cmp_lex(&self, other: &SpherePoint) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => Ordering::Equal,
            (SpherePoint::Infinity, _) => Ordering::Greater,
            (_, SpherePoint::Infinity) => Ordering::Less,
            (SpherePoint::Finite(x), SpherePoint::Finite(y)) => lex_cmp(x, y),
        }
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpherePoint::Infinity => write!(f, "∞"),
            SpherePoint::Finite(z) => write!(f, "{}", fmt_c(*z)),
        }
    }
}

/// Compact rendering: real numbers without an imaginary part.
pub fn fmt_c(z: C64) -> String {
    let clean = |v: f64| if v == 0.0 { 0.0 } else { v };
    if z.im == 0.0 {
        format!("{}", clean(z.re))
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", clean(z.re), z.im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub location: SpherePoint,
    pub exponents: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PSymbol {
    columns: Vec<Column>,
    order: usize,
}

fn ordinary_exponents(order: usize) -> Vec<C64> {
    (0..order).map(|k| r(k as f64)).collect()
}

/// Multiset equality of exponent lists within `tol`.
fn exponents_match(x: &[C64], y: &[C64], tol: f64) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let mut used = vec![false; y.len()];
    'outer: for a in x {
        for (j, b) in y.iter().enumerate() {
            if !used[j] && (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

impl PSymbol {
    pub fn new(order: usize, columns: Vec<(SpherePoint, Vec<C64>)>) -> Result<Self> {
        if order < 2 {
            return Err(HeunError::InvalidParameter("P-symbol order must be at least 2".into()));
        }
        let columns: Vec<Column> =
            columns.into_iter().map(|(location, exponents)| Column { location, exponents }).collect();
        for (i, col) in columns.iter().enumerate() {
            if col.exponents.len() != order {
                return Err(HeunError::InvalidParameter(format!(
                    "column at {} has {} exponents, expected {order}",
                    col.location,
                    col.exponents.len()
                )));
            }
            if columns[..i].iter().any(|c| c.location.approx_eq(&col.location, LOCATION_TOL)) {
                return Err(HeunError::InvalidParameter(format!("duplicate column at {}", col.location)));
            }
        }
        Ok(Self { columns, order })
    }

    /// {0: 0, 1-gamma; 1: 0, gamma-alpha-beta; ∞: alpha, beta}.
    pub fn gauss(p: &GaussParams) -> Self {
        let one = r(1.0);
        Self {
            order: 2,
            columns: vec![
                Column { location: SpherePoint::finite(0.0), exponents: vec![r(0.0), one - p.gamma] },
                Column { location: SpherePoint::finite(1.0), exponents: vec![r(0.0), one - p.delta()] },
                Column { location: SpherePoint::Infinity, exponents: vec![p.alpha, p.beta] },
            ],
        }
    }

    /// {0: 0, 1-gamma; 1: 0, 1-delta; a: 0, 1-epsilon; ∞: alpha, beta}.
    pub fn heun(p: &HeunParams) -> Self {
        let one = r(1.0);
        Self {
            order: 2,
            columns: vec![
                Column { location: SpherePoint::finite(0.0), exponents: vec![r(0.0), one - p.gamma] },
                Column { location: SpherePoint::finite(1.0), exponents: vec![r(0.0), one - p.delta] },
                Column { location: SpherePoint::Finite(p.a), exponents: vec![r(0.0), one - p.epsilon()] },
                Column { location: SpherePoint::Infinity, exponents: vec![p.alpha, p.beta] },
            ],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn column_at(&self, x: &SpherePoint) -> Option<&Column> {
        self.columns.iter().find(|c| c.location.approx_eq(x, LOCATION_TOL))
    }

    fn position(&self, x: &SpherePoint) -> Option<usize> {
        self.columns.iter().position(|c| c.location.approx_eq(x, LOCATION_TOL))
    }

    /// Appends an ordinary column at `x` if none exists.
    pub fn with_ordinary(&self, x: SpherePoint) -> Self {
        let mut out = self.clone();
        if out.position(&x).is_none() {
            out.columns.push(Column { location: x, exponents: ordinary_exponents(self.order) });
        }
        out
    }

    /// Removes columns whose exponents are those of an ordinary point.
    pub fn drop_ordinary(&self) -> Self {
        let ord = ordinary_exponents(self.order);
        let columns =
            self.columns.iter().filter(|c| !exponents_match(&c.exponents, &ord, LOCATION_TOL)).cloned().collect();
        Self { columns, order: self.order }
    }

    /// Equality up to column order and within-column exponent order.
    pub fn equivalent(&self, other: &PSymbol, tol: f64) -> bool {
        if self.order != other.order || self.columns.len() != other.columns.len() {
            return false;
        }
        self.columns.iter().all(|c| {
            other
                .columns
                .iter()
                .find(|d| d.location.approx_eq(&c.location, tol))
                .is_some_and(|d| exponents_match(&c.exponents, &d.exponents, tol))
        })
    }

    /// Fuchs-relation target k(k-1)(n-2)/2 for n columns of order k.
    pub fn fuchs_target(&self) -> C64 {
        let n = self.columns.len() as f64;
        let k = self.order as f64;
        r(k * (k - 1.0) * (n - 2.0) / 2.0)
    }
}

/// Sum of all exponents.
pub fn fuchs_sum(p: &PSymbol) -> C64 {
    p.columns.iter().flat_map(|c| c.exponents.iter()).sum()
}

/// Relocates every column from x0 to m^-1(x0), leaving exponents unchanged.
///
/// With `(m1 ∘ m2)(x) = m1(m2(x))`, lifting along `m1 ∘ m2` equals lifting
/// along `m1` and then along `m2`.
pub fn mobius_lift(p: &PSymbol, m: &MobiusMap) -> PSymbol {
    let inv = m.inverse();
    PSymbol {
        order: p.order,
        columns: p
            .columns
            .iter()
            .map(|c| Column { location: inv.apply(c.location), exponents: c.exponents.clone() })
            .collect(),
    }
}

/// Multiplies by (x - x0)^(-zeta): exponents at x0 drop by zeta, those at ∞ rise by zeta.
///
/// Missing columns at x0 or ∞ are added as ordinary when `auto_add` is set.
pub fn f_homotopy(p: &PSymbol, x0: SpherePoint, zeta: C64, auto_add: bool) -> Result<PSymbol> {
    if x0.is_infinite() {
        return Err(HeunError::InvalidParameter("F-homotopy centre must be finite".into()));
    }
    let mut out = p.clone();
    for pt in [x0, SpherePoint::Infinity] {
        if out.position(&pt).is_none() {
            if !auto_add {
                return Err(HeunError::MissingColumn(pt.to_string()));
            }
            out = out.with_ordinary(pt);
        }
    }
    let i0 = out.position(&x0).unwrap();
    let iinf = out.position(&SpherePoint::Infinity).unwrap();
    for e in &mut out.columns[i0].exponents {
        *e -= zeta;
    }
    for e in &mut out.columns[iinf].exponents {
        *e += zeta;
    }
    Ok(out)
}

/// Lifts `p` along a rational map using its branch table.
///
/// A preimage of multiplicity k inherits k times the image exponents; it is
/// dropped when those are 0, 1/k, ..., (order-1)/k. Ramified preimages of
/// ordinary image points become columns with exponents 0, k, 2k, ....
pub fn rational_lift(p: &PSymbol, rmap: &RationalMap, branching: &[BranchPoint]) -> Result<PSymbol> {
    let degree = rmap.degree();
    // group branch points by image
    let mut groups: Vec<(SpherePoint, Vec<&BranchPoint>)> = Vec::new();
    for bp in branching {
        if bp.multiplicity == 0 {
            return Err(HeunError::InconsistentBranching("zero multiplicity".into()));
        }
        if !rmap.apply(bp.preimage).approx_eq(&bp.image, 1e-8) {
            return Err(HeunError::InconsistentBranching(format!("{} does not map to {}", bp.preimage, bp.image)));
        }
        match groups.iter_mut().find(|(img, _)| img.approx_eq(&bp.image, LOCATION_TOL)) {
            Some((_, v)) => v.push(bp),
            None => groups.push((bp.image, vec![bp])),
        }
    }
    for (img, v) in &groups {
        let total: usize = v.iter().map(|b| b.multiplicity).sum();
        if total != degree {
            return Err(HeunError::InconsistentBranching(format!(
                "multiplicities over {img} sum to {total}, degree is {degree}"
            )));
        }
    }

    let mut columns: Vec<Column> = Vec::new();
    let mut push = |col: Column| -> Result<()> {
        if columns.iter().any(|c| c.location.approx_eq(&col.location, LOCATION_TOL)) {
            return Err(HeunError::InconsistentBranching(format!("preimage {} listed twice", col.location)));
        }
        columns.push(col);
        Ok(())
    };

    for col in &p.columns {
        let (_, v) = groups
            .iter()
            .find(|(img, _)| img.approx_eq(&col.location, LOCATION_TOL))
            .ok_or_else(|| HeunError::InconsistentBranching(format!("no branch data over {}", col.location)))?;
        for bp in v {
            let k = bp.multiplicity as f64;
            let apparent: Vec<C64> = (0..p.order).map(|j| r(j as f64 / k)).collect();
            if bp.multiplicity > 1 && exponents_match(&col.exponents, &apparent, LOCATION_TOL) {
                continue;
            }
            push(Column { location: bp.preimage, exponents: col.exponents.iter().map(|e| e * k).collect() })?;
        }
    }
    for (img, v) in &groups {
        if p.position(img).is_some() {
            continue;
        }
        for bp in v.iter().filter(|b| b.multiplicity > 1) {
            let k = bp.multiplicity as f64;
            push(Column { location: bp.preimage, exponents: (0..p.order).map(|j| r(j as f64 * k)).collect() })?;
        }
    }
    Ok(PSymbol { columns, order: p.order })
}

/// Shift record produced by [`normalize`]: F-homotopy centre and exponent removed there.
pub type Shift = (SpherePoint, C64);

/// Normalizes with default anchors: the existing columns at 0, 1, ∞ when all
/// three are present, otherwise the three lexicographically smallest
/// locations (∞ last).
pub fn normalize(p: &PSymbol) -> Result<(PSymbol, MobiusMap, Vec<Shift>)> {
    if p.columns.len() < 3 {
        return Err(HeunError::InvalidParameter("normalize needs at least 3 columns".into()));
    }
    let standard = [SpherePoint::finite(0.0), SpherePoint::finite(1.0), SpherePoint::Infinity];
    if standard.iter().all(|x| p.position(x).is_some()) {
        return normalize_with(p, standard);
    }
    let mut locs: Vec<SpherePoint> = p.columns.iter().map(|c| c.location).collect();
    locs.sort_by(|x, y| x.cmp_lex(y));
    normalize_with(p, [locs[0], locs[1], locs[2]])
}

/// Moves the three anchor columns to 0, 1, ∞ and shifts one exponent to zero
/// at every finite column.
///
/// Returns the new symbol, the map m carrying old locations to new ones, and
/// the nonzero shifts applied.
pub fn normalize_with(p: &PSymbol, anchors: [SpherePoint; 3]) -> Result<(PSymbol, MobiusMap, Vec<Shift>)> {
    if p.columns.len() < 3 {
        return Err(HeunError::InvalidParameter("normalize needs at least 3 columns".into()));
    }
    if p.order != 2 {
        return Err(HeunError::InvalidParameter("normalize is defined for second-order symbols".into()));
    }
    let idx: Vec<usize> = anchors
        .iter()
        .map(|x| p.position(x).ok_or_else(|| HeunError::MissingColumn(x.to_string())))
        .collect::<Result<_>>()?;
    let m = MobiusMap::to_zero_one_inf(anchors[0], anchors[1], anchors[2])?;
    let mut out = mobius_lift(p, &m.inverse());
    // snap the three targets exactly
    for (&i, target) in idx.iter().zip([SpherePoint::finite(0.0), SpherePoint::finite(1.0), SpherePoint::Infinity]) {
        out.columns[i].location = target;
    }
    let mut shifts = Vec::new();
    for i in 0..out.columns.len() {
        let col = &out.columns[i];
        if col.location.is_infinite() || col.exponents.iter().any(|e| e.norm() <= LOCATION_TOL) {
            continue;
        }
        let zeta = col.exponents[0];
        let loc = col.location;
        out = f_homotopy(&out, loc, zeta, false)?;
        shifts.push((loc, zeta));
    }
    Ok((out, m, shifts))
}

/// Exponent table of the N-th derivative of a local solution of an HE whose
/// first ∞ exponent is 1 - N.
pub fn derivative_symbol(p: &PSymbol, n: usize) -> Result<PSymbol> {
    if n == 0 {
        return Ok(p.clone());
    }
    let shape = |msg: &str| HeunError::Shape(format!("derivative_symbol: {msg}"));
    if p.order != 2 || p.columns.len() != 4 {
        return Err(shape("expected a second-order symbol with four columns"));
    }
    let nn = n as f64;
    let mut out = p.clone();
    let mut seen_inf = false;
    for col in &mut out.columns {
        if col.location.is_infinite() {
            seen_inf = true;
            if (col.exponents[0] - (1.0 - nn)).norm() > LOCATION_TOL {
                return Err(shape("first exponent at ∞ must be 1 - N"));
            }
            col.exponents[0] = r(1.0 + nn);
            col.exponents[1] += nn;
        } else {
            if col.exponents[0].norm() > LOCATION_TOL {
                return Err(shape("finite columns must start with exponent 0"));
            }
            col.exponents[1] -= nn;
        }
    }
    if !seen_inf {
        return Err(shape("no column at ∞"));
    }
    Ok(out)
}

impl fmt::Display for PSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let header: Vec<String> = self.columns.iter().map(|c| c.location.to_string()).collect();
        let rows: Vec<Vec<String>> =
            (0..self.order).map(|k| self.columns.iter().map(|c| fmt_c(c.exponents[k])).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|j| rows.iter().map(|row| row[j].chars().count()).max().unwrap_or(0).max(header[j].chars().count()))
            .collect();
        let line = |cells: &[String]| -> String {
            cells.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}", w = *w)).collect::<Vec<_>>().join("  ")
        };
        writeln!(f, "P{{ {} | x }}", line(&header))?;
        let total: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
        writeln!(f, "   {}", "-".repeat(total))?;
        for (k, row) in rows.iter().enumerate() {
            if k + 1 == rows.len() {
                write!(f, "   {}", line(row))?;
            } else {
                writeln!(f, "   {}", line(row))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
