//! Report types. Residuals are written with 17 significant digits; wall time
//! and timestamp live under `meta`, outside the determinism contract.

use heunkit_core::C64;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::plan::SamplePlan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One checked instance of an identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCase {
    pub suite: String,
    pub rule: String,
    #[serde(serialize_with = "ser_params")]
    pub params: Vec<(String, C64)>,
    #[serde(serialize_with = "ser_point")]
    pub point: Option<C64>,
    /// None when the evaluation itself failed; see `error`.
    #[serde(serialize_with = "ser_residual")]
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl IdentityCase {
    pub fn new(
        suite: &str,
        rule: String,
        params: Vec<(String, C64)>,
        point: Option<C64>,
        outcome: Result<f64, String>,
        tolerance: f64,
    ) -> Self {
        let (residual, error) = match outcome {
            Ok(r) if r.is_finite() => (Some(r), None),
            Ok(r) => (None, Some(format!("non-finite residual {r}"))),
            Err(e) => (None, Some(e)),
        };
        let verdict = match residual {
            Some(r) if r <= tolerance => Verdict::Pass,
            _ => Verdict::Fail,
        };
        Self { suite: suite.into(), rule, params, point, residual, tolerance, verdict, error }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteCases {
    pub name: String,
    pub cases: Vec<IdentityCase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

impl Counts {
    fn of<'a>(cases: impl Iterator<Item = &'a IdentityCase>) -> Self {
        let (mut total, mut passed) = (0, 0);
        for c in cases {
            total += 1;
            passed += usize::from(c.passed());
        }
        Self { total, passed, failed: total - passed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    #[serde(flatten)]
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    #[serde(flatten)]
    pub counts: Counts,
    pub suites: Vec<SuiteSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub timestamp_unix: u64,
    pub wall_time_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub tool: String,
    pub version: String,
    pub plan: SamplePlan,
    pub suites: Vec<SuiteCases>,
    pub summary: Summary,
    pub meta: Meta,
}

impl IdentityReport {
    pub fn new(plan: SamplePlan, suites: Vec<SuiteCases>, meta: Meta) -> Self {
        let summary = summarize(&suites);
        Self { tool: "heunkit".into(), version: env!("CARGO_PKG_VERSION").into(), plan, suites, summary, meta }
    }

    pub fn cases(&self) -> impl Iterator<Item = &IdentityCase> {
        self.suites.iter().flat_map(|s| s.cases.iter())
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteCases> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.summary.counts.failed == 0
    }

    /// True when the stored summary matches a fresh tally of the cases.
    pub fn is_consistent(&self) -> bool {
        self.summary == summarize(&self.suites)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn summarize(suites: &[SuiteCases]) -> Summary {
    let per: Vec<SuiteSummary> =
        suites.iter().map(|s| SuiteSummary { name: s.name.clone(), counts: Counts::of(s.cases.iter()) }).collect();
    let counts = Counts::of(suites.iter().flat_map(|s| s.cases.iter()));
    Summary { counts, suites: per }
}

/// 17 significant digits in scientific notation.
pub fn format_residual(r: f64) -> String {
    format!("{r:.16e}")
}

fn ser_residual<S: Serializer>(r: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(v) => {
            let raw = RawValue::from_string(format_residual(*v)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        }
        None => s.serialize_none(),
    }
}

fn ser_params<S: Serializer>(params: &[(String, C64)], s: S) -> Result<S::Ok, S::Error> {
    let mut m = s.serialize_map(Some(params.len()))?;
    for (k, v) in params {
        m.serialize_entry(k, &[v.re, v.im])?;
    }
    m.end()
}

fn ser_point<S: Serializer>(x: &Option<C64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => [v.re, v.im].serialize(s),
        None => s.serialize_none(),
    }
}
