//! Series coefficients, evaluation and recurrence classification.

pub mod classify;
pub mod params;
pub mod series;

pub use classify::{classify_2term, classify_3term, QuadraticPoly};
pub use params::{EvalPolicy, GaussParams, HeunParams, ThreeF2Params};
pub use series::{
    check_domain, eval_2f1, eval_2f1_detailed, eval_3f2, eval_3f2_detailed, eval_hl, eval_hl_detailed, eval_series,
    gauss_coeffs, heun_coeffs, heun_recurrence_row, p3f2_coeffs, series_derivative, sum_terms, CoefficientSequence,
    SeriesSource, SeriesValue,
};
