//! Entanglement of assistance.
//!
//! * [`eoa_optimize`] maximises the average root measure over pure-state
//!   decompositions of `rho_AB`, parameterised by isometries acting on a
//!   fixed family of vectors, and returns the best decomposition found as
//!   a certificate together with the local-entropy upper bound.
//! * [`span_scan`] and friends analyse the combinations `x|u0> + y|u1>`
//!   spanning every decomposition of the 8x4 counterexample.
//! * [`NCopyCombo`] holds the two-copy Schmidt tables.

mod ncopy;
mod optimize;
mod span;

pub use ncopy::{lambda_table_from_moments, ncopy_deficit_scan, ncopy_lambda_analytic, NCopyCombo, NCopyScanResult};
pub use optimize::{
    eoa_optimize, eoa_optimize_pure, eoa_upper_bound, select_best, upper_bound_of, EoaConfig, EoaProblem, EoaResult,
    RestartOutcome,
};
pub use span::{
    span_deficit, span_deficit_oracle, span_magnitudes_closed_form, span_magnitudes_half_weight, span_point,
    span_refine, span_scan, span_scan_rows, span_vector, GridBest, SpanScanConfig, SpanScanResult,
};
