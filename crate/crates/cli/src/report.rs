//! Uniform JSON envelopes for verdicts that do not come as a `BoundReport`.
//!
//! The spectra-level checkers return bare majorization verdicts; the CLI and
//! fuzz streams wrap them in the same shape the bound reports use, so every
//! report line reads identically: check name, compared spectra, partial
//! sums, margin, verdict, tolerances and input digest.

use std::collections::BTreeMap;

use serde_json::json;

use ritzspread::spectra::{LidskiiReport, SpreadSubadditivityReport};
use ritzspread::vecmaj::MajorizationVerdict;

/// Wraps one majorization verdict in the standard report shape.
pub fn verdict_to_json(
    check: &str,
    verdict: &MajorizationVerdict,
    extra_tolerances: BTreeMap<String, f64>,
    inputs_digest: &str,
) -> serde_json::Value {
    let ratios: Vec<f64> = verdict
        .lhs_sorted
        .iter()
        .zip(&verdict.rhs_sorted)
        .filter(|(_, r)| **r > 0.0)
        .map(|(l, r)| l / r)
        .collect();
    let mut tolerances = extra_tolerances;
    tolerances.insert("submajorization".to_string(), verdict.tolerance);
    json!({
        "check": check,
        "lhs": verdict.lhs_sorted,
        "rhs": verdict.rhs_sorted,
        "partial_sums_lhs": verdict.partial_sums_lhs,
        "partial_sums_rhs": verdict.partial_sums_rhs,
        "worst_margin": verdict.worst_margin,
        "holds": verdict.holds,
        "ratio_profile": if ratios.is_empty() {
            serde_json::Value::Null
        } else {
            json!(ratios)
        },
        "tolerances": tolerances,
        "inputs_digest": inputs_digest,
    })
}

/// The two Lidskii forms as separate named reports.
pub fn lidskii_to_json(report: &LidskiiReport, inputs_digest: &str) -> Vec<serde_json::Value> {
    let mut eigen_extra = BTreeMap::new();
    if let Some(gap) = report.eigen_form.trace_gap {
        eigen_extra.insert("trace_gap".to_string(), gap);
    }
    vec![
        verdict_to_json("lidskii-eigen", &report.eigen_form, eigen_extra, inputs_digest),
        verdict_to_json(
            "lidskii-sv",
            &report.singular_form,
            BTreeMap::new(),
            inputs_digest,
        ),
    ]
}

/// Spread subadditivity with its separate trace-difference record.
pub fn spread_subadd_to_json(
    report: &SpreadSubadditivityReport,
    inputs_digest: &str,
) -> serde_json::Value {
    let mut extra = BTreeMap::new();
    extra.insert("trace_lhs".to_string(), report.trace_lhs);
    extra.insert("trace_rhs".to_string(), report.trace_rhs);
    extra.insert("trace_gap".to_string(), report.trace_gap);
    verdict_to_json("spread-subadd", &report.verdict, extra, inputs_digest)
}
