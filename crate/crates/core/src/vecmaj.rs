//! Vector rearrangement and (sub)majorization predicates.
//!
//! A real vector `x` is *submajorized* by `y` (written `x ≺_w y`) when every
//! partial sum of the non-increasing rearrangement `x↓` is dominated by the
//! corresponding partial sum of `y↓`. If additionally the total sums agree,
//! `x` is *majorized* by `y` (`x ≺ y`). Vectors of different lengths are
//! compared by appending zeros on the right, a convention that is only
//! meaningful for non-negative entries; all padded quantities in this crate
//! (singular values, angles, spreads) are non-negative by construction.
//!
//! Every predicate returns a [`MajorizationVerdict`] carrying both partial-sum
//! sequences and the worst margin, so a failed comparison can be audited
//! rather than trusted.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors from vector construction, padding and comparison.
#[derive(Debug, Error)]
pub enum VecMajError {
    #[error("non-finite entry {value} at index {index}")]
    NonFinite { index: usize, value: f64 },
    #[error(
        "zero-padding is undefined for signed vectors: lengths {len_x} vs {len_y}, \
         negative entry {value}"
    )]
    PaddingUndefined { len_x: usize, len_y: usize, value: f64 },
    #[error("length mismatch: {len_x} vs {len_y}")]
    LengthMismatch { len_x: usize, len_y: usize },
    #[error("values are not non-increasing at index {index}: {previous} < {value}")]
    NotSorted { index: usize, previous: f64, value: f64 },
}

/// Declared ordering of an [`OrderedSpectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumOrder {
    /// Entries satisfy `values[i] >= values[i + 1]`.
    NonIncreasing,
    /// No ordering guarantee (entrywise arithmetic results).
    Raw,
}

/// A finite real vector with a declared ordering convention.
///
/// This is the currency of every majorization statement in the crate:
/// eigenvalue lists, singular values, principal angles and spectral spreads
/// are all carried as non-increasing spectra.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSpectrum {
    values: Vec<f64>,
    order: SpectrumOrder,
}

impl Serialize for OrderedSpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.values.len()))?;
        for v in &self.values {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

fn check_finite(values: &[f64]) -> Result<(), VecMajError> {
    for (index, &value) in values.iter().enumerate() {
        if !value.is_finite() {
            return Err(VecMajError::NonFinite { index, value });
        }
    }
    Ok(())
}

impl OrderedSpectrum {
    /// Wraps a vector that is already non-increasing; rejects unsorted input.
    pub fn non_increasing(values: Vec<f64>) -> Result<Self, VecMajError> {
        check_finite(&values)?;
        for i in 1..values.len() {
            if values[i - 1] < values[i] {
                return Err(VecMajError::NotSorted {
                    index: i,
                    previous: values[i - 1],
                    value: values[i],
                });
            }
        }
        Ok(Self {
            values,
            order: SpectrumOrder::NonIncreasing,
        })
    }

    /// Wraps a vector with no ordering guarantee.
    pub fn raw(values: Vec<f64>) -> Result<Self, VecMajError> {
        check_finite(&values)?;
        Ok(Self {
            values,
            order: SpectrumOrder::Raw,
        })
    }

    /// The zero spectrum of length `n`.
    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
            order: SpectrumOrder::NonIncreasing,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn order(&self) -> SpectrumOrder {
        self.order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Non-increasing rearrangement of this spectrum.
    pub fn sorted(&self) -> Self {
        match self.order {
            SpectrumOrder::NonIncreasing => self.clone(),
            SpectrumOrder::Raw => sort_desc(&self.values).expect("entries validated finite"),
        }
    }

    /// Entrywise transform; the result carries no ordering guarantee.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, VecMajError> {
        Self::raw(self.values.iter().map(|&v| f(v)).collect())
    }

    fn padded_to(&self, len: usize) -> Self {
        let mut values = self.values.clone();
        values.resize(len, 0.0);
        Self {
            values,
            order: self.order,
        }
    }
}

/// Scale-aware default tolerance for partial-sum margins:
/// `1e-10 * (1 + max |entry|)` over all participating vectors.
pub fn default_tolerance(parts: &[&[f64]]) -> f64 {
    let max_abs = parts
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    1e-10 * (1.0 + max_abs)
}

/// Non-increasing rearrangement of `values`.
///
/// The sort is stable, so ties keep their original relative order and runs
/// are reproducible.
pub fn sort_desc(values: &[f64]) -> Result<OrderedSpectrum, VecMajError> {
    check_finite(values)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite entries are comparable"));
    Ok(OrderedSpectrum {
        values: sorted,
        order: SpectrumOrder::NonIncreasing,
    })
}

/// Extends the shorter of `x`, `y` with zeros on the right so both have the
/// common length `max(len x, len y)`.
///
/// When the lengths differ the convention is only defined for non-negative
/// vectors; a negative entry is rejected. Equal-length inputs pass through
/// unchanged regardless of sign.
pub fn pad_pair(
    x: &OrderedSpectrum,
    y: &OrderedSpectrum,
) -> Result<(OrderedSpectrum, OrderedSpectrum), VecMajError> {
    if x.len() == y.len() {
        return Ok((x.clone(), y.clone()));
    }
    for v in x.values().iter().chain(y.values().iter()) {
        if *v < 0.0 {
            return Err(VecMajError::PaddingUndefined {
                len_x: x.len(),
                len_y: y.len(),
                value: *v,
            });
        }
    }
    let len = x.len().max(y.len());
    Ok((x.padded_to(len), y.padded_to(len)))
}

/// Outcome of one (sub)majorization comparison.
///
/// `holds` is computed from `worst_margin`, the minimum over prefixes of
/// `rhs partial sum − lhs partial sum`; the comparison tolerates a margin as
/// low as `-tolerance`. For majorization verdicts, `trace_gap` carries
/// `sum(lhs) − sum(rhs)` and `holds` additionally requires the traces to
/// agree up to `tolerance * max(1, |sum(rhs)|)`.
#[derive(Debug, Clone, Serialize)]
pub struct MajorizationVerdict {
    pub holds: bool,
    /// Sorted, zero-padded comparison vectors actually used.
    pub lhs_sorted: Vec<f64>,
    pub rhs_sorted: Vec<f64>,
    pub partial_sums_lhs: Vec<f64>,
    pub partial_sums_rhs: Vec<f64>,
    /// `min_r (partial_sums_rhs[r] - partial_sums_lhs[r])`; zero for empty input.
    pub worst_margin: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_gap: Option<f64>,
}

fn prefix_sums(values: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    values
        .iter()
        .map(|v| {
            acc += v;
            acc
        })
        .collect()
}

/// Checks `x ≺_w y` up to `tol` on partial-sum margins.
///
/// Vectors of different length are zero-padded first (non-negative entries
/// required in that case); both sides are re-sorted after padding.
pub fn submajorizes(
    x: &OrderedSpectrum,
    y: &OrderedSpectrum,
    tol: f64,
) -> Result<MajorizationVerdict, VecMajError> {
    let (px, py) = pad_pair(x, y)?;
    let lhs_sorted = px.sorted().values.clone();
    let rhs_sorted = py.sorted().values.clone();
    let partial_sums_lhs = prefix_sums(&lhs_sorted);
    let partial_sums_rhs = prefix_sums(&rhs_sorted);
    let worst_margin = partial_sums_rhs
        .iter()
        .zip(&partial_sums_lhs)
        .map(|(r, l)| r - l)
        .fold(f64::INFINITY, f64::min);
    let worst_margin = if worst_margin.is_finite() {
        worst_margin
    } else {
        0.0 // empty comparison holds trivially
    };
    Ok(MajorizationVerdict {
        holds: worst_margin >= -tol,
        lhs_sorted,
        rhs_sorted,
        partial_sums_lhs,
        partial_sums_rhs,
        worst_margin,
        tolerance: tol,
        trace_gap: None,
    })
}

/// Checks `x ≺ y`: submajorization plus equality of total sums up to
/// `tol * max(1, |sum(y)|)`. Requires equal lengths.
pub fn majorizes(
    x: &OrderedSpectrum,
    y: &OrderedSpectrum,
    tol: f64,
) -> Result<MajorizationVerdict, VecMajError> {
    if x.len() != y.len() {
        return Err(VecMajError::LengthMismatch {
            len_x: x.len(),
            len_y: y.len(),
        });
    }
    let mut verdict = submajorizes(x, y, tol)?;
    let trace_gap = x.sum() - y.sum();
    let trace_ok = trace_gap.abs() <= tol * 1.0f64.max(y.sum().abs());
    verdict.holds = verdict.holds && trace_ok;
    verdict.trace_gap = Some(trace_gap);
    Ok(verdict)
}

/// Entrywise sum after zero-padding to the common length. The result carries
/// no ordering guarantee; call [`OrderedSpectrum::sorted`] when one is needed.
pub fn padded_add(
    x: &OrderedSpectrum,
    y: &OrderedSpectrum,
) -> Result<OrderedSpectrum, VecMajError> {
    let (px, py) = pad_pair(x, y)?;
    OrderedSpectrum::raw(
        px.values()
            .iter()
            .zip(py.values())
            .map(|(a, b)| a + b)
            .collect(),
    )
}

/// Entrywise product after zero-padding to the common length.
pub fn padded_mul(
    x: &OrderedSpectrum,
    y: &OrderedSpectrum,
) -> Result<OrderedSpectrum, VecMajError> {
    let (px, py) = pad_pair(x, y)?;
    OrderedSpectrum::raw(
        px.values()
            .iter()
            .zip(py.values())
            .map(|(a, b)| a * b)
            .collect(),
    )
}
