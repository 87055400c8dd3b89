//! Sharpness sweeps over the closed-form families.
//!
//! A sweep evaluates the entrywise ratio `lhs / rhs` of one family over a
//! grid of angles. As `θ → 0⁺` the ratio tends to one entrywise; the table
//! records the profile and checks the smallest-angle row against the Taylor
//! floor `1 - 10 θ²`.

use serde_json::json;

use crate::example::{reproduce_example, ExampleFamily};
use crate::HarnessError;

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub theta: f64,
    pub ratios: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub family: ExampleFamily,
    pub a: f64,
    pub b: f64,
    pub rows: Vec<SweepRow>,
    /// Whether the smallest-angle row satisfies `ratio >= 1 - 10 θ²` entrywise.
    pub taylor_bound_ok: bool,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta");
        let width = self.rows.first().map_or(0, |r| r.ratios.len());
        for i in 0..width {
            out.push_str(&format!(",ratio_{i}"));
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{}", row.theta));
            for r in &row.ratios {
                out.push_str(&format!(",{r}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "example": self.family.cli_name(),
            "a": self.a,
            "b": self.b,
            "rows": self.rows.iter().map(|r| json!({
                "theta": r.theta,
                "ratios": r.ratios,
            })).collect::<Vec<_>>(),
            "taylor_bound_ok": self.taylor_bound_ok,
        })
    }
}

/// Geometrically spaced grid from `min` to `max` inclusive.
pub fn geometric_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>, HarnessError> {
    if !(min > 0.0 && max >= min && max < std::f64::consts::FRAC_PI_2) {
        return Err(HarnessError::BadParameter(format!(
            "need 0 < theta-min <= theta-max < pi/2, got [{min}, {max}]"
        )));
    }
    if steps == 0 {
        return Ok(Vec::new());
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let ratio = (max / min).powf(1.0 / (steps - 1) as f64);
    Ok((0..steps).map(|i| min * ratio.powi(i as i32)).collect())
}

/// Evaluates the ratio profile of one family over the given angle grid.
///
/// An empty grid yields an empty table (with the Taylor check vacuously
/// true). Rows appear in grid order.
pub fn sweep_sharpness(
    family: ExampleFamily,
    a: f64,
    b: f64,
    grid: &[f64],
) -> Result<SweepTable, HarnessError> {
    let mut rows = Vec::with_capacity(grid.len());
    for &theta in grid {
        let report = reproduce_example(family, a, b, theta)?;
        rows.push(SweepRow {
            theta,
            ratios: report.ratio,
        });
    }
    let taylor_bound_ok = match rows
        .iter()
        .min_by(|p, q| p.theta.partial_cmp(&q.theta).expect("finite angles"))
    {
        Some(row) => {
            let floor = 1.0 - 10.0 * row.theta * row.theta;
            row.ratios.iter().all(|&r| r >= floor)
        }
        None => true,
    };
    Ok(SweepTable {
        family,
        a,
        b,
        rows,
        taylor_bound_ok,
    })
}
