//! Reproduction of the two closed-form 4×4 example families.
//!
//! Both families compare `X = span{e1, e2}` against the tilted plane
//! `Y(θ) = span{cos θ e1 + sin θ e3, cos θ e2 + sin θ e4}`, which has equal
//! principal angles `(θ, θ)`:
//!
//! * the *antidiagonal* family couples `(e1, e3)` and `(e2, e4)` with weights
//!   `a > b > 0`; the Ritz variation is exactly `sin(2θ)(a, b)` against the
//!   bound `2θ(a, b)`, and the ratio tends to one as `θ → 0⁺`;
//! * the *invariant diagonal* family is `diag(a, b, 0, 0)` with `X`
//!   invariant; the variation is `sin²(θ)(a, b)` against `θ²(a, b)`.

use serde_json::json;

use ritzspread::bounds::{check_ritz_variation, BoundReport, CheckOptions};
use ritzspread::spectra::{spectral_spread, HermitianMatrix};
use ritzspread::subspace::Isometry;

use crate::HarnessError;

/// Deviation accepted between computed and closed-form quantities.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

/// The two closed-form families (CLI tokens `ex35`, `ex36`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleFamily {
    /// Zero compression on `X`, variation `sin(2θ)(a, b)`, bound `2θ(a, b)`.
    Antidiagonal,
    /// `A`-invariant `X`, variation `sin²θ(a, b)`, bound `θ²(a, b)`.
    InvariantDiagonal,
}

impl ExampleFamily {
    pub fn cli_name(self) -> &'static str {
        match self {
            ExampleFamily::Antidiagonal => "ex35",
            ExampleFamily::InvariantDiagonal => "ex36",
        }
    }

    /// Closed-form Ritz variation at the given parameters.
    pub fn closed_form_lhs(self, a: f64, b: f64, theta: f64) -> [f64; 2] {
        match self {
            ExampleFamily::Antidiagonal => {
                let s = (2.0 * theta).sin();
                [a * s, b * s]
            }
            ExampleFamily::InvariantDiagonal => {
                let s = theta.sin() * theta.sin();
                [a * s, b * s]
            }
        }
    }

    /// Closed-form bound at the given parameters.
    pub fn closed_form_rhs(self, a: f64, b: f64, theta: f64) -> [f64; 2] {
        match self {
            ExampleFamily::Antidiagonal => [2.0 * theta * a, 2.0 * theta * b],
            ExampleFamily::InvariantDiagonal => [theta * theta * a, theta * theta * b],
        }
    }

    pub fn matrix(self, a: f64, b: f64) -> HermitianMatrix {
        let rows = match self {
            ExampleFamily::Antidiagonal => [
                vec![0.0, 0.0, a, 0.0],
                vec![0.0, 0.0, 0.0, b],
                vec![a, 0.0, 0.0, 0.0],
                vec![0.0, b, 0.0, 0.0],
            ],
            ExampleFamily::InvariantDiagonal => [
                vec![a, 0.0, 0.0, 0.0],
                vec![0.0, b, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0],
                vec![0.0, 0.0, 0.0, 0.0],
            ],
        };
        HermitianMatrix::from_real_rows(&rows).expect("closed-form matrices are Hermitian")
    }
}

/// The isometry spanning the tilted plane `Y(θ)`.
pub fn tilted_plane(theta: f64) -> Isometry {
    let m = nalgebra::DMatrix::<num_complex::Complex64>::from_fn(4, 2, |i, j| {
        let v = match (i, j) {
            (0, 0) | (1, 1) => theta.cos(),
            (2, 0) | (3, 1) => theta.sin(),
            _ => 0.0,
        };
        num_complex::Complex64::new(v, 0.0)
    });
    Isometry::new(m).expect("columns are orthonormal")
}

/// Structured reproduction result for one parameter point.
#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub family: ExampleFamily,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    /// Principal angles of the pair, `(θ, θ)`.
    pub angles: Vec<f64>,
    /// Spectral spread of the family matrix.
    pub spread: Vec<f64>,
    /// Computed `|λ(X*AX) - λ(Y*AY)|`, non-increasing.
    pub lhs: Vec<f64>,
    /// Computed angle-weighted bound, non-increasing.
    pub rhs: Vec<f64>,
    pub closed_form_lhs: Vec<f64>,
    /// `max |computed lhs - closed form|`.
    pub closed_form_deviation: f64,
    /// Entrywise `lhs / rhs`.
    pub ratio: Vec<f64>,
    pub holds: bool,
    pub report: BoundReport,
}

impl ExampleReport {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "example": self.family.cli_name(),
            "a": self.a,
            "b": self.b,
            "theta": self.theta,
            "angles": self.angles,
            "spread": self.spread,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "closed_form_lhs": self.closed_form_lhs,
            "closed_form_deviation": self.closed_form_deviation,
            "ratio": self.ratio,
            "holds": self.holds,
            "report": self.report.to_json(),
        })
    }
}

/// Builds the family at `(a, b, θ)`, runs the matching Ritz-variation check,
/// and verifies the computed variation against the closed form.
pub fn reproduce_example(
    family: ExampleFamily,
    a: f64,
    b: f64,
    theta: f64,
) -> Result<ExampleReport, HarnessError> {
    if !(a > b && b > 0.0) {
        return Err(HarnessError::BadParameter(format!(
            "need a > b > 0, got a = {a}, b = {b}"
        )));
    }
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(HarnessError::BadParameter(format!(
            "need theta in (0, pi/2), got {theta}"
        )));
    }

    let matrix = family.matrix(a, b);
    let x = Isometry::coordinate(4, 2)?;
    let y = tilted_plane(theta);
    let invariant = matches!(family, ExampleFamily::InvariantDiagonal);
    let report = check_ritz_variation(&matrix, &x, &y, invariant, &CheckOptions::default())?;

    let angles = ritzspread::subspace::principal_angles(&x, &y)?
        .values()
        .to_vec();
    let spread = spectral_spread(&matrix)?.values().to_vec();
    let lhs = report.lhs.values().to_vec();
    let rhs = report.rhs.values().to_vec();
    let closed = family.closed_form_lhs(a, b, theta).to_vec();
    let deviation = lhs
        .iter()
        .zip(&closed)
        .map(|(l, c)| (l - c).abs())
        .fold(0.0, f64::max);
    if deviation > CLOSED_FORM_TOL {
        return Err(HarnessError::ReproductionMismatch {
            deviation,
            tolerance: CLOSED_FORM_TOL,
        });
    }
    let ratio: Vec<f64> = lhs.iter().zip(&rhs).map(|(l, r)| l / r).collect();

    Ok(ExampleReport {
        family,
        a,
        b,
        theta,
        angles,
        spread,
        lhs,
        rhs,
        closed_form_lhs: closed,
        closed_form_deviation: deviation,
        ratio,
        holds: report.holds(),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antidiagonal_family_at_pi_over_six() {
        let r = reproduce_example(ExampleFamily::Antidiagonal, 2.0, 1.0, std::f64::consts::FRAC_PI_6)
            .unwrap();
        assert!(r.holds);
        assert!((r.lhs[0] - 1.732_050_807_568_877_2).abs() < 1e-10);
        assert!((r.lhs[1] - 0.866_025_403_784_438_6).abs() < 1e-10);
        assert!((r.rhs[0] - 2.094_395_102_393_195_3).abs() < 1e-10);
        assert!((r.rhs[1] - 1.047_197_551_196_597_6).abs() < 1e-10);
        assert!((r.spread[0] - 4.0).abs() < 1e-12);
        assert!((r.spread[1] - 2.0).abs() < 1e-12);
        for angle in &r.angles {
            assert!((angle - std::f64::consts::FRAC_PI_6).abs() < 1e-12);
        }
        // ratio = sin(2θ)/(2θ) entrywise
        for rho in &r.ratio {
            assert!((rho - 0.826_993_343_132_688_3).abs() < 1e-10);
        }
    }

    #[test]
    fn invariant_family_at_pi_over_six() {
        let r = reproduce_example(
            ExampleFamily::InvariantDiagonal,
            2.0,
            1.0,
            std::f64::consts::FRAC_PI_6,
        )
        .unwrap();
        assert!(r.holds);
        assert!((r.lhs[0] - 0.5).abs() < 1e-10);
        assert!((r.lhs[1] - 0.25).abs() < 1e-10);
        assert!((r.rhs[0] - 0.548_311_355_616_075_1).abs() < 1e-10);
        assert!((r.rhs[1] - 0.274_155_677_808_037_55).abs() < 1e-10);
        assert_eq!(r.spread, vec![2.0, 1.0]);
    }

    #[test]
    fn ratios_approach_one_for_small_angles() {
        for family in [ExampleFamily::Antidiagonal, ExampleFamily::InvariantDiagonal] {
            let r = reproduce_example(family, 2.0, 1.0, 1e-3).unwrap();
            for rho in &r.ratio {
                assert!(*rho >= 1.0 - 1e-5, "ratio {rho} too far from 1");
                assert!(*rho <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(matches!(
            reproduce_example(ExampleFamily::Antidiagonal, 1.0, 2.0, 0.3),
            Err(HarnessError::BadParameter(_))
        ));
        assert!(matches!(
            reproduce_example(ExampleFamily::Antidiagonal, 2.0, 1.0, 0.0),
            Err(HarnessError::BadParameter(_))
        ));
        assert!(matches!(
            reproduce_example(ExampleFamily::Antidiagonal, 2.0, 1.0, 2.0),
            Err(HarnessError::BadParameter(_))
        ));
    }
}
