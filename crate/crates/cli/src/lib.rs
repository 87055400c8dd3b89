//! Randomized test harness and CLI plumbing for the ritzspread library.
//!
//! The harness owns everything that is not pure matrix mathematics: seeded
//! instance generators, reproduction of the closed-form example families,
//! sharpness sweeps, and the fuzz runner that exercises every inequality
//! checker and persists violations. All randomness flows through a named,
//! seedable generator with one independent stream per trial, so partial or
//! reordered runs reproduce the serial results byte for byte.

pub mod example;
pub mod fuzz;
pub mod gen;
pub mod report;
pub mod sweep;

use thiserror::Error;

/// Environment variable overriding the default global tolerance.
pub const TOLERANCE_ENV_VAR: &str = "TOOL_TOL";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("closed-form reproduction failed: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    ReproductionMismatch { deviation: f64, tolerance: f64 },
    #[error("unknown check name {0:?}")]
    UnknownCheck(String),
    #[error("generator failed to produce a valid instance after {attempts} attempts: {reason}")]
    GeneratorExhausted { attempts: usize, reason: String },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Bounds(#[from] ritzspread::bounds::BoundsError),
    #[error(transparent)]
    Spectra(#[from] ritzspread::spectra::SpectraError),
    #[error(transparent)]
    Subspace(#[from] ritzspread::subspace::SubspaceError),
    #[error(transparent)]
    Vector(#[from] ritzspread::vecmaj::VecMajError),
    #[error(transparent)]
    MatrixFile(#[from] ritzspread::io::IoError),
    #[error("serialization failure: {0}")]
    Serialize(#[from] serde_json::Error),
}

/// Every inequality check reachable from the CLI, by its exact CLI token.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    CompressionBound,
    InvariantCompressionBound,
    RitzVariation,
    RitzVariationInvariant,
    SineConjecture,
    SineSquaredConjecture,
    ResidualTangent,
    Lidskii,
    WeylAdditive,
    WeylMultiplicative,
    RealPart,
    OffdiagBlock,
    GeneralizedCommutator,
    SpreadSubadditive,
    HatEmbedding,
    CurveIntegral,
}

impl CheckId {
    pub const ALL: [CheckId; 16] = [
        CheckId::CompressionBound,
        CheckId::InvariantCompressionBound,
        CheckId::RitzVariation,
        CheckId::RitzVariationInvariant,
        CheckId::SineConjecture,
        CheckId::SineSquaredConjecture,
        CheckId::ResidualTangent,
        CheckId::Lidskii,
        CheckId::WeylAdditive,
        CheckId::WeylMultiplicative,
        CheckId::RealPart,
        CheckId::OffdiagBlock,
        CheckId::GeneralizedCommutator,
        CheckId::SpreadSubadditive,
        CheckId::HatEmbedding,
        CheckId::CurveIntegral,
    ];

    /// The CLI token, also used as the `check` field of reports.
    pub fn name(self) -> &'static str {
        match self {
            CheckId::CompressionBound => "thm31",
            CheckId::InvariantCompressionBound => "thm32",
            CheckId::RitzVariation => "ritz",
            CheckId::RitzVariationInvariant => "ritz-invariant",
            CheckId::SineConjecture => "conj1",
            CheckId::SineSquaredConjecture => "conj2",
            CheckId::ResidualTangent => "residual-tangent",
            CheckId::Lidskii => "lidskii",
            CheckId::WeylAdditive => "weyl-add",
            CheckId::WeylMultiplicative => "weyl-mul",
            CheckId::RealPart => "real-part",
            CheckId::OffdiagBlock => "offdiag",
            CheckId::GeneralizedCommutator => "commutator",
            CheckId::SpreadSubadditive => "spread-subadd",
            CheckId::HatEmbedding => "hat",
            CheckId::CurveIntegral => "curve",
        }
    }

    pub fn parse(token: &str) -> Result<CheckId, HarnessError> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == token)
            .ok_or_else(|| HarnessError::UnknownCheck(token.to_string()))
    }

    /// Conjectural checks archive violations instead of failing a run.
    pub fn is_conjectural(self) -> bool {
        matches!(self, CheckId::SineConjecture | CheckId::SineSquaredConjecture)
    }
}

/// Parses a comma-separated suite list; `"all"` (or empty) selects every check.
pub fn parse_suite(list: &str) -> Result<Vec<CheckId>, HarnessError> {
    let trimmed = list.trim();
    if trimmed.is_empty() || trimmed == "all" {
        return Ok(CheckId::ALL.to_vec());
    }
    trimmed
        .split(',')
        .map(|token| CheckId::parse(token.trim()))
        .collect()
}

/// Reads the global tolerance override from [`TOLERANCE_ENV_VAR`].
pub fn env_tolerance() -> Result<Option<f64>, HarnessError> {
    match std::env::var(TOLERANCE_ENV_VAR) {
        Ok(text) => {
            let value: f64 = text.trim().parse().map_err(|_| {
                HarnessError::BadParameter(format!(
                    "{TOLERANCE_ENV_VAR} must be a floating-point tolerance, got {text:?}"
                ))
            })?;
            if !value.is_finite() || value < 0.0 {
                return Err(HarnessError::BadParameter(format!(
                    "{TOLERANCE_ENV_VAR} must be a non-negative finite number, got {value}"
                )));
            }
            Ok(Some(value))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(HarnessError::BadParameter(format!(
            "{TOLERANCE_ENV_VAR}: {e}"
        ))),
    }
}
