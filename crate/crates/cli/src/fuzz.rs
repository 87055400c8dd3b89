//! The fuzz runner: fresh random instances for every selected check, a
//! JSON-lines report stream, and persistence of violations.
//!
//! Reproducibility contract: a record is a pure function of
//! `(seed, trial_index, config)`. Trial `i` draws from the ChaCha8 stream
//! `i` of the run seed; within a trial, checks run in suite order and each
//! check draws its inputs in a fixed documented order. Wall time is tracked
//! in memory only and never serialized, so two runs of the same
//! configuration produce byte-identical streams.
//!
//! Violations of asserted (theorem) checks are appended to
//! `<base>.violations.jsonl` and make the run fail; violations of
//! conjectural checks are appended to `<base>.conjectures.jsonl` and do not.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ritzspread::bounds::{
    check_compression_bound, check_curve_integral, check_invariant_compression_bound,
    check_residual_tangent, check_ritz_variation, check_sine_conjecture, BoundsError,
    CheckOptions,
};
use ritzspread::digest::{digest_inputs, DigestPart};
use ritzspread::spectra::{
    check_generalized_commutator, check_lidskii, check_offdiag_block, check_real_part,
    check_spread_subadditive, check_weyl_additive, check_weyl_multiplicative,
    hat_embedding_spectrum,
};

use crate::gen::{gen_complex, gen_hermitian, gen_invariant_pair, gen_isometry, trial_rng};
use crate::report::{lidskii_to_json, spread_subadd_to_json, verdict_to_json};
use crate::{CheckId, HarnessError};

/// Full configuration of one fuzz run.
#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: u64,
    /// Fixed ambient dimension; `None` samples `d ∈ {4..12}` per trial.
    pub dim: Option<usize>,
    /// Fixed subspace dimension; `None` samples both the low range
    /// `{1..⌊d/2⌋}` and the high range `{⌈d/2⌉..d-1}`.
    pub sub_dim: Option<usize>,
    pub suite: Vec<CheckId>,
    pub quadrature_points: usize,
    /// Global tolerance override (the CLI wires the environment variable in).
    pub tolerance: Option<f64>,
    /// Self-test hook: negate the verdict of this check to exercise the
    /// violation path end to end.
    pub corrupt_check: Option<CheckId>,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            dim: None,
            sub_dim: None,
            suite: CheckId::ALL.to_vec(),
            quadrature_points: 201,
            tolerance: None,
            corrupt_check: None,
        }
    }
}

/// Summary of one fuzz run.
#[derive(Debug)]
pub struct FuzzOutcome {
    pub trials: u64,
    pub theorem_violations: u64,
    pub conjecture_violations: u64,
    /// Artifact with offending records, present only if violations occurred.
    pub violations_path: Option<PathBuf>,
    /// Archive of conjecture counterexample candidates, if any.
    pub conjecture_archive_path: Option<PathBuf>,
    /// Per-check CSV summary (runs, violations, minimum worst margin).
    pub summary_path: PathBuf,
    pub wall_time: Duration,
}

struct CheckOutcome {
    holds: bool,
    report: serde_json::Value,
}

fn options_for(cfg: &FuzzConfig) -> CheckOptions {
    CheckOptions {
        tolerance: cfg.tolerance,
        quadrature_points: cfg.quadrature_points,
        ..CheckOptions::default()
    }
}

fn sample_dims(cfg: &FuzzConfig, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let d = cfg.dim.unwrap_or_else(|| rng.gen_range(4..=12));
    let k = cfg.sub_dim.unwrap_or_else(|| {
        let low_max = (d / 2).max(1);
        if d >= 3 && rng.gen_bool(0.5) {
            rng.gen_range(d.div_ceil(2)..=(d - 1).max(d.div_ceil(2)))
        } else {
            rng.gen_range(1..=low_max)
        }
    });
    (d, k.clamp(1, d))
}

/// Runs one check on fresh inputs drawn from `rng`. Draw order per check is
/// fixed: matrices first (A then B), then subspaces (X then Y).
fn run_check(
    check: CheckId,
    rng: &mut ChaCha8Rng,
    d: usize,
    k: usize,
    cfg: &FuzzConfig,
) -> Result<Vec<CheckOutcome>, HarnessError> {
    let opts = options_for(cfg);
    let tol = cfg.tolerance;
    let outcome = |holds: bool, report: serde_json::Value| CheckOutcome { holds, report };

    let outcomes = match check {
        CheckId::CompressionBound => {
            let a = gen_hermitian(rng, d);
            let b = gen_hermitian(rng, d);
            let x = gen_isometry(rng, d, k);
            let y = gen_isometry(rng, d, k);
            let r = check_compression_bound(&a, &b, &x, &y, &opts)?;
            vec![outcome(r.holds(), r.to_json())]
        }
        CheckId::InvariantCompressionBound => {
            let (a, x) = gen_invariant_pair(rng, d, k)?;
            let y = gen_isometry(rng, d, k);
            let r = check_invariant_compression_bound(&a, &x, &y, &opts)?;
            vec![outcome(r.holds(), r.to_json())]
        }
        CheckId::RitzVariation => {
            let a = gen_hermitian(rng, d);
            let x = gen_isometry(rng, d, k);
            let y = gen_isometry(rng, d, k);
            let r = check_ritz_variation(&a, &x, &y, false, &opts)?;
            vec![outcome(r.holds(), r.to_json())]
        }
        CheckId::RitzVariationInvariant => {
            let (a, x) = gen_invariant_pair(rng, d, k)?;
            let y = gen_isometry(rng, d, k);
            let r = check_ritz_variation(&a, &x, &y, true, &opts)?;
            vec![outcome(r.holds(), r.to_json())]
        }
        CheckId::SineConjecture => {
            let a = gen_hermitian(rng, d);
            let x = gen_isometry(rng, d, k);
            let y = gen_isometry(rng, d, k);
            let r = check_sine_conjecture(&a, &x, &y, false, &opts)?;
            vec![outcome(r.holds(), r.to_json())]
        }
        CheckId::SineSquaredConjecture => {
            let (a, x) = gen_invariant_pair(rng, d, k)?;
            let y = gen_isometry(rng, d, k);
            let r = check_sine_conjecture(&a, &x, &y, true, &opts)?;
            vec![outcome(r.holds(), r.to_json())]
        }
        CheckId::ResidualTangent => {
            // acuteness needs k <= d/2; larger subspaces force a right angle
            let k_eff = k.min((d / 2).max(1));
            let a = gen_hermitian(rng, d);
            let mut last_err = None;
            let mut produced = None;
            for _ in 0..4 {
                let x = gen_isometry(rng, d, k_eff);
                let y = gen_isometry(rng, d, k_eff);
                match check_residual_tangent(&a, &x, &y, &opts) {
                    Ok(r) => {
                        produced = Some(r);
                        break;
                    }
                    Err(BoundsError::NotAcute { .. }) => {
                        last_err = Some("pair not acute".to_string());
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            let r = produced.ok_or(HarnessError::GeneratorExhausted {
                attempts: 4,
                reason: last_err.unwrap_or_default(),
            })?;
            vec![outcome(r.holds(), r.to_json())]
        }
        CheckId::Lidskii => {
            let c = gen_hermitian(rng, d);
            let e = gen_hermitian(rng, d);
            let digest = digest_inputs(&[
                DigestPart { role: "C", matrix: c.as_matrix() },
                DigestPart { role: "D", matrix: e.as_matrix() },
            ]);
            let r = check_lidskii(&c, &e, tol)?;
            let holds = r.eigen_form.holds && r.singular_form.holds;
            lidskii_to_json(&r, &digest)
                .into_iter()
                .map(|value| outcome(holds, value))
                .collect()
        }
        CheckId::WeylAdditive => {
            let c = gen_complex(rng, d, d);
            let e = gen_complex(rng, d, d);
            let digest = digest_inputs(&[
                DigestPart { role: "C", matrix: c.as_matrix() },
                DigestPart { role: "D", matrix: e.as_matrix() },
            ]);
            let v = check_weyl_additive(&c, &e, tol)?;
            let holds = v.holds;
            vec![outcome(holds, verdict_to_json("weyl-add", &v, Default::default(), &digest))]
        }
        CheckId::WeylMultiplicative => {
            let c = gen_complex(rng, d, d);
            let e = gen_complex(rng, d, d);
            let digest = digest_inputs(&[
                DigestPart { role: "C", matrix: c.as_matrix() },
                DigestPart { role: "D", matrix: e.as_matrix() },
            ]);
            let v = check_weyl_multiplicative(&c, &e, tol)?;
            let holds = v.holds;
            vec![outcome(holds, verdict_to_json("weyl-mul", &v, Default::default(), &digest))]
        }
        CheckId::RealPart => {
            let c = gen_complex(rng, d, d);
            let digest = digest_inputs(&[DigestPart { role: "C", matrix: c.as_matrix() }]);
            let v = check_real_part(&c, tol)?;
            let holds = v.holds;
            vec![outcome(holds, verdict_to_json("real-part", &v, Default::default(), &digest))]
        }
        CheckId::OffdiagBlock => {
            let h = gen_hermitian(rng, d);
            let split = k.clamp(1, d - 1);
            let digest = digest_inputs(&[DigestPart { role: "H", matrix: h.as_matrix() }]);
            let v = check_offdiag_block(&h, split, tol)?;
            let holds = v.holds;
            let mut extra = std::collections::BTreeMap::new();
            extra.insert("split".to_string(), split as f64);
            vec![outcome(holds, verdict_to_json("offdiag", &v, extra, &digest))]
        }
        CheckId::GeneralizedCommutator => {
            let a1 = gen_hermitian(rng, k);
            let a2 = gen_hermitian(rng, k);
            let dm = gen_complex(rng, k, k);
            let digest = digest_inputs(&[
                DigestPart { role: "A1", matrix: a1.as_matrix() },
                DigestPart { role: "A2", matrix: a2.as_matrix() },
                DigestPart { role: "D", matrix: dm.as_matrix() },
            ]);
            let v = check_generalized_commutator(&a1, &a2, &dm, tol)?;
            let holds = v.holds;
            vec![outcome(holds, verdict_to_json("commutator", &v, Default::default(), &digest))]
        }
        CheckId::SpreadSubadditive => {
            let a = gen_hermitian(rng, d);
            let b = gen_hermitian(rng, d);
            let digest = digest_inputs(&[
                DigestPart { role: "A", matrix: a.as_matrix() },
                DigestPart { role: "B", matrix: b.as_matrix() },
            ]);
            let r = check_spread_subadditive(&a, &b, tol)?;
            let holds = r.verdict.holds;
            vec![outcome(holds, spread_subadd_to_json(&r, &digest))]
        }
        CheckId::HatEmbedding => {
            let k_eff = k.clamp(1, d - 1);
            let e = gen_complex(rng, k_eff, d - k_eff);
            let digest = digest_inputs(&[DigestPart { role: "E", matrix: e.as_matrix() }]);
            let v = hat_embedding_spectrum(&e, tol)?;
            let holds = v.holds;
            vec![outcome(holds, verdict_to_json("hat", &v, Default::default(), &digest))]
        }
        CheckId::CurveIntegral => {
            let a = gen_hermitian(rng, d);
            let b = gen_hermitian(rng, d);
            let x = gen_isometry(rng, d, k);
            let y = gen_isometry(rng, d, k);
            let r = check_curve_integral(&a, &b, &x, &y, cfg.quadrature_points, &opts)?;
            vec![outcome(r.holds(), r.to_json())]
        }
    };
    Ok(outcomes)
}

fn append_line(path: &Path, line: &str) -> Result<(), HarnessError> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(line.as_bytes())?;
    file.write_all(b"\n")?;
    Ok(())
}

/// Runs the configured suite trial by trial, streaming one JSON record per
/// trial to `out`. Violation artifacts are derived from `artifact_base`.
pub fn run_fuzz(
    cfg: &FuzzConfig,
    out: &mut dyn Write,
    artifact_base: &Path,
) -> Result<FuzzOutcome, HarnessError> {
    let started = Instant::now();
    let violations_path = artifact_base.with_extension("violations.jsonl");
    let conjectures_path = artifact_base.with_extension("conjectures.jsonl");
    let summary_path = artifact_base.with_extension("summary.csv");
    let mut theorem_violations = 0u64;
    let mut conjecture_violations = 0u64;
    let mut wrote_violations = false;
    let mut wrote_conjectures = false;
    // per report-name tallies: (runs, violations, min worst margin)
    let mut tallies: std::collections::BTreeMap<String, (u64, u64, f64)> =
        std::collections::BTreeMap::new();

    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, trial);
        let (d, k) = sample_dims(cfg, &mut rng);

        let mut reports = Vec::new();
        let mut digests = Vec::new();
        let mut offending: Vec<&'static str> = Vec::new();
        let mut conjectural_offending: Vec<&'static str> = Vec::new();
        for &check in &cfg.suite {
            let mut outcomes = run_check(check, &mut rng, d, k, cfg)?;
            for o in &mut outcomes {
                let mut holds = o.holds;
                if cfg.corrupt_check == Some(check) {
                    holds = !holds;
                    o.report["holds"] = json!(holds);
                    o.report["corrupted_for_selftest"] = json!(true);
                }
                if !holds {
                    if check.is_conjectural() {
                        conjecture_violations += 1;
                        conjectural_offending.push(check.name());
                    } else {
                        theorem_violations += 1;
                        offending.push(check.name());
                    }
                }
                let name = o.report["check"].as_str().unwrap_or(check.name()).to_string();
                let margin = o.report["worst_margin"].as_f64().unwrap_or(f64::NAN);
                let entry = tallies.entry(name).or_insert((0, 0, f64::INFINITY));
                entry.0 += 1;
                if !holds {
                    entry.1 += 1;
                }
                entry.2 = entry.2.min(margin);
                if let Some(digest) = o.report.get("inputs_digest") {
                    digests.push(json!({
                        "check": o.report["check"],
                        "digest": digest,
                    }));
                }
                reports.push(o.report.clone());
            }
        }

        let record = json!({
            "trial": trial,
            "dim": d,
            "sub_dim": k,
            "input_digests": digests,
            "reports": reports,
        });
        let line = serde_json::to_string(&record)?;
        out.write_all(line.as_bytes())?;
        out.write_all(b"\n")?;

        if !offending.is_empty() {
            append_line(&violations_path, &line)?;
            wrote_violations = true;
        }
        if !conjectural_offending.is_empty() {
            append_line(&conjectures_path, &line)?;
            wrote_conjectures = true;
        }
    }
    out.flush()?;

    let mut summary = String::from("check,runs,violations,min_worst_margin\n");
    for (name, (runs, violations, margin)) in &tallies {
        summary.push_str(&format!("{name},{runs},{violations},{margin}\n"));
    }
    std::fs::write(&summary_path, summary)?;

    Ok(FuzzOutcome {
        trials: cfg.trials,
        theorem_violations,
        conjecture_violations,
        violations_path: wrote_violations.then_some(violations_path),
        conjecture_archive_path: wrote_conjectures.then_some(conjectures_path),
        summary_path,
        wall_time: started.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmpdir() -> tempfile::TempDir {
        tempfile::tempdir().expect("temp dir")
    }

    #[test]
    fn small_suites_pass_with_no_violations() {
        let dir = tmpdir();
        let cfg = FuzzConfig {
            seed: 7,
            trials: 25,
            dim: Some(6),
            sub_dim: None,
            suite: vec![CheckId::Lidskii, CheckId::CompressionBound, CheckId::CurveIntegral],
            ..FuzzConfig::default()
        };
        let mut out = Vec::new();
        let outcome = run_fuzz(&cfg, &mut out, &dir.path().join("report")).unwrap();
        assert_eq!(outcome.theorem_violations, 0);
        assert_eq!(outcome.conjecture_violations, 0);
        assert!(outcome.violations_path.is_none());
        assert_eq!(out.iter().filter(|&&b| b == b'\n').count(), 25);

        let summary = std::fs::read_to_string(&outcome.summary_path).unwrap();
        assert!(summary.starts_with("check,runs,violations,min_worst_margin\n"));
        // lidskii contributes two report rows, so four names appear
        assert_eq!(summary.lines().count(), 5);
        for line in summary.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[1], "25");
            assert_eq!(fields[2], "0");
        }
    }

    #[test]
    fn identical_configs_produce_identical_bytes() {
        let dir = tmpdir();
        let cfg = FuzzConfig {
            seed: 42,
            trials: 10,
            suite: CheckId::ALL.to_vec(),
            ..FuzzConfig::default()
        };
        let mut first = Vec::new();
        let mut second = Vec::new();
        run_fuzz(&cfg, &mut first, &dir.path().join("a")).unwrap();
        run_fuzz(&cfg, &mut second, &dir.path().join("b")).unwrap();
        assert_eq!(first, second, "fuzz streams must be byte-identical");
    }

    #[test]
    fn corrupted_check_produces_violation_artifact() {
        let dir = tmpdir();
        let base = dir.path().join("report");
        let cfg = FuzzConfig {
            seed: 5,
            trials: 3,
            dim: Some(5),
            suite: vec![CheckId::Lidskii, CheckId::WeylAdditive],
            corrupt_check: Some(CheckId::WeylAdditive),
            ..FuzzConfig::default()
        };
        let mut out = Vec::new();
        let outcome = run_fuzz(&cfg, &mut out, &base).unwrap();
        assert_eq!(outcome.theorem_violations, 3);
        let artifact = outcome.violations_path.expect("artifact must be persisted");
        let content = std::fs::read_to_string(artifact).unwrap();
        assert_eq!(content.lines().count(), 3);
        assert!(content.contains("corrupted_for_selftest"));
        assert!(content.contains("\"inputs_digest\""));
    }

    #[test]
    fn corrupted_conjecture_is_archived_without_failing() {
        let dir = tmpdir();
        let base = dir.path().join("report");
        let cfg = FuzzConfig {
            seed: 5,
            trials: 2,
            dim: Some(5),
            suite: vec![CheckId::SineConjecture],
            corrupt_check: Some(CheckId::SineConjecture),
            ..FuzzConfig::default()
        };
        let mut out = Vec::new();
        let outcome = run_fuzz(&cfg, &mut out, &base).unwrap();
        assert_eq!(outcome.theorem_violations, 0, "conjectures never fail the run");
        assert_eq!(outcome.conjecture_violations, 2);
        assert!(outcome.conjecture_archive_path.is_some());
    }

    #[test]
    fn trial_records_are_stream_independent() {
        // running only trial 3's stream reproduces the same inputs as a full run
        let dir = tmpdir();
        let cfg_full = FuzzConfig {
            seed: 9,
            trials: 4,
            dim: Some(5),
            sub_dim: Some(2),
            suite: vec![CheckId::RitzVariation],
            ..FuzzConfig::default()
        };
        let mut full = Vec::new();
        run_fuzz(&cfg_full, &mut full, &dir.path().join("full")).unwrap();
        let lines: Vec<&str> = std::str::from_utf8(&full).unwrap().lines().collect();

        // regenerate trial 3 in isolation
        let mut rng = trial_rng(9, 3);
        let (d, k) = sample_dims(&cfg_full, &mut rng);
        let outcomes = run_check(CheckId::RitzVariation, &mut rng, d, k, &cfg_full).unwrap();
        let digest = outcomes[0].report["inputs_digest"].as_str().unwrap();
        assert!(lines[3].contains(digest));
    }
}
