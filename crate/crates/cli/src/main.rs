//! Command-line interface.
//!
//! ```text
//! ritzspread angles --x FILE --y FILE [--tol T] [--format json|csv|text]
//! ritzspread spread --a FILE
//! ritzspread decompose --x FILE --y FILE [--tol-int T] [--tol-perp T]
//! ritzspread check <NAME> --a FILE [--b FILE] [--x FILE] [--y FILE] [--split K] [--points N]
//! ritzspread example {ex35|ex36} --aval A --bval B --theta TH
//! ritzspread sweep {ex35|ex36} --aval A --bval B --theta-min M --theta-max X --steps N
//! ritzspread fuzz --trials N --dim D --subdim K --seed S --suite LIST --out FILE
//! ```
//!
//! Exit codes: 0 = all asserted checks hold, 1 = a theorem check was
//! violated (artifact persisted), 2 = input or usage error. The environment
//! variable `TOOL_TOL` overrides the default scale-aware tolerance.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;

use ritzspread::bounds::{
    check_compression_bound, check_curve_integral, check_invariant_compression_bound,
    check_residual_tangent, check_ritz_variation, check_sine_conjecture, CheckOptions,
};
use ritzspread::digest::{digest_inputs, DigestPart};
use ritzspread::io::{data_to_dmatrix, dmatrix_to_data, MatrixFile};
use ritzspread::spectra::{
    check_generalized_commutator, check_lidskii, check_offdiag_block, check_real_part,
    check_spread_subadditive, check_weyl_additive, check_weyl_multiplicative,
    hat_embedding_spectrum, spectral_spread, ComplexMatrix, HermitianMatrix,
};
use ritzspread::subspace::{
    decompose_pair, principal_angles, Isometry, DEFAULT_CLASSIFY_TOL, DEFAULT_ISOMETRY_TOL,
};

use ritzspread_cli::example::{reproduce_example, ExampleFamily};
use ritzspread_cli::fuzz::{run_fuzz, FuzzConfig};
use ritzspread_cli::report::{lidskii_to_json, spread_subadd_to_json, verdict_to_json};
use ritzspread_cli::sweep::{geometric_grid, sweep_sharpness};
use ritzspread_cli::{env_tolerance, parse_suite, CheckId};

#[derive(Parser)]
#[command(name = "ritzspread", version, about = "Principal angles, spectral spread and majorization bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum, Default)]
enum OutputFormat {
    Json,
    Csv,
    #[default]
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Principal angles between two subspaces, non-increasing, in radians.
    Angles {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Orthonormality tolerance accepted when loading the isometries.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Spectral spread of a Hermitian matrix.
    Spread {
        #[arg(long)]
        a: PathBuf,
    },
    /// Five-part orthogonal decomposition of a subspace pair.
    Decompose {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long = "tol-int")]
        tol_int: Option<f64>,
        #[arg(long = "tol-perp")]
        tol_perp: Option<f64>,
    },
    /// Evaluate one inequality check on matrices loaded from files.
    Check {
        /// One of: thm31 thm32 ritz ritz-invariant conj1 conj2
        /// residual-tangent lidskii weyl-add weyl-mul real-part offdiag
        /// commutator spread-subadd hat curve
        which: String,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long)]
        y: Option<PathBuf>,
        /// Row split for the off-diagonal block check.
        #[arg(long)]
        split: Option<usize>,
        /// Simpson node count for the curve-integral check (odd, >= 3).
        #[arg(long)]
        points: Option<usize>,
    },
    /// Reproduce one closed-form example family at given parameters.
    Example {
        /// ex35 (rotating null-compression family) or ex36 (invariant family)
        which: String,
        #[arg(long)]
        aval: f64,
        #[arg(long)]
        bval: f64,
        #[arg(long)]
        theta: f64,
    },
    /// Ratio-profile sweep of one family over a geometric angle grid (CSV).
    Sweep {
        which: String,
        #[arg(long)]
        aval: f64,
        #[arg(long)]
        bval: f64,
        #[arg(long = "theta-min")]
        theta_min: f64,
        #[arg(long = "theta-max")]
        theta_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Run randomized trials of the selected checks, streaming JSON lines.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        subdim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated check names, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Report stream destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Self-test hook: negate the named check's verdicts.
        #[arg(long = "corrupt-check", hide = true)]
        corrupt_check: Option<String>,
    },
}

#[derive(Debug)]
struct CliError(String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CliError {}

macro_rules! cli_error_from {
    ($($ty:ty),+ $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(e: $ty) -> Self {
                CliError(e.to_string())
            }
        }
    )+};
}

cli_error_from!(
    ritzspread::bounds::BoundsError,
    ritzspread::spectra::SpectraError,
    ritzspread::subspace::SubspaceError,
    ritzspread::vecmaj::VecMajError,
    ritzspread_cli::HarnessError,
);

fn usage(msg: impl Into<String>) -> CliError {
    CliError(msg.into())
}

fn read_matrix_file(path: &Path) -> Result<(MatrixFile, DMatrix<Complex64>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let file: MatrixFile =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let m = data_to_dmatrix(&file).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok((file, m))
}

fn load_hermitian(path: &Path) -> Result<HermitianMatrix, CliError> {
    let (file, m) = read_matrix_file(path)?;
    match file.kind.as_str() {
        "hermitian" | "general" => {
            let h = HermitianMatrix::new(m)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if h.hermiticity_defect() > 0.0 {
                eprintln!(
                    "note: {} symmetrized on load (defect {:.3e})",
                    path.display(),
                    h.hermiticity_defect()
                );
            }
            Ok(h)
        }
        other => Err(usage(format!(
            "{}: expected a hermitian matrix, found kind {other:?}",
            path.display()
        ))),
    }
}

fn load_general(path: &Path) -> Result<ComplexMatrix, CliError> {
    let (_, m) = read_matrix_file(path)?;
    ComplexMatrix::new(m).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_isometry(path: &Path, tol: f64) -> Result<Isometry, CliError> {
    let (file, m) = read_matrix_file(path)?;
    match file.kind.as_str() {
        "isometry" | "general" => Isometry::with_tolerance(m, tol)
            .map_err(|e| usage(format!("{}: {e}", path.display()))),
        other => Err(usage(format!(
            "{}: expected an isometry, found kind {other:?}",
            path.display()
        ))),
    }
}

fn require<T>(value: Option<T>, flag: &str, check: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("check {check} requires {flag}")))
}

fn parse_family(token: &str) -> Result<ExampleFamily, CliError> {
    match token {
        "ex35" => Ok(ExampleFamily::Antidiagonal),
        "ex36" => Ok(ExampleFamily::InvariantDiagonal),
        other => Err(usage(format!(
            "unknown example {other:?} (expected ex35 or ex36)"
        ))),
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("valid json"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    let env_tol = env_tolerance().map_err(|e| usage(e.to_string()))?;
    match command {
        Command::Angles { x, y, tol, format } => {
            let iso_tol = tol.unwrap_or(DEFAULT_ISOMETRY_TOL);
            let x = load_isometry(&x, iso_tol)?;
            let y = load_isometry(&y, iso_tol)?;
            let angles = principal_angles(&x, &y)?;
            match format {
                OutputFormat::Text => {
                    for a in angles.values() {
                        println!("{a}");
                    }
                }
                OutputFormat::Csv => {
                    println!("index,angle");
                    for (i, a) in angles.values().iter().enumerate() {
                        println!("{i},{a}");
                    }
                }
                OutputFormat::Json => print_json(&serde_json::json!({
                    "angles": angles.values(),
                })),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Spread { a } => {
            let a = load_hermitian(&a)?;
            let spread = spectral_spread(&a)?;
            print_json(&serde_json::json!({
                "dim": a.dim(),
                "spread": spread.values(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { x, y, tol_int, tol_perp } => {
            let x = load_isometry(&x, DEFAULT_ISOMETRY_TOL)?;
            let y = load_isometry(&y, DEFAULT_ISOMETRY_TOL)?;
            let dec = decompose_pair(
                &x,
                &y,
                tol_int.unwrap_or(DEFAULT_CLASSIFY_TOL),
                tol_perp.unwrap_or(DEFAULT_CLASSIFY_TOL),
            )?;
            print_json(&serde_json::json!({
                "s": dec.s,
                "p": dec.p,
                "r": dec.r,
                "sub_dim": dec.sub_dim(),
                "generic_dim": dec.generic_dim(),
                "theta_prime": dec.theta_prime.values(),
                "angles": dec.angles().values(),
                "borderline": dec.borderline.iter().map(|w| serde_json::json!({
                    "index": w.index,
                    "cosine": w.cosine,
                    "threshold": w.threshold,
                })).collect::<Vec<_>>(),
                "bases": {
                    "intersection": dmatrix_to_data(&dec.basis_intersection),
                    "s1": dmatrix_to_data(&dec.basis_s1),
                    "s2": dmatrix_to_data(&dec.basis_s2),
                    "complement": dmatrix_to_data(&dec.basis_complement),
                },
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { which, a, b, x, y, split, points } => {
            let check = CheckId::parse(&which).map_err(|e| usage(e.to_string()))?;
            let opts = CheckOptions {
                tolerance: env_tol,
                quadrature_points: points.unwrap_or(201),
                ..CheckOptions::default()
            };
            run_single_check(check, &a, b.as_deref(), x.as_deref(), y.as_deref(), split, &opts)
        }
        Command::Example { which, aval, bval, theta } => {
            let family = parse_family(&which)?;
            let report = reproduce_example(family, aval, bval, theta)?;
            let holds = report.holds;
            print_json(&report.to_json());
            Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep { which, aval, bval, theta_min, theta_max, steps } => {
            let family = parse_family(&which)?;
            let grid = geometric_grid(theta_min, theta_max, steps)?;
            let table = sweep_sharpness(family, aval, bval, &grid)?;
            print!("{}", table.to_csv());
            Ok(ExitCode::SUCCESS)
        }
        Command::Fuzz { trials, dim, subdim, seed, suite, out, corrupt_check } => {
            let suite = parse_suite(&suite).map_err(|e| usage(e.to_string()))?;
            let corrupt = corrupt_check
                .map(|token| CheckId::parse(&token))
                .transpose()
                .map_err(|e| usage(e.to_string()))?;
            if trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            if let Some(d) = dim {
                if d < 2 {
                    return Err(usage("--dim must be at least 2"));
                }
                if let Some(k) = subdim {
                    if k < 1 || k > d {
                        return Err(usage("--subdim must satisfy 1 <= K <= D"));
                    }
                }
            }
            let cfg = FuzzConfig {
                seed,
                trials,
                dim,
                sub_dim: subdim,
                suite,
                quadrature_points: 201,
                tolerance: env_tol,
                corrupt_check: corrupt,
            };
            let artifact_base = out.clone().unwrap_or_else(|| PathBuf::from("fuzz-report"));
            let outcome = match out {
                Some(path) => {
                    let file = File::create(&path)
                        .map_err(|e| usage(format!("cannot create {}: {e}", path.display())))?;
                    let mut writer = BufWriter::new(file);
                    run_fuzz(&cfg, &mut writer, &artifact_base)?
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    run_fuzz(&cfg, &mut lock, &artifact_base)?
                }
            };
            eprintln!(
                "fuzz: {} trials, {} theorem violations, {} conjecture violations ({:.2?})",
                outcome.trials,
                outcome.theorem_violations,
                outcome.conjecture_violations,
                outcome.wall_time,
            );
            eprintln!("per-check summary written to {}", outcome.summary_path.display());
            if let Some(path) = &outcome.violations_path {
                eprintln!("violations persisted to {}", path.display());
            }
            if let Some(path) = &outcome.conjecture_archive_path {
                eprintln!("conjecture candidates archived to {}", path.display());
            }
            Ok(if outcome.theorem_violations > 0 {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
    }
}

fn run_single_check(
    check: CheckId,
    a: &Path,
    b: Option<&Path>,
    x: Option<&Path>,
    y: Option<&Path>,
    split: Option<usize>,
    opts: &CheckOptions,
) -> Result<ExitCode, CliError> {
    let name = check.name();
    let iso_tol = DEFAULT_ISOMETRY_TOL;
    let tol = opts.tolerance;
    let mut reports: Vec<serde_json::Value> = Vec::new();
    let holds;

    match check {
        CheckId::CompressionBound => {
            let am = load_hermitian(a)?;
            let bm = match b {
                Some(path) => load_hermitian(path)?,
                None => am.clone(),
            };
            let xm = load_isometry(require(x, "--x", name)?, iso_tol)?;
            let ym = load_isometry(require(y, "--y", name)?, iso_tol)?;
            let r = check_compression_bound(&am, &bm, &xm, &ym, opts)?;
            holds = r.holds();
            reports.push(r.to_json());
        }
        CheckId::InvariantCompressionBound => {
            let am = load_hermitian(a)?;
            let xm = load_isometry(require(x, "--x", name)?, iso_tol)?;
            let ym = load_isometry(require(y, "--y", name)?, iso_tol)?;
            let r = check_invariant_compression_bound(&am, &xm, &ym, opts)?;
            holds = r.holds();
            reports.push(r.to_json());
        }
        CheckId::RitzVariation | CheckId::RitzVariationInvariant => {
            let am = load_hermitian(a)?;
            let xm = load_isometry(require(x, "--x", name)?, iso_tol)?;
            let ym = load_isometry(require(y, "--y", name)?, iso_tol)?;
            let invariant = check == CheckId::RitzVariationInvariant;
            let r = check_ritz_variation(&am, &xm, &ym, invariant, opts)?;
            holds = r.holds();
            reports.push(r.to_json());
        }
        CheckId::SineConjecture | CheckId::SineSquaredConjecture => {
            let am = load_hermitian(a)?;
            let xm = load_isometry(require(x, "--x", name)?, iso_tol)?;
            let ym = load_isometry(require(y, "--y", name)?, iso_tol)?;
            let invariant = check == CheckId::SineSquaredConjecture;
            let r = check_sine_conjecture(&am, &xm, &ym, invariant, opts)?;
            holds = r.holds();
            reports.push(r.to_json());
        }
        CheckId::ResidualTangent => {
            let am = load_hermitian(a)?;
            let xm = load_isometry(require(x, "--x", name)?, iso_tol)?;
            let ym = load_isometry(require(y, "--y", name)?, iso_tol)?;
            let r = check_residual_tangent(&am, &xm, &ym, opts)?;
            holds = r.holds();
            reports.push(r.to_json());
        }
        CheckId::Lidskii => {
            let cm = load_hermitian(a)?;
            let dm = load_hermitian(require(b, "--b", name)?)?;
            let digest = digest_inputs(&[
                DigestPart { role: "C", matrix: cm.as_matrix() },
                DigestPart { role: "D", matrix: dm.as_matrix() },
            ]);
            let r = check_lidskii(&cm, &dm, tol)?;
            holds = r.eigen_form.holds && r.singular_form.holds;
            reports.extend(lidskii_to_json(&r, &digest));
        }
        CheckId::WeylAdditive | CheckId::WeylMultiplicative => {
            let cm = load_general(a)?;
            let dm = load_general(require(b, "--b", name)?)?;
            let digest = digest_inputs(&[
                DigestPart { role: "C", matrix: cm.as_matrix() },
                DigestPart { role: "D", matrix: dm.as_matrix() },
            ]);
            let v = if check == CheckId::WeylAdditive {
                check_weyl_additive(&cm, &dm, tol)?
            } else {
                check_weyl_multiplicative(&cm, &dm, tol)?
            };
            holds = v.holds;
            reports.push(verdict_to_json(name, &v, BTreeMap::new(), &digest));
        }
        CheckId::RealPart => {
            let cm = load_general(a)?;
            let digest = digest_inputs(&[DigestPart { role: "C", matrix: cm.as_matrix() }]);
            let v = check_real_part(&cm, tol)?;
            holds = v.holds;
            reports.push(verdict_to_json(name, &v, BTreeMap::new(), &digest));
        }
        CheckId::OffdiagBlock => {
            let hm = load_hermitian(a)?;
            let split = require(split, "--split", name)?;
            let digest = digest_inputs(&[DigestPart { role: "H", matrix: hm.as_matrix() }]);
            let v = check_offdiag_block(&hm, split, tol)?;
            holds = v.holds;
            let mut extra = BTreeMap::new();
            extra.insert("split".to_string(), split as f64);
            reports.push(verdict_to_json(name, &v, extra, &digest));
        }
        CheckId::GeneralizedCommutator => {
            let a1 = load_hermitian(a)?;
            let a2 = load_hermitian(require(b, "--b", name)?)?;
            let dm = load_general(require(x, "--x (the middle factor D)", name)?)?;
            let digest = digest_inputs(&[
                DigestPart { role: "A1", matrix: a1.as_matrix() },
                DigestPart { role: "A2", matrix: a2.as_matrix() },
                DigestPart { role: "D", matrix: dm.as_matrix() },
            ]);
            let v = check_generalized_commutator(&a1, &a2, &dm, tol)?;
            holds = v.holds;
            reports.push(verdict_to_json(name, &v, BTreeMap::new(), &digest));
        }
        CheckId::SpreadSubadditive => {
            let am = load_hermitian(a)?;
            let bm = load_hermitian(require(b, "--b", name)?)?;
            let digest = digest_inputs(&[
                DigestPart { role: "A", matrix: am.as_matrix() },
                DigestPart { role: "B", matrix: bm.as_matrix() },
            ]);
            let r = check_spread_subadditive(&am, &bm, tol)?;
            holds = r.verdict.holds;
            reports.push(spread_subadd_to_json(&r, &digest));
        }
        CheckId::HatEmbedding => {
            let em = load_general(a)?;
            let digest = digest_inputs(&[DigestPart { role: "E", matrix: em.as_matrix() }]);
            let v = hat_embedding_spectrum(&em, tol)?;
            holds = v.holds;
            reports.push(verdict_to_json(name, &v, BTreeMap::new(), &digest));
        }
        CheckId::CurveIntegral => {
            let am = load_hermitian(a)?;
            let bm = match b {
                Some(path) => load_hermitian(path)?,
                None => am.clone(),
            };
            let xm = load_isometry(require(x, "--x", name)?, iso_tol)?;
            let ym = load_isometry(require(y, "--y", name)?, iso_tol)?;
            let r = check_curve_integral(&am, &bm, &xm, &ym, opts.quadrature_points, opts)?;
            holds = r.holds();
            reports.push(r.to_json());
        }
    }

    if reports.len() == 1 {
        print_json(&reports[0]);
    } else {
        print_json(&serde_json::Value::Array(reports));
    }
    let _ = std::io::stdout().flush();

    if !holds && !check.is_conjectural() {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
