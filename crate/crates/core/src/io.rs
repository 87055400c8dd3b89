//! JSON matrix file format.
//!
//! Schema (bit-exact):
//!
//! ```json
//! {
//!   "kind": "hermitian" | "general" | "isometry",
//!   "rows": 4,
//!   "cols": 2,
//!   "data": [[[re, im], ...cols], ...rows]
//! }
//! ```
//!
//! `re`/`im` are JSON numbers parsed as IEEE-754 doubles. `hermitian` files
//! must have `rows == cols` and are validated/symmetrized on load; `isometry`
//! files are validated to have orthonormal columns.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectra::{ComplexMatrix, HermitianMatrix, SpectraError};
use crate::subspace::{Isometry, SubspaceError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed matrix file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unknown matrix kind {kind:?} (expected hermitian, general or isometry)")]
    UnknownKind { kind: String },
    #[error("data shape does not match rows={rows} cols={cols}: row {row} has {found} entries")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        row: usize,
        found: usize,
    },
    #[error("declared {declared} rows but data has {found}")]
    RowCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Matrix(#[from] SpectraError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
}

/// On-disk representation of a matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub kind: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

/// A matrix loaded from disk, already validated per its declared kind.
#[derive(Debug, Clone)]
pub enum LoadedMatrix {
    Hermitian(HermitianMatrix),
    General(ComplexMatrix),
    Isometry(Isometry),
}

impl LoadedMatrix {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadedMatrix::Hermitian(_) => "hermitian",
            LoadedMatrix::General(_) => "general",
            LoadedMatrix::Isometry(_) => "isometry",
        }
    }

    /// Raw entries regardless of kind.
    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        match self {
            LoadedMatrix::Hermitian(h) => h.as_matrix(),
            LoadedMatrix::General(g) => g.as_matrix(),
            LoadedMatrix::Isometry(x) => x.as_matrix(),
        }
    }
}

pub fn dmatrix_to_data(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn data_to_dmatrix(file: &MatrixFile) -> Result<DMatrix<Complex64>, IoError> {
    if file.data.len() != file.rows {
        return Err(IoError::RowCountMismatch {
            declared: file.rows,
            found: file.data.len(),
        });
    }
    for (row, entries) in file.data.iter().enumerate() {
        if entries.len() != file.cols {
            return Err(IoError::ShapeMismatch {
                rows: file.rows,
                cols: file.cols,
                row,
                found: entries.len(),
            });
        }
    }
    Ok(DMatrix::from_fn(file.rows, file.cols, |i, j| {
        Complex64::new(file.data[i][j][0], file.data[i][j][1])
    }))
}

pub fn parse_matrix(text: &str) -> Result<LoadedMatrix, IoError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    let m = data_to_dmatrix(&file)?;
    match file.kind.as_str() {
        "hermitian" => Ok(LoadedMatrix::Hermitian(HermitianMatrix::new(m)?)),
        "general" => Ok(LoadedMatrix::General(ComplexMatrix::new(m)?)),
        "isometry" => Ok(LoadedMatrix::Isometry(Isometry::new(m)?)),
        other => Err(IoError::UnknownKind {
            kind: other.to_string(),
        }),
    }
}

pub fn load_matrix(path: &Path) -> Result<LoadedMatrix, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text)
}

pub fn matrix_to_string(kind: &str, m: &DMatrix<Complex64>) -> String {
    let file = MatrixFile {
        kind: kind.to_string(),
        rows: m.nrows(),
        cols: m.ncols(),
        data: dmatrix_to_data(m),
    };
    serde_json::to_string_pretty(&file).expect("matrix file serialization cannot fail")
}

pub fn save_matrix(path: &Path, kind: &str, m: &DMatrix<Complex64>) -> Result<(), IoError> {
    fs::write(path, matrix_to_string(kind, m)).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_validates_each_kind() {
        let hermitian = r#"{
            "kind": "hermitian", "rows": 2, "cols": 2,
            "data": [[[1.0, 0.0], [0.0, -0.5]], [[0.0, 0.5], [2.0, 0.0]]]
        }"#;
        match parse_matrix(hermitian).unwrap() {
            LoadedMatrix::Hermitian(h) => assert_eq!(h.dim(), 2),
            other => panic!("expected hermitian, got {}", other.kind()),
        }

        let isometry = r#"{
            "kind": "isometry", "rows": 3, "cols": 1,
            "data": [[[1.0, 0.0]], [[0.0, 0.0]], [[0.0, 0.0]]]
        }"#;
        match parse_matrix(isometry).unwrap() {
            LoadedMatrix::Isometry(x) => {
                assert_eq!(x.ambient_dim(), 3);
                assert_eq!(x.sub_dim(), 1);
            }
            other => panic!("expected isometry, got {}", other.kind()),
        }

        let general = r#"{
            "kind": "general", "rows": 1, "cols": 2,
            "data": [[[0.0, 1.0], [2.0, 3.0]]]
        }"#;
        assert!(matches!(parse_matrix(general).unwrap(), LoadedMatrix::General(_)));
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(
            parse_matrix(r#"{"kind": "banana", "rows": 1, "cols": 1, "data": [[[1.0, 0.0]]]}"#),
            Err(IoError::UnknownKind { .. })
        ));
        assert!(matches!(
            parse_matrix(r#"{"kind": "general", "rows": 2, "cols": 1, "data": [[[1.0, 0.0]]]}"#),
            Err(IoError::RowCountMismatch { .. })
        ));
        assert!(matches!(
            parse_matrix(r#"{"kind": "general", "rows": 1, "cols": 2, "data": [[[1.0, 0.0]]]}"#),
            Err(IoError::ShapeMismatch { .. })
        ));
        // non-hermitian data with hermitian kind
        assert!(parse_matrix(
            r#"{"kind": "hermitian", "rows": 2, "cols": 2,
                "data": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}"#
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn round_trip_preserves_entries(
            rows in 1usize..5,
            cols in 1usize..5,
            seed in proptest::collection::vec(-1e6f64..1e6, 50),
        ) {
            let m = DMatrix::from_fn(rows, cols, |i, j| {
                let idx = (i * cols + j) * 2;
                Complex64::new(seed[idx % seed.len()], seed[(idx + 1) % seed.len()])
            });
            let text = matrix_to_string("general", &m);
            let back = parse_matrix(&text).unwrap();
            prop_assert_eq!(back.as_dmatrix(), &m);
        }
    }
}
