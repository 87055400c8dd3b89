//! Canonical content digests for report provenance.
//!
//! Inputs to a check are hashed over a fixed byte layout (role tag, dims,
//! row-major IEEE-754 little-endian entries) so identical inputs always map
//! to the same hex digest, independent of how they were produced.

use nalgebra::DMatrix;
use num_complex::Complex64;
use sha2::{Digest, Sha256};

/// One labeled matrix participating in a digest.
pub struct DigestPart<'a> {
    pub role: &'a str,
    pub matrix: &'a DMatrix<Complex64>,
}

/// SHA-256 over the canonical encoding of the labeled matrices, as lowercase hex.
pub fn digest_inputs(parts: &[DigestPart<'_>]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update(part.role.as_bytes());
        hasher.update([0u8]);
        hasher.update((part.matrix.nrows() as u64).to_le_bytes());
        hasher.update((part.matrix.ncols() as u64).to_le_bytes());
        for i in 0..part.matrix.nrows() {
            for j in 0..part.matrix.ncols() {
                let z = part.matrix[(i, j)];
                hasher.update(z.re.to_le_bytes());
                hasher.update(z.im.to_le_bytes());
            }
        }
    }
    let bytes = hasher.finalize();
    let mut out = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
