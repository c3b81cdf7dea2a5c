//! Matrix file format and CLI error taxonomy.
//!
//! One matrix per file: `{"dim": d, "matrix": [[[re, im], …], …]}` with
//! `matrix[i][j] = [re, im]` for row `i`, column `j`. Serialization uses
//! shortest-round-trip float formatting, so write-then-read reproduces every
//! entry bit-exactly.

use std::fmt;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use unidisc::linalg::CMatrix;

/// On-disk matrix document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let d = m.nrows();
        MatrixFile {
            dim: d,
            matrix: (0..d)
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, String> {
        if self.dim == 0 {
            return Err("dim must be positive".into());
        }
        if self.matrix.len() != self.dim {
            return Err(format!(
                "matrix has {} rows, dim says {}",
                self.matrix.len(),
                self.dim
            ));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != self.dim {
                return Err(format!(
                    "row {i} has {} entries, dim says {}",
                    row.len(),
                    self.dim
                ));
            }
            for (j, entry) in row.iter().enumerate() {
                if !entry[0].is_finite() || !entry[1].is_finite() {
                    return Err(format!("entry ({i},{j}) is not finite"));
                }
            }
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            Complex64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        }))
    }
}

/// Error carrying the exit-code contract: 2 parse, 3 domain precondition,
/// 4 internal inconsistency.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input: unreadable file, bad JSON, shape mismatch. Exit 2.
    Parse(String),
    /// Domain precondition failure (non-unitary, dimension mismatch,
    /// reducible rep, …). Exit 3.
    Domain(String),
    /// A cross-check between independent computations disagreed. Exit 4.
    Inconsistent(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Inconsistent(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) | CliError::Domain(msg) => write!(f, "{msg}"),
            CliError::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl From<unidisc::Error> for CliError {
    fn from(e: unidisc::Error) -> Self {
        match e {
            unidisc::Error::Inconsistent { context } => CliError::Inconsistent(context),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// Reads and validates a matrix file.
pub fn read_matrix(path: &Path) -> Result<CMatrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let doc: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    doc.to_matrix()
        .map_err(|msg| CliError::Parse(format!("{}: {msg}", path.display())))
}

/// Writes a matrix file with round-trip-exact float formatting.
pub fn write_matrix(path: &Path, m: &CMatrix) -> std::io::Result<()> {
    let doc = MatrixFile::from_matrix(m);
    let text = serde_json::to_string_pretty(&doc).expect("matrix document serializes");
    fs::write(path, text)
}

/// Hex SHA-256 digest of a file's raw bytes.
pub fn file_digest(path: &Path) -> Result<String, CliError> {
    use sha2::{Digest, Sha256};
    let bytes =
        fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}
