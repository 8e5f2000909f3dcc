//! On-disk state format: JSON with separate row-major real and imaginary
//! parts.
//!
//! Complex literals serialize poorly across ecosystems, so a file stores
//! `{kind, local_dim, re, im}` with plain float arrays. Floats are written
//! with 17 significant digits, which round-trips every finite f64 exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use classicality::{CMatrix, DensityMatrix, StateKind};

use crate::CliError;

/// Formats a float with 17 significant digits (exact f64 round trip).
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileKind {
    Single,
    Bipartite,
}

impl FileKind {
    fn as_str(self) -> &'static str {
        match self {
            FileKind::Single => "single",
            FileKind::Bipartite => "bipartite",
        }
    }
}

/// Serialized density matrix.
#[derive(Debug, Clone, Deserialize)]
pub struct MatrixFile {
    pub kind: FileKind,
    pub local_dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let kind = match rho.kind() {
            StateKind::Single => FileKind::Single,
            StateKind::Bipartite => FileKind::Bipartite,
        };
        let m = rho.matrix();
        let dim = m.nrows();
        let mut re = Vec::with_capacity(dim);
        let mut im = Vec::with_capacity(dim);
        for r in 0..dim {
            re.push((0..dim).map(|c| m[(r, c)].re).collect());
            im.push((0..dim).map(|c| m[(r, c)].im).collect());
        }
        MatrixFile {
            kind,
            local_dim: rho.local_dim(),
            re,
            im,
        }
    }

    /// Expected total dimension for the declared kind.
    fn total_dim(&self) -> usize {
        match self.kind {
            FileKind::Single => self.local_dim,
            FileKind::Bipartite => self.local_dim * self.local_dim,
        }
    }

    fn check_shape(&self) -> Result<(), CliError> {
        let dim = self.total_dim();
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != dim || part.iter().any(|row| row.len() != dim) {
                return Err(CliError::Input(format!(
                    "matrix file: '{name}' is not a {dim}x{dim} array"
                )));
            }
        }
        Ok(())
    }

    /// Validates shape and state conditions and produces the density matrix.
    pub fn to_density(&self) -> Result<DensityMatrix, CliError> {
        self.check_shape()?;
        let dim = self.total_dim();
        let m = CMatrix::from_fn(dim, dim, |r, c| {
            Complex64::new(self.re[r][c], self.im[r][c])
        });
        let build = match self.kind {
            FileKind::Single => DensityMatrix::single(m),
            FileKind::Bipartite => DensityMatrix::bipartite(m, self.local_dim),
        };
        build.map_err(|e| match e {
            classicality::Error::InvalidState(report) => CliError::InvalidState(report.to_string()),
            other => CliError::Input(other.to_string()),
        })
    }

    /// Deterministic JSON rendering with 17-significant-digit floats.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"kind\": \"{}\",", self.kind.as_str());
        let _ = writeln!(out, "  \"local_dim\": {},", self.local_dim);
        for (idx, (name, part)) in [("re", &self.re), ("im", &self.im)].into_iter().enumerate() {
            let _ = writeln!(out, "  \"{name}\": [");
            for (r, row) in part.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|&x| format_f64(x)).collect();
                let comma = if r + 1 < part.len() { "," } else { "" };
                let _ = writeln!(out, "    [{}]{comma}", cells.join(", "));
            }
            let comma = if idx == 0 { "," } else { "" };
            let _ = writeln!(out, "  ]{comma}");
        }
        out.push_str("}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("matrix file parse error: {e}")))
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.to_json())
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
    }

    pub fn read_from(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// Reads and fully validates a state file.
pub fn load_state(path: &Path) -> Result<DensityMatrix, CliError> {
    MatrixFile::read_from(path)?.to_density()
}
