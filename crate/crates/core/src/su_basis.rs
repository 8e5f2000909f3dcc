//! Generator basis of SU(n): the generalized Gell-Mann matrices.
//!
//! The basis is ordered in three groups: symmetric off-diagonal, antisymmetric
//! off-diagonal (both over index pairs `1 <= j < k <= n` in lexicographic
//! order), then the `n - 1` diagonal generators. For `n = 2` this is exactly
//! `[sigma_x, sigma_y, sigma_z]`. Normalization is `Tr(l_i l_j) = 2 d_ij`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

pub const ORDERING_TAG: &str = "symmetric-antisymmetric-diagonal";

/// Where a generator sits in the ordering. Indices are 1-based matrix
/// positions, matching how the generators are usually written down.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorLabel {
    /// `E_jk + E_kj`
    Symmetric(usize, usize),
    /// `-i E_jk + i E_kj`
    Antisymmetric(usize, usize),
    /// `sqrt(2 / (l (l + 1))) (sum_{m <= l} E_mm - l E_{l+1,l+1})`
    Diagonal(usize),
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::Symmetric(j, k) => write!(f, "sym({j},{k})"),
            GeneratorLabel::Antisymmetric(j, k) => write!(f, "asym({j},{k})"),
            GeneratorLabel::Diagonal(l) => write!(f, "diag({l})"),
        }
    }
}

/// Ordered set of the `n^2 - 1` Hermitian traceless generators of SU(n).
///
/// Both subsystems of a bipartite state use the same basis; local dimensions
/// are always equal here.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
    labels: Vec<GeneratorLabel>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of generators, `n^2 - 1`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Generator at 0-based position `idx`.
    pub fn generator(&self, idx: usize) -> &CMatrix {
        &self.generators[idx]
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn label(&self, idx: usize) -> GeneratorLabel {
        self.labels[idx]
    }

    pub fn ordering_tag(&self) -> &'static str {
        ORDERING_TAG
    }

    /// Real linear combination `sum_i v[i] * l_i`.
    pub fn combine(&self, v: &[f64]) -> Result<CMatrix> {
        if v.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "generator combination",
                expected: self.len(),
                got: v.len(),
            });
        }
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for (coeff, gen) in v.iter().zip(&self.generators) {
            acc += gen * Complex64::new(*coeff, 0.0);
        }
        Ok(acc)
    }
}

/// Builds the full generator basis for SU(n).
pub fn build_generators(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    let count = n * n - 1;
    let mut generators = Vec::with_capacity(count);
    let mut labels = Vec::with_capacity(count);

    // Symmetric group: E_jk + E_kj over pairs j < k.
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = CMatrix::zeros(n, n);
            m[(j, k)] = Complex64::new(1.0, 0.0);
            m[(k, j)] = Complex64::new(1.0, 0.0);
            generators.push(m);
            labels.push(GeneratorLabel::Symmetric(j + 1, k + 1));
        }
    }

    // Antisymmetric group: -i E_jk + i E_kj, same pair order.
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = CMatrix::zeros(n, n);
            m[(j, k)] = Complex64::new(0.0, -1.0);
            m[(k, j)] = Complex64::new(0.0, 1.0);
            generators.push(m);
            labels.push(GeneratorLabel::Antisymmetric(j + 1, k + 1));
        }
    }

    // Diagonal group: sqrt(2 / (l (l + 1))) (sum_{m <= l} E_mm - l E_{l+1,l+1}).
    for l in 1..n {
        let scale = (2.0 / (l as f64 * (l as f64 + 1.0))).sqrt();
        let mut m = CMatrix::zeros(n, n);
        for e in 0..l {
            m[(e, e)] = Complex64::new(scale, 0.0);
        }
        m[(l, l)] = Complex64::new(-scale * l as f64, 0.0);
        generators.push(m);
        labels.push(GeneratorLabel::Diagonal(l));
    }

    debug_assert_eq!(generators.len(), count);
    Ok(GeneratorBasis {
        dim: n,
        generators,
        labels,
    })
}

/// A single violated basis invariant.
#[derive(Debug, Clone)]
pub struct BasisViolation {
    pub kind: ViolationKind,
    /// Generator indices involved (0-based; equal for single-matrix checks).
    pub indices: (usize, usize),
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NotHermitian,
    NotTraceless,
    Orthogonality,
    WrongCount,
}

impl fmt::Display for BasisViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.indices;
        match self.kind {
            ViolationKind::NotHermitian => {
                write!(
                    f,
                    "generator {i} not Hermitian (deviation {:.3e})",
                    self.magnitude
                )
            }
            ViolationKind::NotTraceless => {
                write!(
                    f,
                    "generator {i} not traceless (|trace| {:.3e})",
                    self.magnitude
                )
            }
            ViolationKind::Orthogonality => write!(
                f,
                "Tr(l_{i} l_{j}) off by {:.3e} from 2 d_ij",
                self.magnitude
            ),
            ViolationKind::WrongCount => {
                write!(f, "basis has {i} generators, expected {j}")
            }
        }
    }
}

/// Diagnostic report from [`verify_basis`].
#[derive(Debug, Clone)]
pub struct BasisReport {
    pub ok: bool,
    pub violations: Vec<BasisViolation>,
    /// Worst orthogonality deviation seen, violating or not.
    pub max_orthogonality_deviation: f64,
}

/// Checks Hermiticity, tracelessness, the count and the pairwise trace
/// normalization of a basis within `tol`.
pub fn verify_basis(basis: &GeneratorBasis, tol: f64) -> BasisReport {
    let mut violations = Vec::new();
    let n = basis.dim();
    let expected = n * n - 1;
    if basis.len() != expected {
        violations.push(BasisViolation {
            kind: ViolationKind::WrongCount,
            indices: (basis.len(), expected),
            magnitude: (basis.len() as f64 - expected as f64).abs(),
        });
    }

    for (i, g) in basis.generators().iter().enumerate() {
        let herm = crate::linalg::hermiticity_deviation(g);
        if herm > tol {
            violations.push(BasisViolation {
                kind: ViolationKind::NotHermitian,
                indices: (i, i),
                magnitude: herm,
            });
        }
        let tr = crate::linalg::trace(g).norm();
        if tr > tol {
            violations.push(BasisViolation {
                kind: ViolationKind::NotTraceless,
                indices: (i, i),
                magnitude: tr,
            });
        }
    }

    let mut max_dev = 0.0_f64;
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let expected = if i == j { 2.0 } else { 0.0 };
            let tr = crate::linalg::trace_product(basis.generator(i), basis.generator(j));
            let dev = (tr - Complex64::new(expected, 0.0)).norm();
            max_dev = max_dev.max(dev);
            if dev > tol {
                violations.push(BasisViolation {
                    kind: ViolationKind::Orthogonality,
                    indices: (i, j),
                    magnitude: dev,
                });
            }
        }
    }

    BasisReport {
        ok: violations.is_empty(),
        violations,
        max_orthogonality_deviation: max_dev,
    }
}
