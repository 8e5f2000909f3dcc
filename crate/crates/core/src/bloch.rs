//! Bloch representation of density matrices.
//!
//! A bipartite state on C^n (x) C^n is expanded over the generator basis as
//!
//! ```text
//! rho = (1/n^2) (I(x)I + sum_i r_i l_i(x)I + sum_j s_j I(x)l_j
//!                + sum_ij t_ij l_i(x)l_j)
//! ```
//!
//! with real coherence vectors `r`, `s` and real correlation matrix `T`.
//! Under the `Tr(l_i l_j) = 2 d_ij` normalization the coefficients are read
//! off as `r_i = (n/2) Tr(rho l_i(x)I)`, `s_j = (n/2) Tr(rho I(x)l_j)` and
//! `t_ij = (n^2/4) Tr(rho l_i(x)l_j)`, which makes the expansion an exact
//! round trip.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermiticity_deviation, identity, kron, max_abs, min_eigenvalue, trace, trace_product,
    CMatrix, RMatrix, RVector,
};
use crate::su_basis::GeneratorBasis;

/// Magnitude above which an imaginary residue in a coefficient trace is
/// treated as a Hermiticity bug rather than rounding noise.
pub const IMAG_RESIDUE_TOL: f64 = 1e-12;

/// Whether a density matrix lives on one system or on a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Single,
    Bipartite,
}

/// Which subsystem [`partial_trace`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Tolerances used when admitting a matrix as a density matrix.
#[derive(Debug, Clone, Copy)]
pub struct StateTolerances {
    pub hermitian: f64,
    pub trace: f64,
    /// Eigenvalues down to `-eigenvalue` still count as nonnegative;
    /// sampled states routinely round a little below zero.
    pub eigenvalue: f64,
}

impl Default for StateTolerances {
    fn default() -> Self {
        StateTolerances {
            hermitian: 1e-12,
            trace: 1e-12,
            eigenvalue: 1e-10,
        }
    }
}

/// Outcome of the three density-matrix checks on a square matrix.
#[derive(Debug, Clone)]
pub struct StateValidation {
    pub trace_ok: bool,
    pub hermitian_ok: bool,
    pub positive_ok: bool,
    pub trace_deviation: f64,
    pub hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
}

impl StateValidation {
    pub fn is_valid(&self) -> bool {
        self.trace_ok && self.hermitian_ok && self.positive_ok
    }
}

impl fmt::Display for StateValidation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trace {} (|Tr - 1| = {:.3e}), hermitian {} (dev = {:.3e}), positive {} (min eig = {:.3e})",
            if self.trace_ok { "ok" } else { "VIOLATED" },
            self.trace_deviation,
            if self.hermitian_ok { "ok" } else { "VIOLATED" },
            self.hermiticity_deviation,
            if self.positive_ok { "ok" } else { "VIOLATED" },
            self.min_eigenvalue,
        )
    }
}

/// Checks trace unity, Hermiticity and positive semidefiniteness of `m`
/// within `tol`. Diagnostic only: never errors.
pub fn validate_state(m: &CMatrix, tol: f64) -> StateValidation {
    validate_state_with(
        m,
        StateTolerances {
            hermitian: tol,
            trace: tol,
            eigenvalue: tol,
        },
    )
}

/// [`validate_state`] with separate tolerances per check.
pub fn validate_state_with(m: &CMatrix, tols: StateTolerances) -> StateValidation {
    let trace_deviation = (trace(m) - Complex64::new(1.0, 0.0)).norm();
    let herm = hermiticity_deviation(m);
    let min_eig = min_eigenvalue(m);
    StateValidation {
        trace_ok: trace_deviation <= tols.trace,
        hermitian_ok: herm <= tols.hermitian,
        positive_ok: min_eig >= -tols.eigenvalue,
        trace_deviation,
        hermiticity_deviation: herm,
        min_eigenvalue: min_eig,
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// up to the admission tolerances.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    kind: StateKind,
    local_dim: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Admits an n x n matrix as a single-system state.
    pub fn single(matrix: CMatrix) -> Result<Self> {
        Self::single_with(matrix, StateTolerances::default())
    }

    pub fn single_with(matrix: CMatrix, tols: StateTolerances) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(Error::DimensionTooSmall {
                min: 2,
                got: matrix.nrows().min(matrix.ncols()),
            });
        }
        let report = validate_state_with(&matrix, tols);
        if !report.is_valid() {
            return Err(Error::InvalidState(report));
        }
        Ok(DensityMatrix {
            kind: StateKind::Single,
            local_dim: matrix.nrows(),
            matrix,
        })
    }

    /// Admits an n^2 x n^2 matrix as a bipartite state with equal local
    /// dimensions `n = local_dim`.
    pub fn bipartite(matrix: CMatrix, local_dim: usize) -> Result<Self> {
        Self::bipartite_with(matrix, local_dim, StateTolerances::default())
    }

    pub fn bipartite_with(
        matrix: CMatrix,
        local_dim: usize,
        tols: StateTolerances,
    ) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::DimensionTooSmall {
                min: 2,
                got: local_dim,
            });
        }
        let total = local_dim * local_dim;
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::DimensionMismatch {
                context: "bipartite state",
                expected: total,
                got: matrix.nrows(),
            });
        }
        let report = validate_state_with(&matrix, tols);
        if !report.is_valid() {
            return Err(Error::InvalidState(report));
        }
        Ok(DensityMatrix {
            kind: StateKind::Bipartite,
            local_dim,
            matrix,
        })
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    /// Local dimension n. Total dimension is n for single-system states and
    /// n^2 for bipartite ones.
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Purity `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }
}

/// Coherence vectors and correlation matrix of a bipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDecomposition {
    pub local_dim: usize,
    /// Subsystem-A coherence vector, length n^2 - 1.
    pub r: RVector,
    /// Subsystem-B coherence vector, length n^2 - 1.
    pub s: RVector,
    /// Correlation coefficients, (n^2 - 1) x (n^2 - 1).
    pub t: RMatrix,
}

impl BlochDecomposition {
    /// Largest deviation of `T` from the outer product `r s^T`; near zero
    /// exactly for product states.
    pub fn product_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.t.nrows() {
            for j in 0..self.t.ncols() {
                worst = worst.max((self.t[(i, j)] - self.r[i] * self.s[j]).abs());
            }
        }
        worst
    }
}

fn real_part_checked(z: Complex64, context: &'static str) -> Result<f64> {
    if z.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::InvalidParameter(format!(
            "{context}: imaginary residue {:.3e} exceeds {IMAG_RESIDUE_TOL:.0e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Extracts the coherence vectors and correlation matrix of a bipartite
/// state by tracing against the generator tensor products.
pub fn decompose(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<BlochDecomposition> {
    if rho.kind() != StateKind::Bipartite {
        return Err(Error::InvalidParameter(
            "decompose expects a bipartite state".into(),
        ));
    }
    let n = basis.dim();
    if rho.local_dim() != n {
        return Err(Error::DimensionMismatch {
            context: "decompose",
            expected: n,
            got: rho.local_dim(),
        });
    }
    let m = basis.len();
    let id = identity(n);
    let half_n = n as f64 / 2.0;
    let quarter_n2 = (n * n) as f64 / 4.0;

    let mut r = RVector::zeros(m);
    let mut s = RVector::zeros(m);
    let mut t = RMatrix::zeros(m, m);
    for i in 0..m {
        let gi = basis.generator(i);
        r[i] = half_n * real_part_checked(trace_product(rho.matrix(), &kron(gi, &id)), "r_i")?;
        s[i] = half_n * real_part_checked(trace_product(rho.matrix(), &kron(&id, gi)), "s_j")?;
        for j in 0..m {
            let gj = basis.generator(j);
            t[(i, j)] =
                quarter_n2 * real_part_checked(trace_product(rho.matrix(), &kron(gi, gj)), "t_ij")?;
        }
    }
    Ok(BlochDecomposition {
        local_dim: n,
        r,
        s,
        t,
    })
}

/// Rebuilds the operator from Bloch coefficients. Hermitian with unit trace
/// by construction; positivity is not guaranteed for synthesized
/// coefficients, so the result is a raw matrix to be checked with
/// [`validate_state`] when needed.
pub fn reconstruct(dec: &BlochDecomposition, basis: &GeneratorBasis) -> Result<CMatrix> {
    let n = basis.dim();
    if dec.local_dim != n {
        return Err(Error::DimensionMismatch {
            context: "reconstruct",
            expected: n,
            got: dec.local_dim,
        });
    }
    let m = basis.len();
    if dec.r.len() != m || dec.s.len() != m || dec.t.nrows() != m || dec.t.ncols() != m {
        return Err(Error::DimensionMismatch {
            context: "reconstruct coefficients",
            expected: m,
            got: dec.r.len(),
        });
    }
    let id = identity(n);
    let mut acc = kron(&id, &id);
    for i in 0..m {
        let gi = basis.generator(i);
        acc += kron(gi, &id) * Complex64::new(dec.r[i], 0.0);
        acc += kron(&id, gi) * Complex64::new(dec.s[i], 0.0);
        for j in 0..m {
            acc += kron(gi, basis.generator(j)) * Complex64::new(dec.t[(i, j)], 0.0);
        }
    }
    Ok(acc / Complex64::new((n * n) as f64, 0.0))
}

/// Single-system Bloch form `(1/N)(I + sqrt(N(N-1)/2) sum_i u_i l_i)`.
///
/// Always Hermitian with unit trace, but not every `u` (even inside the unit
/// ball) yields a positive operator, so the result is a raw matrix.
pub fn single_bloch(u: &[f64], basis: &GeneratorBasis) -> Result<CMatrix> {
    let n = basis.dim();
    if u.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            context: "single_bloch vector",
            expected: basis.len(),
            got: u.len(),
        });
    }
    let scale = ((n * (n - 1)) as f64 / 2.0).sqrt();
    let scaled: Vec<f64> = u.iter().map(|&x| x * scale).collect();
    let m = identity(n) + basis.combine(&scaled)?;
    Ok(m / Complex64::new(n as f64, 0.0))
}

/// Reduced state of one subsystem of a bipartite state.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    if rho.kind() != StateKind::Bipartite {
        return Err(Error::InvalidParameter(
            "partial_trace expects a bipartite state".into(),
        ));
    }
    let n = rho.local_dim();
    let reduced = partial_trace_raw(rho.matrix(), n, keep);
    DensityMatrix::single(reduced)
}

/// Partial trace on a raw n^2 x n^2 matrix with index `(a, b) -> a n + b`.
pub fn partial_trace_raw(m: &CMatrix, n: usize, keep: Subsystem) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    match keep {
        Subsystem::A => {
            for a in 0..n {
                for a2 in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..n {
                        acc += m[(a * n + b, a2 * n + b)];
                    }
                    out[(a, a2)] = acc;
                }
            }
        }
        Subsystem::B => {
            for b in 0..n {
                for b2 in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..n {
                        acc += m[(a * n + b, a * n + b2)];
                    }
                    out[(b, b2)] = acc;
                }
            }
        }
    }
    out
}

/// Coherence vector of a single-system state: `v_i = (n/2) Tr(rho l_i)`.
pub fn single_coherence_vector(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<RVector> {
    if rho.kind() != StateKind::Single {
        return Err(Error::InvalidParameter(
            "coherence vector expects a single-system state".into(),
        ));
    }
    if rho.local_dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            context: "coherence vector",
            expected: basis.dim(),
            got: rho.local_dim(),
        });
    }
    let half_n = basis.dim() as f64 / 2.0;
    let mut v = RVector::zeros(basis.len());
    for i in 0..basis.len() {
        v[i] = half_n * real_part_checked(trace_product(rho.matrix(), basis.generator(i)), "v_i")?;
    }
    Ok(v)
}

/// Max-norm of the difference between a state and a raw operator.
pub fn roundtrip_residual(rho: &DensityMatrix, rebuilt: &CMatrix) -> f64 {
    max_abs(&(rho.matrix() - rebuilt))
}

pub use linalg::hermitian_eigenvalues;
