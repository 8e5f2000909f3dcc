//! Small dense complex-matrix helpers used across the crate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

/// Kronecker product with row-major subsystem ordering: index of
/// `|i>_A |j>_B` is `i * dim_b + j`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// n x n identity.
pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// `Tr(a * b)` without forming the product: `sum_{p,q} a[p,q] b[q,p]`.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..a.nrows() {
        for q in 0..a.ncols() {
            acc += a[(p, q)] * b[(q, p)];
        }
    }
    acc
}

/// Largest entrywise deviation from Hermiticity, `max |M - M^dag|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Largest entry magnitude.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// first so that callers may pass matrices with a small Hermiticity residue.
pub fn hermitian_eigenvalues(m: &CMatrix) -> RVector {
    let h = hermitian_part(m);
    let mut eig: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
    RVector::from_vec(eig)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Eigendecomposition of a Hermitian matrix; returns (eigenvalues ascending,
/// unitary whose columns are the matching eigenvectors).
pub fn hermitian_eigen(m: &CMatrix) -> (RVector, CMatrix) {
    let h = hermitian_part(m);
    let decomp = h.symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomp.eigenvalues[a]
            .partial_cmp(&decomp.eigenvalues[b])
            .unwrap()
    });
    let values = RVector::from_iterator(n, order.iter().map(|&k| decomp.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vectors.set_column(col, &decomp.eigenvectors.column(k));
    }
    (values, vectors)
}

/// `(M + M^dag) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Largest entry magnitude of `U^dag U - I`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.ncols();
    let d = u.adjoint() * u - identity(n);
    max_abs(&d)
}

/// Compensated (Kahan) sum; keeps long reductions accurate to a few ulps.
pub fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}
