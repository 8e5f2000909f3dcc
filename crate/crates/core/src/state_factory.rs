//! Test-state generators and the brute-force classicality oracle.
//!
//! The factories build the corpus the witness is exercised on: classical
//! mixtures of product projectors, tensor products, maximally entangled
//! states, Ginibre-random states and single-correlation ("X form") states.
//! The oracle decides classical-classical membership independently of the
//! witness by searching for local unitaries that diagonalize the state.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::bloch::{validate_state, StateKind, Subsystem};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, identity, kron, trace, unitarity_deviation, CMatrix, CVector, RMatrix, RVector,
};
use crate::su_basis::{build_generators, GeneratorBasis};
use crate::DensityMatrix;

const PROB_SUM_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-12;

/// Recipe for a classical-classical state: a probability table over the
/// product projectors of two orthonormal bases.
#[derive(Debug, Clone)]
pub struct ClassicalSpec {
    local_dim: usize,
    probs: RMatrix,
    basis_a: CMatrix,
    basis_b: CMatrix,
}

impl ClassicalSpec {
    pub fn new(probs: RMatrix, basis_a: CMatrix, basis_b: CMatrix) -> Result<Self> {
        let n = probs.nrows();
        if n < 2 || probs.ncols() != n {
            return Err(Error::InvalidProbabilities(format!(
                "need a square table of side >= 2, got {}x{}",
                probs.nrows(),
                probs.ncols()
            )));
        }
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidProbabilities("negative entry".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!(
                "entries sum to {sum}, not 1"
            )));
        }
        for u in [&basis_a, &basis_b] {
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::DimensionMismatch {
                    context: "classical basis",
                    expected: n,
                    got: u.nrows(),
                });
            }
            let dev = unitarity_deviation(u);
            if dev > UNITARY_TOL {
                return Err(Error::NotUnitary { deviation: dev });
            }
        }
        Ok(ClassicalSpec {
            local_dim: n,
            probs,
            basis_a,
            basis_b,
        })
    }

    /// Identity bases on both sides.
    pub fn aligned(probs: RMatrix) -> Result<Self> {
        let n = probs.nrows();
        Self::new(probs, identity(n), identity(n))
    }

    /// Random probability table, identity bases.
    pub fn random_aligned<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        Self::aligned(random_probs(n, rng))
    }

    /// Random probability table, independent Haar-random bases.
    pub fn random_rotated<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let probs = random_probs(n, rng);
        let ua = haar_unitary(n, rng);
        let ub = haar_unitary(n, rng);
        Self::new(probs, ua, ub)
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn probs(&self) -> &RMatrix {
        &self.probs
    }

    pub fn basis_a(&self) -> &CMatrix {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &CMatrix {
        &self.basis_b
    }
}

/// Uniformly random probability table (flat Dirichlet over n^2 cells).
pub fn random_probs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RMatrix {
    let mut m = RMatrix::zeros(n, n);
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            let e = -rng.gen::<f64>().max(f64::MIN_POSITIVE).ln();
            m[(i, j)] = e;
            sum += e;
        }
    }
    m / sum
}

/// Builds the classical-classical state `sum_ij p_ij |a_i><a_i| (x) |b_j><b_j|`.
pub fn classical_state(spec: &ClassicalSpec) -> Result<DensityMatrix> {
    let n = spec.local_dim;
    let mut rho = CMatrix::zeros(n * n, n * n);
    for i in 0..n {
        let a = spec.basis_a.column(i);
        let proj_a = a * a.adjoint();
        for j in 0..n {
            let b = spec.basis_b.column(j);
            let proj_b = b * b.adjoint();
            rho += kron(&proj_a, &proj_b) * Complex64::new(spec.probs[(i, j)], 0.0);
        }
    }
    DensityMatrix::bipartite(rho, n)
}

/// Tensor product of two single-system states of equal dimension.
pub fn product_state(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<DensityMatrix> {
    if rho_a.kind() != StateKind::Single || rho_b.kind() != StateKind::Single {
        return Err(Error::InvalidParameter(
            "product_state expects single-system factors".into(),
        ));
    }
    if rho_a.local_dim() != rho_b.local_dim() {
        return Err(Error::DimensionMismatch {
            context: "product_state",
            expected: rho_a.local_dim(),
            got: rho_b.local_dim(),
        });
    }
    DensityMatrix::bipartite(kron(rho_a.matrix(), rho_b.matrix()), rho_a.local_dim())
}

/// Maximally entangled pure state `|Phi> = (1/sqrt(n)) sum_i |ii>`.
pub fn max_entangled(n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut v = CVector::zeros(n * n);
    for i in 0..n {
        v[i * n + i] = amp;
    }
    DensityMatrix::bipartite(&v * v.adjoint(), n)
}

/// Complex Ginibre matrix: independent standard complex Gaussian entries.
fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal) * scale,
            rng.sample::<f64, _>(StandardNormal) * scale,
        )
    })
}

/// Normalized `G G^dag` for a Ginibre draw: a generic full-rank state.
fn ginibre_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, rng);
    let gg = &g * g.adjoint();
    let tr = trace(&gg);
    gg / tr
}

/// Random single-system density matrix of dimension `n_total`.
pub fn random_density<R: Rng + ?Sized>(n_total: usize, rng: &mut R) -> Result<DensityMatrix> {
    if n_total < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            got: n_total,
        });
    }
    DensityMatrix::single(ginibre_density(n_total, rng))
}

/// Random bipartite density matrix on `C^n (x) C^n`.
pub fn random_bipartite<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { min: 2, got: n });
    }
    DensityMatrix::bipartite(ginibre_density(n * n, rng), n)
}

/// Haar-distributed unitary: QR of a Ginibre draw with the R diagonal's
/// phases folded into Q.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..n {
            q[(row, k)] *= phase;
        }
    }
    q
}

/// Single-correlation state `(1/n^2)(I(x)I + t l_i (x) l_j)` with 1-based
/// generator indices. Errors with the offending eigenvalue when `t` is
/// outside the positivity range.
pub fn x_form_state(basis: &GeneratorBasis, i: usize, j: usize, t: f64) -> Result<DensityMatrix> {
    let (gi, gj) = x_form_pair(basis, i, j)?;
    let n = basis.dim();
    let m = (kron(&identity(n), &identity(n)) + kron(gi, gj) * Complex64::new(t, 0.0))
        / Complex64::new((n * n) as f64, 0.0);
    let report = validate_state(&m, 1e-10);
    if !report.positive_ok {
        return Err(Error::NotPositive {
            min_eigenvalue: report.min_eigenvalue,
        });
    }
    DensityMatrix::bipartite(m, n)
}

fn x_form_pair(basis: &GeneratorBasis, i: usize, j: usize) -> Result<(&CMatrix, &CMatrix)> {
    for idx in [i, j] {
        if idx < 1 || idx > basis.len() {
            return Err(Error::InvalidParameter(format!(
                "generator index {idx} out of range 1..={}",
                basis.len()
            )));
        }
    }
    Ok((basis.generator(i - 1), basis.generator(j - 1)))
}

/// Largest admissible `t >= 0` for [`x_form_state`], found by bisecting the
/// minimum eigenvalue of the candidate operator.
pub fn admissible_t_max(basis: &GeneratorBasis, i: usize, j: usize) -> Result<f64> {
    directional_t_max(basis, i, j, 1.0)
}

/// Largest admissible `|t|` along the given sign direction.
pub fn directional_t_max(basis: &GeneratorBasis, i: usize, j: usize, sign: f64) -> Result<f64> {
    let (gi, gj) = x_form_pair(basis, i, j)?;
    let n = basis.dim();
    let id = kron(&identity(n), &identity(n));
    let pair = kron(gi, gj) * Complex64::new(sign.signum(), 0.0);
    let min_eig = |t: f64| crate::linalg::min_eigenvalue(&(&id + &pair * Complex64::new(t, 0.0)));

    // The pair operator is traceless and nonzero, so it has a negative
    // eigenvalue and the admissible interval is bounded.
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut doublings = 0;
    while min_eig(hi) >= 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return Err(Error::InvalidParameter(
                "no positivity boundary found; pair operator appears non-negative".into(),
            ));
        }
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if min_eig(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Random admissible single-correlation state; returns the state and the
/// `(i, j, t)` that produced it. `t` is kept inside 95% of the positivity
/// range and at least 10% of it away from zero.
pub fn random_x_form<R: Rng + ?Sized>(
    basis: &GeneratorBasis,
    rng: &mut R,
) -> Result<(DensityMatrix, usize, usize, f64)> {
    let m = basis.len();
    let i = rng.gen_range(1..=m);
    let j = rng.gen_range(1..=m);
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let extent = directional_t_max(basis, i, j, sign)?;
    let t = sign * extent * rng.gen_range(0.1..0.95);
    let state = x_form_state(basis, i, j, t)?;
    Ok((state, i, j, t))
}

/// Outcome of the classicality search.
#[derive(Debug, Clone)]
pub struct OracleOutcome {
    /// True when some pair of local bases diagonalizes the state to within
    /// the requested residual.
    pub classical: bool,
    /// Best (smallest) off-diagonal mass found.
    pub residual: f64,
    /// Starts actually evaluated; early exit on success.
    pub restarts_used: usize,
}

/// Off-diagonal mass: `sum_{k != l} |m_kl|^2`.
fn off_diagonal_mass(m: &CMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc
}

fn conjugate_local(rho: &CMatrix, ua: &CMatrix, ub: &CMatrix) -> CMatrix {
    let k = kron(ua, ub);
    k.adjoint() * rho * k
}

/// `Tr_B(rho (I (x) |phi><phi|))` or `Tr_A(rho (|phi><phi| (x) I))`:
/// Hermitian conditional operators that are diagonal in the classical basis
/// of the corresponding side for classical-classical states.
fn conditional_operator(rho: &CMatrix, n: usize, side: Subsystem, phi: &CVector) -> CMatrix {
    let mut out = CMatrix::zeros(n, n);
    match side {
        Subsystem::A => {
            for a in 0..n {
                for a2 in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for b in 0..n {
                        for b2 in 0..n {
                            acc += rho[(a * n + b, a2 * n + b2)] * phi[b2] * phi[b].conj();
                        }
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
                        for a2 in 0..n {
                            acc += rho[(a * n + b, a2 * n + b2)] * phi[a2] * phi[a].conj();
                        }
                    }
                    out[(b, b2)] = acc;
                }
            }
        }
    }
    out
}

fn random_pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| {
            Complex64::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            )
        });
        let norm = v.norm();
        if norm > 0.0 {
            return v / Complex64::new(norm, 0.0);
        }
    }
}

/// Precomputed eigendecompositions of the generators, for cheap
/// single-parameter unitaries `exp(i alpha l_k)`.
struct GeneratorFlows {
    flows: Vec<(RVector, CMatrix)>,
}

impl GeneratorFlows {
    fn new(basis: &GeneratorBasis) -> Self {
        GeneratorFlows {
            flows: basis.generators().iter().map(hermitian_eigen).collect(),
        }
    }

    fn exp(&self, k: usize, alpha: f64) -> CMatrix {
        let (vals, vecs) = &self.flows[k];
        let phases = CVector::from_iterator(
            vals.len(),
            vals.iter().map(|&d| Complex64::from_polar(1.0, alpha * d)),
        );
        vecs * CMatrix::from_diagonal(&phases) * vecs.adjoint()
    }
}

struct DescentState {
    ua: CMatrix,
    ub: CMatrix,
    residual: f64,
}

/// Coordinate descent over one angle per generator per side, with a
/// step-halving line search. Stops when a full sweep improves the residual
/// by less than 1e-12.
fn coordinate_descent(
    rho: &CMatrix,
    flows: &GeneratorFlows,
    mut state: DescentState,
    max_sweeps: usize,
) -> DescentState {
    let m = flows.flows.len();
    for _ in 0..max_sweeps {
        let sweep_start = state.residual;
        for side in [Subsystem::A, Subsystem::B] {
            for k in 0..m {
                let mut step = 0.5_f64;
                let mut accepts = 0;
                while step > 1e-8 && accepts < 64 {
                    let mut moved = false;
                    for dir in [1.0, -1.0] {
                        let rot = flows.exp(k, dir * step);
                        let (ua, ub) = match side {
                            Subsystem::A => (&state.ua * &rot, state.ub.clone()),
                            Subsystem::B => (state.ua.clone(), &state.ub * &rot),
                        };
                        let r = off_diagonal_mass(&conjugate_local(rho, &ua, &ub));
                        if r < state.residual {
                            state.ua = ua;
                            state.ub = ub;
                            state.residual = r;
                            moved = true;
                            accepts += 1;
                            break;
                        }
                    }
                    if !moved {
                        step *= 0.5;
                    }
                }
            }
        }
        if sweep_start - state.residual < 1e-12 {
            break;
        }
    }
    state
}

/// Searches for local bases that diagonalize `rho`.
///
/// Returns `classical = true` only when the best residual drops below
/// `tol` (strong evidence); a `false` comes with the best residual so
/// callers can tell a confident miss from a near miss. False negatives are
/// possible in principle; the spread of starts makes them rare at n <= 3.
///
/// Starts are scheduled deterministically from `seed`: first the identity,
/// then the marginal eigenbases, then alternating random conditional-operator
/// eigenbases and plain Haar draws, each descent-refined.
pub fn is_classical(
    rho: &DensityMatrix,
    tol: f64,
    restarts: usize,
    seed: u64,
) -> Result<OracleOutcome> {
    if rho.kind() != StateKind::Bipartite {
        return Err(Error::InvalidParameter(
            "is_classical expects a bipartite state".into(),
        ));
    }
    if restarts < 1 {
        return Err(Error::InvalidParameter(
            "is_classical needs at least one restart".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(
            "is_classical tolerance must be positive".into(),
        ));
    }
    let n = rho.local_dim();
    let basis = build_generators(n)?;
    let flows = GeneratorFlows::new(&basis);
    let m = rho.matrix();

    let mut best = f64::INFINITY;
    let mut used = 0;
    for start_idx in 0..restarts {
        let (ua, ub) = match start_idx {
            0 => (identity(n), identity(n)),
            1 => {
                let ra = crate::bloch::partial_trace_raw(m, n, Subsystem::A);
                let rb = crate::bloch::partial_trace_raw(m, n, Subsystem::B);
                (hermitian_eigen(&ra).1, hermitian_eigen(&rb).1)
            }
            _ => {
                let mut rng = ChaCha12Rng::seed_from_u64(seed);
                rng.set_stream(start_idx as u64);
                if start_idx % 2 == 0 {
                    let phi = random_pure(n, &mut rng);
                    let psi = random_pure(n, &mut rng);
                    let ca = conditional_operator(m, n, Subsystem::A, &phi);
                    let cb = conditional_operator(m, n, Subsystem::B, &psi);
                    (hermitian_eigen(&ca).1, hermitian_eigen(&cb).1)
                } else {
                    (haar_unitary(n, &mut rng), haar_unitary(n, &mut rng))
                }
            }
        };
        let residual = off_diagonal_mass(&conjugate_local(m, &ua, &ub));
        let refined = coordinate_descent(m, &flows, DescentState { ua, ub, residual }, 80);
        best = best.min(refined.residual);
        used = start_idx + 1;
        if best < tol {
            break;
        }
    }

    Ok(OracleOutcome {
        classical: best < tol,
        residual: best,
        restarts_used: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{decompose, partial_trace};
    use crate::linalg::max_abs;
    use crate::witness::{classify, IdentifiedForm, Verdict};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn aligned_even_mixture_is_the_diagonal_state() {
        let mut probs = RMatrix::zeros(2, 2);
        probs[(0, 0)] = 0.5;
        probs[(1, 1)] = 0.5;
        let spec = ClassicalSpec::aligned(probs).unwrap();
        let rho = classical_state(&spec).unwrap();
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 0)] = c(0.5, 0.0);
        expected[(3, 3)] = c(0.5, 0.0);
        assert!(max_abs(&(rho.matrix() - expected)) < 1e-15);
    }

    #[test]
    fn uniform_probs_give_maximally_mixed_for_any_bases() {
        let n = 3;
        let probs = RMatrix::from_element(n, n, 1.0 / (n * n) as f64);
        let mut r = rng(4);
        let spec =
            ClassicalSpec::new(probs, haar_unitary(n, &mut r), haar_unitary(n, &mut r)).unwrap();
        let rho = classical_state(&spec).unwrap();
        let expected = identity(n * n) / c((n * n) as f64, 0.0);
        assert!(max_abs(&(rho.matrix() - expected)) < 1e-12);
    }

    #[test]
    fn classical_spec_validation() {
        let mut bad = RMatrix::zeros(2, 2);
        bad[(0, 0)] = 0.7;
        assert!(ClassicalSpec::aligned(bad.clone()).is_err()); // sum != 1
        bad[(1, 1)] = 0.5;
        bad[(0, 1)] = -0.2;
        assert!(ClassicalSpec::aligned(bad).is_err()); // negative entry
        let probs = RMatrix::from_element(2, 2, 0.25);
        let not_unitary = identity(2) * c(2.0, 0.0);
        assert!(ClassicalSpec::new(probs, not_unitary, identity(2)).is_err());
    }

    #[test]
    fn product_of_diagonal_states_is_classical_diagonal() {
        let a = DensityMatrix::single(CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.7, 0.0),
            c(0.3, 0.0),
        ])))
        .unwrap();
        let b = DensityMatrix::single(CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(0.4, 0.0),
            c(0.6, 0.0),
        ])))
        .unwrap();
        let rho = product_state(&a, &b).unwrap();
        assert_abs_diff_eq!(rho.matrix()[(0, 0)].re, 0.28, epsilon = 1e-14);
        assert_abs_diff_eq!(rho.matrix()[(3, 3)].re, 0.18, epsilon = 1e-14);
        let ra = partial_trace(&rho, Subsystem::A).unwrap();
        assert!(max_abs(&(ra.matrix() - a.matrix())) < 1e-14);
    }

    #[test]
    fn product_state_rejects_mismatched_dims() {
        let a = random_density(2, &mut rng(1)).unwrap();
        let b = random_density(3, &mut rng(2)).unwrap();
        assert!(product_state(&a, &b).is_err());
    }

    #[test]
    fn max_entangled_is_pure_with_mixed_marginals() {
        for n in [2usize, 3] {
            let rho = max_entangled(n).unwrap();
            assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
            let ra = partial_trace(&rho, Subsystem::A).unwrap();
            assert!(max_abs(&(ra.matrix() - identity(n) / c(n as f64, 0.0))) < 1e-12);
        }
        assert!(max_entangled(1).is_err());
    }

    #[test]
    fn random_density_is_valid_and_deterministic() {
        let a = random_density(4, &mut rng(9)).unwrap();
        let b = random_density(4, &mut rng(9)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert!(validate_state(a.matrix(), 1e-10).is_valid());
        assert!(random_density(1, &mut rng(0)).is_err());
    }

    #[test]
    fn ginibre_mean_purity_sits_in_the_expected_band() {
        let mut r = rng(31);
        let samples = 500;
        let mean: f64 = (0..samples)
            .map(|_| random_density(4, &mut r).unwrap().purity())
            .sum::<f64>()
            / samples as f64;
        assert!((0.3..0.5).contains(&mean), "mean purity {mean}");
    }

    #[test]
    fn haar_unitary_is_unitary_and_deterministic() {
        for n in [2usize, 3, 5] {
            let u = haar_unitary(n, &mut rng(13));
            assert!(unitarity_deviation(&u) < 1e-12);
        }
        let a = haar_unitary(3, &mut rng(7));
        let b = haar_unitary(3, &mut rng(7));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_first_entry_moment_matches() {
        let mut r = rng(17);
        let samples = 10_000;
        let mean: f64 = (0..samples)
            .map(|_| haar_unitary(2, &mut r)[(0, 0)].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean |U11|^2 = {mean}");
    }

    #[test]
    fn haar_moment_survives_fixed_left_rotation() {
        // Left-invariance spot check: V U has the same |entry|^2 moment.
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        let v =
            CMatrix::from_row_slice(2, 2, &[c(inv, 0.0), c(inv, 0.0), c(0.0, inv), c(0.0, -inv)]);
        assert!(unitarity_deviation(&v) < 1e-15);
        let mut r = rng(19);
        let samples = 10_000;
        let mean: f64 = (0..samples)
            .map(|_| (&v * haar_unitary(2, &mut r))[(0, 0)].norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean |(VU)11|^2 = {mean}");
    }

    #[test]
    fn x_form_at_unit_t_is_the_even_mixture_spectrum() {
        let basis = build_generators(2).unwrap();
        let rho = x_form_state(&basis, 3, 3, 1.0).unwrap();
        let eigs = crate::linalg::hermitian_eigenvalues(rho.matrix());
        assert_abs_diff_eq!(eigs[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[2], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[3], 0.5, epsilon = 1e-12);
    }

    #[test]
    fn x_form_beyond_the_boundary_reports_the_eigenvalue() {
        let basis = build_generators(2).unwrap();
        match x_form_state(&basis, 3, 3, 2.0) {
            Err(Error::NotPositive { min_eigenvalue }) => {
                assert_abs_diff_eq!(min_eigenvalue, -0.25, epsilon = 1e-12);
            }
            other => panic!("expected NotPositive, got {other:?}"),
        }
        assert!(x_form_state(&basis, 0, 3, 0.5).is_err());
        assert!(x_form_state(&basis, 1, 4, 0.5).is_err());
    }

    #[test]
    fn admissible_t_max_matches_analytic_boundary() {
        let basis = build_generators(2).unwrap();
        let t = admissible_t_max(&basis, 3, 3).unwrap();
        assert_abs_diff_eq!(t, 1.0, epsilon = 1e-9);
        // sx (x) sx also has unit boundary.
        let t2 = admissible_t_max(&basis, 1, 1).unwrap();
        assert_abs_diff_eq!(t2, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn random_x_forms_are_valid_and_certified() {
        let basis = build_generators(2).unwrap();
        let mut r = rng(23);
        for _ in 0..20 {
            let (rho, i, j, _t) = random_x_form(&basis, &mut r).unwrap();
            let report = classify(&rho, &basis, 5, 8, 1e-9).unwrap();
            assert_eq!(report.verdict, Verdict::CertifiedClassical);
            assert_eq!(
                report.identified_form,
                IdentifiedForm::SingleCorrelation(i, j)
            );
        }
    }

    #[test]
    fn product_factorization_of_bloch_holds_for_random_products() {
        let basis = build_generators(3).unwrap();
        let mut r = rng(3);
        let a = random_density(3, &mut r).unwrap();
        let b = random_density(3, &mut r).unwrap();
        let rho = product_state(&a, &b).unwrap();
        let dec = decompose(&rho, &basis).unwrap();
        assert!(dec.product_residual() < 1e-10);
    }

    #[test]
    fn oracle_confirms_constructed_classical_states() {
        let mut r = rng(41);
        for n in [2usize, 3] {
            for rotated in [false, true] {
                let spec = if rotated {
                    ClassicalSpec::random_rotated(n, &mut r).unwrap()
                } else {
                    ClassicalSpec::random_aligned(n, &mut r).unwrap()
                };
                let rho = classical_state(&spec).unwrap();
                let out = is_classical(&rho, 1e-10, 20, 77).unwrap();
                assert!(
                    out.classical,
                    "n = {n} rotated = {rotated}, residual {:.3e}",
                    out.residual
                );
                assert!(out.residual < 1e-10);
            }
        }
    }

    #[test]
    fn oracle_accepts_maximally_mixed_instantly() {
        let rho = DensityMatrix::bipartite(identity(4) / c(4.0, 0.0), 2).unwrap();
        let out = is_classical(&rho, 1e-10, 20, 1).unwrap();
        assert!(out.classical);
        assert_eq!(out.restarts_used, 1);
    }

    #[test]
    fn oracle_rejects_maximally_entangled() {
        let rho = max_entangled(2).unwrap();
        let out = is_classical(&rho, 1e-10, 20, 3).unwrap();
        assert!(!out.classical);
        assert_eq!(out.restarts_used, 20);
        assert!(out.residual > 1e-2, "residual {:.3e}", out.residual);
    }

    #[test]
    fn oracle_parameter_validation() {
        let rho = max_entangled(2).unwrap();
        assert!(is_classical(&rho, 0.0, 20, 3).is_err());
        assert!(is_classical(&rho, 1e-10, 0, 3).is_err());
    }
}
