//! Nonlinear witness for zero quantum correlation.
//!
//! The observable set pairs every two generators across the split,
//! `O_k = l_i (x) l_j`, and appends one direction observable
//! `O_last = (z.l)(x)I + I(x)(w.l)` built from random unit directions. The
//! witness is the sum of absolute pairwise products of the expectations:
//! it vanishes exactly when at most one expectation is nonzero, which pins
//! the state down to a single-correlation or a correlation-free form — both
//! classical. A nonzero witness is inconclusive: classical states in a
//! generic basis are not detected.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use std::fmt;

use crate::bloch::{StateKind, IMAG_RESIDUE_TOL};
use crate::error::{Error, Result};
use crate::linalg::{identity, kahan_sum, kron, trace_product, CMatrix, RVector};
use crate::su_basis::GeneratorBasis;
use crate::DensityMatrix;

/// Directions whose norm deviates from 1 by more than this are rejected.
const DIRECTION_NORM_TOL: f64 = 1e-10;

/// The full observable set for one draw of the directions `(z, w)`.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    local_dim: usize,
    observables: Vec<CMatrix>,
    z: RVector,
    w: RVector,
}

impl ObservableSet {
    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    /// `(n^2 - 1)^2 + 1`.
    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn observable(&self, k: usize) -> &CMatrix {
        &self.observables[k]
    }

    pub fn observables(&self) -> &[CMatrix] {
        &self.observables
    }

    pub fn z(&self) -> &RVector {
        &self.z
    }

    pub fn w(&self) -> &RVector {
        &self.w
    }

    /// Generator pair `(i, j)` (1-based) behind flat index `k` (0-based);
    /// `None` for the direction observable.
    pub fn pair_of(&self, k: usize) -> Option<(usize, usize)> {
        let m = self.local_dim * self.local_dim - 1;
        if k < m * m {
            Some((k / m + 1, k % m + 1))
        } else {
            None
        }
    }

    /// Index of the direction observable (the last one).
    pub fn direction_index(&self) -> usize {
        self.observables.len() - 1
    }
}

/// Builds the observable set from unit directions `z`, `w`.
///
/// Flat index `k` runs over the generator pairs `(i, j)` in row-major order
/// (`i = j = 1 -> k = 1`, `i = 1, j = 2 -> k = 2`, ...), 0-based in storage;
/// the direction observable comes last. Stored directions are renormalized
/// so downstream arithmetic sees exactly unit vectors.
pub fn build_observables(
    basis: &GeneratorBasis,
    z: &RVector,
    w: &RVector,
) -> Result<ObservableSet> {
    let m = basis.len();
    for (name, v) in [("z", z), ("w", w)] {
        if v.len() != m {
            return Err(Error::DimensionMismatch {
                context: "observable direction",
                expected: m,
                got: v.len(),
            });
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > DIRECTION_NORM_TOL {
            let _ = name;
            return Err(Error::UnnormalizedDirection { norm });
        }
    }
    let z = z / z.norm();
    let w = w / w.norm();

    let n = basis.dim();
    let id = identity(n);
    let mut observables = Vec::with_capacity(m * m + 1);
    for i in 0..m {
        for j in 0..m {
            observables.push(kron(basis.generator(i), basis.generator(j)));
        }
    }
    let za = basis.combine(z.as_slice())?;
    let wb = basis.combine(w.as_slice())?;
    observables.push(kron(&za, &id) + kron(&id, &wb));

    Ok(ObservableSet {
        local_dim: n,
        observables,
        z,
        w,
    })
}

/// Draws a vector uniformly distributed on the unit sphere of `R^dim`.
pub fn sample_direction<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<RVector> {
    if dim < 1 {
        return Err(Error::DimensionTooSmall { min: 1, got: dim });
    }
    loop {
        let v = RVector::from_iterator(dim, (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)));
        let norm = v.norm();
        if norm > 0.0 {
            return Ok(v / norm);
        }
        // all-zeros draw: measure zero, resample
    }
}

/// Expectation values `Tr(O_k rho)` for every observable in the set.
pub fn expectations(rho: &DensityMatrix, obs: &ObservableSet) -> Result<Vec<f64>> {
    if rho.kind() != StateKind::Bipartite || rho.local_dim() != obs.local_dim() {
        return Err(Error::DimensionMismatch {
            context: "expectations",
            expected: obs.local_dim(),
            got: rho.local_dim(),
        });
    }
    obs.observables()
        .iter()
        .map(|o| {
            let tr = trace_product(o, rho.matrix());
            if tr.im.abs() > IMAG_RESIDUE_TOL {
                return Err(Error::InvalidParameter(format!(
                    "expectation has imaginary residue {:.3e}",
                    tr.im
                )));
            }
            Ok(tr.re)
        })
        .collect()
}

/// Witness value: sum of `|e_i e_j|` over all unordered index pairs,
/// computed through the identity `W = ((sum |e|)^2 - sum e^2) / 2` with
/// compensated sums. Clamped at zero against rounding.
pub fn witness_value(e: &[f64]) -> f64 {
    let abs_sum = kahan_sum(e.iter().map(|x| x.abs()));
    let sq_sum = kahan_sum(e.iter().map(|x| x * x));
    ((abs_sum * abs_sum - sq_sum) / 2.0).max(0.0)
}

/// Classification verdict. The witness is sufficient, not necessary: only
/// `CertifiedClassical` carries information.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedClassical,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedClassical => write!(f, "CERTIFIED_CLASSICAL"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// Which vanishing-witness form a certified state matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentifiedForm {
    /// Not certified.
    None,
    /// Only the direction observable was nonzero (or nothing was): all
    /// correlation coefficients vanish.
    ProductLike,
    /// Exactly one generator-pair expectation was nonzero; indices 1-based.
    SingleCorrelation(usize, usize),
}

impl fmt::Display for IdentifiedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentifiedForm::None => write!(f, "NONE"),
            IdentifiedForm::ProductLike => write!(f, "PRODUCT_LIKE"),
            IdentifiedForm::SingleCorrelation(i, j) => write!(f, "SINGLE_CORRELATION({i},{j})"),
        }
    }
}

/// Result of [`classify`].
///
/// `expectations` and `nonzero_count` describe the last direction sample;
/// the generator-pair entries are identical across samples, only the final
/// (direction) entry varies. `w_value` is the largest witness value seen
/// over all samples, so certification is exactly `w_value <= tol` plus the
/// per-sample nonzero-count check.
#[derive(Debug, Clone)]
pub struct WitnessReport {
    pub expectations: Vec<f64>,
    pub w_value: f64,
    pub w_samples: Vec<f64>,
    pub nonzero_count: usize,
    pub verdict: Verdict,
    pub identified_form: IdentifiedForm,
    pub samples_used: usize,
    pub tol: f64,
}

/// Expectation of the direction observable built from `(z, w)`:
/// `Tr(rho ((z.l)(x)I + I(x)(w.l)))`.
pub fn direction_expectation(
    rho: &DensityMatrix,
    basis: &GeneratorBasis,
    z: &RVector,
    w: &RVector,
) -> Result<f64> {
    let n = basis.dim();
    let id = identity(n);
    let obs = kron(&basis.combine(z.as_slice())?, &id) + kron(&id, &basis.combine(w.as_slice())?);
    let tr = trace_product(&obs, rho.matrix());
    if tr.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::InvalidParameter(format!(
            "direction expectation has imaginary residue {:.3e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// Expectations of all generator-pair observables, row-major in `(i, j)`.
/// These do not depend on the sampled directions.
pub fn pair_expectations(rho: &DensityMatrix, basis: &GeneratorBasis) -> Result<Vec<f64>> {
    if rho.kind() != StateKind::Bipartite || rho.local_dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            context: "pair expectations",
            expected: basis.dim(),
            got: rho.local_dim(),
        });
    }
    let m = basis.len();
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let tr = trace_product(&kron(basis.generator(i), basis.generator(j)), rho.matrix());
            if tr.im.abs() > IMAG_RESIDUE_TOL {
                return Err(Error::InvalidParameter(format!(
                    "pair expectation ({i},{j}) has imaginary residue {:.3e}",
                    tr.im
                )));
            }
            out.push(tr.re);
        }
    }
    Ok(out)
}

/// Evaluates the witness over `samples` independent direction draws and
/// returns the certified/inconclusive verdict.
///
/// Certification requires, for every sample, a witness value at most `tol`
/// AND at most one expectation above `tol` in magnitude; the two criteria
/// can only disagree inside tolerance slack, and any disagreement resolves
/// to inconclusive. Each sample draws from its own random stream derived
/// from `seed` and the sample index, so results do not depend on evaluation
/// order.
pub fn classify(
    rho: &DensityMatrix,
    basis: &GeneratorBasis,
    seed: u64,
    samples: usize,
    tol: f64,
) -> Result<WitnessReport> {
    if samples < 1 {
        return Err(Error::InvalidParameter(
            "classify needs at least one direction sample".into(),
        ));
    }
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(
            "classify tolerance must be positive".into(),
        ));
    }

    let pairs = pair_expectations(rho, basis)?;
    let pair_nonzero = pairs.iter().filter(|e| e.abs() > tol).count();

    let m = basis.len();
    let mut w_samples = Vec::with_capacity(samples);
    let mut certified = true;
    let mut last_direction_e = 0.0;
    let mut last_count = pair_nonzero;

    for k in 0..samples {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(k as u64 + 1);
        let z = sample_direction(&mut rng, m)?;
        let w = sample_direction(&mut rng, m)?;
        let e_dir = direction_expectation(rho, basis, &z, &w)?;

        let mut e = pairs.clone();
        e.push(e_dir);
        let w_val = witness_value(&e);
        let count = pair_nonzero + usize::from(e_dir.abs() > tol);
        if w_val > tol || count > 1 {
            certified = false;
        }
        w_samples.push(w_val);
        last_direction_e = e_dir;
        last_count = count;
    }

    let w_value = w_samples.iter().copied().fold(0.0, f64::max);
    let identified_form = if certified {
        match pairs.iter().position(|e| e.abs() > tol) {
            Some(k) => IdentifiedForm::SingleCorrelation(k / m + 1, k % m + 1),
            None => IdentifiedForm::ProductLike,
        }
    } else {
        IdentifiedForm::None
    };

    let mut expectations = pairs;
    expectations.push(last_direction_e);

    Ok(WitnessReport {
        expectations,
        w_value,
        w_samples,
        nonzero_count: last_count,
        verdict: if certified {
            Verdict::CertifiedClassical
        } else {
            Verdict::Inconclusive
        },
        identified_form,
        samples_used: samples,
        tol,
    })
}
