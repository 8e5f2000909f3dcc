//! Detection of zero quantum correlation (classicality) of bipartite qudit
//! states.
//!
//! The crate builds the generalized Gell-Mann generator basis of SU(n),
//! converts bipartite density matrices to and from their Bloch
//! representation, evaluates a nonlinear witness over a randomized
//! observable set, and classifies states as certified-classical or
//! inconclusive. A brute-force search over local unitaries provides an
//! independent classicality oracle for cross-checking verdicts at small
//! dimension.

pub mod bloch;
pub mod error;
pub mod linalg;
pub mod state_factory;
pub mod su_basis;
pub mod witness;

pub use bloch::{
    decompose, partial_trace, reconstruct, single_bloch, validate_state, BlochDecomposition,
    DensityMatrix, StateKind, StateTolerances, StateValidation, Subsystem,
};
pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, RMatrix, RVector};
pub use state_factory::{
    admissible_t_max, classical_state, haar_unitary, is_classical, max_entangled, product_state,
    random_density, x_form_state, ClassicalSpec, OracleOutcome,
};
pub use su_basis::{build_generators, verify_basis, GeneratorBasis, GeneratorLabel};
pub use witness::{
    build_observables, classify, expectations, sample_direction, witness_value, IdentifiedForm,
    ObservableSet, Verdict, WitnessReport,
};
