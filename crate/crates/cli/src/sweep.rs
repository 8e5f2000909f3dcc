//! Monte Carlo sweep: generate states family by family, run the witness,
//! cross-check with the oracle where tractable, and emit a CSV report.
//!
//! Output is byte-identical for identical config: every row derives its own
//! seed from the base seed and the global row index, and rows are emitted
//! in config order.

use std::fmt::Write as _;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Deserialize;

use classicality::state_factory::{
    classical_state, is_classical, max_entangled, product_state, random_bipartite, random_density,
    random_x_form, ClassicalSpec,
};
use classicality::su_basis::build_generators;
use classicality::witness::{classify, Verdict};
use classicality::DensityMatrix;

use crate::matrix_file::format_f64;
use crate::{derive_seed, splitmix64, CliError, Family};

pub const CSV_HEADER: &str = "state_id,family,dim,w_value,verdict,oracle_classical,seed";

/// Largest local dimension at which the oracle runs per row.
pub const ORACLE_MAX_DIM: usize = 3;

fn default_samples() -> usize {
    8
}
fn default_tol() -> f64 {
    1e-9
}
fn default_oracle_restarts() -> usize {
    20
}
fn default_oracle_tol() -> f64 {
    1e-10
}

/// One block of states to generate.
#[derive(Debug, Clone, Deserialize)]
pub struct SweepGroup {
    pub family: Family,
    pub dim: usize,
    pub count: usize,
}

/// Sweep configuration file (JSON).
#[derive(Debug, Clone, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_oracle_restarts")]
    pub oracle_restarts: usize,
    #[serde(default = "default_oracle_tol")]
    pub oracle_tol: f64,
    pub groups: Vec<SweepGroup>,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: SweepConfig = serde_json::from_str(text)
            .map_err(|e| CliError::Input(format!("sweep config parse error: {e}")))?;
        if config.groups.is_empty() {
            return Err(CliError::Input("sweep config has no groups".into()));
        }
        for g in &config.groups {
            if g.dim < 2 {
                return Err(CliError::Input(format!(
                    "sweep group {}: dim must be >= 2",
                    g.family
                )));
            }
        }
        Ok(config)
    }
}

/// One evaluated state.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub state_id: String,
    pub family: Family,
    pub dim: usize,
    pub w_value: f64,
    pub verdict: Verdict,
    /// `None` when the oracle was skipped (dim too large).
    pub oracle_classical: Option<bool>,
    pub seed: u64,
}

impl SweepRecord {
    pub fn csv_row(&self) -> String {
        let oracle = match self.oracle_classical {
            Some(true) => "true",
            Some(false) => "false",
            None => "n/a",
        };
        format!(
            "{},{},{},{},{},{},{}",
            self.state_id,
            self.family.as_str(),
            self.dim,
            format_f64(self.w_value),
            self.verdict,
            oracle,
            self.seed
        )
    }

    /// A certified verdict the oracle rejects.
    pub fn contradicts_oracle(&self) -> bool {
        self.verdict == Verdict::CertifiedClassical && self.oracle_classical == Some(false)
    }
}

/// Certification statistics for one config group.
#[derive(Debug, Clone)]
pub struct FamilySummary {
    pub family: Family,
    pub dim: usize,
    pub count: usize,
    pub certified: usize,
    pub contradictions: usize,
}

impl FamilySummary {
    pub fn rate(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.certified as f64 / self.count as f64
        }
    }

    pub fn render(&self) -> String {
        format!(
            "family={} dim={} count={} certified={} rate={:.6} contradictions={}",
            self.family.as_str(),
            self.dim,
            self.count,
            self.certified,
            self.rate(),
            self.contradictions
        )
    }
}

/// Full sweep result: rows in deterministic order plus per-group summaries.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    pub summaries: Vec<FamilySummary>,
}

impl SweepOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for rec in &self.records {
            let _ = writeln!(out, "{}", rec.csv_row());
        }
        out
    }
}

/// Builds the state for one row. The row seed fully determines the state.
pub fn generate_family_state(
    family: Family,
    dim: usize,
    row_seed: u64,
) -> Result<DensityMatrix, CliError> {
    let mut rng = ChaCha12Rng::seed_from_u64(splitmix64(row_seed ^ 0x0053_5441_5445));
    let rho = match family {
        Family::ClassicalAligned => {
            classical_state(&ClassicalSpec::random_aligned(dim, &mut rng)?)?
        }
        Family::ClassicalRotated => {
            classical_state(&ClassicalSpec::random_rotated(dim, &mut rng)?)?
        }
        Family::Product => {
            let a = random_density(dim, &mut rng)?;
            let b = random_density(dim, &mut rng)?;
            product_state(&a, &b)?
        }
        Family::XForm => {
            let basis = build_generators(dim)?;
            random_x_form(&basis, &mut rng)?.0
        }
        Family::MaxEntangled => max_entangled(dim)?,
        Family::Ginibre => random_bipartite(dim, &mut rng)?,
    };
    Ok(rho)
}

/// Runs the whole sweep.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutput, CliError> {
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    let mut row_index: u64 = 0;

    for group in &config.groups {
        let basis = build_generators(group.dim)?;
        let mut certified = 0usize;
        let mut contradictions = 0usize;

        for _ in 0..group.count {
            let row_seed = derive_seed(config.seed, row_index);
            let rho = generate_family_state(group.family, group.dim, row_seed)?;

            let classify_seed = splitmix64(row_seed ^ 0x0043_4c41_5353);
            let report = classify(&rho, &basis, classify_seed, config.samples, config.tol)?;

            let oracle_classical = if group.dim <= ORACLE_MAX_DIM {
                let oracle_seed = splitmix64(row_seed ^ 0x004f_5241_434c);
                let outcome =
                    is_classical(&rho, config.oracle_tol, config.oracle_restarts, oracle_seed)?;
                Some(outcome.classical)
            } else {
                None
            };

            let record = SweepRecord {
                state_id: format!("{}-{}-{:04}", group.family.as_str(), group.dim, row_index),
                family: group.family,
                dim: group.dim,
                w_value: report.w_value,
                verdict: report.verdict,
                oracle_classical,
                seed: row_seed,
            };
            if record.verdict == Verdict::CertifiedClassical {
                certified += 1;
            }
            if record.contradicts_oracle() {
                contradictions += 1;
            }
            records.push(record);
            row_index += 1;
        }

        summaries.push(FamilySummary {
            family: group.family,
            dim: group.dim,
            count: group.count,
            certified,
            contradictions,
        });
    }

    Ok(SweepOutput { records, summaries })
}
