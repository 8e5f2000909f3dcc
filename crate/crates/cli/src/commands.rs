//! Subcommand implementations. Output formats are fixed and timestamp-free
//! so identical invocations produce byte-identical output.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use classicality::bloch::{decompose, reconstruct, roundtrip_residual};
use classicality::state_factory::{
    admissible_t_max, classical_state, directional_t_max, max_entangled, product_state,
    random_bipartite, random_density, x_form_state, ClassicalSpec,
};
use classicality::su_basis::{build_generators, verify_basis};
use classicality::witness::classify;
use classicality::{CMatrix, DensityMatrix, RVector, StateKind};

use crate::matrix_file::{format_f64, load_state, MatrixFile};
use crate::sweep::{run_sweep, SweepConfig};
use crate::{CliError, Family};

fn require_bipartite(rho: &DensityMatrix, context: &str) -> Result<(), CliError> {
    if rho.kind() != StateKind::Bipartite {
        return Err(CliError::Input(format!(
            "{context} needs a bipartite state file"
        )));
    }
    Ok(())
}

/// `generators --dim n`: print the basis and its orthogonality diagnostics.
pub fn cmd_generators(dim: usize) -> Result<(), CliError> {
    let basis = build_generators(dim)?;
    println!(
        "SU({dim}) generator basis: {} generators, ordering {}",
        basis.len(),
        basis.ordering_tag()
    );
    for k in 0..basis.len() {
        println!("l_{}  {}", k + 1, basis.label(k));
        let g = basis.generator(k);
        for r in 0..dim {
            let cells: Vec<String> = (0..dim)
                .map(|c| {
                    let z = g[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            println!("  [ {} ]", cells.join("  "));
        }
    }
    let report = verify_basis(&basis, 1e-12);
    println!(
        "orthogonality check (tol 1e-12): max deviation {:.3e}: {}",
        report.max_orthogonality_deviation,
        if report.ok { "OK" } else { "VIOLATED" }
    );
    if !report.ok {
        return Err(CliError::Input(
            "generator basis failed verification".into(),
        ));
    }
    Ok(())
}

/// `witness --input file`: classify the state and print the report.
pub fn cmd_witness(input: &Path, samples: usize, tol: f64, seed: u64) -> Result<(), CliError> {
    let rho = load_state(input)?;
    require_bipartite(&rho, "witness")?;
    let n = rho.local_dim();
    let basis = build_generators(n)?;
    let report = classify(&rho, &basis, seed, samples, tol)?;

    println!("state: bipartite, local dim {n} ({})", input.display());
    println!("samples: {samples}, tol: {tol:e}, seed: {seed}");
    for (k, w) in report.w_samples.iter().enumerate() {
        println!("sample {:2}: W = {}", k + 1, format_f64(*w));
    }
    println!("W_max = {}", format_f64(report.w_value));
    println!("verdict: {}", report.verdict);
    println!("identified form: {}", report.identified_form);
    println!(
        "nonzero expectations (last sample): {} of {}",
        report.nonzero_count,
        report.expectations.len()
    );

    let m = basis.len();
    let mut order: Vec<usize> = (0..report.expectations.len()).collect();
    order.sort_by(|&a, &b| {
        report.expectations[b]
            .abs()
            .partial_cmp(&report.expectations[a].abs())
            .unwrap()
    });
    println!("top expectations by magnitude:");
    for &k in order.iter().take(5) {
        let label = if k < m * m {
            format!("({},{})", k / m + 1, k % m + 1)
        } else {
            "direction".to_string()
        };
        println!("  {label} = {}", format_f64(report.expectations[k]));
    }
    Ok(())
}

/// `decompose --input file`: print coherence vectors, correlation matrix
/// and consistency residuals.
pub fn cmd_decompose(input: &Path) -> Result<(), CliError> {
    let rho = load_state(input)?;
    require_bipartite(&rho, "decompose")?;
    let n = rho.local_dim();
    let basis = build_generators(n)?;
    let dec = decompose(&rho, &basis)?;

    println!("state: bipartite, local dim {n} ({})", input.display());
    print_vector("r", &dec.r);
    print_vector("s", &dec.s);
    println!("T =");
    for i in 0..dec.t.nrows() {
        let cells: Vec<String> = (0..dec.t.ncols())
            .map(|j| format!("{:+.10e}", dec.t[(i, j)]))
            .collect();
        println!("  [ {} ]", cells.join("  "));
    }
    println!("|T|_F = {:.10e}", dec.t.norm());
    let back = reconstruct(&dec, &basis)?;
    println!(
        "round-trip residual = {:.3e}",
        roundtrip_residual(&rho, &back)
    );
    println!(
        "product residual |T - r s^T|_max = {:.3e}",
        dec.product_residual()
    );
    Ok(())
}

fn print_vector(name: &str, v: &RVector) {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:+.10e}")).collect();
    println!(
        "{name} = [ {} ]   |{name}| = {:.10e}",
        cells.join("  "),
        v.norm()
    );
}

/// Parameters for `generate`.
#[derive(Debug, Clone)]
pub struct GenerateParams {
    pub family: Family,
    pub dim: usize,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub t: Option<f64>,
    pub seed: u64,
    pub out: PathBuf,
}

/// FNV-1a over the 17-digit rendering of the entries; identifies a basis
/// pair compactly in logs.
fn fingerprint(matrices: &[&CMatrix]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for m in matrices {
        for z in m.iter() {
            for part in [z.re, z.im] {
                for b in format_f64(part).bytes() {
                    h ^= b as u64;
                    h = h.wrapping_mul(0x0000_0100_0000_01b3);
                }
            }
        }
    }
    h
}

fn print_probs(probs: &classicality::RMatrix) {
    println!("probs =");
    for i in 0..probs.nrows() {
        let cells: Vec<String> = (0..probs.ncols())
            .map(|j| format!("{:.10e}", probs[(i, j)]))
            .collect();
        println!("  [ {} ]", cells.join("  "));
    }
}

/// `generate --family f --dim n [--i --j --t] [--seed] --out file`.
pub fn cmd_generate(params: &GenerateParams) -> Result<(), CliError> {
    let GenerateParams {
        family,
        dim,
        seed,
        out,
        ..
    } = params;
    let (family, dim, seed) = (*family, *dim, *seed);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    println!("family: {family}, dim: {dim}, seed: {seed}");

    let rho = match family {
        Family::XForm => {
            let basis = build_generators(dim)?;
            let i = params.i.unwrap_or_else(|| rng.gen_range(1..=basis.len()));
            let j = params.j.unwrap_or_else(|| rng.gen_range(1..=basis.len()));
            let t = match params.t {
                Some(t) => t,
                None => {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    sign * directional_t_max(&basis, i, j, sign)? * rng.gen_range(0.1..0.95)
                }
            };
            println!("x_form: i = {i}, j = {j}, t = {}", format_f64(t));
            println!(
                "admissible t range (positive side): 0 <= t <= {}",
                format_f64(admissible_t_max(&basis, i, j)?)
            );
            x_form_state(&basis, i, j, t)?
        }
        Family::ClassicalAligned => {
            let spec = ClassicalSpec::random_aligned(dim, &mut rng)?;
            print_probs(spec.probs());
            println!(
                "bases fingerprint: {:016x}",
                fingerprint(&[spec.basis_a(), spec.basis_b()])
            );
            classical_state(&spec)?
        }
        Family::ClassicalRotated => {
            let spec = ClassicalSpec::random_rotated(dim, &mut rng)?;
            print_probs(spec.probs());
            println!(
                "bases fingerprint: {:016x}",
                fingerprint(&[spec.basis_a(), spec.basis_b()])
            );
            classical_state(&spec)?
        }
        Family::Product => {
            let a = random_density(dim, &mut rng)?;
            let b = random_density(dim, &mut rng)?;
            println!("factor purities: {:.10e}, {:.10e}", a.purity(), b.purity());
            product_state(&a, &b)?
        }
        Family::MaxEntangled => max_entangled(dim)?,
        Family::Ginibre => random_bipartite(dim, &mut rng)?,
    };

    let min_eig = classicality::linalg::min_eigenvalue(rho.matrix());
    println!("min eigenvalue: {}", format_f64(min_eig));
    MatrixFile::from_density(&rho).write_to(out)?;
    println!("wrote: {}", out.display());
    Ok(())
}

/// `sweep --config file [--out file]`.
///
/// With `--out` the CSV goes to the file and the summary to stdout; without
/// it the CSV goes to stdout and the summary to stderr.
pub fn cmd_sweep(config_path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", config_path.display())))?;
    let config = SweepConfig::from_json(&text)?;
    let output = run_sweep(&config)?;
    let csv = output.to_csv();
    match out {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            println!("wrote: {} ({} rows)", path.display(), output.records.len());
            for s in &output.summaries {
                println!("{}", s.render());
            }
        }
        None => {
            print!("{csv}");
            for s in &output.summaries {
                eprintln!("{}", s.render());
            }
        }
    }
    Ok(())
}
