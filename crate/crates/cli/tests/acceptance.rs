//! Acceptance suite. One test per criterion; each prints a single
//! `ACCEPTANCE PASS ...` line with the measured numbers (visible with
//! `cargo test --test acceptance -- --show-output`).

use std::fs;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use classicality::bloch::{
    decompose, reconstruct, roundtrip_residual, single_bloch, validate_state,
};
use classicality::linalg::{hermitian_eigenvalues, identity, kahan_sum};
use classicality::state_factory::{
    admissible_t_max, is_classical, max_entangled, product_state, random_bipartite, random_density,
    random_x_form,
};
use classicality::su_basis::{build_generators, verify_basis};
use classicality::witness::{classify, witness_value, Verdict};
use classicality::{CMatrix, DensityMatrix};
use classicality_cli::derive_seed;
use classicality_cli::sweep::{run_sweep, SweepConfig};

const WITNESS_TOL: f64 = 1e-9;
const WITNESS_SAMPLES: usize = 8;
const ORACLE_TOL: f64 = 1e-10;
const ORACLE_RESTARTS: usize = 20;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn pass(line: &str, elapsed: Duration) {
    println!("ACCEPTANCE PASS {line} [{:.2}s]", elapsed.as_secs_f64());
}

/// Independent quadratic-cost witness evaluation (row-compensated sums).
fn pairwise_witness(e: &[f64]) -> f64 {
    let mut rows = Vec::with_capacity(e.len());
    for i in 0..e.len() {
        rows.push(kahan_sum((i + 1..e.len()).map(|j| (e[i] * e[j]).abs())));
    }
    kahan_sum(rows.into_iter())
}

fn bell_state() -> DensityMatrix {
    max_entangled(2).unwrap()
}

#[test]
fn criterion_1_generator_correctness() {
    let start = Instant::now();
    for n in 2..=8usize {
        let basis = build_generators(n).unwrap();
        assert_eq!(basis.len(), n * n - 1, "count for n={n}");
        let report = verify_basis(&basis, 1e-12);
        assert!(
            report.ok,
            "n={n}: {:?}",
            report.violations.first().map(|v| v.to_string())
        );
    }
    // n = 2 ordered output is exactly the Pauli triple.
    let basis2 = build_generators(2).unwrap();
    let c = Complex64::new;
    let paulis = [
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]),
        CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]),
    ];
    for (k, p) in paulis.iter().enumerate() {
        assert_eq!(basis2.generator(k), p, "pauli {k}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "{elapsed:?}");
    pass(
        "criterion 1: generator bases n=2..8 Hermitian, traceless, Tr(l_i l_j)=2d_ij @1e-12; n=2 = Pauli triple",
        elapsed,
    );
}

#[test]
fn criterion_2_bloch_roundtrip() {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for n in [2usize, 3, 4] {
        let basis = build_generators(n).unwrap();
        let mut r = rng(2000 + n as u64);
        for _ in 0..100 {
            let rho = random_bipartite(n, &mut r).unwrap();
            let dec = decompose(&rho, &basis).unwrap();
            let back = reconstruct(&dec, &basis).unwrap();
            worst = worst.max(roundtrip_residual(&rho, &back));
        }
    }
    assert!(worst < 1e-10, "worst residual {worst:.3e}");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "{elapsed:?}");
    pass(
        &format!(
            "criterion 2: 300 Ginibre round trips (n=2,3,4), worst residual {worst:.3e} < 1e-10"
        ),
        elapsed,
    );
}

#[test]
fn criterion_3_witness_soundness() {
    let start = Instant::now();
    let mixed2 = DensityMatrix::single(identity(2) / Complex64::new(2.0, 0.0)).unwrap();
    let mixed3 = DensityMatrix::single(identity(3) / Complex64::new(3.0, 0.0)).unwrap();

    let mut certified = 0usize;
    let mut total = 0usize;
    let mut oracle_checked = 0usize;
    let mut contradictions = 0usize;

    // 500 single-correlation states with random admissible (i, j, t).
    for n in [2usize, 3] {
        let basis = build_generators(n).unwrap();
        let mut r = rng(3000 + n as u64);
        for k in 0..250 {
            let (rho, _, _, _) = random_x_form(&basis, &mut r).unwrap();
            let seed = derive_seed(31, total as u64);
            let report = classify(&rho, &basis, seed, WITNESS_SAMPLES, WITNESS_TOL).unwrap();
            assert_eq!(
                report.verdict,
                Verdict::CertifiedClassical,
                "x_form n={n} k={k} W={:.3e}",
                report.w_value
            );
            certified += 1;
            total += 1;
            if n == 2 {
                let out = is_classical(&rho, ORACLE_TOL, ORACLE_RESTARTS, seed).unwrap();
                oracle_checked += 1;
                if !out.classical {
                    contradictions += 1;
                }
            }
        }
    }

    // 200 product states in the correlation-free subfamily: one factor
    // maximally mixed, so T = r s^T = 0 and at most the direction
    // observable is nonzero. (Products with two coherent factors carry
    // correlation terms and are not certified; see criterion 6.)
    for n in [2usize, 3] {
        let basis = build_generators(n).unwrap();
        let mixed = if n == 2 { &mixed2 } else { &mixed3 };
        let mut r = rng(4000 + n as u64);
        for k in 0..100 {
            let factor = random_density(n, &mut r).unwrap();
            let rho = if k % 2 == 0 {
                product_state(&factor, mixed).unwrap()
            } else {
                product_state(mixed, &factor).unwrap()
            };
            let seed = derive_seed(47, total as u64);
            let report = classify(&rho, &basis, seed, WITNESS_SAMPLES, WITNESS_TOL).unwrap();
            assert_eq!(
                report.verdict,
                Verdict::CertifiedClassical,
                "product n={n} k={k} W={:.3e}",
                report.w_value
            );
            certified += 1;
            total += 1;
            if n == 2 {
                let out = is_classical(&rho, ORACLE_TOL, ORACLE_RESTARTS, seed).unwrap();
                oracle_checked += 1;
                if !out.classical {
                    contradictions += 1;
                }
            }
        }
    }

    assert_eq!(total, 700);
    assert_eq!(certified, total, "certification rate must be exactly 1.0");
    assert_eq!(contradictions, 0, "oracle contradictions");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(120), "{elapsed:?}");
    pass(
        &format!(
            "criterion 3: 500 x_form + 200 product states certified ({certified}/{total}); oracle confirmed {oracle_checked}/{oracle_checked} at n=2, 0 contradictions"
        ),
        elapsed,
    );
}

#[test]
fn criterion_4_no_false_certification() {
    let start = Instant::now();
    let basis = build_generators(2).unwrap();
    let mut r = rng(5000);
    let mut min_w = f64::INFINITY;
    let mut certified = 0usize;
    for k in 0..500 {
        let rho = random_bipartite(2, &mut r).unwrap();
        let seed = derive_seed(53, k as u64);
        let report = classify(&rho, &basis, seed, WITNESS_SAMPLES, WITNESS_TOL).unwrap();
        if report.verdict == Verdict::CertifiedClassical {
            certified += 1;
            let out = is_classical(&rho, ORACLE_TOL, ORACLE_RESTARTS, seed).unwrap();
            assert!(out.classical, "certified non-classical state");
        }
        min_w = min_w.min(report.w_value);
    }
    assert_eq!(certified, 0, "certification rate must be 0.0");
    assert!(
        min_w > 10.0 * WITNESS_TOL,
        "min observed W {min_w:.3e} <= 10 tol"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "{elapsed:?}");
    pass(
        &format!("criterion 4: 500 Ginibre states, 0 certifications, min W {min_w:.3e} > 1e-8"),
        elapsed,
    );
}

#[test]
fn criterion_5_analytic_fixture() {
    let start = Instant::now();
    // Bell pair: witness exactly 3 from expectations (+1, -1, +1) on the
    // three matching Pauli pairs.
    let basis2 = build_generators(2).unwrap();
    let bell = bell_state();
    let report = classify(&bell, &basis2, 42, WITNESS_SAMPLES, WITNESS_TOL).unwrap();
    assert!(
        (report.w_value - 3.0).abs() < 1e-12,
        "W = {}",
        report.w_value
    );
    for w in &report.w_samples {
        assert!((w - 3.0).abs() < 1e-12);
    }
    let m = 3;
    for (k, e) in report.expectations.iter().enumerate() {
        let expected = if k < m * m {
            match (k / m + 1, k % m + 1) {
                (1, 1) => 1.0,
                (2, 2) => -1.0,
                (3, 3) => 1.0,
                _ => 0.0,
            }
        } else {
            0.0
        };
        assert!(
            (e - expected).abs() < 1e-12,
            "expectation {k}: {e} vs {expected}"
        );
    }

    // Qutrit maximally entangled state: W > 1, and the shortcut evaluation
    // agrees with the direct pairwise sum.
    let basis3 = build_generators(3).unwrap();
    let me3 = max_entangled(3).unwrap();
    let report3 = classify(&me3, &basis3, 42, WITNESS_SAMPLES, WITNESS_TOL).unwrap();
    assert!(report3.w_value > 1.0, "W = {}", report3.w_value);
    let fast = witness_value(&report3.expectations);
    let direct = pairwise_witness(&report3.expectations);
    assert!(
        (fast - direct).abs() < 1e-12,
        "shortcut {fast} vs direct {direct}"
    );
    let elapsed = start.elapsed();
    pass(
        &format!(
            "criterion 5: Bell W = 3 ({:+.1e} off) with the (+1,-1,+1) pattern; qutrit W = {:.6} > 1, routes agree to {:.1e}",
            report.w_value - 3.0,
            report3.w_value,
            (fast - direct).abs()
        ),
        elapsed,
    );
}

#[test]
fn criterion_6_sufficiency_not_necessity() {
    let start = Instant::now();
    // Biased classical mixture: never certified, yet the oracle proves it
    // classical.
    let basis = build_generators(2).unwrap();
    let mut m = CMatrix::zeros(4, 4);
    m[(0, 0)] = Complex64::new(0.7, 0.0);
    m[(3, 3)] = Complex64::new(0.3, 0.0);
    let biased = DensityMatrix::bipartite(m, 2).unwrap();
    for seed in 0..25u64 {
        let report = classify(&biased, &basis, seed, WITNESS_SAMPLES, WITNESS_TOL).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive, "seed {seed}");
    }
    let out = is_classical(&biased, ORACLE_TOL, ORACLE_RESTARTS, 7).unwrap();
    assert!(out.classical);
    assert!(out.residual < 1e-10, "residual {:.3e}", out.residual);

    // 200 rotated classical states: whatever the verdict, it never
    // contradicts the oracle, and the oracle certifies every one.
    let config = SweepConfig::from_json(
        r#"{
            "seed": 606,
            "samples": 8,
            "tol": 1e-9,
            "oracle_restarts": 20,
            "oracle_tol": 1e-10,
            "groups": [{"family": "classical_rotated", "dim": 2, "count": 200}]
        }"#,
    )
    .unwrap();
    let sweep = run_sweep(&config).unwrap();
    assert_eq!(sweep.records.len(), 200);
    let mut inconclusive = 0usize;
    for rec in &sweep.records {
        assert!(
            !rec.contradicts_oracle(),
            "contradiction in {}",
            rec.state_id
        );
        assert_eq!(
            rec.oracle_classical,
            Some(true),
            "oracle missed classical state {}",
            rec.state_id
        );
        if rec.verdict == Verdict::Inconclusive {
            inconclusive += 1;
        }
    }
    let elapsed = start.elapsed();
    pass(
        &format!(
            "criterion 6: biased mixture inconclusive on 25 seeds with oracle residual {:.1e}; 200 rotated classical states, {inconclusive} inconclusive, 0 contradictions",
            out.residual
        ),
        elapsed,
    );
}

#[test]
fn criterion_7_shortcut_identity() {
    let start = Instant::now();
    let mut r = rng(7000);
    let mut worst_rel = 0.0_f64;
    for len in [10usize, 65, 4097] {
        for _ in 0..100 {
            let e: Vec<f64> = (0..len)
                .map(|_| rand::Rng::sample::<f64, _>(&mut r, rand_distr::StandardNormal))
                .collect();
            let fast = witness_value(&e);
            let direct = pairwise_witness(&e);
            let rel = (fast - direct).abs() / direct.abs().max(f64::MIN_POSITIVE);
            worst_rel = worst_rel.max(rel);
        }
    }
    assert!(worst_rel < 1e-12, "worst relative error {worst_rel:.3e}");
    let elapsed = start.elapsed();
    pass(
        &format!(
            "criterion 7: shortcut identity on 300 vectors (len 10/65/4097), worst relative error {worst_rel:.3e}"
        ),
        elapsed,
    );
}

#[test]
fn criterion_8_positivity_caveat() {
    let start = Instant::now();
    // Unit vector along the last diagonal generator at N = 3: eigenvalue
    // -1/3, rejected by validation.
    let basis3 = build_generators(3).unwrap();
    let mut u = vec![0.0; 8];
    u[7] = 1.0;
    let op = single_bloch(&u, &basis3).unwrap();
    let eigs = hermitian_eigenvalues(&op);
    assert!(
        (eigs[0] + 1.0 / 3.0).abs() < 1e-12,
        "min eigenvalue {}",
        eigs[0]
    );
    let report = validate_state(&op, 1e-10);
    assert!(!report.is_valid() && !report.positive_ok);
    assert!(report.trace_ok && report.hermitian_ok);

    // Positivity boundary of the single-correlation family at (2, 3, 3).
    let basis2 = build_generators(2).unwrap();
    let t_max = admissible_t_max(&basis2, 3, 3).unwrap();
    assert!((t_max - 1.0).abs() < 1e-9, "t_max = {t_max}");
    let elapsed = start.elapsed();
    pass(
        &format!(
            "criterion 8: qutrit Bloch operator min eigenvalue {:.15} rejected; admissible_t_max(2,3,3) = {t_max:.12}",
            eigs[0]
        ),
        elapsed,
    );
}

#[test]
fn criterion_9_sweep_determinism() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{
        "seed": 99,
        "samples": 8,
        "tol": 1e-9,
        "oracle_restarts": 6,
        "oracle_tol": 1e-10,
        "groups": [
            {"family": "x_form", "dim": 2, "count": 6},
            {"family": "ginibre", "dim": 2, "count": 6},
            {"family": "classical_rotated", "dim": 2, "count": 4},
            {"family": "product", "dim": 2, "count": 4},
            {"family": "max_entangled", "dim": 2, "count": 1},
            {"family": "classical_aligned", "dim": 3, "count": 2}
        ]
    }"#;
    fs::write(dir.path().join("config.json"), config).unwrap();
    let mut outputs = Vec::new();
    for name in ["a.csv", "b.csv"] {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_classicality"))
            .args(["sweep", "--config", "config.json", "--out", name])
            .current_dir(dir.path())
            .output()
            .expect("binary runs");
        assert!(status.status.success());
        outputs.push(fs::read(dir.path().join(name)).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "sweep CSV must be byte-identical");
    assert!(outputs[0].starts_with(b"state_id,family,dim,w_value,verdict,oracle_classical,seed\n"));
    let rows = outputs[0].split(|&b| b == b'\n').count() - 2; // header + trailing newline
    assert_eq!(rows, 23);
    let elapsed = start.elapsed();
    pass(
        &format!("criterion 9: repeated sweep runs byte-identical ({rows} rows)"),
        elapsed,
    );
}
