//! Seeded randomized property checks.
//!
//! Every check draws its inputs from one ChaCha8 stream seeded by the config,
//! in a fixed order, so a seed pins the whole table.

use entscale_core::linalg::{weyl_perturbation_check, EvolveStrategy};
use entscale_core::spin::{
    evolve_with, schmidt_spectrum, von_neumann_entropy, CutPartition, Pauli, PauliTerm,
};
use entscale_core::{Complex64, HermitianMatrix, LocalHamiltonian, Result, StateVector};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::experiments::{Cell, Table};
use crate::settings::RunConfig;

pub const SCHMIDT_SUM_TOL: f64 = 1e-10;
pub const CUT_SYMMETRY_TOL: f64 = 1e-10;
pub const SHIFT_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-10;
pub const KRYLOV_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub check: &'static str,
    pub size: usize,
    pub trials: usize,
    pub violations: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(check: &'static str, size: usize, tolerance: f64) -> Self {
        Self { check, size, trials: 0, violations: 0, worst: 0.0, tolerance }
    }

    fn record(&mut self, value: f64) {
        self.trials += 1;
        self.worst = self.worst.max(value);
        if value.is_nan() || value > self.tolerance {
            self.violations += 1;
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(uniform(rng), uniform(rng))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianMatrix {
    let x = DMatrix::from_fn(dim, dim, |_, _| random_complex(rng));
    let h = (&x + x.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianMatrix::new(h).expect("symmetrized")
}

pub fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateVector {
    let amps = DVector::from_fn(1 << n, |_, _| random_complex(rng));
    StateVector::normalized(n, amps).expect("nonzero")
}

/// Three random Pauli products with coefficients in [-1, 1] on every bond.
pub fn random_hamiltonian(rng: &mut ChaCha8Rng, n: usize) -> LocalHamiltonian {
    const LABELS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut terms = Vec::new();
    for bond in 0..n - 1 {
        for _ in 0..3 {
            let left = LABELS[rng.random_range(0..4)];
            let right = LABELS[rng.random_range(0..4)];
            terms.push(PauliTerm { coeff: uniform(rng), left, right, bond });
        }
    }
    LocalHamiltonian::from_pauli_terms(n, &terms).expect("valid bonds")
}

/// Runs every check for `trials` draws each.
pub fn property_checks(n: usize, dims: &[usize], trials: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    for &dim in dims {
        let mut c = CheckResult::new("weyl", dim, 1.0);
        for _ in 0..trials {
            let p = random_hermitian(&mut rng, dim);
            let q = random_hermitian(&mut rng, dim);
            let rep = weyl_perturbation_check(&p, &q)?;
            c.record(rep.max_shift / rep.bound);
        }
        out.push(c);
    }

    let mut sums = CheckResult::new("schmidt_sum", n, SCHMIDT_SUM_TOL);
    let mut symmetry = CheckResult::new("cut_symmetry", n, CUT_SYMMETRY_TOL);
    for _ in 0..trials {
        let psi = random_state(&mut rng, n);
        let mirror = psi.reflected();
        let mut worst_sum: f64 = 0.0;
        let mut worst_sym: f64 = 0.0;
        for m in 1..n {
            let cut = CutPartition::new(n, m)?;
            let s = schmidt_spectrum(&psi, cut)?;
            worst_sum = worst_sum.max((s.sum() - 1.0).abs());
            let other = schmidt_spectrum(&mirror, cut.mirrored())?;
            worst_sym = worst_sym.max((von_neumann_entropy(&s) - von_neumann_entropy(&other)).abs());
        }
        sums.record(worst_sum);
        symmetry.record(worst_sym);
    }
    out.push(sums);
    out.push(symmetry);

    let mut shift = CheckResult::new("shift_invariance", n, SHIFT_TOL);
    let mut norm = CheckResult::new("unitarity", n, NORM_TOL);
    let mut krylov = CheckResult::new("krylov_dense", n, KRYLOV_TOL);
    for _ in 0..trials {
        let h = random_hamiltonian(&mut rng, n);
        let shifts: Vec<f64> = (0..n - 1).map(|_| 2.0 * uniform(&mut rng)).collect();
        let t = 2.0 * rng.random::<f64>();
        let shifted = h.shifted_by(&shifts)?;
        let psi = evolve_with(&h, t, EvolveStrategy::Dense)?;
        let phi = evolve_with(&shifted, t, EvolveStrategy::Dense)?;
        let via_krylov = evolve_with(&h, t, EvolveStrategy::Krylov)?;
        let mut worst: f64 = 0.0;
        for m in 1..n {
            let cut = CutPartition::new(n, m)?;
            let (a, b) = (schmidt_spectrum(&psi, cut)?, schmidt_spectrum(&phi, cut)?);
            for (x, y) in a.coefficients().iter().zip(b.coefficients()) {
                worst = worst.max((x - y).abs());
            }
        }
        shift.record(worst);
        norm.record((psi.norm() - 1.0).abs().max((via_krylov.norm() - 1.0).abs()));
        krylov.record((psi.amplitudes() - via_krylov.amplitudes()).norm());
    }
    out.push(shift);
    out.push(norm);
    out.push(krylov);
    Ok(out)
}

pub(crate) fn run_suite(cfg: &RunConfig, table: &mut Table) -> Result<Value> {
    let checks = property_checks(cfg.n, &cfg.dims, cfg.trials, cfg.seed)?;
    for c in &checks {
        table.push(vec![
            Cell::Text(c.check.to_string()),
            c.size.into(),
            c.trials.into(),
            c.violations.into(),
            c.worst.into(),
            c.tolerance.into(),
        ]);
    }
    let total: usize = checks.iter().map(|c| c.violations).sum();
    Ok(json!({"violations": total, "pass": total == 0}))
}
