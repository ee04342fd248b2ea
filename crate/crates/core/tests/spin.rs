use entscale_core::linalg::{kron, EvolveStrategy};
use entscale_core::spin::{
    entropy_profile, evolve, evolve_with, k_hamiltonian_check, lightcone_probe, patch_unitary, restricted_patch,
    schmidt_spectrum, von_neumann_entropy, w_hierarchy, weyl_chain, CutPartition, Pauli, PauliTerm, Preset,
};
use entscale_core::{Complex64, LocalHamiltonian, StateVector};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LABELS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

fn random_terms(rng: &mut ChaCha8Rng, n: usize) -> Vec<PauliTerm<f64>> {
    (0..n - 1)
        .flat_map(|bond| (0..3).map(move |_| bond))
        .map(|bond| PauliTerm {
            coeff: rng.random::<f64>() * 2.0 - 1.0,
            left: LABELS[rng.random_range(0..4)],
            right: LABELS[rng.random_range(0..4)],
            bond,
        })
        .collect()
}

// H assembled site by site from Kronecker products of 2×2 Paulis.
fn kron_oracle(n: usize, terms: &[PauliTerm<f64>]) -> DMatrix<Complex64> {
    let mut h = DMatrix::zeros(1 << n, 1 << n);
    for t in terms {
        let mut op = DMatrix::identity(1, 1);
        for site in 0..n {
            let p = if site == t.bond {
                t.left
            } else if site == t.bond + 1 {
                t.right
            } else {
                Pauli::I
            };
            op = kron(&op, &p.matrix::<f64>());
        }
        h += op * Complex64::new(t.coeff, 0.0);
    }
    h
}

fn taylor_evolve(h: &DMatrix<Complex64>, t: f64) -> DVector<Complex64> {
    let ith = h * Complex64::new(0.0, t);
    let mut v = DVector::zeros(h.nrows());
    v[0] = Complex64::new(1.0, 0.0);
    let (mut term, mut sum) = (v.clone(), v);
    for k in 1..120 {
        term = &ith * term / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    sum
}

#[test]
fn evolution_matches_kronecker_taylor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let terms = random_terms(&mut rng, 6);
    let h = LocalHamiltonian::from_pauli_terms(6, &terms).unwrap();
    let oracle = taylor_evolve(&kron_oracle(6, &terms), 1.3);
    for strategy in [EvolveStrategy::Dense, EvolveStrategy::Krylov] {
        let psi = evolve_with(&h, 1.3, strategy).unwrap();
        assert!((psi.amplitudes() - &oracle).norm() <= 1e-10);
    }
}

#[test]
fn xy_cross_quench_entangles_the_middle() {
    let h = LocalHamiltonian::preset(Preset::XyCross, 8).unwrap();
    let psi = evolve(&h, 1.0).unwrap();
    assert!((psi.norm() - 1.0).abs() <= 1e-10);
    let s = von_neumann_entropy(&schmidt_spectrum(&psi, CutPartition::new(8, 4).unwrap()).unwrap());
    assert!(s > 0.1, "{s}");
}

#[test]
fn xx_profile_matches_dense_svd_oracle() {
    let h = LocalHamiltonian::preset(Preset::Xx, 4).unwrap();
    let curve = entropy_profile(&h, &[0.3], &[1, 2, 3]).unwrap();
    let terms: Vec<_> = (0..3).map(|b| PauliTerm { coeff: 1.0, left: Pauli::X, right: Pauli::X, bond: b }).collect();
    let psi = taylor_evolve(&kron_oracle(4, &terms), 0.3);
    for row in &curve.rows {
        let (ra, rb) = (1 << row.m, 1 << (4 - row.m));
        let c = DMatrix::from_fn(ra, rb, |i, j| psi[i * rb + j]);
        let s: f64 = c
            .singular_values()
            .iter()
            .map(|x| x * x)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum();
        assert!((row.entropy - s).abs() <= 1e-10, "{row:?} vs {s}");
        assert!(row.entropy <= row.m.min(4 - row.m) as f64);
    }
}

#[test]
fn krylov_path_at_fourteen_spins_agrees_with_dense_on_a_subchain_quantity() {
    // n = 14 only fits the Krylov path; compare against the product form of a
    // decoupled chain, where each half evolves on its own.
    let mut terms: Vec<_> = (0..13).filter(|&b| b != 6).map(|b| PauliTerm { coeff: 1.0, left: Pauli::X, right: Pauli::Y, bond: b }).collect();
    terms.push(PauliTerm { coeff: 0.0, left: Pauli::I, right: Pauli::I, bond: 6 });
    let h = LocalHamiltonian::from_pauli_terms(14, &terms).unwrap();
    let psi = evolve_with(&h, 0.8, EvolveStrategy::Krylov).unwrap();
    let half = LocalHamiltonian::preset(Preset::XyCross, 7).unwrap();
    let phi = evolve_with(&half, 0.8, EvolveStrategy::Dense).unwrap();
    let product = phi.amplitudes().kronecker(phi.amplitudes());
    assert!((psi.amplitudes() - product).norm() <= 1e-8);
}

#[test]
fn hierarchy_reassembles_and_stays_capped() {
    let h = LocalHamiltonian::preset(Preset::XyCross, 8).unwrap();
    for t in [0.25, 0.5, 1.5] {
        let rep = w_hierarchy(&h, CutPartition::new(8, 4).unwrap(), t, 4).unwrap();
        assert!(rep.reassembly_error <= 1e-8, "{}", rep.reassembly_error);
        assert!(rep.rows.iter().all(|r| r.w_deviation <= 2.0 + 1e-12));
    }
}

#[test]
fn full_window_patch_is_the_patch_unitary() {
    let h = LocalHamiltonian::preset(Preset::XyCross, 8).unwrap();
    let cut = CutPartition::new(8, 4).unwrap();
    let v = patch_unitary(&h, cut, 0.4).unwrap();
    let r = restricted_patch(&h, cut, 0.4, 4).unwrap();
    assert!((r.widened(0, 7) - &v).camax() <= 1e-10);
    let prod = &v * v.adjoint();
    assert!((prod - DMatrix::identity(256, 256)).camax() <= 1e-9);
}

#[test]
fn weyl_chain_holds_along_the_hierarchy() {
    let h = LocalHamiltonian::preset(Preset::XyCross, 8).unwrap();
    for step in weyl_chain(&h, CutPartition::new(8, 4).unwrap(), 0.5, 4).unwrap() {
        assert!(step.report.holds, "{step:?}");
    }
}

#[test]
fn light_cone_is_closed_at_time_zero() {
    let h = LocalHamiltonian::preset(Preset::XyCross, 8).unwrap();
    let rows = lightcone_probe(&h, 4, &[0.0], Pauli::Z, Pauli::Z).unwrap();
    assert!(rows.iter().filter(|r| r.d >= 1).all(|r| r.comm_norm <= 1e-12));
}

#[test]
fn parent_hamiltonian_spectrum_and_ground_state() {
    for preset in [Preset::XyCross, Preset::Xx, Preset::ZField] {
        let h = LocalHamiltonian::preset(preset, 6).unwrap();
        for t in [0.0, 0.3, 1.1] {
            let rep = k_hamiltonian_check(&h, t).unwrap();
            assert!(rep.spectrum_max_diff <= 1e-9, "{preset} {t} {rep:?}");
            assert!(rep.ground_fidelity >= 1.0 - 1e-9, "{preset} {t} {rep:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn schmidt_spectra_sum_to_one(seed in any::<u64>(), n in 2usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = DVector::from_fn(1 << n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let psi = StateVector::normalized(n, amps).unwrap();
        for m in 1..n {
            let cut = CutPartition::new(n, m).unwrap();
            let s = schmidt_spectrum(&psi, cut).unwrap();
            prop_assert!((s.sum() - 1.0).abs() <= 1e-10);
            prop_assert!(s.coefficients().windows(2).all(|w| w[0] >= w[1]));
            let other = schmidt_spectrum(&psi.reflected(), cut.mirrored()).unwrap();
            prop_assert!((von_neumann_entropy(&s) - von_neumann_entropy(&other)).abs() <= 1e-10);
        }
    }

    #[test]
    fn local_shifts_leave_spectra_alone(seed in any::<u64>(), n in 3usize..8, t in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = LocalHamiltonian::from_pauli_terms(n, &random_terms(&mut rng, n)).unwrap();
        let shifts: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let (a, b) = (evolve(&h, t).unwrap(), evolve(&h.shifted_by(&shifts).unwrap(), t).unwrap());
        prop_assert!((a.norm() - 1.0).abs() <= 1e-10);
        for m in 1..n {
            let cut = CutPartition::new(n, m).unwrap();
            let (sa, sb) = (schmidt_spectrum(&a, cut).unwrap(), schmidt_spectrum(&b, cut).unwrap());
            for (x, y) in sa.coefficients().iter().zip(sb.coefficients()) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn parent_spectrum_identity_on_random_chains(seed in any::<u64>(), n in 2usize..6, t in -2.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = LocalHamiltonian::from_pauli_terms(n, &random_terms(&mut rng, n)).unwrap();
        let rep = k_hamiltonian_check(&h, t).unwrap();
        prop_assert!(rep.spectrum_max_diff <= 1e-9);
        prop_assert!(rep.ground_fidelity >= 1.0 - 1e-9);
    }
}
