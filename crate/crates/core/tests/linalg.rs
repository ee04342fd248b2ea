use entscale_core::linalg::{
    evolve_action, fourier_coefficient, hermitian_eigensystem, hermitian_eigenvalues, log_abs_determinant, operator_norm,
    singular_values, symmetric_eigenvalues, weyl_perturbation_check, EvolveStrategy, QuadratureSpec,
};
use entscale_core::{Complex64, HermitianMatrix, PiecewiseConstant, PiecewiseSymbol};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    HermitianMatrix::new((&g + g.adjoint()).map(|z| z * 0.5)).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> DVector<Complex64> {
    let v = DVector::from_fn(dim, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

#[test]
fn eigensystem_residuals_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for dim in [2, 16, 64] {
        for _ in 0..100 {
            let a = random_hermitian(&mut rng, dim);
            let eig = hermitian_eigensystem(&a).unwrap();
            let norm = operator_norm(a.as_matrix()).unwrap();
            assert!(eig.reconstruction_residual(&a) <= 1e-10 * norm);
            assert!(eig.orthonormality_defect() <= 1e-10);
            assert!(eig.values.as_slice().windows(2).all(|w| w[0] <= w[1]));
        }
    }
}

#[test]
fn weyl_holds_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for dim in [16, 64] {
        for _ in 0..100 {
            let (p, q) = (random_hermitian(&mut rng, dim), random_hermitian(&mut rng, dim));
            let rep = weyl_perturbation_check(&p, &q).unwrap();
            assert!(rep.holds, "{rep:?}");
        }
    }
}

#[test]
fn krylov_matches_dense_and_inverts() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let h = random_hermitian(&mut rng, 64);
    let v = random_unit(&mut rng, 64);
    let dense = evolve_action(&h, 0.7, &v, EvolveStrategy::Dense).unwrap();
    let krylov = evolve_action(&h, 0.7, &v, EvolveStrategy::Krylov).unwrap();
    assert!((&dense - &krylov).camax() <= 1e-8);
    for w in [&dense, &krylov] {
        assert!((w.norm() - 1.0).abs() <= 1e-10);
    }
    for strategy in [EvolveStrategy::Dense, EvolveStrategy::Krylov] {
        let back = evolve_action(&h, -0.7, &evolve_action(&h, 0.7, &v, strategy).unwrap(), strategy).unwrap();
        assert!((back - &v).camax() <= 1e-8);
    }
}

#[test]
fn evolution_matches_taylor_series_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let h = random_hermitian(&mut rng, 16);
    let v = random_unit(&mut rng, 16);
    let t = 0.9;
    // Σ (itH)^k v / k!
    let ith = h.as_matrix() * Complex64::new(0.0, t);
    let (mut term, mut sum) = (v.clone(), v.clone());
    for k in 1..80 {
        term = &ith * term / Complex64::new(k as f64, 0.0);
        sum += &term;
    }
    let got = evolve_action(&h, t, &v, EvolveStrategy::Auto).unwrap();
    assert!((got - sum).camax() <= 1e-12);
}

#[test]
fn singular_values_square_to_gram_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let c = DMatrix::from_fn(4, 8, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let sv = singular_values(&c).unwrap();
    let gram = HermitianMatrix::new(&c * c.adjoint()).unwrap();
    let mut ev = hermitian_eigenvalues(&gram);
    ev.reverse();
    assert_eq!(sv.len(), 4);
    for (s, e) in sv.iter().zip(&ev) {
        assert!((s * s - e).abs() <= 1e-10);
    }
}

#[test]
fn two_jump_toeplitz_determinant_matches_eigenvalue_product() {
    let s = PiecewiseSymbol::paper();
    let t = entscale_core::fermion::build_correlation_matrix(&s, 8).unwrap().matrix();
    let ld = log_abs_determinant(&t).unwrap();
    let ev = symmetric_eigenvalues(&t).unwrap();
    let oracle: f64 = ev.iter().map(|x| x.abs().ln()).sum();
    let sign: f64 = ev.iter().map(|x| x.signum()).product();
    assert!((ld.log_abs - oracle).abs() <= 1e-9 * oracle.abs());
    assert_eq!(ld.sign as f64, sign);
}

#[test]
fn two_jump_first_coefficient_against_riemann_sum() {
    let s = PiecewiseSymbol::paper();
    let f = s.as_piecewise();
    let q = QuadratureSpec::for_function(f);
    let c = fourier_coefficient(f, 1, &q).unwrap();
    assert!((c.re - 2.0 / PI).abs() <= 1e-15 && c.im == 0.0);
    let samples = 1_000_000;
    let h = 2.0 * PI / samples as f64;
    let riemann: Complex64 = (0..samples)
        .map(|j| {
            let x = (j as f64 + 0.5) * h;
            Complex64::from_polar(f.eval(x), -x)
        })
        .sum::<Complex64>()
        * Complex64::new(h / (2.0 * PI), 0.0);
    assert!((riemann - c).norm() <= 1e-6);
}

fn piecewise() -> impl Strategy<Value = PiecewiseConstant> {
    prop::collection::vec((0.05f64..1.0, -3.0f64..3.0), 1..6).prop_map(|pieces| {
        let total: f64 = pieces.iter().map(|p| p.0).sum();
        let mut b = vec![0.0];
        let mut acc = 0.0;
        for (w, _) in &pieces[..pieces.len() - 1] {
            acc += w / total * 2.0 * PI;
            b.push(acc);
        }
        b.push(2.0 * PI);
        PiecewiseConstant::new(b, pieces.iter().map(|p| p.1).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn negative_index_is_conjugate(f in piecewise(), l in 0i64..200) {
        let q = QuadratureSpec::for_function(&f);
        let plus = fourier_coefficient(&f, l, &q).unwrap();
        let minus = fourier_coefficient(&f, -l, &q).unwrap();
        prop_assert_eq!(minus, plus.conj());
    }

    #[test]
    fn evolution_preserves_norm(seed in any::<u64>(), dim in 2usize..40, t in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, dim);
        let v = random_unit(&mut rng, dim);
        for strategy in [EvolveStrategy::Dense, EvolveStrategy::Krylov] {
            let w = evolve_action(&h, t, &v, strategy).unwrap();
            prop_assert!((w.norm() - 1.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn log_det_matches_eigenvalues(seed in any::<u64>(), dim in 1usize..64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(dim, dim, |_, _| rng.random::<f64>() - 0.5);
        let a = (&g + g.transpose()) * 0.5 + DMatrix::identity(dim, dim) * 0.1;
        let ld = log_abs_determinant(&a).unwrap();
        let ev = symmetric_eigenvalues(&a).unwrap();
        let oracle: f64 = ev.iter().map(|x| x.abs().ln()).sum();
        prop_assert!((ld.log_abs - oracle).abs() <= 1e-9 * oracle.abs().max(1.0));
    }
}
