use entscale_core::fermion::{
    build_correlation_matrix, coupling_from_symbol, determinant_diagnostic, fh_scaling_fit, finite_ring_crosscheck,
    gaussian_block_entropy, paper_coupling_closed_form, CorrelationToeplitz,
};
use entscale_core::{CouplingSequence, PiecewiseSymbol};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use std::f64::consts::PI;

fn sign_correlation(l: usize) -> f64 {
    if l == 0 {
        0.0
    } else {
        2.0 * (PI * l as f64 / 2.0).sin() / (PI * l as f64)
    }
}

/// Block entropy in bits computed from many-body amplitudes. The block
/// correlations `C = (I − T)/2` are purified into `m` occupied orbitals over
/// `2m` modes; every Fock amplitude is a determinant of the orbital matrix,
/// and the reduced density matrix of the first `m` modes is traced out
/// explicitly.
fn slater_entropy(t: &DMatrix<f64>) -> f64 {
    let m = t.nrows();
    let c = (DMatrix::identity(m, m) - t) * 0.5;
    let eig = SymmetricEigen::new(c);
    let mut orbitals = DMatrix::zeros(2 * m, m);
    for j in 0..m {
        let p = eig.eigenvalues[j].clamp(0.0, 1.0);
        for a in 0..m {
            orbitals[(a, j)] = p.sqrt() * eig.eigenvectors[(a, j)];
        }
        orbitals[(m + j, j)] = (1.0 - p).sqrt();
    }
    let dim = 1usize << m;
    let mut rho = DMatrix::<f64>::zeros(dim, dim);
    // Occupied block modes A and bath modes B with |A| + |B| = m.
    let amplitude = |a: usize, b: usize| {
        let rows: Vec<usize> = (0..m).filter(|i| a >> i & 1 == 1).chain((0..m).filter(|i| b >> i & 1 == 1).map(|i| m + i)).collect();
        if rows.len() != m {
            return 0.0;
        }
        orbitals.select_rows(&rows).determinant()
    };
    for b in 0..dim {
        let col: Vec<f64> = (0..dim).map(|a| amplitude(a, b)).collect();
        for i in 0..dim {
            for j in 0..dim {
                rho[(i, j)] += col[i] * col[j];
            }
        }
    }
    assert!((rho.trace() - 1.0).abs() <= 1e-12);
    SymmetricEigen::new(rho).eigenvalues.iter().filter(|&&p| p > 1e-300).map(|&p| -p * p.log2()).sum()
}

fn explicit_toeplitz(m: usize) -> DMatrix<f64> {
    DMatrix::from_fn(m, m, |i, j| sign_correlation(i.abs_diff(j)))
}

#[test]
fn sign_correlations_match_closed_form() {
    let t = build_correlation_matrix(&PiecewiseSymbol::paper(), 65).unwrap();
    for (l, &v) in t.entries().iter().enumerate() {
        assert!((v - sign_correlation(l)).abs() <= 1e-12, "l = {l}");
    }
}

#[test]
fn coupling_closed_form_matches_quadrature() {
    let s = PiecewiseSymbol::paper();
    for k in 1..=200 {
        let quad = coupling_from_symbol(&s, k).unwrap();
        let closed = paper_coupling_closed_form::<f64>(k).unwrap();
        assert!((quad - closed).abs() <= 1e-12, "k = {k}: {quad} vs {closed}");
        assert!((quad - sign_correlation(k as usize)).abs() <= 1e-12);
    }
}

#[test]
fn gaussian_entropy_matches_slater_oracle() {
    for m in 2..=5 {
        let t = build_correlation_matrix(&PiecewiseSymbol::paper(), m).unwrap();
        let s = gaussian_block_entropy(&t).unwrap();
        let oracle = slater_entropy(&explicit_toeplitz(m));
        assert!((s - oracle).abs() <= 1e-10, "m = {m}: {s} vs {oracle}");
    }
}

#[test]
fn two_site_block_values() {
    let t = build_correlation_matrix(&PiecewiseSymbol::paper(), 2).unwrap();
    let s = gaussian_block_entropy(&t).unwrap();
    assert!((s - 1.36752).abs() <= 5e-6, "{s}");
    let d = determinant_diagnostic(&t).unwrap();
    assert!((d.d_det - 0.65150).abs() <= 5e-6, "{d:?}");
    // −½ log₂(4/π²)
    assert!((d.d_det - (PI * PI / 4.0).log2() / 2.0).abs() <= 1e-12);
}

#[test]
fn odd_blocks_are_singular() {
    for m in [1, 3, 5, 7, 33] {
        let t = build_correlation_matrix(&PiecewiseSymbol::paper(), m).unwrap();
        assert!(determinant_diagnostic(&t).unwrap().singular, "m = {m}");
    }
}

#[test]
fn filled_band_has_no_entanglement() {
    let t = build_correlation_matrix(&PiecewiseSymbol::constant(-2.0).unwrap(), 12).unwrap();
    assert!(gaussian_block_entropy(&t).unwrap().abs() <= 1e-12);
}

#[test]
fn ring_deviation_shrinks_with_ring_size() {
    let s = PiecewiseSymbol::paper();
    let dev: Vec<f64> = [256, 1024, 4096]
        .iter()
        .map(|&n| {
            let couplings = CouplingSequence::from_symbol(&s, n / 2).unwrap();
            finite_ring_crosscheck(&s, &couplings, n, 16).unwrap().max_deviation
        })
        .collect();
    assert!(dev.windows(2).all(|w| w[1] < w[0]), "{dev:?}");
}

#[test]
fn scaling_fit_reports_every_block() {
    let rep = fh_scaling_fit(&PiecewiseSymbol::paper(), &[8, 16, 32, 64]).unwrap();
    assert_eq!(rep.rows.iter().map(|r| r.m).collect::<Vec<_>>(), vec![8, 16, 32, 64]);
    assert!(rep.rows.windows(2).all(|w| w[1].s_exact > w[0].s_exact));
    assert!(rep.rows.iter().all(|r| !r.singular));
}

// Even symbols: breakpoints in (0, π) mirrored about π.
fn even_symbol() -> impl Strategy<Value = PiecewiseSymbol> {
    prop::collection::vec((0.05f64..1.0, prop_oneof![-2.0f64..-0.2, 0.2f64..2.0]), 1..5).prop_map(|pieces| {
        let total: f64 = pieces.iter().map(|p| p.0).sum();
        let mut cuts = Vec::new();
        let mut acc = 0.0;
        for (w, _) in &pieces[..pieces.len() - 1] {
            acc += w / total * PI;
            cuts.push(acc);
        }
        let mut breakpoints = vec![0.0];
        breakpoints.extend(&cuts);
        breakpoints.extend(cuts.iter().rev().map(|x| 2.0 * PI - x));
        breakpoints.push(2.0 * PI);
        let values: Vec<f64> = pieces.iter().map(|p| p.1).chain(pieces.iter().rev().skip(1).map(|p| p.1)).collect();
        PiecewiseSymbol::new(breakpoints, values).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_within_bounds_and_matches_oracle(s in even_symbol(), m in 1usize..5) {
        prop_assert!(s.is_even());
        let t = build_correlation_matrix(&s, m).unwrap();
        let ent = gaussian_block_entropy(&t).unwrap();
        prop_assert!(ent >= -1e-12 && ent <= m as f64 + 1e-12);
        let oracle = slater_entropy(&t.matrix());
        prop_assert!((ent - oracle).abs() <= 1e-9, "{} vs {}", ent, oracle);
    }

    #[test]
    fn correlation_spectrum_lies_in_unit_interval(s in even_symbol(), m in 1usize..40) {
        let t = build_correlation_matrix(&s, m).unwrap();
        for v in t.eigenvalues().unwrap() {
            prop_assert!(v.abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn arbitrary_toeplitz_entropy_matches_oracle(entries in prop::collection::vec(-0.09f64..0.09, 2..7)) {
        // Gershgorin: 2·5·0.09 < 1 keeps the spectrum inside [−1, 1].
        let mut e = entries;
        e[0] = 0.0;
        let t = CorrelationToeplitz::from_entries(e).unwrap();
        let ent = gaussian_block_entropy(&t).unwrap();
        let oracle = slater_entropy(&t.matrix());
        prop_assert!((ent - oracle).abs() <= 1e-9);
    }
}
