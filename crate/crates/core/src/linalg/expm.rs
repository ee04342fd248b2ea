use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::dense::{matmul_adjoint, HermitianOperator};
use super::hermitian::{hermitian_eigensystem, EigenSystem, HermitianMatrix};
use crate::error::{Error, Result};
use crate::num::{cis, lit, to_f64, tol, Real, C};

/// Largest dimension evolved through a full eigendecomposition under
/// [`EvolveStrategy::Auto`]; above it the Krylov path is used.
pub const DENSE_EVOLVE_MAX_DIM: usize = 1 << 8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EvolveStrategy {
    #[default]
    Auto,
    Dense,
    Krylov,
}

#[derive(Clone, Copy, Debug)]
pub struct KrylovOptions<T> {
    /// Maximal Krylov subspace dimension per step.
    pub subspace: usize,
    /// Accepted a-posteriori error per step, relative to the vector norm.
    pub step_tol: T,
    /// Accepted change of the norm per step, relative.
    pub drift_tol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for KrylovOptions<T> {
    fn default() -> Self {
        Self { subspace: 30, step_tol: tol(1e-13), drift_tol: tol(1e-12), max_steps: 100_000 }
    }
}

/// `e^{itH}` through a cached eigendecomposition; cheap to re-evaluate at many
/// times.
#[derive(Clone, Debug)]
pub struct Propagator<T: Real> {
    eig: EigenSystem<T>,
}

impl<T: Real> Propagator<T> {
    pub fn new(h: &HermitianMatrix<T>) -> Result<Self> {
        Ok(Self { eig: hermitian_eigensystem(h)? })
    }

    pub fn from_eigensystem(eig: EigenSystem<T>) -> Self {
        Self { eig }
    }

    pub fn eigensystem(&self) -> &EigenSystem<T> {
        &self.eig
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    /// `e^{itH} v`.
    pub fn apply(&self, t: T, v: &DVector<C<T>>) -> Result<DVector<C<T>>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        let u = &self.eig.vectors;
        let mut coeff = u.ad_mul(v);
        for (c, &lambda) in coeff.iter_mut().zip(self.eig.values.iter()) {
            *c *= cis(t * lambda);
        }
        Ok(u * coeff)
    }

    /// The full unitary `e^{itH}`.
    pub fn unitary(&self, t: T) -> DMatrix<C<T>> {
        let u = &self.eig.vectors;
        let mut scaled = u.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= cis(t * self.eig.values[j]);
        }
        matmul_adjoint(&scaled, u)
    }
}

pub fn dense_evolve<T: Real>(h: &HermitianMatrix<T>, t: T, v: &DVector<C<T>>) -> Result<DVector<C<T>>> {
    Propagator::new(h)?.apply(t, v)
}

/// `e^{itH} v` for a normalized `v`, dispatching on `strategy`.
pub fn evolve_action<T: Real>(
    h: &HermitianMatrix<T>,
    t: T,
    v: &DVector<C<T>>,
    strategy: EvolveStrategy,
) -> Result<DVector<C<T>>> {
    if v.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: v.len() });
    }
    let norm = v.norm();
    if (norm - T::one()).abs() > tol::<T>(1e-10) {
        return Err(Error::NotNormalized { norm: to_f64(norm) });
    }
    let dense = match strategy {
        EvolveStrategy::Auto => h.dim() <= DENSE_EVOLVE_MAX_DIM,
        EvolveStrategy::Dense => true,
        EvolveStrategy::Krylov => false,
    };
    if dense {
        dense_evolve(h, t, v)
    } else {
        krylov_evolve(h, t, v, &KrylovOptions::default())
    }
}

struct LanczosBasis<T: Real> {
    vectors: Vec<DVector<C<T>>>,
    alpha: Vec<T>,
    /// `beta[j]` couples basis vectors `j` and `j + 1`; the last entry is the
    /// residual norm used for the error estimate.
    beta: Vec<T>,
    invariant: bool,
}

fn lanczos<T: Real, O: HermitianOperator<T> + ?Sized>(op: &O, start: DVector<C<T>>, size: usize) -> LanczosBasis<T> {
    let dim = op.dim();
    let size = size.min(dim).max(1);
    let mut vectors: Vec<DVector<C<T>>> = Vec::with_capacity(size);
    let mut alpha = Vec::with_capacity(size);
    let mut beta = Vec::with_capacity(size);
    let mut invariant = false;
    let mut r = DVector::<C<T>>::zeros(dim);
    vectors.push(start);
    let mut scale = T::zero();
    for j in 0..size {
        op.apply(vectors[j].as_slice(), r.as_mut_slice());
        let a = vectors[j].dotc(&r).re;
        alpha.push(a);
        // full reorthogonalization, two passes
        for _ in 0..2 {
            for q in &vectors {
                let proj = q.dotc(&r);
                r.axpy(-proj, q, C::new(T::one(), T::zero()));
            }
        }
        let b = r.norm();
        scale = scale.max(a.abs()).max(b);
        beta.push(b);
        if b <= tol::<T>(1e-13) * scale.max(T::one()) {
            invariant = true;
            break;
        }
        if j + 1 < size {
            vectors.push(r.unscale(b));
        }
    }
    LanczosBasis { vectors, alpha, beta, invariant }
}

/// `e^{itH} v` with a Lanczos basis of at most `opts.subspace` vectors per
/// step and adaptive step sizes.
///
/// A step is accepted when the a-posteriori error estimate and the change of
/// the norm both stay below their tolerances; otherwise the step is halved.
pub fn krylov_evolve<T: Real, O: HermitianOperator<T> + ?Sized>(
    op: &O,
    t: T,
    v: &DVector<C<T>>,
    opts: &KrylovOptions<T>,
) -> Result<DVector<C<T>>> {
    if v.len() != op.dim() {
        return Err(Error::DimensionMismatch { expected: op.dim(), found: v.len() });
    }
    if t == T::zero() {
        return Ok(v.clone());
    }
    let sign = t.signum();
    let mut remaining = t.abs();
    let min_step = t.abs() * lit(1e-14);
    let mut step = remaining;
    let mut w = v.clone();
    let mut steps = 0usize;
    while remaining > T::zero() {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::NoConvergence { what: "Krylov propagation" });
        }
        let beta0 = w.norm();
        if beta0 == T::zero() {
            return Ok(w);
        }
        let basis = lanczos(op, w.unscale(beta0), opts.subspace);
        let k = basis.vectors.len();
        let tri = DMatrix::<T>::from_fn(k, k, |i, j| {
            if i == j {
                basis.alpha[i]
            } else if i + 1 == j {
                basis.beta[i]
            } else if j + 1 == i {
                basis.beta[j]
            } else {
                T::zero()
            }
        });
        let eig = SymmetricEigen::new(tri);
        let residual = if basis.invariant { T::zero() } else { basis.beta[k - 1] };
        loop {
            let h = if step < remaining { step } else { remaining };
            if h < min_step {
                return Err(Error::NoConvergence { what: "Krylov step-size control" });
            }
            // y = S diag(e^{i h θ}) S^T e_0
            let mut y = DVector::<C<T>>::zeros(k);
            for (p, &theta) in eig.eigenvalues.iter().enumerate() {
                let weight = cis(sign * h * theta) * eig.eigenvectors[(0, p)];
                for i in 0..k {
                    y[i] += weight * eig.eigenvectors[(i, p)];
                }
            }
            let err = beta0 * residual * y[k - 1].norm_sqr().sqrt();
            if err > opts.step_tol * beta0 {
                step = h * lit(0.5);
                continue;
            }
            let mut next = DVector::<C<T>>::zeros(w.len());
            for (q, &c) in basis.vectors.iter().zip(y.iter()) {
                next.axpy(c * beta0, q, C::new(T::one(), T::zero()));
            }
            let drift = (next.norm() - beta0).abs();
            if drift > opts.drift_tol * beta0 {
                step = h * lit(0.5);
                continue;
            }
            w = next;
            if h >= remaining {
                remaining = T::zero();
            } else {
                remaining -= h;
            }
            if err < opts.step_tol * beta0 * lit(1e-3) {
                step = h * lit(1.5);
            } else {
                step = h;
            }
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(dim: usize, seed: u64) -> HermitianMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        HermitianMatrix::new((&g + g.adjoint()).map(|z| z * 0.5)).unwrap()
    }

    fn random_state(dim: usize, seed: u64) -> DVector<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = DVector::from_fn(dim, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let n = v.norm();
        v.unscale(n)
    }

    #[test]
    fn zero_time_is_identity() {
        let h = random_hermitian(8, 1);
        let v = random_state(8, 2);
        for s in [EvolveStrategy::Dense, EvolveStrategy::Krylov] {
            let w = evolve_action(&h, 0.0, &v, s).unwrap();
            assert!((w - &v).norm() < 1e-14);
        }
    }

    #[test]
    fn eigenvector_picks_up_phase() {
        let z = HermitianMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[1.0, 0.0, 0.0, -1.0].map(Complex64::from),
        ))
        .unwrap();
        let up = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        for &t in &[0.3, -1.7, 12.0] {
            for s in [EvolveStrategy::Dense, EvolveStrategy::Krylov] {
                let w = evolve_action(&z, t, &up, s).unwrap();
                assert!((w[0] - Complex64::from_polar(1.0, t)).norm() < 1e-13);
                assert!(w[1].norm() < 1e-13);
            }
        }
    }

    #[test]
    fn krylov_agrees_with_dense() {
        let h = random_hermitian(64, 7);
        let v = random_state(64, 8);
        let dense = evolve_action(&h, 0.7, &v, EvolveStrategy::Dense).unwrap();
        let krylov = evolve_action(&h, 0.7, &v, EvolveStrategy::Krylov).unwrap();
        assert!((dense - krylov).camax() < 1e-8);
    }

    #[test]
    fn long_times_take_several_steps() {
        let h = random_hermitian(200, 5);
        let v = random_state(200, 6);
        let dense = evolve_action(&h, 25.0, &v, EvolveStrategy::Dense).unwrap();
        let krylov = evolve_action(&h, 25.0, &v, EvolveStrategy::Krylov).unwrap();
        assert!((dense - krylov).camax() < 1e-8);
    }

    #[test]
    fn rejects_bad_inputs() {
        let h = random_hermitian(4, 1);
        let v = random_state(3, 2);
        assert!(matches!(evolve_action(&h, 1.0, &v, EvolveStrategy::Auto), Err(Error::DimensionMismatch { .. })));
        let w = random_state(4, 2) * Complex64::new(2.0, 0.0);
        assert!(matches!(evolve_action(&h, 1.0, &w, EvolveStrategy::Auto), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn unitary_matches_action() {
        let h = random_hermitian(16, 4);
        let v = random_state(16, 9);
        let p = Propagator::new(&h).unwrap();
        let u = p.unitary(0.9);
        assert!((&u * &v - p.apply(0.9, &v).unwrap()).camax() < 1e-13);
        assert!((u.adjoint() * &u - DMatrix::<Complex64>::identity(16, 16)).camax() < 1e-12);
    }
}
