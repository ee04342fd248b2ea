use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::dense::HermitianOperator;
use crate::error::{Error, Result};
use crate::num::{is_nan, lit, to_f64, tol, Real, C};

/// Hermitian tolerance enforced on construction (absolute, entrywise).
const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix. Construction checks `A = A^H` entrywise and then
/// symmetrizes exactly, so downstream solvers see a bit-exact Hermitian input.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    entries: DMatrix<C<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn new(entries: DMatrix<C<T>>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let dev = hermitian_deviation(&entries);
        if is_nan(dev) || dev > tol::<T>(HERMITIAN_TOL) {
            return Err(Error::NotHermitian { deviation: to_f64(dev) });
        }
        Ok(Self::symmetrized(entries))
    }

    /// Skips the check; the input is still symmetrized.
    pub(crate) fn symmetrized(entries: DMatrix<C<T>>) -> Self {
        let half: T = lit(0.5);
        let adj = entries.adjoint();
        let entries = (entries + adj).map(|z| z * half);
        Self { entries }
    }

    pub fn from_real_symmetric(a: &DMatrix<T>) -> Result<Self> {
        Self::new(a.map(|x| C::new(x, T::zero())))
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: DMatrix::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C<T>> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<C<T>> {
        self.entries
    }
}

impl<T: Real> HermitianOperator<T> for HermitianMatrix<T> {
    fn dim(&self) -> usize {
        self.entries.nrows()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        let n = self.dim();
        y.iter_mut().for_each(|v| *v = C::new(T::zero(), T::zero()));
        for (j, &xj) in x.iter().enumerate().take(n) {
            for (yi, &a) in y.iter_mut().zip(self.entries.column(j).iter()) {
                *yi += a * xj;
            }
        }
    }
}

pub(crate) fn hermitian_deviation<T: Real>(a: &DMatrix<C<T>>) -> T {
    let n = a.nrows();
    let mut dev = T::zero();
    for j in 0..n {
        for i in 0..=j {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm_sqr().sqrt();
            if d > dev || is_nan(d) {
                dev = d;
            }
        }
    }
    dev
}

/// Eigenvalues in nondecreasing order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenSystem<T: Real> {
    pub values: DVector<T>,
    pub vectors: DMatrix<C<T>>,
}

impl<T: Real> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `‖A − UΛU^H‖` in Frobenius norm, which bounds the operator norm.
    pub fn reconstruction_residual(&self, a: &HermitianMatrix<T>) -> T {
        let u = &self.vectors;
        let mut scaled = u.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= C::new(self.values[j], T::zero());
        }
        (a.as_matrix() - scaled * u.adjoint()).norm()
    }

    /// `‖U^H U − I‖` in Frobenius norm.
    pub fn orthonormality_defect(&self) -> T {
        let n = self.dim();
        (self.vectors.adjoint() * &self.vectors - DMatrix::<C<T>>::identity(n, n)).norm()
    }
}

fn iteration_budget(dim: usize) -> usize {
    10_000 + 200 * dim
}

pub fn hermitian_eigensystem<T: Real>(a: &HermitianMatrix<T>) -> Result<EigenSystem<T>> {
    let n = a.dim();
    let eig = SymmetricEigen::try_new(a.as_matrix().clone(), T::default_epsilon(), iteration_budget(n))
        .ok_or(Error::NoConvergence { what: "Hermitian eigensolver" })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).expect("finite eigenvalues"));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenSystem { values, vectors })
}

/// Spectrum only, sorted nondecreasing; cheaper than the full eigensystem.
pub fn hermitian_eigenvalues<T: Real>(a: &HermitianMatrix<T>) -> Vec<T> {
    let mut v: Vec<T> = a.as_matrix().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    v
}

/// Spectrum of a real symmetric matrix, sorted nondecreasing.
pub fn symmetric_eigenvalues<T: Real>(a: &DMatrix<T>) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    let mut v: Vec<T> = a.symmetric_eigenvalues().iter().copied().collect();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NoConvergence { what: "symmetric eigensolver" });
    }
    v.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(v)
}
