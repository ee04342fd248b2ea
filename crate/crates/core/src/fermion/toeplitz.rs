use nalgebra::DMatrix;

use super::couplings::real_coefficient;
use super::symbol::PiecewiseSymbol;
use crate::error::{Error, Result};
use crate::linalg::{
    fourier_coefficient, hermitian_eigenvalues, log_abs_determinant, symmetric_eigenvalues, HermitianMatrix,
    QuadratureSpec, SINGULAR_PIVOT,
};
use crate::num::{lit, to_f64, Real};

/// Eigenvalues this far outside `[−1, 1]` are rejected rather than clamped.
const CLAMP_BAND: f64 = 1e-6;

/// `t_l = (1/2π) ∫ e^{−ilx} φ(x)/|φ(x)| dx` for `l = 0..m`.
pub fn correlation_entries<T: Real>(symbol: &PiecewiseSymbol<T>, m: usize) -> Result<Vec<T>> {
    let sign = symbol.sign();
    (0..m as i64).map(|l| real_coefficient(&sign, l)).collect()
}

/// Real symmetric Toeplitz matrix `T_m` with entries `t_{|i−j|}`, the
/// ground-state sign correlations of a block of `m` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationToeplitz<T> {
    entries: Vec<T>,
}

impl<T: Real> CorrelationToeplitz<T> {
    pub fn from_entries(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("Toeplitz matrix needs m >= 1".into()));
        }
        Ok(Self { entries })
    }

    pub fn m(&self) -> usize {
        self.entries.len()
    }

    /// `t_0 ..= t_{m−1}`.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn matrix(&self) -> DMatrix<T> {
        let m = self.m();
        DMatrix::from_fn(m, m, |i, j| self.entries[i.abs_diff(j)])
    }

    /// Spectrum `ν_j`, sorted nondecreasing.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        symmetric_eigenvalues(&self.matrix())
    }
}

pub fn build_correlation_matrix<T: Real>(symbol: &PiecewiseSymbol<T>, m: usize) -> Result<CorrelationToeplitz<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("block size must be at least 1".into()));
    }
    CorrelationToeplitz::from_entries(correlation_entries(symbol, m)?)
}

/// Binary entropy `H₂(p)` in bits with `0·log 0 = 0`.
pub fn binary_entropy<T: Real>(p: T) -> T {
    let term = |x: T| if x > T::zero() { -x * x.log2() } else { T::zero() };
    term(p) + term(T::one() - p)
}

/// `S = Σ_j H₂((1 + ν_j)/2)` in bits. Eigenvalues within `1e-6` outside
/// `[−1, 1]` are clamped; further out they are an error.
pub fn gaussian_block_entropy<T: Real>(t: &CorrelationToeplitz<T>) -> Result<T> {
    entropy_from_spectrum(&t.eigenvalues()?)
}

pub fn entropy_from_spectrum<T: Real>(nu: &[T]) -> Result<T> {
    let band = T::one() + lit::<T>(CLAMP_BAND);
    let half = T::one() / (T::one() + T::one());
    let mut s = T::zero();
    for &v in nu {
        if v.abs() > band {
            return Err(Error::InvalidCorrelation { value: to_f64(v) });
        }
        let v = v.max(-T::one()).min(T::one());
        s += binary_entropy((T::one() + v) * half);
    }
    Ok(s)
}

/// Spectrum of the Hermitian Toeplitz matrix `(t_{i−j})` of a symbol that
/// need not be even, where the `t_l` are complex with `t_{−l} = conj(t_l)`.
pub fn hermitian_block_spectrum<T: Real>(symbol: &PiecewiseSymbol<T>, m: usize) -> Result<Vec<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("block size must be at least 1".into()));
    }
    let sign = symbol.sign();
    let q = QuadratureSpec::for_function(&sign);
    let t = (0..m as i64).map(|l| fourier_coefficient(&sign, l, &q)).collect::<Result<Vec<_>>>()?;
    let a = DMatrix::from_fn(m, m, |i, j| if i >= j { t[i - j] } else { t[j - i].conj() });
    Ok(hermitian_eigenvalues(&HermitianMatrix::new(a)?))
}

/// Determinant diagnostic from a spectrum: `ln|det| = Σ ln|ν_j|`.
pub fn determinant_from_spectrum<T: Real>(nu: &[T]) -> DeterminantDiagnostic<T> {
    let cutoff = lit::<T>(SINGULAR_PIVOT);
    if nu.iter().any(|v| v.abs() < cutoff) {
        let inf = T::one() / T::zero();
        return DeterminantDiagnostic { log_abs_det: -inf, d_det: inf, singular: true };
    }
    let log_abs_det = nu.iter().fold(T::zero(), |s, v| s + v.abs().ln());
    DeterminantDiagnostic { log_abs_det, d_det: -log_abs_det / (lit::<T>(2.0) * T::ln_2()), singular: false }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeterminantDiagnostic<T> {
    /// `ln |det T_m|`; `−∞` when singular.
    pub log_abs_det: T,
    /// `−½ log₂ |det T_m|`; `+∞` when singular.
    pub d_det: T,
    pub singular: bool,
}

pub fn determinant_diagnostic<T: Real>(t: &CorrelationToeplitz<T>) -> Result<DeterminantDiagnostic<T>> {
    let det = log_abs_determinant(&t.matrix())?;
    if det.is_singular() {
        let inf = T::one() / T::zero();
        return Ok(DeterminantDiagnostic { log_abs_det: -inf, d_det: inf, singular: true });
    }
    let d_det = -det.log_abs / (lit::<T>(2.0) * T::ln_2());
    Ok(DeterminantDiagnostic { log_abs_det: det.log_abs, d_det, singular: false })
}
