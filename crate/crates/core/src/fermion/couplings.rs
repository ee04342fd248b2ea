use super::symbol::PiecewiseSymbol;
use crate::error::{Error, Result};
use crate::linalg::{fourier_coefficient, QuadratureSpec};
use crate::num::{cis, lit, to_f64, tol, Real, C};

/// Fourier coefficient of a real symbol that must come out real; fails with
/// the offending index otherwise.
pub(crate) fn real_coefficient<T: Real>(f: &crate::linalg::PiecewiseConstant<T>, k: i64) -> Result<T> {
    let q = QuadratureSpec::for_function(f);
    let c = fourier_coefficient(f, k, &q)?;
    if c.im.abs() > tol::<T>(1e-12) {
        return Err(Error::RealnessViolation { index: k, imag: to_f64(c.im) });
    }
    Ok(c.re)
}

/// `M_k = (1/2π) ∫_0^{2π} φ(x) e^{−ikx} dx`.
pub fn coupling_from_symbol<T: Real>(symbol: &PiecewiseSymbol<T>, k: i64) -> Result<T> {
    if k < 0 {
        return Err(Error::InvalidArgument(format!("coupling index {k} must be nonnegative")));
    }
    real_coefficient(symbol.as_piecewise(), k)
}

/// The closed form `M_k = −i (e^{ikπ/2} − 1)^3 (1 + e^{ikπ/2}) / (2 e^{2πik} k π)`
/// of the couplings of [`PiecewiseSymbol::paper`], evaluated as written.
pub fn paper_coupling_closed_form<T: Real>(k: i64) -> Result<T> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!("closed form needs k >= 1, got {k}")));
    }
    let kf = lit::<T>(k as f64);
    let one = C::new(T::one(), T::zero());
    let q = cis(kf * T::frac_pi_2());
    let num = (q - one).powi(3) * (one + q) * C::new(T::zero(), -T::one());
    let den = cis(kf * T::two_pi()) * C::new(lit::<T>(2.0) * kf * T::pi(), T::zero());
    let value = num / den;
    if value.im.abs() > tol::<T>(1e-12) {
        return Err(Error::RealnessViolation { index: k, imag: to_f64(value.im) });
    }
    Ok(value.re)
}

/// Couplings `M_0 ..= M_{k_max}` of a symmetric hopping matrix,
/// `M_{−k} = M_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingSequence<T> {
    entries: Vec<T>,
}

impl<T: Real> CouplingSequence<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("coupling sequence is empty".into()));
        }
        Ok(Self { entries })
    }

    pub fn from_symbol(symbol: &PiecewiseSymbol<T>, k_max: usize) -> Result<Self> {
        let entries = (0..=k_max as i64).map(|k| coupling_from_symbol(symbol, k)).collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn k_max(&self) -> usize {
        self.entries.len() - 1
    }

    /// `M_k` for any integer `k`; zero beyond `k_max`.
    pub fn get(&self, k: i64) -> T {
        self.entries.get(k.unsigned_abs() as usize).copied().unwrap_or_else(T::zero)
    }

    /// Smallest `C` with `|M_k| ≤ C/k` for `k ≥ 1`.
    pub fn decay_constant(&self) -> T {
        self.entries
            .iter()
            .enumerate()
            .skip(1)
            .fold(T::zero(), |c, (k, &m)| c.max(m.abs() * lit(k as f64)))
    }

    /// First row of the circulant hopping matrix on a ring of `n` sites:
    /// `c_j = M_{min(j, n−j)}`.
    pub fn ring_row(&self, n: usize) -> Vec<T> {
        (0..n).map(|j| self.get(j.min(n - j) as i64)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn two_jump_couplings() {
        let s = PiecewiseSymbol::<f64>::paper();
        // piece areas (π/2 − π + π/2)/2π
        assert!(coupling_from_symbol(&s, 0).unwrap().abs() < 1e-15);
        assert!((coupling_from_symbol(&s, 1).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!(coupling_from_symbol(&s, 2).unwrap().abs() < 1e-15);
        assert!((coupling_from_symbol(&s, 3).unwrap() + 2.0 / (3.0 * PI)).abs() < 1e-15);
        assert!(coupling_from_symbol(&s, -1).is_err());
    }

    #[test]
    fn closed_form_low_orders() {
        assert!((paper_coupling_closed_form::<f64>(1).unwrap() - 2.0 / PI).abs() < 1e-15);
        assert!(paper_coupling_closed_form::<f64>(2).unwrap().abs() < 1e-15);
        assert!((paper_coupling_closed_form::<f64>(3).unwrap() + 2.0 / (3.0 * PI)).abs() < 1e-15);
        assert!((paper_coupling_closed_form::<f64>(5).unwrap() - 2.0 / (5.0 * PI)).abs() < 1e-15);
        assert!(paper_coupling_closed_form::<f64>(0).is_err());
    }

    #[test]
    fn asymmetric_symbol_is_not_real() {
        let s = PiecewiseSymbol::new(vec![0.0, 1.0, 2.0 * PI], vec![1.0, -1.0]).unwrap();
        assert!(matches!(coupling_from_symbol(&s, 1), Err(Error::RealnessViolation { index: 1, .. })));
    }

    #[test]
    fn coulomb_like_decay() {
        let m = CouplingSequence::from_symbol(&PiecewiseSymbol::<f64>::paper(), 200).unwrap();
        assert!((m.decay_constant() - 2.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn ring_row_symmetrized() {
        let m = CouplingSequence::new(vec![0.5, 1.0, 2.0]).unwrap();
        assert_eq!(m.ring_row(5), vec![0.5, 1.0, 2.0, 2.0, 1.0]);
        assert_eq!(m.ring_row(8), vec![0.5, 1.0, 2.0, 0.0, 0.0, 0.0, 2.0, 1.0]);
    }
}
