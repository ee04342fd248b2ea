use rayon::prelude::*;

use super::symbol::PiecewiseSymbol;
use super::toeplitz::{
    correlation_entries, determinant_diagnostic, determinant_from_spectrum, entropy_from_spectrum,
    gaussian_block_entropy, hermitian_block_spectrum, CorrelationToeplitz,
};
use crate::error::{Error, Result};
use crate::num::{lit, Real};
use crate::stats::{fit_line, LineFit};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingRow<T> {
    pub m: usize,
    pub s_exact: T,
    /// `−½ log₂ |det T_m|`, `+∞` when singular.
    pub d_det: T,
    /// `ln |det T_m|`, `−∞` when singular.
    pub log_abs_det: T,
    pub singular: bool,
}

impl<T: Real> ScalingRow<T> {
    /// `S(m) ≥ −½ log₂|det T_m|`; `None` where the inequality is not tested
    /// (singular `T_m` or `m = 1`).
    pub fn bound_holds(&self) -> Option<bool> {
        if self.singular || self.m < 2 {
            None
        } else {
            Some(self.s_exact >= self.d_det)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport<T> {
    pub rows: Vec<ScalingRow<T>>,
    /// `S ≈ a·log₂ m + b` over all rows.
    pub entropy_fit: LineFit<T>,
    /// `ln|det T_m| ≈ −d·ln m + e` over nonsingular rows.
    pub determinant_fit: LineFit<T>,
}

impl<T: Real> ScalingReport<T> {
    pub fn a(&self) -> T {
        self.entropy_fit.slope
    }

    pub fn d(&self) -> T {
        -self.determinant_fit.slope
    }

    /// Block sizes at which the determinant bound was tested and failed.
    pub fn bound_violations(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.bound_holds() == Some(false)).map(|r| r.m).collect()
    }
}

/// Exact entropies and determinant diagnostics of `T_m` for every block size
/// in `m_list`, with the logarithmic scaling fits. Even symbols use the real
/// Toeplitz matrix and a pivoted determinant; other symbols the Hermitian
/// matrix and its eigenvalues for both.
pub fn fh_scaling_fit<T: Real>(symbol: &PiecewiseSymbol<T>, m_list: &[usize]) -> Result<ScalingReport<T>> {
    let mut ms = m_list.to_vec();
    ms.sort_unstable();
    ms.dedup();
    if ms.first() == Some(&0) {
        return Err(Error::InvalidArgument("block size must be at least 1".into()));
    }
    if ms.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: ms.len() });
    }
    let rows = if symbol.is_even() {
        let entries = correlation_entries(symbol, *ms.last().expect("nonempty"))?;
        ms.par_iter()
            .map(|&m| {
                let t = CorrelationToeplitz::from_entries(entries[..m].to_vec())?;
                let s_exact = gaussian_block_entropy(&t)?;
                let det = determinant_diagnostic(&t)?;
                Ok(ScalingRow { m, s_exact, d_det: det.d_det, log_abs_det: det.log_abs_det, singular: det.singular })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        ms.par_iter()
            .map(|&m| {
                let nu = hermitian_block_spectrum(symbol, m)?;
                let s_exact = entropy_from_spectrum(&nu)?;
                let det = determinant_from_spectrum(&nu);
                Ok(ScalingRow { m, s_exact, d_det: det.d_det, log_abs_det: det.log_abs_det, singular: det.singular })
            })
            .collect::<Result<Vec<_>>>()?
    };

    let log2m: Vec<T> = rows.iter().map(|r| lit::<T>(r.m as f64).log2()).collect();
    let s: Vec<T> = rows.iter().map(|r| r.s_exact).collect();
    let entropy_fit = fit_line(&log2m, &s)?;

    let regular: Vec<&ScalingRow<T>> = rows.iter().filter(|r| !r.singular).collect();
    if regular.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: regular.len() });
    }
    let lnm: Vec<T> = regular.iter().map(|r| lit::<T>(r.m as f64).ln()).collect();
    let logdet: Vec<T> = regular.iter().map(|r| r.log_abs_det).collect();
    let determinant_fit = fit_line(&lnm, &logdet)?;
    Ok(ScalingReport { rows, entropy_fit, determinant_fit })
}
