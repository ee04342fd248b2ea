use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::num::{lit, Real};

/// Pivot magnitude below which a matrix is reported as singular.
pub const SINGULAR_PIVOT: f64 = 1e-300;

/// `log|det A|` together with the sign of the determinant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogDet<T> {
    /// Natural logarithm of `|det A|`; `-inf` when singular.
    pub log_abs: T,
    /// `-1`, `0` (singular) or `+1`.
    pub sign: i8,
}

impl<T: Real> LogDet<T> {
    pub fn is_singular(&self) -> bool {
        self.sign == 0
    }
}

/// Gaussian elimination with partial pivoting, accumulating `Σ log|u_ii|`.
pub fn log_abs_determinant<T: Real>(a: &DMatrix<T>) -> Result<LogDet<T>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: a.ncols() });
    }
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let n = a.nrows();
    let cutoff: T = lit(SINGULAR_PIVOT);
    let mut lu = a.clone();
    let mut log_abs = T::zero();
    let mut sign: i8 = 1;
    for k in 0..n {
        let (mut p, mut best) = (k, lu[(k, k)].abs());
        for i in k + 1..n {
            let v = lu[(i, k)].abs();
            if v > best {
                p = i;
                best = v;
            }
        }
        if best == T::zero() || best < cutoff {
            return Ok(LogDet { log_abs: -(T::one() / T::zero()), sign: 0 });
        }
        if p != k {
            lu.swap_rows(p, k);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        if pivot < T::zero() {
            sign = -sign;
        }
        log_abs += pivot.abs().ln();
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= f * u;
            }
        }
    }
    Ok(LogDet { log_abs, sign })
}
