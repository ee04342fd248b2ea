//! Ordinary least squares used by the scaling fits.

use crate::error::{Error, Result};
use crate::num::{lit, Real};

/// Straight-line fit `y ≈ slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Coefficient of determination; 1 when the data has no spread in `y`.
    pub r_squared: T,
}

impl<T: Real> LineFit<T> {
    pub fn eval(&self, x: T) -> T {
        self.slope * x + self.intercept
    }
}

pub fn fit_line<T: Real>(xs: &[T], ys: &[T]) -> Result<LineFit<T>> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: ys.len() });
    }
    if xs.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: xs.len() });
    }
    let n: T = lit(xs.len() as f64);
    let mx = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let my = ys.iter().fold(T::zero(), |a, &y| a + y) / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx <= T::zero() {
        return Err(Error::InvalidArgument("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .fold(T::zero(), |a, r| a + r);
    let r_squared = if syy <= T::zero() { T::one() } else { T::one() - ss_res / syy };
    Ok(LineFit { slope, intercept, r_squared })
}

/// Plane fit `z ≈ c0 + c1·x + c2·y` via the 3×3 normal equations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneFit<T> {
    pub coefficients: [T; 3],
    pub r_squared: T,
}

pub fn fit_plane<T: Real>(xs: &[T], ys: &[T], zs: &[T]) -> Result<PlaneFit<T>> {
    if xs.len() != ys.len() || xs.len() != zs.len() {
        return Err(Error::DimensionMismatch { expected: xs.len(), found: zs.len() });
    }
    if xs.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: xs.len() });
    }
    let mut a = nalgebra::Matrix3::<T>::zeros();
    let mut b = nalgebra::Vector3::<T>::zeros();
    for i in 0..xs.len() {
        let row = nalgebra::Vector3::new(T::one(), xs[i], ys[i]);
        a += row * row.transpose();
        b += row * zs[i];
    }
    let sol = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::InvalidArgument("plane fit design matrix is singular".into()))?;
    let n: T = lit(zs.len() as f64);
    let mz = zs.iter().fold(T::zero(), |s, &z| s + z) / n;
    let mut ss_res = T::zero();
    let mut ss_tot = T::zero();
    for i in 0..xs.len() {
        let r = zs[i] - (sol[0] + sol[1] * xs[i] + sol[2] * ys[i]);
        ss_res += r * r;
        ss_tot += (zs[i] - mz) * (zs[i] - mz);
    }
    let r_squared = if ss_tot <= T::zero() { T::one() } else { T::one() - ss_res / ss_tot };
    Ok(PlaneFit { coefficients: [sol[0], sol[1], sol[2]], r_squared })
}
