use nalgebra::{DMatrix, SVD};

use super::dense::{matmul, matmul_adjoint};
use super::hermitian::{hermitian_deviation, hermitian_eigenvalues, HermitianMatrix};
use crate::error::{Error, Result};
use crate::num::{Real, C};

/// Singular values in nonincreasing order; `min(rows, cols)` of them.
pub fn singular_values<T: Real>(a: &DMatrix<C<T>>) -> Result<Vec<T>> {
    check_finite(a)?;
    let k = a.nrows().min(a.ncols());
    if k == 0 {
        return Ok(Vec::new());
    }
    let budget = 10_000 + 200 * k;
    let svd = SVD::try_new(a.clone(), false, false, T::default_epsilon(), budget)
        .ok_or(Error::NoConvergence { what: "singular value decomposition" })?;
    let mut s: Vec<T> = svd.singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    Ok(s)
}

/// Largest singular value.
///
/// Hermitian and anti-Hermitian inputs (commutators of Hermitian operators,
/// differences of Heisenberg-evolved observables) go through the cheaper
/// eigenvalue route; everything else through the SVD.
pub fn operator_norm<T: Real>(a: &DMatrix<C<T>>) -> Result<T> {
    check_finite(a)?;
    if a.is_empty() {
        return Ok(T::zero());
    }
    if a.is_square() {
        let scale = a.iter().fold(T::zero(), |m, z| m.max(z.norm_sqr().sqrt()));
        if scale == T::zero() {
            return Ok(T::zero());
        }
        let exact = T::default_epsilon() * scale;
        if hermitian_deviation(a) <= exact {
            return Ok(spectral_radius(HermitianMatrix::symmetrized(a.clone())));
        }
        let i_a = a.map(|z| C::new(-z.im, z.re));
        if hermitian_deviation(&i_a) <= exact {
            return Ok(spectral_radius(HermitianMatrix::symmetrized(i_a)));
        }
    }
    if a.nrows().min(a.ncols()) > GRAM_NORM_MIN_DIM {
        let gram = if a.nrows() >= a.ncols() { matmul(&a.adjoint(), a) } else { matmul_adjoint(a, a) };
        return Ok(spectral_radius(HermitianMatrix::symmetrized(gram)).sqrt());
    }
    Ok(singular_values(a)?[0])
}

/// Above this size a general matrix norm is taken as `sqrt(λ_max(A†A))`
/// instead of through a full SVD.
const GRAM_NORM_MIN_DIM: usize = 128;

fn spectral_radius<T: Real>(h: HermitianMatrix<T>) -> T {
    let ev = hermitian_eigenvalues(&h);
    ev[0].abs().max(ev[ev.len() - 1].abs())
}

fn check_finite<T: Real>(a: &DMatrix<C<T>>) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("matrix has non-finite entries".into()))
    }
}
