use super::hermitian::{hermitian_eigenvalues, HermitianMatrix};
use super::norms::operator_norm;
use crate::error::{Error, Result};
use crate::num::{tol, Real};

/// Outcome of comparing the sorted spectra of `P` and `P + Q` against `‖Q‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylReport<T> {
    pub max_shift: T,
    pub bound: T,
    pub holds: bool,
}

/// Checks `max_j |λ_j(P+Q) − λ_j(P)| ≤ ‖Q‖` on sorted spectra.
pub fn weyl_perturbation_check<T: Real>(p: &HermitianMatrix<T>, q: &HermitianMatrix<T>) -> Result<WeylReport<T>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let sum = HermitianMatrix::symmetrized(p.as_matrix() + q.as_matrix());
    let before = hermitian_eigenvalues(p);
    let after = hermitian_eigenvalues(&sum);
    let max_shift = before.iter().zip(&after).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
    let bound = operator_norm(q.as_matrix())?;
    Ok(WeylReport { max_shift, bound, holds: max_shift <= bound + tol::<T>(1e-10) })
}
