//! Dense numerics kernel.
//!
//! All routines are pure functions of their inputs. Matrices are `nalgebra`
//! dense matrices over [`C<T>`](crate::num::C) (or `T` where the data is
//! real); vectors are column vectors.

mod dense;
mod det;
mod expm;
mod fourier;
mod hermitian;
mod norms;
mod weyl;

pub use dense::{embed_operator, identity, kron, matmul, matmul_adjoint, HermitianOperator};
pub use det::{log_abs_determinant, LogDet, SINGULAR_PIVOT};
pub use expm::{
    dense_evolve, evolve_action, krylov_evolve, EvolveStrategy, KrylovOptions, Propagator,
    DENSE_EVOLVE_MAX_DIM,
};
pub use fourier::{fourier_coefficient, PiecewiseConstant, QuadratureSpec};
pub use hermitian::{
    hermitian_eigensystem, hermitian_eigenvalues, symmetric_eigenvalues, EigenSystem, HermitianMatrix,
};
pub use norms::{operator_norm, singular_values};
pub use weyl::{weyl_perturbation_check, WeylReport};
