//! Desk-scale laboratory for entanglement scaling in one-dimensional quantum
//! systems.
//!
//! - [`linalg`]: dense Hermitian eigensystems, singular values, the action of
//!   `e^{itH}`, log-determinants, operator norms and exact Fourier integrals of
//!   piecewise-constant functions.
//! - [`spin`]: quenches of open spin-1/2 chains with two-site interactions,
//!   Schmidt spectra and block entropies, the patch-unitary hierarchy across a
//!   cut, light-cone probes and the parent hamiltonian `K = e^{itH} Z e^{-itH}`.
//! - [`fermion`]: quasi-free fermions with a piecewise-constant dispersion,
//!   their Toeplitz correlation matrices, block entropies and determinant
//!   scaling.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`). The aliases below
//! fix the scalar to `f64`, which is what the experiment runner uses.

pub mod error;
pub mod fermion;
pub mod linalg;
pub mod num;
pub mod spin;
pub mod stats;

pub use error::{Error, Result};
pub use num::Real;

pub type Complex64 = num_complex::Complex<f64>;

pub type HermitianMatrix = linalg::HermitianMatrix<f64>;
pub type EigenSystem = linalg::EigenSystem<f64>;
pub type QuadratureSpec = linalg::QuadratureSpec<f64>;
pub type PiecewiseConstant = linalg::PiecewiseConstant<f64>;

pub type LocalHamiltonian = spin::LocalHamiltonian<f64>;
pub type BondSum = spin::BondSum<f64>;
pub type StateVector = spin::StateVector<f64>;
pub type SchmidtSpectrum = spin::SchmidtSpectrum<f64>;
pub type EntropyCurve = spin::EntropyCurve<f64>;
pub type HierarchyReport = spin::HierarchyReport<f64>;

pub type PiecewiseSymbol = fermion::PiecewiseSymbol<f64>;
pub type CouplingSequence = fermion::CouplingSequence<f64>;
pub type CorrelationToeplitz = fermion::CorrelationToeplitz<f64>;
pub type ScalingReport = fermion::ScalingReport<f64>;
