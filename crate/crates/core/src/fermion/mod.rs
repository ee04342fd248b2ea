//! Quasi-free fermions on a line whose hopping matrix has a piecewise-constant
//! symbol: couplings, dispersion, ground-state correlations of a block and
//! its entropy.

mod couplings;
mod ring;
mod scaling;
mod symbol;
mod toeplitz;

pub use couplings::{coupling_from_symbol, paper_coupling_closed_form, CouplingSequence};
pub use ring::{dispersion, finite_ring_crosscheck, Dispersion, RingCheck};
pub use scaling::{fh_scaling_fit, ScalingReport, ScalingRow};
pub use symbol::PiecewiseSymbol;
pub use toeplitz::{
    binary_entropy, build_correlation_matrix, correlation_entries, determinant_diagnostic, determinant_from_spectrum,
    entropy_from_spectrum, gaussian_block_entropy, hermitian_block_spectrum, CorrelationToeplitz, DeterminantDiagnostic,
};
