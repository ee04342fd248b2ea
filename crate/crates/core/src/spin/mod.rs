//! Open spin-1/2 chains with two-site interactions.

mod evolution;
mod fits;
mod hamiltonian;
mod hierarchy;
mod light_cone;
mod parent;
mod pauli;
mod state;

pub use evolution::{entropy_profile, entropy_profile_with, evolve, evolve_with, ChainEvolver, EntropyCurve, EntropyRow};
pub use fits::{
    entropy_envelope_fit, envelope_of, schmidt_tail_fit, EnvelopeFit, PooledTail, TailFit, TailFitReport,
};
pub use hamiltonian::{spectral_gap, BondSum, LocalHamiltonian, PauliTerm, Preset, MAX_DENSE_SPINS, MAX_SPINS};
pub use hierarchy::{
    boundary_commutator, hierarchy_window, interaction_split, patch_generator, patch_unitary, restricted_patch,
    w_hierarchy, weyl_chain, HierarchyReport, HierarchyRow, InteractionSplit, LocalUnitary, WeylStep,
};
pub use light_cone::{
    decay_fit, lightcone_probe, quasilocality_decay, DecayFit, LightconeRow, QuasilocalRow, QuasilocalityReport,
};
pub use parent::{cluster_state, k_hamiltonian_check, parent_hamiltonian, rotated_cluster_state, KCheckReport};
pub use pauli::Pauli;
pub use state::{block_entropy, schmidt_spectrum, von_neumann_entropy, CutPartition, SchmidtSpectrum, StateVector};

