//! Simulator for two-step decoherence dynamics: continuous unitary
//! evolution interrupted by instantaneous stochastic transitions whose
//! timing is fixed by exact energy conservation.

pub mod decay;
pub mod error;
pub mod hilbert;
pub mod markov;
pub mod minimize;
pub mod rabi;
pub mod systems;
pub mod trajectory;
pub mod transition;

pub use decay::{
    build_decay_model, exponential_compare, survival_recurrence, DecayModel, DecayRegime,
};
pub use error::{Error, Result};
pub use hilbert::{
    energy_expectation, evolve_density, evolve_state, hermitian_eigendecompose, propagator,
    CMatrix, CVector, DensityMatrix, HamiltonianOperator, MixtureBasis, Propagator, StateVector,
    C64,
};
pub use markov::{
    chain_diagnostics, detailed_balance_check, detailed_balance_residual, net_balance,
    pauli_integrate, stationary_distribution, stationary_distribution_from, step_populations,
    transition_matrix, PopulationVector, RateMatrix, TransitionMatrix,
};
pub use rabi::{classify_regime, fixed_point, rabi_series, RabiConfig, RabiSeries, Regime};
pub use trajectory::{
    ensemble_populations, exact_populations, sample_trajectory, EnsembleEstimate, Execution,
    Schedule, Trajectory,
};
pub use transition::{
    born_probabilities, classify_energy_sectors, collapse_mixture, collapse_pure, commuting_check,
    find_transition_time, is_pure_transition, run_sequence, EnergySectors, FinderConfig,
    SequenceResult, SequenceStatus, Source, Timing, TransitionRecord,
};
