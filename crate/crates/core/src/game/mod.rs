//! The clustering game: utilities, replicator dynamics and the stable state.

pub mod dynamics;
pub mod ess;
pub mod utility;

pub use dynamics::{
    fitness, mean_fitness, pairwise_utility, replicator_field, replicator_step, PopulationState, ReplicatorConfig,
    ReplicatorField, StepRule, SIMPLEX_TOL,
};
pub use ess::{
    certificate_entries, epsilon_star, jacobian, jacobian_diagnostic, normalize_utilities, run_to_ess, solve_ess,
    EpsilonStar, EssReport, JacobianCertificate, RunTrace, TraceRecord,
};
pub use utility::{
    gamma_sum, gamma_sum_explicit, utility_closed_form, utility_terms, utility_vector, StrategySet, UtilityTerms,
    UtilityVector,
};
