//! Communication complexity problems: tasks, deterministic strategies,
//! induced behaviors, exact optimal classical scores and the compiler from
//! correlation Bell functionals.

mod behavior;
mod compile;
mod optimal;
mod strategy;
mod task;

pub use behavior::CcpBehavior;
pub use compile::{additive_classical_optimum, additive_multiparty_score, bell_to_ccp};
pub use optimal::{brute_force_classical_score, optimal_classical_score, ClassicalOptimum};
pub use strategy::{
    quantum_ccp_behavior, AssistedStrategy, ClassicalStrategy, DeterministicStrategy,
};
pub use task::{score, CcpTask, FactoredInput};

/// Encoder-sweep limit `M^{N_A}` for [`optimal_classical_score`].
pub const ENCODER_SWEEP_LIMIT: u128 = 100_000_000;

/// Full `(E, D)` enumeration limit for [`brute_force_classical_score`].
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// Input-space limit for [`additive_multiparty_score`].
pub const ADDITIVE_INPUT_LIMIT: u128 = 10_000_000;
