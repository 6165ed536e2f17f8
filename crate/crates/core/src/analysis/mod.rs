//! Phase-space tests on operator sets: Poisson brackets, Jacobian ranks of
//! main parts, commutation and integrability, dependence witnesses and the
//! necessary conditions for regular dependence.
//!
//! Every "almost everywhere" statement is checked at sampled points only.

mod dependence;
mod integrable;
mod linalg;
mod necessary;
mod poisson;
mod rank;
mod sample;

pub use dependence::{
    check_algebraic_dependence, check_containment_chain, check_regular_correlation, check_span_containment, ChainLink,
    ChainReport, CorrelationReport, CorrelationVerdict, DependenceReport, DependenceVerdict, SpanReport, VariableMap,
};
pub use integrable::{
    check_bracket_bridge, check_classical_commutation, check_commutation, check_family_bound, check_integrable_set,
    BridgeReport, CommutationEntry, CommutationMatrix, FamilyBoundReport, IntegrableReport, IntegrableVerdict,
};
pub use necessary::{
    check_necessary_dependence_condition, check_preind2_relations, second_main_covector, NecessaryReport,
    NecessaryVerdict, Preind2Report,
};
pub use poisson::{poisson_bracket, poisson_semibracket};
pub use rank::{
    main_dimension, perturbed_ranks, quasi_independence, rank_bracket, symbol_independence, PointRank, RankBracket,
    RankReport, RankVerdict,
};
pub use sample::{PhaseSample, PhaseSampler, Provenance};

#[cfg(test)]
mod tests;
