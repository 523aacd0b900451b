//! Contextual probability for concepts and their combinations.
//!
//! Concepts are states that change under context ([`concept`]), combine into
//! entangled states ([`entangle`]), and produce correlation tables that can be
//! tested against Bell-type inequalities ([`bell`]) and for classical
//! realizability ([`kolmo`]). [`semantic`] holds a small latent semantic
//! analysis toolkit and the bag-of-words versus word-order comparison.

pub mod bell;
pub mod concept;
pub mod entangle;
mod error;
pub mod fixtures;
pub mod hilbert;
pub mod kolmo;
pub mod scenario;
pub mod semantic;

pub use bell::{
    bell_value, bell_value_all_forms, is_violated, pet_food_table, product_equality_check, sweep_case_c, BellForm,
    CorrelationTable, PetFoodScenario, ProductEqualityCheck, Singles, SweepRow,
};
pub use concept::{
    context_distribution, context_state, parse_ratings, rank_exemplars, typicality, ContextDistribution, RatingTable,
};
pub use entangle::{
    combine, conditional_collapse, guppy_gap, joint_expectation, marginal, parse_relation, CompatibilityRelation,
    EntangledState, Side,
};
pub use error::{Error, Result};
pub use hilbert::{
    born_prob, collapse, expectation, inner, normalize, tensor, Basis, Label, Observable, Projector, Sign, StateVector,
};
pub use kolmo::{
    classify, enumerate_strategies, is_kolmogorovian, realizable, Band, DeterministicStrategy, Realizability,
};
pub use scenario::{parse_scenario, Scenario};
pub use semantic::{
    bow_vector, build_matrix, order_representation, similarity, svd_truncate, SemanticSpace, TermDocMatrix,
};

/// Schema version stamped on every structured report.
pub const SCHEMA_VERSION: u32 = 1;
