//! Dimension groups of piecewise monotonic maps: stationary inductive
//! limits, Laurent presentations, states, infinitesimals and state ranges.

pub mod beta;
pub mod conjugacy;
pub mod group;
pub mod presentation;
pub mod subgroup;

pub use beta::{beta_itinerary, beta_presentation, BetaCase, BetaOrbit, BetaOutcome, BetaPresentation};
pub use conjugacy::{conjugacy_compare, ConjugacyReport, ConjugacyVerdict};
pub use group::{
    ga_equal, ga_equal_search, ga_positive, ga_state, infinitesimal_exists, infinitesimals_from_charpoly, Basis,
    GAElement, MarkovLimit, OrderRule, Positivity, POSITIVITY_DEPTH,
};
pub use presentation::{
    canonical_generators, component_states, componentwise_positive, cyclic_detect, direct_sum_decompose,
    markov_limit_from, markov_presentation, presentation, unimodal_presentation, CyclicCheck, DimensionTriple,
    LaurentCyclic, LaurentElement, LaurentOrder,
};
pub use subgroup::{state_range, Backend, SubgroupOfR};
