//! Sequence-form strategies for tree-form decision problems.

pub mod best_response;
pub mod dynamics;
pub mod spanning;
pub mod tree;

pub use best_response::{efpe_best_response, inner, lower_bound_best_response, ResponseError};
pub use dynamics::{run_efg_dynamics, EfgConfig, EfgError, EfgGame, EfgResult, EfgScheme};
pub use spanning::{optimal_spanning_set, proper_best_response, SpanningSet};
pub use tree::{
    hypercube_tree, simplex_tree, tree_from_nested, tree_to_nested, validate_tfdp, DecisionPoint, NestedAction,
    NestedDecision, TreeError, TreeFormDecisionProblem, ValidatedTree,
};
