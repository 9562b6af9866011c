//! Symmetric matroid and network congestion games with trembling players.

pub mod delay;
pub mod matroid;
pub mod matroid_game;
pub mod network;

use thiserror::Error;

pub use delay::{count_distribution, perturbed_delay, perturbed_delay_table, tremble_probs};
pub use matroid::{check_axioms, combinations, Matroid};
pub use matroid_game::{
    loads, matroid_br, rosenthal_potential, run_matroid_dynamics, MatroidConfig, MatroidCongestionGame, MatroidResult,
};
pub use network::{
    dag_path_counts, enumerate_paths, path_loads, solve_network, symbolic_shortest_path, Digraph,
    NetworkCongestionGame, NetworkSolution,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CongestionError {
    #[error("congestion level {0} outside 0..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("invalid delays: {0}")]
    BadDelays(String),
    #[error("invalid matroid: {0}")]
    BadMatroid(String),
    #[error("invalid graph: {0}")]
    BadGraph(String),
    #[error("greedy could not complete a basis")]
    OracleInconsistency,
    #[error("{steps} improvement steps exceed the bound {bound}")]
    BoundViolation { steps: usize, bound: usize },
    #[error("potential did not decrease at step {0}")]
    PotentialNotDecreasing(usize),
    #[error("player order is not a permutation of the players")]
    BadOrder,
    #[error("sink is unreachable from the source")]
    Disconnected,
    #[error("negative-cost cycle in the residual graph")]
    NegativeSymbolicCost,
    #[error("delays on edge {0} decrease with load")]
    NonConvexDelay(usize),
    #[error("graph has a cycle; path counts must be supplied")]
    PathCountsRequired,
}
