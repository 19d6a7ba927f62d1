//! Route planning against a budgeted interdictor, solved as a zero-sum game.
//!
//! Blue picks a start→release path and pays its traverse penalties plus the
//! interdiction penalty of every interdicted edge it crosses. Red picks a set
//! of interdiction groups within a budget. [`solve`] runs a double-oracle loop
//! whose oracles are a shortest-path search ([`best_response_blue`]) and an
//! exact knapsack ([`best_response_red`]), and returns an ε-certified
//! equilibrium.
//!
//! ```
//! use contested_routing::{generate_line_knapsack, solve};
//!
//! // Three edges in a row; Red can afford items worth 5 + 4 with budget 3.
//! let scenario = generate_line_knapsack(&[1, 2, 2], &[5.0, 4.0, 3.0], 3, None).unwrap();
//! let eq = solve(&scenario, 100).unwrap();
//! assert_eq!(eq.value, 3.0 + 9.0);
//! ```
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod blue;
pub mod double_oracle;
mod error;
pub mod game;
pub mod generate;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod mixed;
pub mod prepare;
pub mod red;
mod simplex;

pub use blue::{astar_heuristic, best_response_blue, expected_lengths, EdgeLengthField, Search};
pub use double_oracle::{
    evaluate_exploitability, initial_subgame, solve, EquilibriumResult, IterationRecord,
    DEFAULT_MAX_ITERS,
};
pub use error::{Error, Result};
pub use game::{
    payoff_matrix, solve_matrix, solve_zero_sum, utility, MatrixSolution, RestrictedGame,
};
pub use generate::{generate_grid, generate_line_knapsack};
pub use graph::{
    interdicted_edges, validate_interdiction, validate_route, EdgeId, EdgeRecord, GroupId,
    InterdictionPlan, NodeId, NodeRecord, PhysicalGraph, RoutePlan, Scenario,
};
pub use metrics::{
    attack_distribution, fastest_route, mixed_throughput, red_aware_route, robustness_table,
    throughput, AttackCountDistribution, RobustnessTable,
};
pub use mixed::MixedStrategy;
pub use prepare::{assign_costs, assign_penalties};
pub use red::{best_response_red, build_knapsack, solve_knapsack, KnapsackInstance, KnapsackItem};
