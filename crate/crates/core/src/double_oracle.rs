//! Double-oracle strategy generation.
//!
//! Each iteration solves the restricted game exactly, asks both best-response
//! oracles for a reply to the restricted equilibrium, and stops once the gap
//! between Red's best reply and Blue's best reply is at most ε. The
//! restricted equilibrium is then a 2ε-approximate equilibrium of the full
//! game.

use serde::{Deserialize, Serialize};

use crate::blue::{best_response_blue, shortest_route, EdgeLengthField};
use crate::error::{Error, Result};
use crate::game::{payoff_matrix, solve_matrix};
use crate::graph::{InterdictionPlan, RoutePlan, Scenario};
use crate::mixed::MixedStrategy;
use crate::red::best_response_red;

pub const DEFAULT_MAX_ITERS: usize = 10_000;

/// Gap below which a loop where both replies are already present is accepted.
const STALL_GAP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub value: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub gap: f64,
    /// Running maximum of `lower_bound`.
    pub best_lower: f64,
    /// Running minimum of `upper_bound`.
    pub best_upper: f64,
    pub blue_strategies: usize,
    pub red_strategies: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    /// Value of the final restricted game.
    pub value: f64,
    pub blue_mix: MixedStrategy<RoutePlan>,
    pub red_mix: MixedStrategy<InterdictionPlan>,
    pub gap: f64,
    pub iterations: usize,
    /// Blue's best-response utility against `red_mix`.
    pub lower_bound: f64,
    /// Red's best-response utility against `blue_mix`.
    pub upper_bound: f64,
    pub trace: Vec<IterationRecord>,
}

/// Fastest route for Blue and the empty plan for Red.
pub fn initial_subgame(scenario: &Scenario) -> Result<(RoutePlan, InterdictionPlan)> {
    let (fastest, _) = shortest_route(scenario, &EdgeLengthField::traverse(&scenario.graph))?;
    Ok((fastest, InterdictionPlan::empty()))
}

/// Runs the double-oracle loop to gap ≤ `scenario.epsilon`.
///
/// Fails with [`Error::BudgetExceeded`] carrying the last iterate when
/// `max_iters` restricted games were solved without closing the gap.
pub fn solve(scenario: &Scenario, max_iters: usize) -> Result<EquilibriumResult> {
    if max_iters == 0 {
        return Err(Error::contract("max_iters must be at least 1"));
    }
    let (f0, y0) = initial_subgame(scenario)?;
    let mut game = payoff_matrix(scenario, &[f0], &[y0])?;
    let mut trace = Vec::new();
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_upper = f64::INFINITY;

    for iteration in 1..=max_iters {
        let sol = solve_matrix(game.payoff())?;
        let (blue_mix, red_mix) = game.mixes(&sol)?;
        let (blue_br, red_br) = rayon::join(
            || best_response_blue(scenario, &red_mix),
            || best_response_red(scenario, &blue_mix),
        );
        let (f_br, lower) = blue_br?;
        let (y_br, upper) = red_br?;
        let gap = upper - lower;
        best_lower = best_lower.max(lower);
        best_upper = best_upper.min(upper);
        trace.push(IterationRecord {
            iteration,
            value: sol.value,
            lower_bound: lower,
            upper_bound: upper,
            gap,
            best_lower,
            best_upper,
            blue_strategies: game.blue_strategies().len(),
            red_strategies: game.red_strategies().len(),
        });
        log::debug!(
            "iteration {iteration}: value {:.6} gap {gap:.6} |F|={} |Y|={}",
            sol.value,
            game.blue_strategies().len(),
            game.red_strategies().len()
        );

        let result = || EquilibriumResult {
            value: sol.value,
            blue_mix: blue_mix.clone(),
            red_mix: red_mix.clone(),
            gap,
            iterations: iteration,
            lower_bound: lower,
            upper_bound: upper,
            trace: trace.clone(),
        };

        if gap <= scenario.epsilon {
            return Ok(result());
        }
        let new_blue = !game.contains_blue(&f_br);
        let new_red = !game.contains_red(&y_br);
        if !new_blue && !new_red {
            // Both replies already in the subgame: the certificate bounds the gap.
            if gap > STALL_GAP_TOLERANCE {
                return Err(Error::SolverFailure {
                    message: format!("no new strategies but gap is {gap}"),
                    matrix: game.payoff().to_vec(),
                });
            }
            return Ok(result());
        }
        if iteration == max_iters {
            return Err(Error::BudgetExceeded(Box::new(result())));
        }
        game.push_blue(scenario, f_br)?;
        game.push_red(scenario, y_br)?;
    }
    unreachable!("loop returns on its last iteration")
}

/// Worst-case expected utility of a fixed Blue mix: Red best-responds.
pub fn evaluate_exploitability(
    scenario: &Scenario,
    blue_mix: &MixedStrategy<RoutePlan>,
) -> Result<f64> {
    best_response_red(scenario, blue_mix).map(|(_, u)| u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::generate_line_knapsack;
    use crate::graph::GroupId;

    #[test]
    fn knapsack_line() {
        let s = generate_line_knapsack(&[2, 3], &[3.0, 4.0], 3, None).unwrap();
        let eq = solve(&s, 100).unwrap();
        assert_eq!(eq.value, 6.0);
        assert_eq!(eq.blue_mix.len(), 1);
        assert_eq!(eq.red_mix.len(), 1);
        let plan = &eq.red_mix.support()[0];
        assert_eq!(
            plan.group_ids.iter().copied().collect::<Vec<_>>(),
            vec![GroupId(1)]
        );
        assert!(eq.gap <= s.epsilon);
    }

    #[test]
    fn zero_budget_is_one_iteration() {
        let s = generate_line_knapsack(&[2, 3], &[3.0, 4.0], 0, None).unwrap();
        let (f0, y0) = initial_subgame(&s).unwrap();
        assert_eq!(f0, RoutePlan::new([0, 1]));
        assert!(y0.is_empty());
        let eq = solve(&s, 100).unwrap();
        assert_eq!(eq.iterations, 1);
        assert_eq!(eq.value, 2.0);
        assert_eq!(eq.gap, 0.0);
    }

    #[test]
    fn exploitability_of_pure_line_path() {
        let s = generate_line_knapsack(&[1, 2, 2], &[1.0, 5.0, 4.0], 3, None).unwrap();
        let u =
            evaluate_exploitability(&s, &MixedStrategy::pure(RoutePlan::new([0, 1, 2]))).unwrap();
        assert_eq!(u, 3.0 + 6.0);
    }

    #[test]
    fn zero_iterations_rejected() {
        let s = generate_line_knapsack(&[1], &[1.0], 1, None).unwrap();
        assert!(matches!(solve(&s, 0), Err(Error::ContractViolation(_))));
    }
}
