//! Utility evaluation and exact equilibria of restricted matrix games.
//!
//! Blue (rows) minimises, Red (columns) maximises. Entry `(i, j)` of a payoff
//! matrix is `u(f_i, y_j)`: the traverse cost of route `f_i` plus the
//! interdiction penalty of every edge of `f_i` that plan `y_j` interdicts.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    validate_interdiction, validate_route, InterdictionPlan, PhysicalGraph, RoutePlan, Scenario,
};
use crate::mixed::{MixedStrategy, SUPPORT_PRUNE};
use crate::simplex::solve_packing;

/// Slack allowed in the equilibrium certificate.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-7;

/// `u(f, y)` after checking both plans against the scenario.
pub fn utility(scenario: &Scenario, f: &RoutePlan, y: &InterdictionPlan) -> Result<f64> {
    let route = IndexedRoute::checked(scenario, f)?;
    let red = indexed_interdiction(scenario, y)?;
    Ok(route.utility(&scenario.graph, &red))
}

/// A route prepared for repeated utility evaluation.
#[derive(Debug, Clone)]
pub(crate) struct IndexedRoute {
    sorted_edges: Vec<usize>,
    traverse: f64,
}

impl IndexedRoute {
    pub(crate) fn checked(scenario: &Scenario, f: &RoutePlan) -> Result<Self> {
        if !validate_route(&scenario.graph, f)? {
            return Err(Error::contract(format!(
                "route {:?} is not a valid path",
                f.edge_ids
            )));
        }
        let edges = f.indices(&scenario.graph)?;
        let traverse = edges
            .iter()
            .map(|&e| scenario.graph.edges()[e].traverse_penalty)
            .sum();
        let mut sorted_edges = edges;
        sorted_edges.sort_unstable();
        Ok(IndexedRoute {
            sorted_edges,
            traverse,
        })
    }

    pub(crate) fn traverses(&self, edge: usize) -> bool {
        self.sorted_edges.binary_search(&edge).is_ok()
    }

    pub(crate) fn utility(&self, graph: &PhysicalGraph, interdicted: &[usize]) -> f64 {
        let hit: f64 = interdicted
            .iter()
            .filter(|e| self.sorted_edges.binary_search(e).is_ok())
            .map(|&e| graph.edges()[e].interdiction_penalty)
            .sum();
        self.traverse + hit
    }
}

pub(crate) fn indexed_interdiction(
    scenario: &Scenario,
    y: &InterdictionPlan,
) -> Result<Vec<usize>> {
    if !validate_interdiction(scenario, y)? {
        return Err(Error::contract(format!(
            "interdiction plan {:?} is infeasible for budget {}",
            y.group_ids, scenario.budget
        )));
    }
    y.edge_indices(&scenario.graph)
}

/// The zero-sum game restricted to explicit strategy lists.
#[derive(Debug, Clone)]
pub struct RestrictedGame {
    blue_strategies: Vec<RoutePlan>,
    red_strategies: Vec<InterdictionPlan>,
    payoff: Vec<Vec<f64>>,
    blue_cache: Vec<IndexedRoute>,
    red_cache: Vec<Vec<usize>>,
    blue_lookup: HashMap<RoutePlan, usize>,
    red_lookup: HashMap<InterdictionPlan, usize>,
}

impl RestrictedGame {
    pub fn blue_strategies(&self) -> &[RoutePlan] {
        &self.blue_strategies
    }

    pub fn red_strategies(&self) -> &[InterdictionPlan] {
        &self.red_strategies
    }

    /// `payoff()[i][j] = u(blue_i, red_j)`.
    pub fn payoff(&self) -> &[Vec<f64>] {
        &self.payoff
    }

    pub fn contains_blue(&self, f: &RoutePlan) -> bool {
        self.blue_lookup.contains_key(f)
    }

    pub fn contains_red(&self, y: &InterdictionPlan) -> bool {
        self.red_lookup.contains_key(y)
    }

    /// Appends a Blue row. Returns `false` (and changes nothing) if present.
    pub fn push_blue(&mut self, scenario: &Scenario, f: RoutePlan) -> Result<bool> {
        if self.contains_blue(&f) {
            return Ok(false);
        }
        let route = IndexedRoute::checked(scenario, &f)?;
        let row = self
            .red_cache
            .iter()
            .map(|red| route.utility(&scenario.graph, red))
            .collect();
        self.payoff.push(row);
        self.blue_lookup
            .insert(f.clone(), self.blue_strategies.len());
        self.blue_strategies.push(f);
        self.blue_cache.push(route);
        Ok(true)
    }

    /// Appends a Red column. Returns `false` (and changes nothing) if present.
    pub fn push_red(&mut self, scenario: &Scenario, y: InterdictionPlan) -> Result<bool> {
        if self.contains_red(&y) {
            return Ok(false);
        }
        let red = indexed_interdiction(scenario, &y)?;
        for (row, route) in self.payoff.iter_mut().zip(&self.blue_cache) {
            row.push(route.utility(&scenario.graph, &red));
        }
        self.red_lookup.insert(y.clone(), self.red_strategies.len());
        self.red_strategies.push(y);
        self.red_cache.push(red);
        Ok(true)
    }

    /// Maps a dense matrix solution back onto the strategy lists.
    pub fn mixes(
        &self,
        sol: &MatrixSolution,
    ) -> Result<(MixedStrategy<RoutePlan>, MixedStrategy<InterdictionPlan>)> {
        let blue = support_of(&self.blue_strategies, &sol.row_probs);
        let red = support_of(&self.red_strategies, &sol.col_probs);
        Ok((
            MixedStrategy::from_weights(blue.0, blue.1)?,
            MixedStrategy::from_weights(red.0, red.1)?,
        ))
    }
}

fn support_of<T: Clone>(items: &[T], probs: &[f64]) -> (Vec<T>, Vec<f64>) {
    items
        .iter()
        .zip(probs)
        .filter(|(_, &p)| p > 0.0)
        .map(|(s, &p)| (s.clone(), p))
        .unzip()
}

/// Builds the full payoff matrix, one row per Blue strategy (rows in parallel).
pub fn payoff_matrix(
    scenario: &Scenario,
    blue: &[RoutePlan],
    red: &[InterdictionPlan],
) -> Result<RestrictedGame> {
    if blue.is_empty() || red.is_empty() {
        return Err(Error::contract(
            "restricted game needs at least one strategy per player",
        ));
    }
    let blue_cache = blue
        .iter()
        .map(|f| IndexedRoute::checked(scenario, f))
        .collect::<Result<Vec<_>>>()?;
    let red_cache = red
        .iter()
        .map(|y| indexed_interdiction(scenario, y))
        .collect::<Result<Vec<_>>>()?;
    let payoff = blue_cache
        .par_iter()
        .map(|route| {
            red_cache
                .iter()
                .map(|y| route.utility(&scenario.graph, y))
                .collect()
        })
        .collect();

    let mut blue_lookup = HashMap::new();
    let mut red_lookup = HashMap::new();
    for (i, f) in blue.iter().enumerate() {
        if blue_lookup.insert(f.clone(), i).is_some() {
            return Err(Error::contract("duplicate Blue strategy"));
        }
    }
    for (j, y) in red.iter().enumerate() {
        if red_lookup.insert(y.clone(), j).is_some() {
            return Err(Error::contract("duplicate Red strategy"));
        }
    }
    Ok(RestrictedGame {
        blue_strategies: blue.to_vec(),
        red_strategies: red.to_vec(),
        payoff,
        blue_cache,
        red_cache,
        blue_lookup,
        red_lookup,
    })
}

/// Equilibrium of a dense matrix game, with dense probability vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSolution {
    pub row_probs: Vec<f64>,
    pub col_probs: Vec<f64>,
    pub value: f64,
}

impl MatrixSolution {
    /// Best payoff Blue can get against the column mix (lower bound).
    pub fn row_floor(&self, payoff: &[Vec<f64>]) -> f64 {
        payoff
            .iter()
            .map(|row| dot(row, &self.col_probs))
            .fold(f64::INFINITY, f64::min)
    }

    /// Best payoff Red can get against the row mix (upper bound).
    pub fn column_ceiling(&self, payoff: &[Vec<f64>]) -> f64 {
        (0..self.col_probs.len())
            .map(|j| {
                payoff
                    .iter()
                    .zip(&self.row_probs)
                    .map(|(r, p)| r[j] * p)
                    .sum()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves `min_x max_y x^T A y` exactly (rows minimise).
///
/// The result is certified: no row beats `value - 1e-7` against the column
/// mix, and no column beats `value + 1e-7` against the row mix.
pub fn solve_matrix(payoff: &[Vec<f64>]) -> Result<MatrixSolution> {
    let rows = payoff.len();
    let cols = payoff.first().map_or(0, Vec::len);
    let fail = |message: &str| Error::SolverFailure {
        message: message.to_owned(),
        matrix: payoff.to_vec(),
    };
    if rows == 0 || cols == 0 || payoff.iter().any(|r| r.len() != cols) {
        return Err(fail("payoff matrix must be nonempty and rectangular"));
    }
    if payoff.iter().flatten().any(|v| !v.is_finite()) {
        return Err(fail("payoff matrix has non-finite entries"));
    }

    if rows == 1 || cols == 1 {
        return Ok(solve_degenerate_shape(payoff));
    }

    let lo = payoff
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let hi = payoff
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    if span == 0.0 {
        let mut sol = pure(rows, cols, 0, 0);
        sol.value = lo;
        return Ok(sol);
    }

    // Rescale into [1, 2]; Blue's problem becomes a packing LP over columns.
    let mut packing = vec![0.0; cols * rows];
    for (i, row) in payoff.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            packing[j * rows + i] = (v - lo) / span + 1.0;
        }
    }
    let lp = solve_packing(&packing, cols, rows).ok_or_else(|| fail("simplex did not converge"))?;
    if !(lp.objective > 0.0) {
        return Err(fail("degenerate packing objective"));
    }
    let row_probs = clean_distribution(&lp.primal).ok_or_else(|| fail("empty row support"))?;
    let col_probs = clean_distribution(&lp.dual).ok_or_else(|| fail("empty column support"))?;
    let mut sol = MatrixSolution {
        row_probs,
        col_probs,
        value: 0.0,
    };
    let floor = sol.row_floor(payoff);
    let ceiling = sol.column_ceiling(payoff);
    if ceiling - floor > 2.0 * CERTIFICATE_TOLERANCE {
        return Err(fail(&format!(
            "equilibrium certificate failed: lower {floor}, upper {ceiling}"
        )));
    }
    sol.value = 0.5 * (floor + ceiling);
    Ok(sol)
}

fn pure(rows: usize, cols: usize, i: usize, j: usize) -> MatrixSolution {
    let mut row_probs = vec![0.0; rows];
    let mut col_probs = vec![0.0; cols];
    row_probs[i] = 1.0;
    col_probs[j] = 1.0;
    MatrixSolution {
        row_probs,
        col_probs,
        value: 0.0,
    }
}

/// A single row or column: the other player simply picks its best entry
/// (first one on ties).
fn solve_degenerate_shape(payoff: &[Vec<f64>]) -> MatrixSolution {
    let rows = payoff.len();
    let cols = payoff[0].len();
    let (i, j) = if rows == 1 {
        let j = (0..cols).fold(0, |b, j| if payoff[0][j] > payoff[0][b] { j } else { b });
        (0, j)
    } else {
        let i = (0..rows).fold(0, |b, i| if payoff[i][0] < payoff[b][0] { i } else { b });
        (i, 0)
    };
    let mut sol = pure(rows, cols, i, j);
    sol.value = payoff[i][j];
    sol
}

fn clean_distribution(weights: &[f64]) -> Option<Vec<f64>> {
    let clipped: Vec<f64> = weights.iter().map(|w| w.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let mut probs: Vec<f64> = clipped
        .iter()
        .map(|w| w / total)
        .map(|p| if p > SUPPORT_PRUNE { p } else { 0.0 })
        .collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    Some(probs)
}

/// Certified equilibrium of a restricted game as mixed strategies.
pub fn solve_zero_sum(
    game: &RestrictedGame,
) -> Result<(
    MixedStrategy<RoutePlan>,
    MixedStrategy<InterdictionPlan>,
    f64,
)> {
    let sol = solve_matrix(game.payoff())?;
    let (blue, red) = game.mixes(&sol)?;
    Ok((blue, red, sol.value))
}
