//! Evaluation of route strategies: survival throughput, attack-count
//! distributions, deterministic baselines, and cross-budget robustness.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blue::{interdiction_probabilities, shortest_route, EdgeLengthField};
use crate::double_oracle::{evaluate_exploitability, solve, EquilibriumResult};
use crate::error::Result;
use crate::game::{indexed_interdiction, IndexedRoute};
use crate::graph::{InterdictionPlan, RoutePlan, Scenario, HIGH_PK_PENALTY};
use crate::mixed::MixedStrategy;
use crate::red::best_response_red;

/// Expected survival probability of route `f`: for each Red plan, the product
/// of `1 - kill_prob` over traversed edges that the plan interdicts.
pub fn throughput(
    scenario: &Scenario,
    f: &RoutePlan,
    red_mix: &MixedStrategy<InterdictionPlan>,
) -> Result<f64> {
    let graph = &scenario.graph;
    let route = IndexedRoute::checked(scenario, f)?;
    // Accumulate the loss so an untouched route scores exactly 1.
    let mut loss = 0.0;
    for (y, p) in red_mix.iter() {
        let hit = indexed_interdiction(scenario, y)?;
        let survive: f64 = hit
            .iter()
            .filter(|e| route.traverses(**e))
            .map(|&e| 1.0 - graph.edges()[e].kill_prob)
            .product();
        loss += p * (1.0 - survive);
    }
    Ok(1.0 - loss)
}

/// [`throughput`] in expectation over a Blue mix.
pub fn mixed_throughput(
    scenario: &Scenario,
    blue_mix: &MixedStrategy<RoutePlan>,
    red_mix: &MixedStrategy<InterdictionPlan>,
) -> Result<f64> {
    blue_mix
        .iter()
        .map(|(f, p)| throughput(scenario, f, red_mix).map(|t| p * t))
        .sum()
}

/// Probability of suffering a given number of low and high p-k attacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttackCountDistribution {
    /// `(low, high) -> probability`; `(0, 0)` is the no-attack mass.
    #[serde(with = "pair_keyed")]
    pub entries: BTreeMap<(u32, u32), f64>,
    /// Edges with interdiction penalty at or above this are high p-k.
    pub threshold: f64,
}

impl AttackCountDistribution {
    pub fn probability(&self, low: u32, high: u32) -> f64 {
        self.entries.get(&(low, high)).copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.values().sum()
    }
}

mod pair_keyed {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        low: u32,
        high: u32,
        probability: f64,
    }

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<(u32, u32), f64>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        m.iter()
            .map(|(&(low, high), &probability)| Entry {
                low,
                high,
                probability,
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(u32, u32), f64>, D::Error> {
        Ok(Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| ((e.low, e.high), e.probability))
            .collect())
    }
}

/// Aggregates attack counts over every (route, plan) support pair.
pub fn attack_distribution(
    scenario: &Scenario,
    blue_mix: &MixedStrategy<RoutePlan>,
    red_mix: &MixedStrategy<InterdictionPlan>,
    threshold: f64,
) -> Result<AttackCountDistribution> {
    let graph = &scenario.graph;
    let routes = blue_mix
        .iter()
        .map(|(f, p)| Ok((IndexedRoute::checked(scenario, f)?, p)))
        .collect::<Result<Vec<_>>>()?;
    let plans = red_mix
        .iter()
        .map(|(y, p)| Ok((indexed_interdiction(scenario, y)?, p)))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = BTreeMap::new();
    for (route, pf) in &routes {
        for (hit, py) in &plans {
            let (mut low, mut high) = (0u32, 0u32);
            for &e in hit.iter().filter(|e| route.traverses(**e)) {
                if graph.edges()[e].is_high_pk(threshold) {
                    high += 1;
                } else {
                    low += 1;
                }
            }
            *entries.entry((low, high)).or_insert(0.0) += pf * py;
        }
    }
    Ok(AttackCountDistribution { entries, threshold })
}

/// Shorthand with the default high p-k threshold.
pub fn default_attack_distribution(
    scenario: &Scenario,
    blue_mix: &MixedStrategy<RoutePlan>,
    red_mix: &MixedStrategy<InterdictionPlan>,
) -> Result<AttackCountDistribution> {
    attack_distribution(scenario, blue_mix, red_mix, HIGH_PK_PENALTY)
}

/// Minimum-traverse-penalty route, ignoring Red.
pub fn fastest_route(scenario: &Scenario) -> Result<RoutePlan> {
    shortest_route(scenario, &EdgeLengthField::traverse(&scenario.graph)).map(|(f, _)| f)
}

/// Deterministic route with the best worst-case utility among the
/// equilibrium support and the fastest route.
pub fn red_aware_route(scenario: &Scenario, eq: &EquilibriumResult) -> Result<RoutePlan> {
    let mut candidates: Vec<RoutePlan> = eq.blue_mix.support().to_vec();
    candidates.push(fastest_route(scenario)?);
    candidates.sort();
    candidates.dedup();
    let mut best: Option<(f64, RoutePlan)> = None;
    for f in candidates {
        let worst = evaluate_exploitability(scenario, &MixedStrategy::pure(f.clone()))?;
        // Candidates are sorted, so strict improvement keeps the smallest on ties.
        if best.as_ref().map_or(true, |(w, _)| worst < *w) {
            best = Some((worst, f));
        }
    }
    Ok(best.expect("fastest route is always a candidate").1)
}

/// Expected per-edge interdiction probability under a Red mix, as
/// `(edge index, probability)` for edges with positive probability.
pub fn edge_interdiction_probabilities(
    scenario: &Scenario,
    red_mix: &MixedStrategy<InterdictionPlan>,
) -> Result<Vec<(usize, f64)>> {
    Ok(interdiction_probabilities(scenario, red_mix)?
        .into_iter()
        .enumerate()
        .filter(|(_, q)| *q > 0.0)
        .collect())
}

/// Row `b`: the equilibrium Blue mix computed for budget `b`.
/// Column `b'`: a Red with true budget `b'` best-responding to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessTable {
    pub budgets: Vec<u64>,
    /// `throughput[row][col]`.
    pub throughput: Vec<Vec<f64>>,
    /// Red's best-response utility for the same cells.
    pub exploitability: Vec<Vec<f64>>,
    /// Equilibrium value of each row's own game.
    pub values: Vec<f64>,
}

pub fn robustness_table(
    scenario: &Scenario,
    budgets: &[u64],
    max_iters: usize,
) -> Result<RobustnessTable> {
    if budgets.is_empty() {
        return Err(crate::Error::contract(
            "robustness table needs at least one budget",
        ));
    }
    let rows = budgets
        .par_iter()
        .map(|&b| {
            let eq = solve(&scenario.clone().with_budget(b), max_iters)?;
            let mut tp = Vec::with_capacity(budgets.len());
            let mut ex = Vec::with_capacity(budgets.len());
            for &actual in budgets {
                let red = scenario.clone().with_budget(actual);
                let (y, u) = best_response_red(&red, &eq.blue_mix)?;
                tp.push(mixed_throughput(
                    &red,
                    &eq.blue_mix,
                    &MixedStrategy::pure(y),
                )?);
                ex.push(u);
            }
            Ok((tp, ex, eq.value))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = RobustnessTable {
        budgets: budgets.to_vec(),
        throughput: Vec::new(),
        exploitability: Vec::new(),
        values: Vec::new(),
    };
    for (tp, ex, v) in rows {
        table.throughput.push(tp);
        table.exploitability.push(ex);
        table.values.push(v);
    }
    Ok(table)
}
