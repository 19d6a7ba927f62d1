//! Red best response as a 0/1 knapsack over interdiction groups.

use crate::error::{Error, Result};
use crate::graph::{validate_route, GroupId, InterdictionPlan, RoutePlan, Scenario};
use crate::mixed::MixedStrategy;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnapsackItem {
    pub group: GroupId,
    pub weight: u64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    pub items: Vec<KnapsackItem>,
    pub capacity: u64,
}

impl KnapsackInstance {
    pub fn new(items: Vec<KnapsackItem>, capacity: u64) -> Result<Self> {
        let mut ids: Vec<GroupId> = items.iter().map(|i| i.group).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::contract(
                "knapsack items must have distinct group ids",
            ));
        }
        if let Some(bad) = items
            .iter()
            .find(|i| i.weight == 0 || !(i.value.is_finite() && i.value >= 0.0))
        {
            return Err(Error::contract(format!(
                "knapsack item {} needs weight >= 1 and a finite value >= 0",
                bad.group.0
            )));
        }
        Ok(KnapsackInstance { items, capacity })
    }
}

/// Expected traverse cost of a Blue mix, after checking every route.
pub(crate) fn expected_traverse_cost(
    scenario: &Scenario,
    blue_mix: &MixedStrategy<RoutePlan>,
) -> Result<f64> {
    let mut total = 0.0;
    for (route, p) in blue_mix.iter() {
        if !validate_route(&scenario.graph, route)? {
            return Err(Error::contract(format!(
                "route {:?} is not a valid path",
                route.edge_ids
            )));
        }
        total += p * route.traverse_cost(&scenario.graph)?;
    }
    Ok(total)
}

/// One item per group touched by the Blue mix: weight is the group cost and
/// value the expected interdiction penalty Blue would suffer there.
/// Groups of value zero are left out.
pub fn build_knapsack(
    scenario: &Scenario,
    blue_mix: &MixedStrategy<RoutePlan>,
) -> Result<KnapsackInstance> {
    let graph = &scenario.graph;
    let mut value = vec![0.0; graph.groups().len()];
    for (route, p) in blue_mix.iter() {
        if !validate_route(graph, route)? {
            return Err(Error::contract(format!(
                "route {:?} is not a valid path",
                route.edge_ids
            )));
        }
        for e in route.indices(graph)? {
            value[graph.group_of(e)] += p * graph.edges()[e].interdiction_penalty;
        }
    }
    let items = graph
        .groups()
        .iter()
        .zip(value)
        .filter(|(_, v)| *v > 0.0)
        .map(|(g, v)| KnapsackItem {
            group: g.id,
            weight: g.cost,
            value: v,
        })
        .collect();
    KnapsackInstance::new(items, scenario.budget)
}

/// Exact 0/1 knapsack by dynamic programming over capacity.
///
/// Among optimal subsets the lexicographically smallest ascending group-id
/// sequence is returned; the empty set wins when nothing positive fits.
/// The reported value is the sum of chosen item values in id order.
pub fn solve_knapsack(inst: &KnapsackInstance) -> (Vec<GroupId>, f64) {
    let mut items: Vec<KnapsackItem> = inst
        .items
        .iter()
        .copied()
        .filter(|i| i.weight <= inst.capacity && i.value > 0.0)
        .collect();
    if items.is_empty() {
        return (Vec::new(), 0.0);
    }
    items.sort_by_key(|i| i.group);
    let total_weight: u64 = items.iter().map(|i| i.weight).sum();
    let cap = inst.capacity.min(total_weight) as usize;
    let n = items.len();

    // best[i][c]: max value from items[i..] within capacity c.
    let width = cap + 1;
    let mut best = vec![0.0f64; (n + 1) * width];
    for i in (0..n).rev() {
        let w = items[i].weight as usize;
        let v = items[i].value;
        for c in 0..width {
            let skip = best[(i + 1) * width + c];
            best[i * width + c] = if w <= c {
                skip.max(v + best[(i + 1) * width + c - w])
            } else {
                skip
            };
        }
    }

    let mut chosen = Vec::new();
    let mut c = cap;
    for i in 0..n {
        let here = best[i * width + c];
        if here <= 0.0 {
            break;
        }
        let w = items[i].weight as usize;
        if w <= c && items[i].value + best[(i + 1) * width + c - w] == here {
            chosen.push(i);
            c -= w;
        }
    }
    let value = chosen.iter().map(|&i| items[i].value).sum();
    (chosen.into_iter().map(|i| items[i].group).collect(), value)
}

/// Red's best response to `blue_mix` and the resulting expected utility
/// `E[T] + knapsack optimum`.
pub fn best_response_red(
    scenario: &Scenario,
    blue_mix: &MixedStrategy<RoutePlan>,
) -> Result<(InterdictionPlan, f64)> {
    let base = expected_traverse_cost(scenario, blue_mix)?;
    let inst = build_knapsack(scenario, blue_mix)?;
    let (groups, value) = solve_knapsack(&inst);
    let plan = InterdictionPlan::from_groups(&scenario.graph, groups)?;
    debug_assert!(plan.total_cost <= scenario.budget);
    Ok((plan, base + value))
}
