//! Brute-force reference implementations and random instance builders shared
//! by the integration tests. Nothing here calls the library's oracles.

#![allow(dead_code)]

use std::collections::BTreeSet;

use contested_routing::{
    EdgeRecord, GroupId, InterdictionPlan, MixedStrategy, NodeId, NodeRecord, PhysicalGraph,
    RoutePlan, Scenario,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every simple start→release path, as edge-index sequences.
pub fn simple_paths(graph: &PhysicalGraph) -> Vec<Vec<usize>> {
    fn walk(
        g: &PhysicalGraph,
        at: usize,
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if at == g.release_index() {
            out.push(path.clone());
            return;
        }
        for &e in g.out_edges(at) {
            let next = g.head_index(e);
            if !seen[next] {
                seen[next] = true;
                path.push(e);
                walk(g, next, seen, path, out);
                path.pop();
                seen[next] = false;
            }
        }
    }
    let mut seen = vec![false; graph.node_count()];
    seen[graph.start_index()] = true;
    let mut out = Vec::new();
    walk(
        graph,
        graph.start_index(),
        &mut seen,
        &mut Vec::new(),
        &mut out,
    );
    out
}

pub fn route_of(graph: &PhysicalGraph, path: &[usize]) -> RoutePlan {
    RoutePlan::new(path.iter().map(|&e| graph.edges()[e].id.0))
}

/// Every affordable set of groups, each as its list of group ids.
pub fn affordable_plans(scenario: &Scenario) -> Vec<Vec<u64>> {
    let groups = scenario.graph.groups();
    assert!(groups.len() <= 20, "too many groups to enumerate");
    let mut out = Vec::new();
    for mask in 0u32..(1 << groups.len()) {
        let chosen: Vec<usize> = (0..groups.len()).filter(|i| mask >> i & 1 == 1).collect();
        let cost: u64 = chosen.iter().map(|&i| groups[i].cost).sum();
        if cost <= scenario.budget {
            out.push(chosen.iter().map(|&i| groups[i].id.0).collect());
        }
    }
    out
}

pub fn plan_of(scenario: &Scenario, groups: &[u64]) -> InterdictionPlan {
    InterdictionPlan::from_groups(&scenario.graph, groups.iter().map(|&g| GroupId(g))).unwrap()
}

/// Utility straight from the definition: traverse penalties along the path
/// plus the interdiction penalty of each path edge whose group is chosen.
pub fn reference_utility(graph: &PhysicalGraph, path: &[usize], groups: &[u64]) -> f64 {
    let chosen: BTreeSet<u64> = groups.iter().copied().collect();
    path.iter()
        .map(|&e| {
            let rec = &graph.edges()[e];
            let hit = if chosen.contains(&rec.group.0) {
                rec.interdiction_penalty
            } else {
                0.0
            };
            rec.traverse_penalty + hit
        })
        .sum()
}

pub fn expected_reference_utility(
    scenario: &Scenario,
    path: &[usize],
    red: &MixedStrategy<InterdictionPlan>,
) -> f64 {
    red.iter()
        .map(|(y, p)| {
            let ids: Vec<u64> = y.group_ids.iter().map(|g| g.0).collect();
            p * reference_utility(&scenario.graph, path, &ids)
        })
        .sum()
}

/// Best total value of a 0/1 knapsack by enumerating every subset.
pub fn brute_knapsack(weights: &[u64], values: &[f64], capacity: u64) -> f64 {
    let n = weights.len();
    let mut best = 0.0f64;
    for mask in 0u32..(1 << n) {
        let (mut w, mut v) = (0u64, 0.0f64);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                w += weights[i];
                v += values[i];
            }
        }
        if w <= capacity {
            best = best.max(v);
        }
    }
    best
}

/// Full payoff matrix (rows: simple paths, columns: affordable plans).
pub fn full_matrix(scenario: &Scenario) -> (Vec<Vec<usize>>, Vec<Vec<u64>>, Vec<Vec<f64>>) {
    let paths = simple_paths(&scenario.graph);
    let plans = affordable_plans(scenario);
    let matrix = paths
        .iter()
        .map(|p| {
            plans
                .iter()
                .map(|y| reference_utility(&scenario.graph, p, y))
                .collect()
        })
        .collect();
    (paths, plans, matrix)
}

/// Worst case over columns for a row mix, and over rows for a column mix.
pub fn mix_bounds(matrix: &[Vec<f64>], rows: &[f64], cols: &[f64]) -> (f64, f64) {
    let ceiling = (0..matrix[0].len())
        .map(|j| rows.iter().zip(matrix).map(|(p, r)| p * r[j]).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let floor = matrix
        .iter()
        .map(|r| r.iter().zip(cols).map(|(v, q)| v * q).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    (floor, ceiling)
}

/// Random directed graph on `n` nodes with a guaranteed start→release
/// chain, plus extra edges. Edges are spread over at most `max_groups`
/// groups, each group with one cost.
pub fn random_scenario(rng: &mut impl Rng, n: usize, max_groups: usize, budget: u64) -> Scenario {
    assert!(n >= 2);
    let mut order: Vec<u64> = (1..n as u64 - 1).collect();
    order.shuffle(rng);
    let chain_len = rng.gen_range(0..=order.len());
    let mut chain = vec![0u64];
    chain.extend(&order[..chain_len]);
    chain.push(n as u64 - 1);

    let mut arcs: BTreeSet<(u64, u64)> = chain.windows(2).map(|w| (w[0], w[1])).collect();
    let extra = rng.gen_range(2 * n..=3 * n);
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n as u64), rng.gen_range(0..n as u64));
        if a != b {
            arcs.insert((a, b));
        }
    }

    let cap = max_groups.min(arcs.len());
    let groups = rng.gen_range(cap.div_ceil(2)..=cap);
    let group_cost: Vec<u64> = (0..groups).map(|_| rng.gen_range(1..=2)).collect();
    let edges = arcs
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let g = rng.gen_range(0..groups);
            let t = rng.gen_range(8..=24) as f64 / 8.0;
            let p = rng.gen_range(0..=40) as f64 / 4.0;
            EdgeRecord::new(i as u64, a, b, t, p, group_cost[g]).with_group(g as u64)
        })
        .collect();
    let nodes = (0..n as u64).map(NodeRecord::new).collect();
    let graph = PhysicalGraph::new(nodes, edges, NodeId(0), NodeId(n as u64 - 1)).unwrap();
    Scenario::new(graph, budget, 0.01).unwrap()
}

/// Random Red mix over affordable plans of `scenario`.
pub fn random_red_mix(rng: &mut impl Rng, scenario: &Scenario) -> MixedStrategy<InterdictionPlan> {
    let mut plans = affordable_plans(scenario);
    plans.shuffle(rng);
    plans.truncate(rng.gen_range(1..=4));
    let weights: Vec<f64> = plans.iter().map(|_| rng.gen_range(1..=8) as f64).collect();
    let total: f64 = weights.iter().sum();
    MixedStrategy::new(
        plans.iter().map(|y| plan_of(scenario, y)).collect(),
        weights.iter().map(|w| w / total).collect(),
    )
    .unwrap()
}
