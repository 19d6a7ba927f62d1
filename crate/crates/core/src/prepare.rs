//! Penalty and cost assignment for map-derived graphs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{
    EdgeRecord, GroupId, PhysicalGraph, HIGH_PK_KILL_PROB, HIGH_PK_PENALTY, LOW_PK_KILL_PROB,
};

pub const BRIDGE_TAG: &str = "bridge";
pub const LOW_PK_PENALTY: f64 = 1.0;

/// Distances below this many meters are clamped when computing raw costs.
pub const MIN_COST_DISTANCE_M: f64 = 1.0;

/// `(P, kill_prob)` for an edge with the given tags.
pub fn penalty_for_tags<'a>(tags: impl IntoIterator<Item = &'a String>) -> (f64, f64) {
    if tags.into_iter().any(|t| t == BRIDGE_TAG) {
        (HIGH_PK_PENALTY, HIGH_PK_KILL_PROB)
    } else {
        (LOW_PK_PENALTY, LOW_PK_KILL_PROB)
    }
}

/// Bridge-tagged edges become high p-k (P = 3, kill 0.5), the rest low
/// p-k (P = 1, kill 0.2).
pub fn assign_penalties(graph: PhysicalGraph) -> Result<PhysicalGraph> {
    let (nodes, mut edges, start, release) = graph.into_parts();
    for e in &mut edges {
        let (p, k) = penalty_for_tags(&e.tags);
        e.interdiction_penalty = p;
        e.kill_prob = k;
    }
    PhysicalGraph::new(nodes, edges, start, release)
}

/// Raw cost `1 / min(dist(mid, start), dist(mid, release))` per edge, where
/// `mid` is the edge midpoint.
pub fn raw_costs(graph: &PhysicalGraph) -> Result<Vec<f64>> {
    if !graph.has_coordinates() {
        return Err(Error::contract("cost assignment needs node coordinates"));
    }
    let xy = |v: usize| graph.nodes()[v].euclid_xy.expect("coordinates checked");
    let (sx, sy) = xy(graph.start_index());
    let (rx, ry) = xy(graph.release_index());
    Ok((0..graph.edge_count())
        .map(|e| {
            let (tx, ty) = xy(graph.tail_index(e));
            let (hx, hy) = xy(graph.head_index(e));
            let (mx, my) = (0.5 * (tx + hx), 0.5 * (ty + hy));
            let d = (mx - sx).hypot(my - sy).min((mx - rx).hypot(my - ry));
            1.0 / d.max(MIN_COST_DISTANCE_M)
        })
        .collect())
}

/// Min-max normalisation of raw costs onto integers `1..=B+2`:
/// `ceil(0.8 + (raw - min) * (B + 1.3) / (max - min))`. All ones when every
/// raw cost is equal.
pub fn normalize_costs(raw: &[f64], budget: u64) -> Vec<u64> {
    let lo = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return vec![1; raw.len()];
    }
    let scale = (budget as f64 + 1.3) / (hi - lo);
    raw.iter()
        .map(|&r| (0.8 + (r - lo) * scale).ceil().max(1.0) as u64)
        .collect()
}

/// Sets every edge's interdiction cost from its distance to the start and
/// release nodes. Edges sharing a group take the largest member cost.
pub fn assign_costs(graph: PhysicalGraph, budget: u64) -> Result<PhysicalGraph> {
    let costs = normalize_costs(&raw_costs(&graph)?, budget);
    let (nodes, mut edges, start, release) = graph.into_parts();
    apply_group_costs(&mut edges, &costs);
    PhysicalGraph::new(nodes, edges, start, release)
}

pub(crate) fn apply_group_costs(edges: &mut [EdgeRecord], costs: &[u64]) {
    let mut group_cost: HashMap<GroupId, u64> = HashMap::new();
    for (e, &c) in edges.iter().zip(costs) {
        let slot = group_cost.entry(e.group).or_insert(c);
        *slot = (*slot).max(c);
    }
    for e in edges.iter_mut() {
        e.interdiction_cost = group_cost[&e.group];
    }
}
