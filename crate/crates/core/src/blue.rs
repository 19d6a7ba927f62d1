//! Blue best response: a shortest start→release path under the expected edge
//! lengths induced by a fixed Red mixed strategy.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{
    validate_interdiction, EdgeId, InterdictionPlan, NodeId, PhysicalGraph, RoutePlan, Scenario,
};
use crate::mixed::MixedStrategy;

/// Relative slack used when deciding that two path lengths tie.
const TIE_TOLERANCE: f64 = 1e-11;

/// Expected length of every edge, indexed like [`PhysicalGraph::edges`].
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLengthField {
    lengths: Vec<f64>,
}

impl EdgeLengthField {
    /// Plain traverse penalties, i.e. the lengths under no interdiction.
    pub fn traverse(graph: &PhysicalGraph) -> Self {
        EdgeLengthField {
            lengths: graph.edges().iter().map(|e| e.traverse_penalty).collect(),
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lengths
    }

    pub fn get(&self, graph: &PhysicalGraph, id: EdgeId) -> Option<f64> {
        graph.edge_index(id).map(|ix| self.lengths[ix])
    }
}

/// Probability, per edge, that the Red mix interdicts it.
pub fn interdiction_probabilities(
    scenario: &Scenario,
    red_mix: &MixedStrategy<InterdictionPlan>,
) -> Result<Vec<f64>> {
    let graph = &scenario.graph;
    let mut q = vec![0.0; graph.edge_count()];
    for (plan, p) in red_mix.iter() {
        if !validate_interdiction(scenario, plan)? {
            return Err(Error::contract(format!(
                "interdiction plan {:?} is infeasible for budget {}",
                plan.group_ids, scenario.budget
            )));
        }
        for e in plan.edge_indices(graph)? {
            q[e] += p;
        }
    }
    Ok(q)
}

/// `l(e) = T(e) + P(e) * Pr[e interdicted]`.
pub fn expected_lengths(
    scenario: &Scenario,
    red_mix: &MixedStrategy<InterdictionPlan>,
) -> Result<EdgeLengthField> {
    let q = interdiction_probabilities(scenario, red_mix)?;
    let lengths = scenario
        .graph
        .edges()
        .iter()
        .zip(q)
        .map(|(e, q)| e.traverse_penalty + e.interdiction_penalty * q)
        .collect();
    Ok(EdgeLengthField { lengths })
}

/// Blue's best response to `red_mix` and its expected utility.
///
/// Among equally short paths the lexicographically smallest edge-id
/// sequence is returned.
pub fn best_response_blue(
    scenario: &Scenario,
    red_mix: &MixedStrategy<InterdictionPlan>,
) -> Result<(RoutePlan, f64)> {
    let lengths = expected_lengths(scenario, red_mix)?;
    shortest_route(scenario, &lengths)
}

/// Label-setting strategy used by [`shortest_route_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Search {
    Dijkstra,
    /// Informed search with a κ-scaled straight-line heuristic.
    AStar {
        meters_to_t: f64,
    },
}

impl Search {
    /// A* when the scenario declares a positive meters-to-T factor and has
    /// coordinates, Dijkstra otherwise.
    pub fn for_scenario(scenario: &Scenario) -> Search {
        match scenario.meters_to_t {
            Some(k) if k > 0.0 && scenario.graph.has_coordinates() => {
                Search::AStar { meters_to_t: k }
            }
            _ => Search::Dijkstra,
        }
    }
}

pub fn shortest_route(scenario: &Scenario, lengths: &EdgeLengthField) -> Result<(RoutePlan, f64)> {
    shortest_route_with(&scenario.graph, lengths, Search::for_scenario(scenario))
}

/// `h(v) = meters_to_t * dist(v, target)`, indexed like [`PhysicalGraph::nodes`].
pub fn astar_heuristic(
    graph: &PhysicalGraph,
    target: NodeId,
    meters_to_t: f64,
) -> Result<Vec<f64>> {
    let t = graph.node_index(target).ok_or(Error::InvalidReference {
        kind: "node",
        id: target.0,
    })?;
    if !graph.has_coordinates() {
        return Err(Error::HeuristicUnavailable(
            "graph nodes carry no coordinates".into(),
        ));
    }
    if !(meters_to_t.is_finite() && meters_to_t >= 0.0) {
        return Err(Error::contract(format!(
            "meters_to_t must be >= 0, got {meters_to_t}"
        )));
    }
    Ok((0..graph.node_count())
        .map(|v| meters_to_t * graph.node_distance(v, t).unwrap_or(0.0))
        .collect())
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Backward label-setting search from the release node. Returns exact
/// distances-to-release for every settled node; every node lying on some
/// optimal start→release path is settled.
fn distances_to_release(
    graph: &PhysicalGraph,
    lengths: &[f64],
    heuristic: Option<&[f64]>,
) -> Result<(Vec<f64>, Vec<bool>)> {
    let n = graph.node_count();
    let h = |v: usize| heuristic.map_or(0.0, |h| h[v]);
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    let release = graph.release_index();
    let start = graph.start_index();
    dist[release] = 0.0;
    heap.push(Reverse((Key(h(release)), release)));
    let mut cutoff = f64::INFINITY;

    while let Some(Reverse((Key(key), v))) = heap.pop() {
        if key > cutoff {
            break;
        }
        if settled[v] || key > dist[v] + h(v) {
            continue;
        }
        settled[v] = true;
        if v == start {
            // Keep settling ties so every optimal path is fully labelled.
            cutoff = dist[v] + TIE_TOLERANCE * dist[v].max(1.0);
        }
        for &e in graph.in_edges(v) {
            let u = graph.tail_index(e);
            if settled[u] {
                continue;
            }
            let cand = dist[v] + lengths[e];
            if cand < dist[u] {
                dist[u] = cand;
                heap.push(Reverse((Key(cand + h(u)), u)));
            }
        }
    }
    if !settled[start] {
        return Err(Error::NoPath {
            start: graph.start().0,
            release: graph.release().0,
        });
    }
    Ok((dist, settled))
}

pub fn shortest_route_with(
    graph: &PhysicalGraph,
    lengths: &EdgeLengthField,
    search: Search,
) -> Result<(RoutePlan, f64)> {
    let lengths = lengths.as_slice();
    if lengths.len() != graph.edge_count() {
        return Err(Error::contract("length field does not match the graph"));
    }
    let heuristic = match search {
        Search::Dijkstra => None,
        Search::AStar { meters_to_t } => Some(astar_heuristic(graph, graph.start(), meters_to_t)?),
    };
    let (dist, settled) = distances_to_release(graph, lengths, heuristic.as_deref())?;
    let best = dist[graph.start_index()];
    let tol = TIE_TOLERANCE * best.max(1.0);

    let tight = |e: usize, v: usize| {
        let w = graph.head_index(e);
        settled[w] && lengths[e] + dist[w] <= dist[v] + tol
    };
    // Near-zero edges can make the tight subgraph cyclic; only then does the
    // greedy walk need a reachability check.
    let cyclic_risk = lengths.iter().any(|&l| l <= 2.0 * tol);

    let release = graph.release_index();
    let mut visited = vec![false; graph.node_count()];
    let mut v = graph.start_index();
    visited[v] = true;
    let mut path = Vec::new();
    while v != release {
        let next = graph.out_edges(v).iter().copied().find(|&e| {
            let w = graph.head_index(e);
            !visited[w]
                && tight(e, v)
                && (!cyclic_risk || reaches_release(graph, w, &visited, &tight))
        });
        let e = next
            .ok_or_else(|| Error::contract("shortest-path reconstruction found no tight edge"))?;
        path.push(e);
        v = graph.head_index(e);
        visited[v] = true;
    }
    let value = path.iter().map(|&e| lengths[e]).sum();
    Ok((RoutePlan::from_indices(graph, &path), value))
}

fn reaches_release(
    graph: &PhysicalGraph,
    from: usize,
    visited: &[bool],
    tight: &impl Fn(usize, usize) -> bool,
) -> bool {
    let release = graph.release_index();
    let mut seen = visited.to_vec();
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == release {
            return true;
        }
        for &e in graph.out_edges(v) {
            let w = graph.head_index(e);
            if !seen[w] && tight(e, v) {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}
