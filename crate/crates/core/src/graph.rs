//! The game arena: a directed graph whose edges carry a traversal penalty,
//! an interdiction penalty, and an interdiction cost, plus the two kinds of
//! pure strategies played on it.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interdiction penalty at or above which an edge counts as high probability-of-kill.
pub const HIGH_PK_PENALTY: f64 = 3.0;
pub const HIGH_PK_KILL_PROB: f64 = 0.5;
pub const LOW_PK_KILL_PROB: f64 = 0.2;

const EARTH_RADIUS_M: f64 = 6_371_008.8;

macro_rules! id_type {
    ($name:ident, $kind:literal) => {
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u64);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}", $kind, self.0)
            }
        }
    };
}

id_type!(NodeId, "v");
id_type!(EdgeId, "e");
id_type!(GroupId, "g");

/// Kill probability used when an edge does not specify one.
pub fn default_kill_prob(interdiction_penalty: f64) -> f64 {
    if interdiction_penalty >= HIGH_PK_PENALTY {
        HIGH_PK_KILL_PROB
    } else {
        LOW_PK_KILL_PROB
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub lat: Option<f64>,
    pub lon: Option<f64>,
    /// Planar coordinates in meters. Filled from lat/lon when the graph is built.
    pub euclid_xy: Option<(f64, f64)>,
}

impl NodeRecord {
    pub fn new(id: u64) -> Self {
        NodeRecord {
            id: NodeId(id),
            lat: None,
            lon: None,
            euclid_xy: None,
        }
    }

    pub fn with_latlon(id: u64, lat: f64, lon: f64) -> Self {
        NodeRecord {
            lat: Some(lat),
            lon: Some(lon),
            ..NodeRecord::new(id)
        }
    }

    pub fn with_xy(id: u64, x: f64, y: f64) -> Self {
        NodeRecord {
            euclid_xy: Some((x, y)),
            ..NodeRecord::new(id)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
    pub traverse_penalty: f64,
    pub interdiction_penalty: f64,
    pub interdiction_cost: u64,
    pub group: GroupId,
    pub kill_prob: f64,
    pub tags: BTreeSet<String>,
}

impl EdgeRecord {
    /// An edge in its own singleton group with the default kill probability.
    pub fn new(id: u64, tail: u64, head: u64, traverse: f64, penalty: f64, cost: u64) -> Self {
        EdgeRecord {
            id: EdgeId(id),
            tail: NodeId(tail),
            head: NodeId(head),
            traverse_penalty: traverse,
            interdiction_penalty: penalty,
            interdiction_cost: cost,
            group: GroupId(id),
            kill_prob: default_kill_prob(penalty),
            tags: BTreeSet::new(),
        }
    }

    pub fn with_group(mut self, group: u64) -> Self {
        self.group = GroupId(group);
        self
    }

    pub fn with_kill_prob(mut self, kill_prob: f64) -> Self {
        self.kill_prob = kill_prob;
        self
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        self.tags.insert(tag.to_owned());
        self
    }

    pub fn is_high_pk(&self, threshold: f64) -> bool {
        self.interdiction_penalty >= threshold
    }
}

/// An atomic Red choice: every member edge is interdicted together at one cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub id: GroupId,
    pub cost: u64,
    /// Member edges as indices into [`PhysicalGraph::edges`].
    pub edges: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PhysicalGraph {
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
    start: usize,
    release: usize,
    tail_ix: Vec<usize>,
    head_ix: Vec<usize>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    groups: Vec<Group>,
    edge_group: Vec<usize>,
    has_coordinates: bool,
}

impl PhysicalGraph {
    /// Builds and validates a graph. Nodes and edges are stored sorted by id,
    /// so indices follow id order.
    pub fn new(
        mut nodes: Vec<NodeRecord>,
        mut edges: Vec<EdgeRecord>,
        start: NodeId,
        release: NodeId,
    ) -> Result<Self> {
        nodes.sort_by_key(|n| n.id);
        edges.sort_by_key(|e| e.id);
        if let Some(w) = nodes.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::validation(format!(
                "duplicate node id {}",
                w[0].id.0
            )));
        }
        if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::validation(format!(
                "duplicate edge id {}",
                w[0].id.0
            )));
        }

        let has_coordinates = derive_planar_coordinates(&mut nodes)?;

        let node_ix = |id: NodeId, what: &str| -> Result<usize> {
            nodes
                .binary_search_by_key(&id, |n| n.id)
                .map_err(|_| Error::validation(format!("{what} references missing node {}", id.0)))
        };

        let mut tail_ix = Vec::with_capacity(edges.len());
        let mut head_ix = Vec::with_capacity(edges.len());
        let mut out_adj = vec![Vec::new(); nodes.len()];
        let mut in_adj = vec![Vec::new(); nodes.len()];
        let mut zero_traverse = 0usize;
        for (ix, e) in edges.iter().enumerate() {
            let t = node_ix(e.tail, &format!("edge {} tail", e.id.0))?;
            let h = node_ix(e.head, &format!("edge {} head", e.id.0))?;
            check_edge_attributes(e)?;
            if e.traverse_penalty == 0.0 {
                zero_traverse += 1;
            }
            tail_ix.push(t);
            head_ix.push(h);
            out_adj[t].push(ix);
            in_adj[h].push(ix);
        }
        if zero_traverse > 0 {
            log::warn!(
                "{zero_traverse} edge(s) have zero traverse penalty; cycle elimination relies on the simple-path rule alone"
            );
        }

        let start_ix = node_ix(start, "start")?;
        let release_ix = node_ix(release, "release")?;
        if start_ix == release_ix {
            return Err(Error::validation("start and release must differ"));
        }

        let mut by_group: BTreeMap<GroupId, Vec<usize>> = BTreeMap::new();
        for (ix, e) in edges.iter().enumerate() {
            by_group.entry(e.group).or_default().push(ix);
        }
        let mut edge_group = vec![0; edges.len()];
        let mut groups = Vec::with_capacity(by_group.len());
        for (gix, (id, members)) in by_group.into_iter().enumerate() {
            let cost = edges[members[0]].interdiction_cost;
            if let Some(&bad) = members
                .iter()
                .find(|&&m| edges[m].interdiction_cost != cost)
            {
                return Err(Error::validation(format!(
                    "group {} mixes interdiction costs ({} on edge {}, {} on edge {})",
                    id.0,
                    cost,
                    edges[members[0]].id.0,
                    edges[bad].interdiction_cost,
                    edges[bad].id.0
                )));
            }
            for &m in &members {
                edge_group[m] = gix;
            }
            groups.push(Group {
                id,
                cost,
                edges: members,
            });
        }

        let graph = PhysicalGraph {
            nodes,
            edges,
            start: start_ix,
            release: release_ix,
            tail_ix,
            head_ix,
            out_adj,
            in_adj,
            groups,
            edge_group,
            has_coordinates,
        };
        if !graph.reachable(graph.start, graph.release) {
            return Err(Error::validation(format!(
                "release {} is not reachable from start {}",
                release.0, start.0
            )));
        }
        Ok(graph)
    }

    fn reachable(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            if v == to {
                return true;
            }
            for &e in &self.out_adj[v] {
                let w = self.head_ix[e];
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    /// Consumes the graph and returns its records, for rebuilding with changes.
    pub fn into_parts(self) -> (Vec<NodeRecord>, Vec<EdgeRecord>, NodeId, NodeId) {
        let start = self.nodes[self.start].id;
        let release = self.nodes[self.release].id;
        (self.nodes, self.edges, start, release)
    }

    pub fn nodes(&self) -> &[NodeRecord] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn start(&self) -> NodeId {
        self.nodes[self.start].id
    }

    pub fn release(&self) -> NodeId {
        self.nodes[self.release].id
    }

    pub fn start_index(&self) -> usize {
        self.start
    }

    pub fn release_index(&self) -> usize {
        self.release
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_index(&self, id: NodeId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    pub fn edge_index(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn group_index(&self, id: GroupId) -> Option<usize> {
        self.groups.binary_search_by_key(&id, |g| g.id).ok()
    }

    pub fn tail_index(&self, edge: usize) -> usize {
        self.tail_ix[edge]
    }

    pub fn head_index(&self, edge: usize) -> usize {
        self.head_ix[edge]
    }

    pub fn out_edges(&self, node: usize) -> &[usize] {
        &self.out_adj[node]
    }

    pub fn in_edges(&self, node: usize) -> &[usize] {
        &self.in_adj[node]
    }

    /// Index into [`groups`](Self::groups) of the group owning `edge`.
    pub fn group_of(&self, edge: usize) -> usize {
        self.edge_group[edge]
    }

    pub fn has_coordinates(&self) -> bool {
        self.has_coordinates
    }

    /// Straight-line distance in meters between two nodes, if coordinates exist.
    pub fn node_distance(&self, a: usize, b: usize) -> Option<f64> {
        let (ax, ay) = self.nodes[a].euclid_xy?;
        let (bx, by) = self.nodes[b].euclid_xy?;
        Some((ax - bx).hypot(ay - by))
    }

    pub(crate) fn edge_index_checked(&self, id: EdgeId) -> Result<usize> {
        self.edge_index(id).ok_or(Error::InvalidReference {
            kind: "edge",
            id: id.0,
        })
    }

    pub(crate) fn group_index_checked(&self, id: GroupId) -> Result<usize> {
        self.group_index(id).ok_or(Error::InvalidReference {
            kind: "group",
            id: id.0,
        })
    }
}

fn check_edge_attributes(e: &EdgeRecord) -> Result<()> {
    let id = e.id.0;
    if !(e.traverse_penalty.is_finite() && e.traverse_penalty >= 0.0) {
        return Err(Error::validation(format!(
            "edge {id}: traverse penalty must be finite and >= 0, got {}",
            e.traverse_penalty
        )));
    }
    if !(e.interdiction_penalty.is_finite() && e.interdiction_penalty >= 0.0) {
        return Err(Error::validation(format!(
            "edge {id}: interdiction penalty must be finite and >= 0, got {}",
            e.interdiction_penalty
        )));
    }
    if e.interdiction_cost < 1 {
        return Err(Error::validation(format!(
            "edge {id}: interdiction cost must be >= 1"
        )));
    }
    if !(0.0..=1.0).contains(&e.kill_prob) {
        return Err(Error::validation(format!(
            "edge {id}: kill probability must lie in [0, 1], got {}",
            e.kill_prob
        )));
    }
    Ok(())
}

/// Fills `euclid_xy` from lat/lon with a local equirectangular projection and
/// enforces that coordinates are present on all nodes or none.
fn derive_planar_coordinates(nodes: &mut [NodeRecord]) -> Result<bool> {
    let geo: Vec<(f64, f64)> = nodes
        .iter()
        .filter_map(|n| Some((n.lat?, n.lon?)))
        .collect();
    if nodes.iter().any(|n| n.lat.is_some() != n.lon.is_some()) {
        return Err(Error::validation("a node has only one of lat/lon"));
    }
    if let Some(n) = nodes.iter().find(|n| {
        n.lat.is_some_and(|v| !(-90.0..=90.0).contains(&v)) || n.lon.is_some_and(|v| !v.is_finite())
    }) {
        return Err(Error::validation(format!(
            "node {} has invalid lat/lon",
            n.id.0
        )));
    }
    if !geo.is_empty() {
        let lat0 = geo.iter().map(|g| g.0).sum::<f64>() / geo.len() as f64;
        let cos0 = lat0.to_radians().cos();
        for n in nodes.iter_mut() {
            if let (Some(lat), Some(lon), None) = (n.lat, n.lon, n.euclid_xy) {
                let x = EARTH_RADIUS_M * lon.to_radians() * cos0;
                let y = EARTH_RADIUS_M * lat.to_radians();
                n.euclid_xy = Some((x, y));
            }
        }
    }
    let with_xy = nodes.iter().filter(|n| n.euclid_xy.is_some()).count();
    if with_xy != 0 && with_xy != nodes.len() {
        return Err(Error::validation(format!(
            "coordinates must be given for all nodes or none ({with_xy} of {} have them)",
            nodes.len()
        )));
    }
    Ok(with_xy != 0)
}

/// A complete game instance: arena, Red budget, and solver tolerance.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub graph: PhysicalGraph,
    pub budget: u64,
    pub epsilon: f64,
    /// Meters-to-traverse-penalty factor enabling the A* heuristic.
    pub meters_to_t: Option<f64>,
    pub format_version: String,
}

pub const FORMAT_VERSION: &str = "crp-scenario/1";
pub const DEFAULT_EPSILON: f64 = 0.1;

impl Scenario {
    pub fn new(graph: PhysicalGraph, budget: u64, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::validation(format!(
                "epsilon must be > 0, got {epsilon}"
            )));
        }
        Ok(Scenario {
            graph,
            budget,
            epsilon,
            meters_to_t: None,
            format_version: FORMAT_VERSION.to_owned(),
        })
    }

    /// Declares a meters-to-T factor. Every edge must satisfy
    /// `T(e) >= factor * straight_line_length(e)` so the heuristic stays admissible.
    pub fn with_meters_to_t(mut self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor >= 0.0) {
            return Err(Error::validation(format!(
                "meters_to_T must be >= 0, got {factor}"
            )));
        }
        if factor > 0.0 {
            if !self.graph.has_coordinates() {
                return Err(Error::validation("meters_to_T requires node coordinates"));
            }
            for (ix, e) in self.graph.edges().iter().enumerate() {
                let len = self
                    .graph
                    .node_distance(self.graph.tail_index(ix), self.graph.head_index(ix))
                    .unwrap_or(0.0);
                if e.traverse_penalty < factor * len * (1.0 - 1e-9) {
                    return Err(Error::validation(format!(
                        "edge {}: T = {} is below meters_to_T * length = {}",
                        e.id.0,
                        e.traverse_penalty,
                        factor * len
                    )));
                }
            }
        }
        self.meters_to_t = Some(factor);
        Ok(self)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::validation(format!(
                "epsilon must be > 0, got {epsilon}"
            )));
        }
        self.epsilon = epsilon;
        Ok(self)
    }
}

/// A Blue pure strategy: a simple directed path from start to release.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RoutePlan {
    pub edge_ids: Vec<EdgeId>,
}

impl RoutePlan {
    pub fn new(edge_ids: impl IntoIterator<Item = u64>) -> Self {
        RoutePlan {
            edge_ids: edge_ids.into_iter().map(EdgeId).collect(),
        }
    }

    pub(crate) fn from_indices(graph: &PhysicalGraph, edges: &[usize]) -> Self {
        RoutePlan {
            edge_ids: edges.iter().map(|&e| graph.edges()[e].id).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_ids.is_empty()
    }

    pub(crate) fn indices(&self, graph: &PhysicalGraph) -> Result<Vec<usize>> {
        self.edge_ids
            .iter()
            .map(|&id| graph.edge_index_checked(id))
            .collect()
    }

    /// Sum of traverse penalties along the route.
    pub fn traverse_cost(&self, graph: &PhysicalGraph) -> Result<f64> {
        Ok(self
            .indices(graph)?
            .into_iter()
            .map(|e| graph.edges()[e].traverse_penalty)
            .sum())
    }
}

/// A Red pure strategy: a set of interdiction groups.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InterdictionPlan {
    pub group_ids: BTreeSet<GroupId>,
    pub total_cost: u64,
}

impl InterdictionPlan {
    pub fn empty() -> Self {
        InterdictionPlan::default()
    }

    /// Builds a plan and computes its cost from the graph's groups.
    pub fn from_groups(
        graph: &PhysicalGraph,
        groups: impl IntoIterator<Item = GroupId>,
    ) -> Result<Self> {
        let group_ids: BTreeSet<GroupId> = groups.into_iter().collect();
        let mut total_cost = 0u64;
        for &g in &group_ids {
            total_cost += graph.groups()[graph.group_index_checked(g)?].cost;
        }
        Ok(InterdictionPlan {
            group_ids,
            total_cost,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.group_ids.is_empty()
    }

    /// Sorted, deduplicated indices of all member edges.
    pub(crate) fn edge_indices(&self, graph: &PhysicalGraph) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for &g in &self.group_ids {
            out.extend_from_slice(&graph.groups()[graph.group_index_checked(g)?].edges);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

/// Checks that `plan` is a simple start→release path in `graph`.
///
/// Unknown edge ids are an error rather than `false`.
pub fn validate_route(graph: &PhysicalGraph, plan: &RoutePlan) -> Result<bool> {
    if plan.is_empty() {
        return Err(Error::contract("route plan must be nonempty"));
    }
    let edges = plan.indices(graph)?;
    if graph.tail_index(edges[0]) != graph.start_index() {
        return Ok(false);
    }
    if graph.head_index(*edges.last().unwrap()) != graph.release_index() {
        return Ok(false);
    }
    let mut visited = HashSet::with_capacity(edges.len() + 1);
    visited.insert(graph.start_index());
    for pair in edges.windows(2) {
        if graph.head_index(pair[0]) != graph.tail_index(pair[1]) {
            return Ok(false);
        }
    }
    for &e in &edges {
        if !visited.insert(graph.head_index(e)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff every group exists, the recorded cost matches, and it fits the budget.
pub fn validate_interdiction(scenario: &Scenario, plan: &InterdictionPlan) -> Result<bool> {
    let graph = &scenario.graph;
    let mut cost = 0u64;
    for &g in &plan.group_ids {
        cost += graph.groups()[graph.group_index_checked(g)?].cost;
    }
    Ok(cost == plan.total_cost && cost <= scenario.budget)
}

/// Expands a plan's groups to their member edges, ordered by edge id.
pub fn interdicted_edges(graph: &PhysicalGraph, plan: &InterdictionPlan) -> Result<Vec<EdgeId>> {
    Ok(plan
        .edge_indices(graph)?
        .into_iter()
        .map(|e| graph.edges()[e].id)
        .collect())
}
