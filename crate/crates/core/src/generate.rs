//! Synthetic scenarios: seeded grids and the knapsack line graph.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, NodeId, NodeRecord, PhysicalGraph, Scenario, DEFAULT_EPSILON};
use crate::prepare::{assign_costs, assign_penalties, BRIDGE_TAG};

/// Spacing between neighbouring grid nodes.
pub const GRID_SPACING_M: f64 = 100.0;
/// Fraction of grid road segments tagged as bridges.
pub const GRID_BRIDGE_FRACTION: f64 = 0.1;
/// Meters-to-T factor declared on generated grids. Every segment has
/// `T >= 1` per 100 m, so 0.0099 leaves a 1% margin for projection error.
pub const GRID_METERS_TO_T: f64 = 0.0099;

const METERS_PER_DEGREE: f64 = 6_371_008.8 * std::f64::consts::PI / 180.0;

/// A 4-connected directed grid near (0°, 0°) with corner start and release.
///
/// Each road segment yields two opposite arcs sharing a traverse penalty
/// drawn uniformly from `[1, 2]` (rounded to 1e-3). A tenth of the segments
/// are tagged as bridges; penalties and budget-normalised costs are then
/// assigned from tags and geometry. Arcs keep singleton groups.
pub fn generate_grid(rows: usize, cols: usize, seed: u64, budget: u64) -> Result<Scenario> {
    if rows < 2 || cols < 2 {
        return Err(Error::contract(format!(
            "grid must be at least 2x2, got {rows}x{cols}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = GRID_SPACING_M / METERS_PER_DEGREE;
    let id = |r: usize, c: usize| (r * cols + c) as u64;

    let mut nodes = Vec::with_capacity(rows * cols);
    let mut segments = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            nodes.push(NodeRecord::with_latlon(
                id(r, c),
                r as f64 * step,
                c as f64 * step,
            ));
            if c + 1 < cols {
                segments.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                segments.push((id(r, c), id(r + 1, c)));
            }
        }
    }

    let traverse: Vec<f64> = segments
        .iter()
        .map(|_| (rng.gen_range(1.0..=2.0f64) * 1000.0).round() / 1000.0)
        .collect();
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.shuffle(&mut rng);
    let bridges = (segments.len() as f64 * GRID_BRIDGE_FRACTION).round() as usize;
    let mut is_bridge = vec![false; segments.len()];
    for &s in &order[..bridges] {
        is_bridge[s] = true;
    }

    let mut edges = Vec::with_capacity(2 * segments.len());
    for (s, &(a, b)) in segments.iter().enumerate() {
        for (tail, head) in [(a, b), (b, a)] {
            let mut e = EdgeRecord::new(edges.len() as u64, tail, head, traverse[s], 1.0, 1);
            if is_bridge[s] {
                e = e.with_tag(BRIDGE_TAG);
            }
            edges.push(e);
        }
    }

    let graph = PhysicalGraph::new(nodes, edges, NodeId(0), NodeId(id(rows - 1, cols - 1)))?;
    let graph = assign_costs(assign_penalties(graph)?, budget)?;
    Scenario::new(graph, budget, DEFAULT_EPSILON)?.with_meters_to_t(GRID_METERS_TO_T)
}

/// The line graph `v0 -> v1 -> ... -> vn` whose i-th edge has cost
/// `weights[i]` and penalty `values[i]`, so Red's best response is exactly
/// the knapsack problem with capacity `budget`.
pub fn generate_line_knapsack(
    weights: &[u64],
    values: &[f64],
    budget: u64,
    traverse: Option<f64>,
) -> Result<Scenario> {
    if weights.is_empty() || weights.len() != values.len() {
        return Err(Error::contract(
            "weights and values must be nonempty and of equal length",
        ));
    }
    let t = traverse.unwrap_or(1.0);
    let n = weights.len() as u64;
    let nodes = (0..=n).map(NodeRecord::new).collect();
    let edges = (0..n)
        .map(|i| {
            let k = i as usize;
            EdgeRecord::new(i, i, i + 1, t, values[k], weights[k])
        })
        .collect();
    let graph = PhysicalGraph::new(nodes, edges, NodeId(0), NodeId(n))?;
    Scenario::new(graph, budget, DEFAULT_EPSILON)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_matches_items() {
        let s = generate_line_knapsack(&[2, 3], &[3.0, 4.0], 3, None).unwrap();
        assert_eq!(s.graph.node_count(), 3);
        let e = s.graph.edges();
        assert_eq!(e.len(), 2);
        assert_eq!(
            (e[0].interdiction_cost, e[0].interdiction_penalty),
            (2, 3.0)
        );
        assert_eq!(
            (e[1].interdiction_cost, e[1].interdiction_penalty),
            (3, 4.0)
        );
        assert!(e.iter().all(|e| e.traverse_penalty == 1.0));
        assert!(generate_line_knapsack(&[1, 2], &[1.0], 3, None).is_err());
        assert!(generate_line_knapsack(&[0], &[1.0], 3, None).is_err());
    }

    #[test]
    fn tiny_grid_counts() {
        let s = generate_grid(2, 2, 7, 3).unwrap();
        assert_eq!(s.graph.node_count(), 4);
        assert_eq!(s.graph.edge_count(), 8);
        assert!(generate_grid(1, 5, 7, 3).is_err());
    }

    #[test]
    fn grid_is_seeded() {
        let a = generate_grid(6, 5, 11, 4).unwrap();
        let b = generate_grid(6, 5, 11, 4).unwrap();
        let c = generate_grid(6, 5, 12, 4).unwrap();
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_ne!(a.graph.edges(), c.graph.edges());
        let bridges = a
            .graph
            .edges()
            .iter()
            .filter(|e| e.tags.contains(BRIDGE_TAG))
            .count();
        // 49 segments → 5 bridge segments → 10 arcs.
        assert_eq!(bridges, 10);
        assert!(a
            .graph
            .edges()
            .iter()
            .all(|e| (1.0..=2.0).contains(&e.traverse_penalty)));
    }
}
