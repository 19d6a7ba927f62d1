//! Build a small street network by hand, derive penalties and costs from
//! tags and geometry, save it, load it back, and export a solution.

use contested_routing::io::{export_solution, load_scenario, save_scenario, ExportFormat};
use contested_routing::{
    assign_costs, assign_penalties, solve, EdgeRecord, NodeId, NodeRecord, PhysicalGraph, Result,
    Scenario,
};

/// Two-way streets on a 2x3 block; the middle rung is a bridge.
fn streets() -> Result<Scenario> {
    let step = 0.001;
    let nodes = (0..6)
        .map(|i| {
            NodeRecord::with_latlon(
                i,
                48.0 + (i / 3) as f64 * step,
                11.0 + (i % 3) as f64 * step,
            )
        })
        .collect();
    let segments = [
        (0, 1, false),
        (1, 2, false),
        (3, 4, false),
        (4, 5, false),
        (0, 3, false),
        (1, 4, true),
        (2, 5, false),
    ];
    let mut edges = Vec::new();
    for (k, &(a, b, bridge)) in segments.iter().enumerate() {
        let k = k as u64;
        for (id, tail, head) in [(2 * k, a, b), (2 * k + 1, b, a)] {
            let e = EdgeRecord::new(id, tail, head, 1.0, 1.0, 1).with_group(k);
            edges.push(if bridge { e.with_tag("bridge") } else { e });
        }
    }
    let budget = 2;
    let graph = PhysicalGraph::new(nodes, edges, NodeId(0), NodeId(5))?;
    let graph = assign_costs(assign_penalties(graph)?, budget)?;
    Scenario::new(graph, budget, 0.1)
}

pub fn run_example() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("crp-scenario-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let scenario = streets()?;
    let path = dir.join("streets.json");
    save_scenario(&scenario, &path)?;
    let loaded = load_scenario(&path)?;
    for e in loaded.graph.edges() {
        println!(
            "edge {}: P={} C={} kill={} {:?}",
            e.id, e.interdiction_penalty, e.interdiction_cost, e.kill_prob, e.tags
        );
    }

    let eq = solve(&loaded, 100)?;
    for format in [ExportFormat::Json, ExportFormat::Csv, ExportFormat::GeoJson] {
        let out = dir.join(format!("solution.{}", format.extension()));
        export_solution(&eq, &loaded, &out, format)?;
        println!("wrote {}", out.display());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
