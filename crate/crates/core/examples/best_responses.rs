//! The two oracles on a diamond: Blue's shortest path against a Red mix and
//! Red's knapsack against a Blue mix.

use contested_routing::{
    best_response_blue, best_response_red, EdgeRecord, GroupId, InterdictionPlan, MixedStrategy,
    NodeId, NodeRecord, PhysicalGraph, Result, RoutePlan, Scenario,
};

/// s -> a -> r is fast but exposed, s -> b -> r is slow.
fn diamond() -> Result<Scenario> {
    let nodes = (0..4).map(NodeRecord::new).collect();
    let edges = vec![
        EdgeRecord::new(0, 0, 1, 1.0, 3.0, 1),
        EdgeRecord::new(1, 1, 3, 1.0, 3.0, 1),
        EdgeRecord::new(2, 0, 2, 1.5, 1.0, 1),
        EdgeRecord::new(3, 2, 3, 1.5, 1.0, 1),
    ];
    let graph = PhysicalGraph::new(nodes, edges, NodeId(0), NodeId(3))?;
    Scenario::new(graph, 1, 0.1)
}

pub fn run_example() -> Result<()> {
    let scenario = diamond()?;
    let top = RoutePlan::new([0, 1]);
    let bottom = RoutePlan::new([2, 3]);

    for q in [0.0, 0.25, 0.5] {
        let hit_top = InterdictionPlan::from_groups(&scenario.graph, [GroupId(0)])?;
        let red = MixedStrategy::new(vec![InterdictionPlan::empty(), hit_top], vec![1.0 - q, q])?;
        let (route, u) = best_response_blue(&scenario, &red)?;
        println!(
            "red hits the top with p={q}: blue takes {:?}, expected cost {u}",
            route.edge_ids
        );
    }

    let blue = MixedStrategy::new(vec![top, bottom], vec![0.5, 0.5])?;
    let (plan, u) = best_response_red(&scenario, &blue)?;
    println!(
        "against a coin flip red interdicts {:?}, utility {u}",
        plan.group_ids
    );
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
