//! A line of edges turns Red's problem into a 0/1 knapsack: the only route
//! crosses every edge, so Red picks the most valuable affordable subset and
//! the game value is the path length plus the knapsack optimum.

use contested_routing::{
    best_response_red, generate_line_knapsack, solve, solve_knapsack, GroupId, KnapsackInstance,
    KnapsackItem, MixedStrategy, Result, RoutePlan,
};

pub fn run_example() -> Result<()> {
    let weights = [3, 4, 5, 2];
    let values = [4.0, 5.0, 7.0, 3.0];
    let capacity = 7;

    let items = weights
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (&weight, value))| KnapsackItem {
            group: GroupId(i as u64),
            weight,
            value,
        })
        .collect();
    let (chosen, best) = solve_knapsack(&KnapsackInstance::new(items, capacity)?);
    println!("knapsack optimum {best} with items {chosen:?}");

    let scenario = generate_line_knapsack(&weights, &values, capacity, None)?;
    let only_route = RoutePlan::new(0..weights.len() as u64);
    let (plan, u) = best_response_red(&scenario, &MixedStrategy::pure(only_route))?;
    println!("red best response {:?} worth {u}", plan.group_ids);

    let eq = solve(&scenario, 100)?;
    println!("game value {} = {} edges + {best}", eq.value, weights.len());
    assert_eq!(eq.value, weights.len() as f64 + best);
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
