//! Equilibrium mix against the fastest and red-aware routes: worst-case
//! utility, survival throughput, and how many low/high p-k attacks land.

use contested_routing::{
    attack_distribution, best_response_red, evaluate_exploitability, fastest_route, generate_grid,
    graph::HIGH_PK_PENALTY, mixed_throughput, red_aware_route, solve, MixedStrategy, Result,
    RoutePlan, Scenario,
};

fn report(scenario: &Scenario, name: &str, mix: &MixedStrategy<RoutePlan>) -> Result<()> {
    let (y, worst) = best_response_red(scenario, mix)?;
    debug_assert_eq!(worst, evaluate_exploitability(scenario, mix)?);
    let red = MixedStrategy::pure(y);
    let tp = mixed_throughput(scenario, mix, &red)?;
    let dist = attack_distribution(scenario, mix, &red, HIGH_PK_PENALTY)?;
    println!("{name:>10}: worst case {worst:.3}, throughput {tp:.4}");
    for (&(low, high), p) in &dist.entries {
        println!("{low:>12} low / {high} high: {p:.4}");
    }
    Ok(())
}

pub fn run_example() -> Result<()> {
    let scenario = generate_grid(12, 12, 5, 4)?;
    let eq = solve(&scenario, 1000)?;
    report(&scenario, "mixed", &eq.blue_mix)?;
    report(
        &scenario,
        "fastest",
        &MixedStrategy::pure(fastest_route(&scenario)?),
    )?;
    report(
        &scenario,
        "red-aware",
        &MixedStrategy::pure(red_aware_route(&scenario, &eq)?),
    )?;
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
