//! Generate a seeded grid, solve it, and compare against the baselines.
//!
//! ```text
//! cargo run --release --example solve_grid -- 30 30 4 7
//! ```

use std::time::Instant;

use contested_routing::{
    best_response_red, evaluate_exploitability, fastest_route, generate_grid, mixed_throughput,
    red_aware_route, solve, MixedStrategy, Result, DEFAULT_MAX_ITERS,
};

fn run(rows: usize, cols: usize, budget: u64, seed: u64) -> Result<()> {
    let scenario = generate_grid(rows, cols, seed, budget)?;
    println!(
        "{rows}x{cols} grid: {} nodes, {} edges, budget {budget}",
        scenario.graph.node_count(),
        scenario.graph.edge_count()
    );

    let clock = Instant::now();
    let eq = solve(&scenario, DEFAULT_MAX_ITERS)?;
    println!(
        "value {:.4} gap {:.2e} after {} iterations in {:.2?} (support {} routes / {} plans)",
        eq.value,
        eq.gap,
        eq.iterations,
        clock.elapsed(),
        eq.blue_mix.len(),
        eq.red_mix.len()
    );

    let report = |name: &str, mix: &MixedStrategy<_>| -> Result<()> {
        let worst = evaluate_exploitability(&scenario, mix)?;
        let (y, _) = best_response_red(&scenario, mix)?;
        let tp = mixed_throughput(&scenario, mix, &MixedStrategy::pure(y))?;
        println!("{name:>10}: worst-case utility {worst:8.3}, throughput {tp:.4}");
        Ok(())
    };
    report("mixed", &eq.blue_mix)?;
    report("fastest", &MixedStrategy::pure(fastest_route(&scenario)?))?;
    report(
        "red-aware",
        &MixedStrategy::pure(red_aware_route(&scenario, &eq)?),
    )?;
    Ok(())
}

pub fn run_example() -> Result<()> {
    run(8, 8, 3, 1)
}

fn main() -> Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric argument"))
        .collect();
    match args[..] {
        [rows, cols, budget, seed] => run(rows as usize, cols as usize, budget, seed),
        [] => run_example(),
        _ => panic!("usage: solve_grid [ROWS COLS BUDGET SEED]"),
    }
}
