//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

mod common;

use std::cell::RefCell;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use contested_routing::{
    best_response_blue, best_response_red, evaluate_exploitability, fastest_route, generate_grid,
    generate_line_knapsack, mixed_throughput, red_aware_route, solve, solve_knapsack, solve_matrix,
    throughput, EquilibriumResult, GroupId, InterdictionPlan, KnapsackInstance, KnapsackItem,
    MixedStrategy, Scenario, DEFAULT_MAX_ITERS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

#[derive(Default)]
struct Certificates {
    checked: usize,
    failures: Vec<String>,
}

thread_local! {
    static CERTS: RefCell<Certificates> = RefCell::new(Certificates::default());
}

/// Solves and records whether the returned result carries a valid certificate.
fn certified_solve(scenario: &Scenario, label: &str) -> EquilibriumResult {
    let eq = solve(scenario, DEFAULT_MAX_ITERS).unwrap_or_else(|e| panic!("{label}: {e}"));
    let slack = 1e-6;
    let ok = eq.gap <= scenario.epsilon
        && eq.lower_bound <= eq.value + slack
        && eq.value <= eq.upper_bound + slack;
    CERTS.with(|c| {
        let mut c = c.borrow_mut();
        c.checked += 1;
        if !ok {
            c.failures.push(format!(
                "{label}: gap {} lower {} value {} upper {}",
                eq.gap, eq.lower_bound, eq.value, eq.upper_bound
            ));
        }
    });
    eq
}

fn knapsack_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6e);
    let clock = Instant::now();
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=15);
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
        // Multiples of 1/8 keep every subset sum exact in binary.
        let values: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0..=400) as f64 / 8.0)
            .collect();
        let capacity = rng.gen_range(0..=30);
        let items = (0..n)
            .map(|i| KnapsackItem {
                group: GroupId(i as u64),
                weight: weights[i],
                value: values[i],
            })
            .collect();
        let (chosen, value) = solve_knapsack(&KnapsackInstance::new(items, capacity).unwrap());
        let weight: u64 = chosen.iter().map(|g| weights[g.0 as usize]).sum();
        let sum: f64 = chosen.iter().map(|g| values[g.0 as usize]).sum();
        if value != brute_knapsack(&weights, &values, capacity) || weight > capacity || sum != value
        {
            mismatches += 1;
        }
    }
    let elapsed = clock.elapsed();
    outcome(
        mismatches == 0 && elapsed < Duration::from_secs(5),
        format!("200 instances, {mismatches} mismatches, {elapsed:.2?} (limit 5 s)"),
    )
}

fn blue_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x626c);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=12);
        let budget = rng.gen_range(0..=4);
        let scenario = random_scenario(&mut rng, n, 12, budget);
        let red = random_red_mix(&mut rng, &scenario);
        let (route, value) = best_response_blue(&scenario, &red).unwrap();
        let best = simple_paths(&scenario.graph)
            .iter()
            .map(|p| expected_reference_utility(&scenario, p, &red))
            .fold(f64::INFINITY, f64::min);
        let path: Vec<usize> = route
            .edge_ids
            .iter()
            .map(|&e| scenario.graph.edge_index(e).unwrap())
            .collect();
        let own = expected_reference_utility(&scenario, &path, &red);
        worst = worst.max((value - best).abs()).max((own - best).abs());
    }
    outcome(
        worst <= 1e-9,
        format!("100 graphs, max |error| {worst:.2e} (limit 1e-9)"),
    )
}

fn full_game_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6667);
    let clock = Instant::now();
    let mut worst = 0.0f64;
    let mut uncertified = 0;
    for k in 0..50 {
        let n = rng.gen_range(4..=12);
        let budget = rng.gen_range(0..=4);
        let scenario = random_scenario(&mut rng, n, 12, budget);
        let (_, _, matrix) = full_matrix(&scenario);
        let exact = solve_matrix(&matrix).unwrap();
        let (floor, ceiling) = mix_bounds(&matrix, &exact.row_probs, &exact.col_probs);
        if ceiling - floor > 1e-6 {
            uncertified += 1;
        }
        let eq = certified_solve(&scenario, &format!("full-game #{k}"));
        worst = worst.max((eq.value - exact.value).abs());
    }
    let elapsed = clock.elapsed();
    outcome(
        worst <= 0.01 && uncertified == 0 && elapsed < Duration::from_secs(60),
        format!(
            "50 scenarios, max |DO - exact| {worst:.2e} (limit 0.01), \
             {uncertified} uncertified references, {elapsed:.2?} (limit 60 s)"
        ),
    )
}

fn knapsack_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7031);
    let mut mismatches = Vec::new();
    for k in 0..100 {
        let n = rng.gen_range(1..=12);
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(1..=20) as f64).collect();
        let capacity = rng.gen_range(0..=30);
        let scenario = generate_line_knapsack(&weights, &values, capacity, None).unwrap();
        let eq = certified_solve(&scenario, &format!("line #{k}"));
        let expected = n as f64 + brute_knapsack(&weights, &values, capacity);
        if eq.value != expected {
            mismatches.push(format!("#{k}: {} != {expected}", eq.value));
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("100 instances, exact mismatches: {mismatches:?}"),
    )
}

fn budget_monotonicity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f);
    let eps = 0.1;
    let mut violations = Vec::new();
    for k in 0..20 {
        let n = rng.gen_range(4..=12);
        let base = random_scenario(&mut rng, n, 12, 0)
            .with_epsilon(eps)
            .unwrap();
        let values: Vec<f64> = (0..=5)
            .map(|b| {
                certified_solve(&base.clone().with_budget(b), &format!("mono #{k} B={b}")).value
            })
            .collect();
        for b in 0..5 {
            if values[b + 1] < values[b] - 2.0 * eps {
                violations.push(format!("#{k} B={b}: {} -> {}", values[b], values[b + 1]));
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("20 scenarios x B=0..4, violations: {violations:?}"),
    )
}

fn baseline_dominance() -> Outcome {
    let mut held = 0;
    let mut failed_seeds = Vec::new();
    for seed in 0..20u64 {
        let scenario = generate_grid(30, 30, seed, 4).unwrap();
        let eq = certified_solve(&scenario, &format!("grid seed {seed}"));
        let score = |mix: &MixedStrategy<_>| {
            let worst = evaluate_exploitability(&scenario, mix).unwrap();
            let (y, _) = best_response_red(&scenario, mix).unwrap();
            (
                worst,
                mixed_throughput(&scenario, mix, &MixedStrategy::pure(y)).unwrap(),
            )
        };
        let (eq_worst, eq_tp) = score(&eq.blue_mix);
        let (fast_worst, fast_tp) = score(&MixedStrategy::pure(fastest_route(&scenario).unwrap()));
        let (aware_worst, aware_tp) = score(&MixedStrategy::pure(
            red_aware_route(&scenario, &eq).unwrap(),
        ));
        if eq_worst <= fast_worst
            && eq_worst <= aware_worst
            && eq_tp >= fast_tp
            && eq_tp >= aware_tp
        {
            held += 1;
        } else {
            failed_seeds.push(seed);
        }
    }
    outcome(
        held >= 19,
        format!(
            "30x30 grids, B=4: ordering held on {held}/20 seeds (need 19), failed {failed_seeds:?}"
        ),
    )
}

fn scale_check() -> Outcome {
    let scenario = generate_grid(100, 100, 1, 6).unwrap();
    let clock = Instant::now();
    let eq = certified_solve(&scenario, "100x100 grid");
    let elapsed = clock.elapsed();
    outcome(
        elapsed <= Duration::from_secs(120) && eq.iterations <= 300,
        format!(
            "{} nodes, {} edges: {} iterations (limit 300), {elapsed:.2?} (limit 120 s)",
            scenario.graph.node_count(),
            scenario.graph.edge_count(),
            eq.iterations
        ),
    )
}

fn throughput_worked_value() -> Outcome {
    let scenario = generate_line_knapsack(&[1; 5], &[3.0; 5], 5, None).unwrap();
    let route = fastest_route(&scenario).unwrap();
    let all = InterdictionPlan::from_groups(&scenario.graph, (0..5).map(GroupId)).unwrap();
    let tp = throughput(&scenario, &route, &MixedStrategy::pure(all)).unwrap();
    outcome(
        tp == 0.03125,
        format!("five sure high p-k hits: throughput {tp} (expected 0.03125)"),
    )
}

fn gap_certificates() -> Outcome {
    CERTS.with(|c| {
        let c = c.borrow();
        outcome(
            c.checked > 0 && c.failures.is_empty(),
            format!("{} solves checked, failures: {:?}", c.checked, c.failures),
        )
    })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("red oracle exactness", knapsack_exactness),
        ("blue oracle exactness", blue_exactness),
        ("full-game agreement", full_game_agreement),
        ("knapsack reduction", knapsack_reduction),
        ("budget monotonicity", budget_monotonicity),
        ("baseline dominance", baseline_dominance),
        ("scale check", scale_check),
        ("throughput worked value", throughput_worked_value),
        // Last, so that it covers every solve above.
        ("gap certificate", gap_certificates),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| outcome(false, "panicked"));
        if !result.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {}",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
