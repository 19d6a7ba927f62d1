use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use contested_routing::io::{
    export_solution, load_scenario, robustness_csv, save_scenario, ExportFormat,
};
use contested_routing::{
    best_response_red, evaluate_exploitability, fastest_route, generate_grid,
    generate_line_knapsack, mixed_throughput, red_aware_route, robustness_table, solve, Error,
    MixedStrategy, Result, Scenario, DEFAULT_MAX_ITERS,
};

#[derive(Parser)]
#[command(name = "crp", version, about = "Contested route planning solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario to an ε-equilibrium and export it.
    Solve {
        #[command(flatten)]
        input: ScenarioArgs,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        /// Output directory; the file is named `solution.<format>`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "json")]
        format: ExportFormat,
    },
    /// Evaluate a deterministic baseline route against a best-responding Red.
    Baseline {
        #[command(flatten)]
        input: ScenarioArgs,
        #[arg(long, value_parser = ["fastest", "redaware"])]
        which: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
    },
    /// Cross-budget throughput table as CSV.
    Robustness {
        #[arg(long)]
        scenario: PathBuf,
        /// Inclusive range `LO..HI` or a comma-separated list.
        #[arg(long, value_parser = parse_budgets)]
        budgets: Budgets,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
        max_iters: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic scenario file.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Load a scenario file and check every invariant.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Overrides the budget stored in the file.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Seeded planar grid with two-way streets and tagged bridges.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Line graph whose game value encodes a knapsack instance.
    Line {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        traverse: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone)]
struct Budgets(Vec<u64>);

fn parse_budgets(s: &str) -> std::result::Result<Budgets, String> {
    let bad = |_| format!("invalid budget list {s:?}");
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(bad)?;
        let hi: u64 = hi.trim().parse().map_err(bad)?;
        if lo > hi {
            return Err(format!("empty budget range {s:?}"));
        }
        Ok(Budgets((lo..=hi).collect()))
    } else {
        s.split(',')
            .map(|b| b.trim().parse().map_err(bad))
            .collect::<std::result::Result<_, _>>()
            .map(Budgets)
    }
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario> {
        let scenario = load_scenario(&self.scenario)?;
        Ok(match self.budget {
            Some(b) => scenario.with_budget(b),
            None => scenario,
        })
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            input,
            epsilon,
            max_iters,
            out,
            format,
        } => {
            let mut scenario = input.load()?;
            if let Some(eps) = epsilon {
                scenario = scenario.with_epsilon(eps)?;
            }
            fs::create_dir_all(&out)?;
            let path = out.join(format!("solution.{}", format.extension()));
            let eq = match solve(&scenario, max_iters) {
                Ok(eq) => eq,
                Err(Error::BudgetExceeded(partial)) => {
                    export_solution(&partial, &scenario, &path, format)?;
                    return Err(Error::BudgetExceeded(partial));
                }
                Err(e) => return Err(e),
            };
            export_solution(&eq, &scenario, &path, format)?;
            println!(
                "value {} gap {} iterations {} -> {}",
                eq.value,
                eq.gap,
                eq.iterations,
                path.display()
            );
        }
        Command::Baseline {
            input,
            which,
            max_iters,
        } => {
            let scenario = input.load()?;
            let route = if which == "fastest" {
                fastest_route(&scenario)?
            } else {
                red_aware_route(&scenario, &solve(&scenario, max_iters)?)?
            };
            let mix = MixedStrategy::pure(route.clone());
            let worst = evaluate_exploitability(&scenario, &mix)?;
            let (y, _) = best_response_red(&scenario, &mix)?;
            let tp = mixed_throughput(&scenario, &mix, &MixedStrategy::pure(y.clone()))?;
            let report = json!({
                "baseline": which,
                "edge_ids": route.edge_ids,
                "worst_case_utility": worst,
                "throughput": tp,
                "red_response": y,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        Command::Robustness {
            scenario,
            budgets,
            max_iters,
            out,
        } => {
            let scenario = load_scenario(&scenario)?;
            let csv = robustness_csv(&robustness_table(&scenario, &budgets.0, max_iters)?);
            match out {
                Some(path) => fs::write(path, csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Gen(GenCommand::Grid {
            rows,
            cols,
            seed,
            budget,
            out,
        }) => {
            save_scenario(&generate_grid(rows, cols, seed, budget)?, out)?;
        }
        Command::Gen(GenCommand::Line {
            weights,
            values,
            budget,
            traverse,
            out,
        }) => {
            save_scenario(
                &generate_line_knapsack(&weights, &values, budget, traverse)?,
                out,
            )?;
        }
        Command::Validate { scenario } => {
            let s = load_scenario(&scenario)?;
            println!(
                "ok: {} nodes, {} edges, {} groups, budget {}",
                s.graph.node_count(),
                s.graph.edge_count(),
                s.graph.groups().len(),
                s.budget
            );
        }
    }
    Ok(())
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Validation(_)
        | Error::Parse { .. }
        | Error::InvalidReference { .. }
        | Error::NoPath { .. }
        | Error::ContractViolation(_)
        | Error::HeuristicUnavailable(_)
        | Error::UnsupportedFormat(_) => 2,
        Error::BudgetExceeded(_) => 3,
        Error::Io(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
