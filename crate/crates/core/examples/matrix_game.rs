//! Solving a zero-sum matrix game directly. Rows are minimized, columns
//! maximized; the result carries both mixed strategies and the value.

use contested_routing::{solve_matrix, Result};

fn show(name: &str, payoff: &[Vec<f64>]) -> Result<()> {
    let sol = solve_matrix(payoff)?;
    println!(
        "{name}: value {:.4}, rows {:?}, columns {:?}, certificate [{:.6}, {:.6}]",
        sol.value,
        sol.row_probs,
        sol.col_probs,
        sol.row_floor(payoff),
        sol.column_ceiling(payoff)
    );
    Ok(())
}

pub fn run_example() -> Result<()> {
    show("matching pennies", &[vec![1.0, -1.0], vec![-1.0, 1.0]])?;
    show(
        "rock paper scissors",
        &[
            vec![0.0, 1.0, -1.0],
            vec![-1.0, 0.0, 1.0],
            vec![1.0, -1.0, 0.0],
        ],
    )?;
    show("saddle point", &[vec![3.0, 1.0], vec![4.0, 2.0]])?;
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
