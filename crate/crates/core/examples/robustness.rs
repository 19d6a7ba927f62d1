//! How a route mix designed for one budget holds up when Red's real budget
//! differs. Rows are design budgets, columns the budget Red actually has.

use contested_routing::io::robustness_csv;
use contested_routing::{generate_grid, robustness_table, Result, DEFAULT_MAX_ITERS};

pub fn run_example() -> Result<()> {
    let scenario = generate_grid(10, 10, 3, 3)?;
    let table = robustness_table(&scenario, &[1, 2, 3, 4], DEFAULT_MAX_ITERS)?;
    print!("{}", robustness_csv(&table));
    for (b, v) in table.budgets.iter().zip(&table.values) {
        println!("design budget {b}: equilibrium value {v:.3}");
    }
    Ok(())
}

fn main() -> Result<()> {
    run_example()
}
