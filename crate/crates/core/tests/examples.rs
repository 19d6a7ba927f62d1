//! Every example's `run_example` must succeed.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[allow(dead_code)]
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(solve_grid, "../examples/solve_grid.rs");
example!(knapsack_reduction, "../examples/knapsack_reduction.rs");
example!(best_responses, "../examples/best_responses.rs");
example!(matrix_game, "../examples/matrix_game.rs");
example!(robustness, "../examples/robustness.rs");
example!(baselines, "../examples/baselines.rs");
example!(scenario_io, "../examples/scenario_io.rs");
