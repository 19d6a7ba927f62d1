//! Scenario files and solution export.

mod export;
mod scenario_file;

pub use export::{
    attack_distribution_csv, export_solution, robustness_csv, solution_geojson, ExportFormat,
};
pub use scenario_file::{
    canonical_float, load_scenario, save_scenario, scenario_from_str, scenario_to_string,
    EdgeEntry, NodeEntry, ScenarioFile,
};
