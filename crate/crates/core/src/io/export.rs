use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::double_oracle::EquilibriumResult;
use crate::error::{Error, Result};
use crate::graph::Scenario;
use crate::metrics::{
    default_attack_distribution, edge_interdiction_probabilities, AttackCountDistribution,
    RobustnessTable,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Csv,
    GeoJson,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Json => "json",
            ExportFormat::Csv => "csv",
            ExportFormat::GeoJson => "geojson",
        }
    }
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "csv" => Ok(ExportFormat::Csv),
            "geojson" => Ok(ExportFormat::GeoJson),
            other => Err(Error::UnsupportedFormat(other.to_owned())),
        }
    }
}

/// Writes `eq` to `path`:
/// * json: the whole result, trace included;
/// * csv: the low/high attack-count distribution of the equilibrium;
/// * geojson: Blue support routes and per-edge Red interdiction probability.
pub fn export_solution(
    eq: &EquilibriumResult,
    scenario: &Scenario,
    path: impl AsRef<Path>,
    format: ExportFormat,
) -> Result<()> {
    let text = match format {
        ExportFormat::Json => {
            let mut s = serde_json::to_string_pretty(eq).expect("result serializes");
            s.push('\n');
            s
        }
        ExportFormat::Csv => {
            let dist = default_attack_distribution(scenario, &eq.blue_mix, &eq.red_mix)?;
            attack_distribution_csv(&dist)
        }
        ExportFormat::GeoJson => {
            let mut s = serde_json::to_string_pretty(&solution_geojson(eq, scenario)?)
                .expect("geojson serializes");
            s.push('\n');
            s
        }
    };
    fs::write(path, text)?;
    Ok(())
}

pub fn attack_distribution_csv(dist: &AttackCountDistribution) -> String {
    let mut out = String::from("low_attacks,high_attacks,probability\n");
    for (&(low, high), p) in &dist.entries {
        writeln!(out, "{low},{high},{p}").unwrap();
    }
    out
}

/// One row per design budget, one column per actual Red budget.
pub fn robustness_csv(table: &RobustnessTable) -> String {
    let mut out = String::from("design_budget");
    for b in &table.budgets {
        write!(out, ",red_budget_{b}").unwrap();
    }
    out.push('\n');
    for (b, row) in table.budgets.iter().zip(&table.throughput) {
        write!(out, "{b}").unwrap();
        for t in row {
            write!(out, ",{t}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn lon_lat(scenario: &Scenario, node: usize) -> Option<[f64; 2]> {
    let n = &scenario.graph.nodes()[node];
    Some([n.lon?, n.lat?])
}

pub fn solution_geojson(eq: &EquilibriumResult, scenario: &Scenario) -> Result<Value> {
    let graph = &scenario.graph;
    if graph.nodes().iter().any(|n| n.lat.is_none()) {
        return Err(Error::UnsupportedFormat(
            "geojson export needs lat/lon on every node".into(),
        ));
    }
    let mut features = Vec::new();
    for (route, p) in eq.blue_mix.iter() {
        let edges = route.indices(graph)?;
        let mut coords = vec![lon_lat(scenario, graph.tail_index(edges[0]))];
        coords.extend(
            edges
                .iter()
                .map(|&e| lon_lat(scenario, graph.head_index(e))),
        );
        features.push(json!({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": coords},
            "properties": {
                "kind": "blue_route",
                "probability": p,
                "edge_ids": route.edge_ids,
            },
        }));
    }
    for (e, q) in edge_interdiction_probabilities(scenario, &eq.red_mix)? {
        let rec = &graph.edges()[e];
        features.push(json!({
            "type": "Feature",
            "geometry": {
                "type": "LineString",
                "coordinates": [
                    lon_lat(scenario, graph.tail_index(e)),
                    lon_lat(scenario, graph.head_index(e)),
                ],
            },
            "properties": {
                "kind": "red_interdiction",
                "edge_id": rec.id,
                "group_id": rec.group,
                "probability": q,
                "tags": rec.tags,
            },
        }));
    }
    Ok(json!({"type": "FeatureCollection", "features": features}))
}
