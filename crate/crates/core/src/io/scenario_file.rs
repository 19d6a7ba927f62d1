//! The on-disk scenario format: a JSON document with sorted keys and floats
//! rounded to nine significant digits, so that saving is a fixed point.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    default_kill_prob, EdgeId, EdgeRecord, GroupId, NodeId, NodeRecord, PhysicalGraph, Scenario,
    DEFAULT_EPSILON, FORMAT_VERSION,
};
use crate::prepare::{assign_costs, penalty_for_tags};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub format_version: String,
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
    pub start: u64,
    pub release: u64,
    pub budget: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(
        rename = "meters_to_T",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub meters_to_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeEntry {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
    /// Planar meters, for graphs without geographic coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

/// One directed edge. `P` and `kill_prob` default from the tags; `C` may be
/// omitted on every edge, in which case costs are derived from geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: u64,
    pub tail: u64,
    pub head: u64,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(
        rename = "C",
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "integral_cost"
    )]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kill_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub tags: BTreeSet<String>,
}

fn integral_cost<S: serde::Serializer>(
    c: &Option<f64>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match c {
        Some(c) if c.fract() == 0.0 && *c >= 0.0 && *c <= u64::MAX as f64 => {
            s.serialize_u64(*c as u64)
        }
        Some(c) => s.serialize_f64(*c),
        None => s.serialize_none(),
    }
}

/// Rounds to nine significant digits; idempotent.
pub fn canonical_float(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

impl ScenarioFile {
    pub fn from_scenario(scenario: &Scenario) -> Self {
        let g = &scenario.graph;
        let nodes = g
            .nodes()
            .iter()
            .map(|n| {
                let planar = n.lat.is_none();
                NodeEntry {
                    id: n.id.0,
                    lat: n.lat.map(canonical_float),
                    lon: n.lon.map(canonical_float),
                    x: n.euclid_xy.filter(|_| planar).map(|p| canonical_float(p.0)),
                    y: n.euclid_xy.filter(|_| planar).map(|p| canonical_float(p.1)),
                }
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeEntry {
                id: e.id.0,
                tail: e.tail.0,
                head: e.head.0,
                t: canonical_float(e.traverse_penalty),
                p: Some(canonical_float(e.interdiction_penalty)),
                c: Some(e.interdiction_cost as f64),
                group: Some(e.group.0),
                kill_prob: Some(canonical_float(e.kill_prob)),
                tags: e.tags.clone(),
            })
            .collect();
        ScenarioFile {
            format_version: scenario.format_version.clone(),
            nodes,
            edges,
            start: g.start().0,
            release: g.release().0,
            budget: scenario.budget,
            epsilon: Some(canonical_float(scenario.epsilon)),
            meters_to_t: scenario.meters_to_t.map(canonical_float),
        }
    }

    pub fn into_scenario(self) -> Result<Scenario> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::validation(format!(
                "format_version: expected {FORMAT_VERSION:?}, got {:?}",
                self.format_version
            )));
        }
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let mut rec = NodeRecord::new(n.id);
                rec.lat = n.lat;
                rec.lon = n.lon;
                match (n.x, n.y) {
                    (Some(x), Some(y)) => rec.euclid_xy = Some((x, y)),
                    (None, None) => {}
                    _ => {
                        return Err(Error::validation(format!(
                            "nodes[{i}]: x and y come together"
                        )))
                    }
                }
                Ok(rec)
            })
            .collect::<Result<Vec<_>>>()?;

        let with_cost = self.edges.iter().filter(|e| e.c.is_some()).count();
        if with_cost != 0 && with_cost != self.edges.len() {
            return Err(Error::validation(format!(
                "edges: C must be given on every edge or on none ({with_cost} of {} have it)",
                self.edges.len()
            )));
        }
        let derive_costs = with_cost == 0;

        let edges = self
            .edges
            .into_iter()
            .enumerate()
            .map(|(i, e)| edge_record(i, e))
            .collect::<Result<Vec<_>>>()?;

        let graph = PhysicalGraph::new(nodes, edges, NodeId(self.start), NodeId(self.release))?;
        let graph = if derive_costs {
            assign_costs(graph, self.budget)?
        } else {
            graph
        };
        let mut scenario =
            Scenario::new(graph, self.budget, self.epsilon.unwrap_or(DEFAULT_EPSILON))?;
        if let Some(k) = self.meters_to_t {
            scenario = scenario.with_meters_to_t(k)?;
        }
        Ok(scenario)
    }
}

fn edge_record(i: usize, e: EdgeEntry) -> Result<EdgeRecord> {
    let cost = match e.c {
        None => 1,
        Some(c) if c.fract() == 0.0 && c >= 1.0 && c <= u64::MAX as f64 => c as u64,
        Some(c) => {
            return Err(Error::validation(format!(
                "edges[{i}].C: interdiction cost must be a positive integer, got {c}"
            )))
        }
    };
    let (tag_p, tag_kill) = penalty_for_tags(&e.tags);
    let penalty = e.p.unwrap_or(tag_p);
    let kill_prob = match (e.kill_prob, e.p) {
        (Some(k), _) => k,
        (None, Some(p)) => default_kill_prob(p),
        (None, None) => tag_kill,
    };
    Ok(EdgeRecord {
        id: EdgeId(e.id),
        tail: NodeId(e.tail),
        head: NodeId(e.head),
        traverse_penalty: e.t,
        interdiction_penalty: penalty,
        interdiction_cost: cost,
        group: GroupId(e.group.unwrap_or(e.id)),
        kill_prob,
        tags: e.tags,
    })
}

fn parse_error(err: serde_json::Error) -> Error {
    Error::Parse {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

pub fn scenario_from_str(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(parse_error)?;
    file.into_scenario()
}

/// Canonical text: sorted keys, two-space indentation, trailing newline.
pub fn scenario_to_string(scenario: &Scenario) -> String {
    let value = serde_json::to_value(ScenarioFile::from_scenario(scenario))
        .expect("scenario file serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("json value serializes");
    text.push('\n');
    text
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    scenario_from_str(&fs::read_to_string(path)?)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, scenario_to_string(scenario))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = r#"{
      "format_version": "crp-scenario/1",
      "nodes": [{"id": 0}, {"id": 1}, {"id": 2}],
      "edges": [
        {"id": 0, "tail": 0, "head": 1, "T": 1.0, "P": 3, "C": 2},
        {"id": 1, "tail": 1, "head": 2, "T": 1.0, "P": 4, "C": 3, "tags": ["bridge"]}
      ],
      "start": 0, "release": 2, "budget": 3
    }"#;

    #[test]
    fn save_load_is_identity_on_canonical_text() {
        let s = scenario_from_str(FIXTURE).unwrap();
        let text = scenario_to_string(&s);
        let again = scenario_to_string(&scenario_from_str(&text).unwrap());
        assert_eq!(text, again);
        assert!(text.find("\"budget\"").unwrap() < text.find("\"edges\"").unwrap());
        assert!(text.contains("\"C\": 3,"), "{text}");
    }

    #[test]
    fn defaults_fill_in() {
        let s = scenario_from_str(FIXTURE).unwrap();
        assert_eq!(s.epsilon, DEFAULT_EPSILON);
        let e = s.graph.edges();
        assert_eq!(e[0].group, GroupId(0));
        assert_eq!(e[0].kill_prob, 0.5);
        assert_eq!(e[1].interdiction_penalty, 4.0);
    }

    #[test]
    fn missing_release_node_is_a_validation_error() {
        let bad = FIXTURE.replace("\"release\": 2", "\"release\": 9");
        assert!(matches!(scenario_from_str(&bad), Err(Error::Validation(_))));
    }

    #[test]
    fn fractional_cost_rejected() {
        let bad = FIXTURE.replace("\"C\": 2", "\"C\": 2.5");
        let err = scenario_from_str(&bad).unwrap_err().to_string();
        assert!(err.contains("edges[0].C"), "{err}");
    }

    #[test]
    fn partial_costs_rejected() {
        let bad = FIXTURE.replace(", \"C\": 2", "");
        assert!(matches!(scenario_from_str(&bad), Err(Error::Validation(_))));
    }

    #[test]
    fn syntax_errors_carry_location() {
        let bad = FIXTURE.replace("\"start\": 0,", "\"start\": ,");
        match scenario_from_str(&bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 8),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_rejected() {
        let bad = FIXTURE.replace("\"budget\": 3", "\"budget\": 3, \"bugdet\": 4");
        assert!(matches!(scenario_from_str(&bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_float_is_idempotent() {
        for x in [0.1, 1.0 / 3.0, 123456.789012345, -2.5e-7, 0.0, -0.0] {
            let c = canonical_float(x);
            assert_eq!(c.to_bits(), canonical_float(c).to_bits());
        }
        assert_eq!(canonical_float(1.0 / 3.0), 0.333333333);
    }
}
