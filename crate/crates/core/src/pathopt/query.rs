use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::netcore::{EdgeId, Hypergraph, VertexId};

pub const DEFAULT_FLOW_CAP: u32 = 10;

/// Inclusive bounds on a half-edge flow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowBounds {
    #[serde(default)]
    pub min: u32,
    pub max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryObjective {
    /// Minimize `sum_e c_e f_e`.
    #[default]
    MinEnergy,
    /// Maximize total outflow of the targets (flux-balance style).
    MaxOutflow,
}

/// Which molecules may enter and leave a pathway, and how much.
/// Vertices not listed get no half-edges, so their net flow is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathwayQuery {
    pub sources: BTreeMap<VertexId, FlowBounds>,
    pub targets: BTreeMap<VertexId, FlowBounds>,
    /// Maximum outflow of each tolerated by-product.
    pub byproducts: BTreeMap<VertexId, u32>,
    pub forbidden_edges: BTreeSet<EdgeId>,
    pub flow_cap: u32,
    /// Optional bound on the summed inflow over all sources.
    pub max_total_inflow: Option<u32>,
    pub objective: QueryObjective,
}

impl Default for PathwayQuery {
    fn default() -> Self {
        PathwayQuery {
            sources: BTreeMap::new(),
            targets: BTreeMap::new(),
            byproducts: BTreeMap::new(),
            forbidden_edges: BTreeSet::new(),
            flow_cap: DEFAULT_FLOW_CAP,
            max_total_inflow: None,
            objective: QueryObjective::MinEnergy,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryFile {
    #[serde(default)]
    sources: BTreeMap<String, FlowBounds>,
    #[serde(default)]
    targets: BTreeMap<String, FlowBounds>,
    #[serde(default)]
    byproducts: BTreeMap<String, u32>,
    #[serde(default)]
    forbidden_edges: Vec<serde_json::Value>,
    #[serde(default = "default_cap")]
    flow_cap: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_total_inflow: Option<u32>,
    #[serde(default)]
    objective: QueryObjective,
}

fn default_cap() -> u32 {
    DEFAULT_FLOW_CAP
}

fn parse_index(raw: &str, prefix: char) -> Option<usize> {
    let s = raw.trim();
    s.strip_prefix(prefix).unwrap_or(s).parse().ok()
}

impl PathwayQuery {
    /// Reads the JSON query format. Vertex keys may be `"3"` or `"v3"`,
    /// forbidden edges `3`, `"3"` or `"e3"`.
    pub fn from_json(text: &str) -> Result<PathwayQuery, ModelError> {
        let file: QueryFile = serde_json::from_str(text).map_err(|e| ModelError::Query(e.to_string()))?;
        let vid = |k: &String| {
            parse_index(k, 'v')
                .map(VertexId)
                .ok_or_else(|| ModelError::Query(format!("invalid vertex id `{k}`")))
        };
        let mut q = PathwayQuery {
            flow_cap: file.flow_cap,
            max_total_inflow: file.max_total_inflow,
            objective: file.objective,
            ..PathwayQuery::default()
        };
        for (k, b) in &file.sources {
            q.sources.insert(vid(k)?, *b);
        }
        for (k, b) in &file.targets {
            q.targets.insert(vid(k)?, *b);
        }
        for (k, m) in &file.byproducts {
            q.byproducts.insert(vid(k)?, *m);
        }
        for value in &file.forbidden_edges {
            let e = match value {
                serde_json::Value::Number(n) => n.as_u64().map(|n| n as usize),
                serde_json::Value::String(s) => parse_index(s, 'e'),
                _ => None,
            }
            .ok_or_else(|| ModelError::Query(format!("invalid edge id {value}")))?;
            q.forbidden_edges.insert(EdgeId(e));
        }
        Ok(q)
    }

    pub fn to_json(&self) -> String {
        let file = QueryFile {
            sources: self.sources.iter().map(|(v, b)| (v.0.to_string(), *b)).collect(),
            targets: self.targets.iter().map(|(v, b)| (v.0.to_string(), *b)).collect(),
            byproducts: self.byproducts.iter().map(|(v, m)| (v.0.to_string(), *m)).collect(),
            forbidden_edges: self.forbidden_edges.iter().map(|e| e.0.into()).collect(),
            flow_cap: self.flow_cap,
            max_total_inflow: self.max_total_inflow,
            objective: self.objective,
        };
        serde_json::to_string_pretty(&file).expect("query serializes")
    }

    /// Checks ids against `h` and the bound invariants.
    pub fn validate(&self, h: &Hypergraph) -> Result<(), ModelError> {
        if self.flow_cap == 0 {
            return Err(ModelError::Query("flow_cap must be positive".into()));
        }
        let named = self.sources.keys().chain(self.targets.keys()).chain(self.byproducts.keys());
        for &v in named {
            if v.0 >= h.vertex_count() {
                return Err(ModelError::UnknownVertex(v));
            }
        }
        for &e in &self.forbidden_edges {
            if e.0 >= h.edge_count() {
                return Err(ModelError::UnknownEdge(e));
            }
        }
        for (v, b) in self.sources.iter().chain(self.targets.iter()) {
            if b.min > b.max {
                return Err(ModelError::Query(format!("vertex {v}: min {} exceeds max {}", b.min, b.max)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"sources":{"0":{"min":0,"max":1},"v2":{"min":0,"max":3}},
                       "targets":{"9":{"min":1,"max":1}},"byproducts":{"1":5},
                       "forbidden_edges":[6,"e3"],"flow_cap":4}"#;
        let q = PathwayQuery::from_json(text).unwrap();
        assert_eq!(q.sources[&VertexId(2)], FlowBounds { min: 0, max: 3 });
        assert_eq!(q.targets[&VertexId(9)].min, 1);
        assert_eq!(q.byproducts[&VertexId(1)], 5);
        assert_eq!(q.forbidden_edges, BTreeSet::from([EdgeId(3), EdgeId(6)]));
        assert_eq!(q.flow_cap, 4);
        assert_eq!(q.objective, QueryObjective::MinEnergy);
        assert_eq!(PathwayQuery::from_json(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn defaults_and_errors() {
        let q = PathwayQuery::from_json("{}").unwrap();
        assert_eq!(q, PathwayQuery::default());
        assert!(PathwayQuery::from_json(r#"{"sources":{"x":{"max":1}}}"#).is_err());
        assert!(PathwayQuery::from_json(r#"{"colour":1}"#).is_err());
        let flux = PathwayQuery::from_json(r#"{"objective":"max_outflow","max_total_inflow":3}"#).unwrap();
        assert_eq!(flux.objective, QueryObjective::MaxOutflow);
        assert_eq!(flux.max_total_inflow, Some(3));
    }
}
