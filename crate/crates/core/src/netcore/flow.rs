use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeId, Hypergraph, NetError, VertexId};

/// An edge of the extended hypergraph: a real reaction or one of the two
/// half-edges attached to every vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlowKey {
    Edge(EdgeId),
    /// `(∅, v)`: external supply of `v`.
    Inflow(VertexId),
    /// `(v, ∅)`: removal of `v`.
    Outflow(VertexId),
}

/// Non-negative integer assignment over real edges and half-edges.
/// Absent keys read as zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hyperflow {
    flow: BTreeMap<FlowKey, u64>,
}

impl Hyperflow {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: FlowKey, value: u64) {
        if value == 0 {
            self.flow.remove(&key);
        } else {
            self.flow.insert(key, value);
        }
    }

    pub fn with(mut self, key: FlowKey, value: u64) -> Self {
        self.set(key, value);
        self
    }

    pub fn get(&self, key: FlowKey) -> u64 {
        self.flow.get(&key).copied().unwrap_or(0)
    }

    /// Non-zero entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (FlowKey, u64)> + '_ {
        self.flow.iter().map(|(k, v)| (*k, *v))
    }

    pub fn edge_flows(&self) -> impl Iterator<Item = (EdgeId, u64)> + '_ {
        self.iter().filter_map(|(k, v)| match k {
            FlowKey::Edge(e) => Some((e, v)),
            _ => None,
        })
    }

    pub fn inflows(&self) -> impl Iterator<Item = (VertexId, u64)> + '_ {
        self.iter().filter_map(|(k, v)| match k {
            FlowKey::Inflow(x) => Some((x, v)),
            _ => None,
        })
    }

    pub fn outflows(&self) -> impl Iterator<Item = (VertexId, u64)> + '_ {
        self.iter().filter_map(|(k, v)| match k {
            FlowKey::Outflow(x) => Some((x, v)),
            _ => None,
        })
    }

    /// Every entry multiplied by `k`.
    pub fn scaled(&self, k: u64) -> Hyperflow {
        Hyperflow {
            flow: self
                .flow
                .iter()
                .filter(|_| k > 0)
                .map(|(key, v)| (*key, v * k))
                .collect(),
        }
    }
}

/// Real edges carrying positive flow.
pub type Support = BTreeSet<EdgeId>;

pub fn support(f: &Hyperflow) -> Support {
    f.edge_flows()
        .filter(|(_, v)| *v > 0)
        .map(|(e, _)| e)
        .collect()
}

/// Net production of every vertex under `f`: Σ s⁺ f − Σ s⁻ f over the
/// extended edge set. Conservation holds when every entry is zero.
pub fn vertex_balance(h: &Hypergraph, f: &Hyperflow) -> Result<Vec<i128>, NetError> {
    let mut balance = vec![0i128; h.vertex_count()];
    for (key, value) in f.iter() {
        let value = value as i128;
        match key {
            FlowKey::Edge(e) => {
                h.check_edge(e)?;
                let edge = h.edge(e).expect("checked");
                for (v, m) in &edge.reactants {
                    balance[v.0] -= *m as i128 * value;
                }
                for (v, m) in &edge.products {
                    balance[v.0] += *m as i128 * value;
                }
            }
            FlowKey::Inflow(v) => {
                h.check_vertex(v)?;
                balance[v.0] += value;
            }
            FlowKey::Outflow(v) => {
                h.check_vertex(v)?;
                balance[v.0] -= value;
            }
        }
    }
    Ok(balance)
}

/// True iff flow is conserved at every vertex.
pub fn check_conservation(h: &Hypergraph, f: &Hyperflow) -> Result<bool, NetError> {
    Ok(vertex_balance(h, f)?.iter().all(|&b| b == 0))
}
