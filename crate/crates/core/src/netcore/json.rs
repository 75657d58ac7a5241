//! Hypergraph JSON interchange.
//!
//! ```json
//! {"vertices":[{"id":0,"key":"…","mgf":"atom 1 O\n…"}],
//!  "edges":[{"id":0,"reactants":{"0":1},"products":{"1":2},"reverse_of":null}]}
//! ```

use serde::{Deserialize, Serialize};

use super::{Bag, EdgeId, Hypergraph, NetError, Vertex, VertexId};
use crate::molgraph::{canonical_form, parse_molecule, serialize_molecule};

#[derive(Debug, Serialize, Deserialize)]
struct NetworkDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexDoc {
    id: VertexId,
    key: String,
    mgf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeDoc {
    id: EdgeId,
    reactants: Bag,
    products: Bag,
    reverse_of: Option<EdgeId>,
}

pub fn to_json(h: &Hypergraph) -> String {
    let doc = NetworkDoc {
        vertices: h
            .vertices()
            .iter()
            .map(|v| VertexDoc {
                id: v.id,
                key: v.key.clone(),
                mgf: v.molecule.as_ref().map(serialize_molecule),
                name: v.name.clone(),
            })
            .collect(),
        edges: h
            .edges()
            .iter()
            .map(|e| EdgeDoc {
                id: e.id,
                reactants: e.reactants.clone(),
                products: e.products.clone(),
                reverse_of: e.reverse_of,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("network serializes");
    text.push('\n');
    text
}

/// Reads a network, re-validating molecule keys, id density and the
/// reverse-edge cross references.
pub fn from_json(text: &str) -> Result<Hypergraph, NetError> {
    let doc: NetworkDoc =
        serde_json::from_str(text).map_err(|e| NetError::Format(e.to_string()))?;
    let mut h = Hypergraph::new();
    for v in doc.vertices {
        let molecule = match &v.mgf {
            Some(text) => {
                let g = parse_molecule(text)
                    .map_err(|e| NetError::Format(format!("vertex {}: {e}", v.id)))?;
                let key = canonical_form(&g).to_hex();
                if key != v.key {
                    return Err(NetError::Format(format!(
                        "vertex {}: key does not match its molecule",
                        v.id
                    )));
                }
                Some(g)
            }
            None => None,
        };
        h.push_vertex_raw(Vertex {
            id: v.id,
            key: v.key,
            name: v.name,
            molecule,
        })?;
    }
    let stored_reverse: Vec<(EdgeId, Option<EdgeId>)> =
        doc.edges.iter().map(|e| (e.id, e.reverse_of)).collect();
    for e in doc.edges {
        if e.id.0 != h.edge_count() {
            return Err(NetError::Format(format!(
                "edge ids must be dense and ordered; expected {}, found {}",
                h.edge_count(),
                e.id
            )));
        }
        if h.find_reaction(&e.reactants, &e.products).is_some() {
            return Err(NetError::Format(format!(
                "edge {} duplicates an earlier edge",
                e.id
            )));
        }
        h.add_reaction(e.reactants, e.products)?;
    }
    // reverse_of is derived from the bags; stored values must agree.
    for (id, stored) in stored_reverse {
        let derived = h.edge(id).and_then(|x| x.reverse_of);
        if derived != stored {
            return Err(NetError::Format(format!(
                "edge {id}: reverse_of {stored:?} inconsistent with edge bags (expected {derived:?})"
            )));
        }
    }
    Ok(h)
}
