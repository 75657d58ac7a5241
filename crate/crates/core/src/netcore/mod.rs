//! Directed multi-hypergraphs with stoichiometric multiplicities, integer
//! hyperflows over the half-edge extension, and their file formats.

mod dot;
mod flow;
mod hypergraph;
mod json;

pub use dot::to_dot;
pub use flow::{check_conservation, support, vertex_balance, FlowKey, Hyperflow, Support};
pub use hypergraph::{Bag, EdgeId, Hyperedge, Hypergraph, Vertex, VertexId};
pub use json::{from_json, to_json};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NetError {
    #[error("reaction has neither reactants nor products")]
    EmptyReaction,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} listed with multiplicity 0")]
    ZeroMultiplicity(VertexId),
    #[error("malformed network: {0}")]
    Format(String),
}
