use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::molgraph::{canonical_form, MolecularGraph};

use super::NetError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Stoichiometric bag: vertex -> multiplicity (always positive).
pub type Bag = BTreeMap<VertexId, u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub id: VertexId,
    /// Hex canonical key for molecules, `label:<name>` for abstract species.
    pub key: String,
    pub name: Option<String>,
    pub molecule: Option<MolecularGraph>,
}

impl Vertex {
    pub fn display_name(&self) -> String {
        match (&self.name, &self.molecule) {
            (Some(name), _) => name.clone(),
            (None, Some(mol)) => format!("v{} {}", self.id, mol),
            (None, None) => format!("v{}", self.id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub id: EdgeId,
    pub reactants: Bag,
    pub products: Bag,
    pub reverse_of: Option<EdgeId>,
}

impl Hyperedge {
    pub fn reactant_count(&self, v: VertexId) -> u32 {
        self.reactants.get(&v).copied().unwrap_or(0)
    }

    pub fn product_count(&self, v: VertexId) -> u32 {
        self.products.get(&v).copied().unwrap_or(0)
    }
}

/// Directed multi-hypergraph over molecules (or abstract species).
///
/// Vertex and edge ids are dense and assigned in insertion order. Vertices
/// are deduplicated by key, edges by their (reactants, products) bag pair.
/// Half-edges are not stored: inflow and outflow of a vertex are addressed
/// through [`super::FlowKey`].
#[derive(Debug, Clone, Default)]
pub struct Hypergraph {
    vertices: Vec<Vertex>,
    edges: Vec<Hyperedge>,
    by_key: HashMap<String, VertexId>,
    by_bags: HashMap<(Bag, Bag), EdgeId>,
}

impl Hypergraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(id.0)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Hyperedge> {
        self.edges.get(id.0)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn find_key(&self, key: &str) -> Option<VertexId> {
        self.by_key.get(key).copied()
    }

    pub fn find_molecule(&self, g: &MolecularGraph) -> Option<VertexId> {
        self.find_key(&canonical_form(g).to_hex())
    }

    pub fn find_name(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .iter()
            .find(|v| v.name.as_deref() == Some(name))
            .map(|v| v.id)
    }

    /// Adds a molecule, or returns the id of an isomorphic one already present.
    pub fn add_molecule(&mut self, g: MolecularGraph) -> VertexId {
        let key = canonical_form(&g).to_hex();
        self.insert_vertex(key, None, Some(g))
    }

    /// `add_molecule` with a precomputed hex key.
    pub(crate) fn add_molecule_keyed(&mut self, key: String, g: MolecularGraph) -> VertexId {
        self.insert_vertex(key, None, Some(g))
    }

    pub fn add_named_molecule(&mut self, name: &str, g: MolecularGraph) -> VertexId {
        let id = self.add_molecule(g);
        let v = &mut self.vertices[id.0];
        if v.name.is_none() {
            v.name = Some(name.to_string());
        }
        id
    }

    /// Adds a species without molecular structure, identified by name.
    pub fn add_species(&mut self, name: &str) -> VertexId {
        self.insert_vertex(format!("label:{name}"), Some(name.to_string()), None)
    }

    fn insert_vertex(
        &mut self,
        key: String,
        name: Option<String>,
        molecule: Option<MolecularGraph>,
    ) -> VertexId {
        if let Some(&id) = self.by_key.get(&key) {
            return id;
        }
        let id = VertexId(self.vertices.len());
        self.by_key.insert(key.clone(), id);
        self.vertices.push(Vertex {
            id,
            key,
            name,
            molecule,
        });
        id
    }

    /// Adds the reaction `reactants -> products`. Re-adding the same bag pair
    /// returns the existing id. When the opposite direction is present, both
    /// edges get cross-referenced through `reverse_of`.
    pub fn add_reaction(&mut self, reactants: Bag, products: Bag) -> Result<EdgeId, NetError> {
        if reactants.is_empty() && products.is_empty() {
            return Err(NetError::EmptyReaction);
        }
        for (&v, &m) in reactants.iter().chain(products.iter()) {
            if v.0 >= self.vertices.len() {
                return Err(NetError::UnknownVertex(v));
            }
            if m == 0 {
                return Err(NetError::ZeroMultiplicity(v));
            }
        }
        let key = (reactants, products);
        if let Some(&id) = self.by_bags.get(&key) {
            return Ok(id);
        }
        let id = EdgeId(self.edges.len());
        let reverse = self.by_bags.get(&(key.1.clone(), key.0.clone())).copied();
        if let Some(rev) = reverse {
            self.edges[rev.0].reverse_of = Some(id);
        }
        self.edges.push(Hyperedge {
            id,
            reactants: key.0.clone(),
            products: key.1.clone(),
            reverse_of: reverse,
        });
        self.by_bags.insert(key, id);
        Ok(id)
    }

    /// Convenience form taking `(vertex, multiplicity)` lists.
    pub fn add_reaction_from(
        &mut self,
        reactants: &[(VertexId, u32)],
        products: &[(VertexId, u32)],
    ) -> Result<EdgeId, NetError> {
        let collect = |items: &[(VertexId, u32)]| {
            let mut bag = Bag::new();
            for &(v, m) in items {
                *bag.entry(v).or_insert(0) += m;
            }
            bag
        };
        self.add_reaction(collect(reactants), collect(products))
    }

    /// Restores a vertex read from a file, keeping its id and key.
    pub(crate) fn push_vertex_raw(&mut self, v: Vertex) -> Result<(), NetError> {
        if v.id.0 != self.vertices.len() {
            return Err(NetError::Format(format!(
                "vertex ids must be dense and ordered; expected {}, found {}",
                self.vertices.len(),
                v.id
            )));
        }
        if self.by_key.contains_key(&v.key) {
            return Err(NetError::Format(format!(
                "duplicate vertex key for vertex {}",
                v.id
            )));
        }
        self.by_key.insert(v.key.clone(), v.id);
        self.vertices.push(v);
        Ok(())
    }

    /// Edge lookup by bag pair.
    pub fn find_reaction(&self, reactants: &Bag, products: &Bag) -> Option<EdgeId> {
        self.by_bags
            .get(&(reactants.clone(), products.clone()))
            .copied()
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<(), NetError> {
        if v.0 < self.vertices.len() {
            Ok(())
        } else {
            Err(NetError::UnknownVertex(v))
        }
    }

    pub(crate) fn check_edge(&self, e: EdgeId) -> Result<(), NetError> {
        if e.0 < self.edges.len() {
            Ok(())
        } else {
            Err(NetError::UnknownEdge(e))
        }
    }
}
