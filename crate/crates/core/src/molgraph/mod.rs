//! Labeled molecular graphs.
//!
//! Atoms carry an element and a formal charge, bonds carry an order. Hydrogens
//! are always explicit vertices. Graphs are immutable once built; every
//! constructor validates the simple-graph invariants.

mod canon;
mod element;
mod mgf;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub use canon::{canonical_form, CanonicalForm};
pub use element::{Element, UnknownElement};
pub(crate) use mgf::parse_id;
pub use mgf::{parse_molecule, parse_molecules, serialize_molecule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to an atom's total bond order; aromatic counts 1.5.
    pub fn valence(self) -> f64 {
        match self {
            BondOrder::Single => 1.0,
            BondOrder::Double => 2.0,
            BondOrder::Triple => 3.0,
            BondOrder::Aromatic => 1.5,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            BondOrder::Single => "1",
            BondOrder::Double => "2",
            BondOrder::Triple => "3",
            BondOrder::Aromatic => "a",
        }
    }

    pub fn from_token(s: &str) -> Option<BondOrder> {
        match s {
            "1" => Some(BondOrder::Single),
            "2" => Some(BondOrder::Double),
            "3" => Some(BondOrder::Triple),
            "a" => Some(BondOrder::Aromatic),
            _ => None,
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Atom {
    pub id: u32,
    pub element: Element,
    pub charge: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: u32,
    pub b: u32,
    pub order: BondOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MolError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate atom id {id}")]
    DuplicateAtom { line: usize, id: u32 },
    #[error("line {line}: bond references missing atom {id}")]
    DanglingBond { line: usize, id: u32 },
    #[error("line {line}: bond joins atom {id} to itself")]
    SelfLoop { line: usize, id: u32 },
    #[error("line {line}: second bond between atoms {a} and {b}")]
    DuplicateBond { line: usize, a: u32, b: u32 },
}

/// An undirected, simple, vertex- and edge-labeled graph.
///
/// Atoms are addressed two ways: by their external `id` (what MGF files use)
/// and by their position in [`MolecularGraph::atoms`], which the algorithms
/// in this crate work with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolecularGraph {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    index: HashMap<u32, usize>,
    adjacency: Vec<Vec<(usize, BondOrder)>>,
}

impl Default for MolecularGraph {
    fn default() -> Self {
        MolecularGraph::empty()
    }
}

impl MolecularGraph {
    pub fn empty() -> Self {
        MolecularGraph {
            atoms: Vec::new(),
            bonds: Vec::new(),
            index: HashMap::new(),
            adjacency: Vec::new(),
        }
    }

    /// Builds a graph, rejecting duplicate ids, dangling or self bonds and
    /// parallel bonds. Errors report line 0 since there is no source text.
    pub fn new(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Self, MolError> {
        let mut builder = GraphBuilder::default();
        for atom in atoms {
            builder.add_atom(0, atom)?;
        }
        for bond in bonds {
            builder.add_bond(0, bond)?;
        }
        Ok(builder.finish())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Position of the atom with external id `id`.
    pub fn position(&self, id: u32) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Neighbours of the atom at `pos`, as (position, bond order).
    pub fn neighbors(&self, pos: usize) -> &[(usize, BondOrder)] {
        &self.adjacency[pos]
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<BondOrder> {
        self.adjacency[a]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|(_, o)| *o)
    }

    pub fn element_counts(&self) -> BTreeMap<Element, u32> {
        element_counts(self)
    }

    /// Sum of bond orders incident to the atom at `pos`.
    pub fn bond_order_sum(&self, pos: usize) -> f64 {
        self.adjacency[pos].iter().map(|(_, o)| o.valence()).sum()
    }

    /// True when every atom with a known valence cap stays within it.
    pub fn respects_valence_caps(&self) -> bool {
        self.atoms
            .iter()
            .enumerate()
            .all(|(pos, atom)| match atom.element.valence_cap() {
                Some(cap) => self.bond_order_sum(pos) <= cap + 1e-9,
                None => true,
            })
    }

    /// Splits the graph into connected components. Atom ids are kept; the
    /// components come out ordered by their smallest atom position.
    pub fn connected_components(&self) -> Vec<MolecularGraph> {
        let n = self.atoms.len();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = count;
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        let mut builders: Vec<GraphBuilder> = (0..count).map(|_| GraphBuilder::default()).collect();
        for (pos, atom) in self.atoms.iter().enumerate() {
            builders[comp[pos]]
                .add_atom(0, *atom)
                .expect("ids unique in source graph");
        }
        for bond in &self.bonds {
            let c = comp[self.index[&bond.a]];
            builders[c]
                .add_bond(0, *bond)
                .expect("bond valid in source graph");
        }
        builders.into_iter().map(GraphBuilder::finish).collect()
    }

    /// Length of the shortest cycle, if the graph has one.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        // For each bond (u, v), the shortest u-v path avoiding that bond closes a cycle.
        for bond in &self.bonds {
            let (u, v) = (self.index[&bond.a], self.index[&bond.b]);
            let mut dist = vec![usize::MAX; self.atoms.len()];
            dist[u] = 0;
            let mut queue = std::collections::VecDeque::from([u]);
            while let Some(x) = queue.pop_front() {
                if best.is_some_and(|b| dist[x] + 1 >= b) {
                    break;
                }
                for &(y, _) in &self.adjacency[x] {
                    if (x == u && y == v) || dist[y] != usize::MAX {
                        continue;
                    }
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
            if dist[v] != usize::MAX {
                let len = dist[v] + 1;
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
        best
    }

    /// Reorders and renumbers atoms: atom at position `i` moves to position
    /// `perm[i]` and receives id `perm[i] + 1`. Bond order is shuffled along.
    pub fn permuted(&self, perm: &[usize]) -> MolecularGraph {
        assert_eq!(perm.len(), self.atoms.len());
        let mut atoms = vec![None; self.atoms.len()];
        for (pos, atom) in self.atoms.iter().enumerate() {
            atoms[perm[pos]] = Some(Atom {
                id: perm[pos] as u32 + 1,
                ..*atom
            });
        }
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|a| a.expect("perm is a bijection"))
            .collect();
        let mut bonds: Vec<Bond> = self
            .bonds
            .iter()
            .map(|b| Bond {
                a: perm[self.index[&b.a]] as u32 + 1,
                b: perm[self.index[&b.b]] as u32 + 1,
                order: b.order,
            })
            .collect();
        bonds.reverse();
        MolecularGraph::new(atoms, bonds).expect("permutation preserves validity")
    }
}

/// Exact multiset of element labels.
pub fn element_counts(g: &MolecularGraph) -> BTreeMap<Element, u32> {
    let mut counts = BTreeMap::new();
    for atom in &g.atoms {
        *counts.entry(atom.element).or_insert(0) += 1;
    }
    counts
}

/// Hill-order molecular formula, e.g. `C2H3NO`.
pub fn formula(g: &MolecularGraph) -> String {
    let counts = element_counts(g);
    let mut out = String::new();
    let mut push = |e: Element, n: u32| {
        out.push_str(e.symbol());
        if n > 1 {
            out.push_str(&n.to_string());
        }
    };
    let has_carbon = counts.contains_key(&Element::C);
    if has_carbon {
        push(Element::C, counts[&Element::C]);
        if let Some(&h) = counts.get(&Element::H) {
            push(Element::H, h);
        }
    }
    let mut rest: Vec<(Element, u32)> = counts
        .iter()
        .filter(|(e, _)| !has_carbon || (**e != Element::C && **e != Element::H))
        .map(|(e, n)| (*e, *n))
        .collect();
    rest.sort_by(|a, b| a.0.symbol().cmp(b.0.symbol()));
    for (e, n) in rest {
        push(e, n);
    }
    out
}

impl fmt::Display for MolecularGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&formula(self))
    }
}

#[derive(Default)]
pub(crate) struct GraphBuilder {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    index: HashMap<u32, usize>,
    adjacency: Vec<Vec<(usize, BondOrder)>>,
}

impl GraphBuilder {
    pub(crate) fn add_atom(&mut self, line: usize, atom: Atom) -> Result<(), MolError> {
        if self.index.contains_key(&atom.id) {
            return Err(MolError::DuplicateAtom { line, id: atom.id });
        }
        self.index.insert(atom.id, self.atoms.len());
        self.atoms.push(atom);
        self.adjacency.push(Vec::new());
        Ok(())
    }

    pub(crate) fn add_bond(&mut self, line: usize, bond: Bond) -> Result<(), MolError> {
        let a = *self
            .index
            .get(&bond.a)
            .ok_or(MolError::DanglingBond { line, id: bond.a })?;
        let b = *self
            .index
            .get(&bond.b)
            .ok_or(MolError::DanglingBond { line, id: bond.b })?;
        if a == b {
            return Err(MolError::SelfLoop { line, id: bond.a });
        }
        if self.adjacency[a].iter().any(|(n, _)| *n == b) {
            return Err(MolError::DuplicateBond {
                line,
                a: bond.a,
                b: bond.b,
            });
        }
        self.adjacency[a].push((b, bond.order));
        self.adjacency[b].push((a, bond.order));
        self.bonds.push(bond);
        Ok(())
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.bonds.is_empty()
    }

    pub(crate) fn finish(self) -> MolecularGraph {
        MolecularGraph {
            atoms: self.atoms,
            bonds: self.bonds,
            index: self.index,
            adjacency: self.adjacency,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn water() -> MolecularGraph {
        parse_molecule("atom 1 O; atom 2 H; atom 3 H; bond 1 2 1; bond 1 3 1").unwrap()
    }

    #[test]
    fn element_counts_of_water_and_empty() {
        let counts = element_counts(&water());
        assert_eq!(counts, BTreeMap::from([(Element::O, 1), (Element::H, 2)]));
        assert!(element_counts(&MolecularGraph::empty()).is_empty());
    }

    #[test]
    fn new_rejects_invalid_structure() {
        let o = Atom {
            id: 1,
            element: Element::O,
            charge: 0,
        };
        let h = Atom {
            id: 2,
            element: Element::H,
            charge: 0,
        };
        let single = |a, b| Bond {
            a,
            b,
            order: BondOrder::Single,
        };
        assert!(matches!(
            MolecularGraph::new(vec![o, o], vec![]),
            Err(MolError::DuplicateAtom { id: 1, .. })
        ));
        assert!(matches!(
            MolecularGraph::new(vec![o], vec![single(1, 2)]),
            Err(MolError::DanglingBond { id: 2, .. })
        ));
        assert!(matches!(
            MolecularGraph::new(vec![o], vec![single(1, 1)]),
            Err(MolError::SelfLoop { .. })
        ));
        assert!(matches!(
            MolecularGraph::new(vec![o, h], vec![single(1, 2), single(2, 1)]),
            Err(MolError::DuplicateBond { .. })
        ));
    }

    #[test]
    fn girth_and_components() {
        let ring =
            parse_molecule("atom 1 C; atom 2 C; atom 3 O; bond 1 2 1; bond 2 3 1; bond 3 1 1")
                .unwrap();
        assert_eq!(ring.girth(), Some(3));
        assert_eq!(water().girth(), None);
        let two = parse_molecule("atom 1 O; atom 2 H; atom 5 N; atom 6 H; bond 1 2 1; bond 5 6 1")
            .unwrap();
        let comps = two.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].atoms()[0].id, 1);
        assert_eq!(comps[1].atoms()[0].id, 5);
    }

    #[test]
    fn formula_uses_hill_order() {
        assert_eq!(formula(&water()), "H2O");
        let gn = parse_molecule(
            "atom 1 O; atom 2 H; atom 3 C; atom 4 H; atom 5 H; atom 6 C; atom 7 N
             bond 1 2 1; bond 1 3 1; bond 3 4 1; bond 3 5 1; bond 3 6 1; bond 6 7 3",
        )
        .unwrap();
        assert_eq!(formula(&gn), "C2H3NO");
    }

    #[test]
    fn valence_caps() {
        assert!(water().respects_valence_caps());
        let bad = parse_molecule("atom 1 O; atom 2 C; bond 1 2 3").unwrap();
        assert!(!bad.respects_valence_caps());
    }
}
