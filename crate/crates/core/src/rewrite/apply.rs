use std::collections::{BTreeMap, HashMap};

use super::{HostAtom, Match, RewriteError, Rule};
use crate::molgraph::{
    canonical_form, Atom, Bond, BondOrder, CanonicalForm, Element, MolecularGraph,
};

/// Where a reactant atom ends up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct AtomMapEntry {
    pub reactant: HostAtom,
    /// Index into the product list.
    pub product: usize,
    pub product_atom: u32,
}

/// Provenance of one rule application. `reactants` follows host order and
/// `products` follows the order of the returned product graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationRecord {
    pub rule: String,
    pub class_binding: BTreeMap<String, Element>,
    pub reactants: Vec<CanonicalForm>,
    pub products: Vec<CanonicalForm>,
    pub reactant_elements: BTreeMap<Element, u32>,
    pub product_elements: BTreeMap<Element, u32>,
    pub atom_map: Vec<AtomMapEntry>,
}

impl DerivationRecord {
    pub fn conserves_elements(&self) -> bool {
        self.reactant_elements == self.product_elements
    }
}

/// Rewrites the matched host: deletes `L \ K`, adds `R \ K`, then splits the
/// result into connected molecules.
pub fn apply_rule(
    rule: &Rule,
    m: &Match,
    host: &[MolecularGraph],
) -> Result<(Vec<MolecularGraph>, DerivationRecord), RewriteError> {
    let left = rule.left();
    // Union numbering: copies laid out one after another, ids from 1.
    let mut union_id: HashMap<HostAtom, u32> = HashMap::new();
    let mut atoms = Vec::new();
    for (copy, g) in host.iter().enumerate() {
        for a in g.atoms() {
            let id = atoms.len() as u32 + 1;
            union_id.insert(
                HostAtom {
                    molecule: copy,
                    atom: a.id,
                },
                id,
            );
            atoms.push(Atom { id, ..*a });
        }
    }
    let image = |pid: u32| -> Result<u32, RewriteError> {
        m.assignment
            .get(&pid)
            .and_then(|h| union_id.get(h))
            .copied()
            .ok_or(RewriteError::InvalidMatch)
    };
    for v in &left.vertices {
        let uid = image(v.id)?;
        if !rule.allowed(&v.label, atoms[uid as usize - 1].element) {
            return Err(RewriteError::InvalidMatch);
        }
    }
    let mut bonds: BTreeMap<(u32, u32), BondOrder> = BTreeMap::new();
    for (copy, g) in host.iter().enumerate() {
        for b in g.bonds() {
            let a = union_id[&HostAtom {
                molecule: copy,
                atom: b.a,
            }];
            let c = union_id[&HostAtom {
                molecule: copy,
                atom: b.b,
            }];
            bonds.insert((a.min(c), a.max(c)), b.order);
        }
    }
    for e in &left.edges {
        let (a, b) = (image(e.a)?, image(e.b)?);
        if bonds.get(&(a.min(b), a.max(b))) != Some(&e.order) {
            return Err(RewriteError::InvalidMatch);
        }
    }
    for e in rule.deleted_edges() {
        let (a, b) = (image(e.a)?, image(e.b)?);
        bonds.remove(&(a.min(b), a.max(b)));
    }
    for e in rule.added_edges() {
        let (a, b) = (image(e.a)?, image(e.b)?);
        if bonds.insert((a.min(b), a.max(b)), e.order).is_some() {
            return Err(RewriteError::BondConflict);
        }
    }
    let bonds: Vec<Bond> = bonds
        .into_iter()
        .map(|((a, b), order)| Bond { a, b, order })
        .collect();
    let result = MolecularGraph::new(atoms, bonds).map_err(|_| RewriteError::InvalidMatch)?;
    if !result.respects_valence_caps() {
        return Err(RewriteError::ValenceCap);
    }
    let products = result.connected_components();

    let mut located: HashMap<u32, usize> = HashMap::new();
    for (i, p) in products.iter().enumerate() {
        for a in p.atoms() {
            located.insert(a.id, i);
        }
    }
    let mut atom_map: Vec<AtomMapEntry> = union_id
        .iter()
        .map(|(&reactant, &uid)| AtomMapEntry {
            reactant,
            product: located[&uid],
            product_atom: uid,
        })
        .collect();
    atom_map.sort();

    let sum = |graphs: &[MolecularGraph]| {
        let mut total = BTreeMap::new();
        for g in graphs {
            for (e, n) in g.element_counts() {
                *total.entry(e).or_insert(0) += n;
            }
        }
        total
    };
    let record = DerivationRecord {
        rule: rule.name().to_string(),
        class_binding: m.class_binding.clone(),
        reactants: host.iter().map(canonical_form).collect(),
        products: products.iter().map(canonical_form).collect(),
        reactant_elements: sum(host),
        product_elements: sum(&products),
        atom_map,
    };
    Ok((products, record))
}
