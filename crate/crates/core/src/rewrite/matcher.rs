use std::collections::BTreeMap;

use super::{PatternLabel, Rule};
use crate::molgraph::{BondOrder, Element, MolecularGraph};

/// An atom of the host multiset: copy index plus the atom id inside it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HostAtom {
    pub molecule: usize,
    pub atom: u32,
}

/// Injective, label-compatible embedding of a rule's left side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Match {
    pub assignment: BTreeMap<u32, HostAtom>,
    pub class_binding: BTreeMap<String, Element>,
}

struct Step {
    vertex: u32,
    label: PatternLabel,
    /// An earlier vertex adjacent to this one; candidates come from its neighbours.
    anchor: Option<usize>,
    /// Bonds to earlier vertices: (step index, order).
    back: Vec<(usize, BondOrder)>,
}

/// All monomorphisms of the left side into the disjoint union of `host`
/// that touch every host copy. Several left components may land in the same
/// copy. Output order is deterministic.
pub fn find_matches(rule: &Rule, host: &[MolecularGraph]) -> Vec<Match> {
    let left = rule.left();
    if host.is_empty() || left.vertices.is_empty() {
        return Vec::new();
    }
    let steps = plan(rule, host);
    let mut search = Search {
        rule,
        host,
        steps: &steps,
        image: Vec::with_capacity(steps.len()),
        binding: BTreeMap::new(),
        out: Vec::new(),
    };
    search.extend();
    search.out
}

/// Orders pattern vertices rarest-label first, then greedily by adjacency so
/// that most candidates come from neighbour lists.
fn plan(rule: &Rule, host: &[MolecularGraph]) -> Vec<Step> {
    let left = rule.left();
    let frequency = |label: &PatternLabel| -> usize {
        host.iter()
            .flat_map(|g| g.atoms())
            .filter(|a| rule.allowed(label, a.element))
            .count()
    };
    let freq: BTreeMap<u32, usize> = left
        .vertices
        .iter()
        .map(|v| (v.id, frequency(&v.label)))
        .collect();
    let mut order: Vec<u32> = Vec::new();
    while order.len() < left.vertices.len() {
        let placed = |id: u32| order.contains(&id);
        let adjacent = |id: u32| {
            left.edges
                .iter()
                .any(|e| (e.a == id && placed(e.b)) || (e.b == id && placed(e.a)))
        };
        let remaining = left.vertices.iter().map(|v| v.id).filter(|&id| !placed(id));
        let connected: Vec<u32> = remaining.clone().filter(|&id| adjacent(id)).collect();
        let pool: Vec<u32> = if connected.is_empty() {
            remaining.collect()
        } else {
            connected
        };
        let next = *pool
            .iter()
            .min_by_key(|&&id| (freq[&id], id))
            .expect("pool non-empty");
        order.push(next);
    }
    order
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let mut back = Vec::new();
            for e in &left.edges {
                let other = if e.a == id {
                    e.b
                } else if e.b == id {
                    e.a
                } else {
                    continue;
                };
                if let Some(j) = order[..i].iter().position(|&x| x == other) {
                    back.push((j, e.order));
                }
            }
            back.sort();
            Step {
                vertex: id,
                label: left
                    .label(id)
                    .expect("ordered ids come from the pattern")
                    .clone(),
                anchor: back.first().map(|b| b.0),
                back,
            }
        })
        .collect()
}

struct Search<'a> {
    rule: &'a Rule,
    host: &'a [MolecularGraph],
    steps: &'a [Step],
    /// (copy, atom position) per placed step.
    image: Vec<(usize, usize)>,
    binding: BTreeMap<String, Element>,
    out: Vec<Match>,
}

impl Search<'_> {
    fn extend(&mut self) {
        let depth = self.image.len();
        if depth == self.steps.len() {
            self.record();
            return;
        }
        let step = &self.steps[depth];
        let candidates: Vec<(usize, usize)> = match step.anchor {
            Some(j) => {
                let (m, p) = self.image[j];
                self.host[m]
                    .neighbors(p)
                    .iter()
                    .map(|&(q, _)| (m, q))
                    .collect()
            }
            None => self
                .host
                .iter()
                .enumerate()
                .flat_map(|(m, g)| (0..g.atom_count()).map(move |p| (m, p)))
                .collect(),
        };
        for (m, p) in candidates {
            if self.image.contains(&(m, p)) {
                continue;
            }
            let element = self.host[m].atoms()[p].element;
            if !self.rule.allowed(&step.label, element) {
                continue;
            }
            let bound_here = match &step.label {
                PatternLabel::Class(c) => match self.binding.get(c) {
                    Some(&e) if e != element => continue,
                    Some(_) => false,
                    None => true,
                },
                PatternLabel::Element(_) => false,
            };
            let bonds_ok = step.back.iter().all(|&(j, order)| {
                let (mj, pj) = self.image[j];
                mj == m && self.host[m].bond_between(p, pj) == Some(order)
            });
            if !bonds_ok {
                continue;
            }
            if bound_here {
                if let PatternLabel::Class(c) = &step.label {
                    self.binding.insert(c.clone(), element);
                }
            }
            self.image.push((m, p));
            self.extend();
            self.image.pop();
            if bound_here {
                if let PatternLabel::Class(c) = &step.label {
                    self.binding.remove(c);
                }
            }
        }
    }

    fn record(&mut self) {
        let mut touched = vec![false; self.host.len()];
        for &(m, _) in &self.image {
            touched[m] = true;
        }
        if touched.contains(&false) {
            return;
        }
        let assignment = self
            .steps
            .iter()
            .zip(&self.image)
            .map(|(s, &(m, p))| {
                (
                    s.vertex,
                    HostAtom {
                        molecule: m,
                        atom: self.host[m].atoms()[p].id,
                    },
                )
            })
            .collect();
        self.out.push(Match {
            assignment,
            class_binding: self.binding.clone(),
        });
    }
}
