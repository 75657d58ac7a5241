//! Double-pushout graph rewriting on molecular graphs and rule-driven
//! network expansion.
//!
//! Rules only change bonds: the left, context and right graphs share one
//! vertex set. Applying a rule deletes the bonds of `L \ K` and adds those of
//! `R \ K` on the atoms a match selects.

mod apply;
mod dsl;
mod expand;
mod matcher;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use apply::{apply_rule, AtomMapEntry, DerivationRecord};
pub use dsl::{parse_rule, parse_rules};
pub use expand::{
    expand_network, right_predicate_no_cumulated_double_bonds, right_predicate_no_small_rings,
    Expansion, ExpansionConfig, IterationStats, RightPredicate,
};
pub use matcher::{find_matches, HostAtom, Match};

use crate::molgraph::{BondOrder, Element};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown label class `{name}`")]
    UnknownClass { line: usize, name: String },
    #[error("rule `{rule}`: {side} side references vertex {id} which is not in the left side")]
    VertexMismatch {
        rule: String,
        side: &'static str,
        id: u32,
    },
    #[error("rule `{rule}`: context bond {a}-{b} is not present in both left and right sides")]
    ContextNotCommon { rule: String, a: u32, b: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("match does not fit the host molecules")]
    InvalidMatch,
    #[error("rule adds a bond between atoms that are already bonded")]
    BondConflict,
    #[error("product violates a valence cap")]
    ValenceCap,
}

/// Vertex label in a pattern: a fixed element or a class variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternLabel {
    Element(Element),
    Class(String),
}

impl fmt::Display for PatternLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternLabel::Element(e) => write!(f, "{e}"),
            PatternLabel::Class(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternVertex {
    pub id: u32,
    pub label: PatternLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PatternEdge {
    pub a: u32,
    pub b: u32,
    pub order: BondOrder,
}

impl PatternEdge {
    /// Endpoints in ascending order, used to compare edges across sides.
    pub fn key(&self) -> (u32, u32, BondOrder) {
        (self.a.min(self.b), self.a.max(self.b), self.order)
    }
}

/// A simple labeled graph over pattern ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternGraph {
    pub vertices: Vec<PatternVertex>,
    pub edges: Vec<PatternEdge>,
}

impl PatternGraph {
    pub fn vertex_ids(&self) -> BTreeSet<u32> {
        self.vertices.iter().map(|v| v.id).collect()
    }

    pub fn label(&self, id: u32) -> Option<&PatternLabel> {
        self.vertices.iter().find(|v| v.id == id).map(|v| &v.label)
    }

    pub(crate) fn edge_keys(&self) -> BTreeSet<(u32, u32, BondOrder)> {
        self.edges.iter().map(PatternEdge::key).collect()
    }

    /// Vertex ids grouped by connected component, components ordered by
    /// their smallest id.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let ids: Vec<u32> = self.vertex_ids().into_iter().collect();
        let mut comp: BTreeMap<u32, usize> = BTreeMap::new();
        let mut out: Vec<Vec<u32>> = Vec::new();
        for &start in &ids {
            if comp.contains_key(&start) {
                continue;
            }
            let c = out.len();
            let mut members = vec![start];
            comp.insert(start, c);
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                for e in &self.edges {
                    let other = if e.a == u {
                        e.b
                    } else if e.b == u {
                        e.a
                    } else {
                        continue;
                    };
                    if let std::collections::btree_map::Entry::Vacant(slot) = comp.entry(other) {
                        slot.insert(c);
                        members.push(other);
                    }
                }
                i += 1;
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// A bond-rewriting DPO rule `L <- K -> R` with label classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    name: String,
    left: PatternGraph,
    context: PatternGraph,
    right: PatternGraph,
    label_classes: BTreeMap<String, BTreeSet<Element>>,
    reversible: bool,
}

impl Rule {
    /// Checks the structural invariants and builds the rule. When `context`
    /// is `None` it defaults to the bonds common to both sides.
    pub fn new(
        name: &str,
        left: PatternGraph,
        context: Option<PatternGraph>,
        right: PatternGraph,
        label_classes: BTreeMap<String, BTreeSet<Element>>,
        reversible: bool,
    ) -> Result<Rule, RuleError> {
        let ids = left.vertex_ids();
        for (side, g) in [("right", Some(&right)), ("context", context.as_ref())] {
            let Some(g) = g else { continue };
            for v in &g.vertices {
                if !ids.contains(&v.id) || left.label(v.id) != Some(&v.label) {
                    return Err(RuleError::VertexMismatch {
                        rule: name.into(),
                        side,
                        id: v.id,
                    });
                }
            }
            for e in &g.edges {
                for id in [e.a, e.b] {
                    if !ids.contains(&id) {
                        return Err(RuleError::VertexMismatch {
                            rule: name.into(),
                            side,
                            id,
                        });
                    }
                }
            }
            if g.vertex_ids() != ids {
                let missing = ids.difference(&g.vertex_ids()).next().copied().unwrap_or(0);
                return Err(RuleError::VertexMismatch {
                    rule: name.into(),
                    side,
                    id: missing,
                });
            }
        }
        let (lk, rk) = (left.edge_keys(), right.edge_keys());
        let context = match context {
            Some(k) => {
                for e in &k.edges {
                    if !lk.contains(&e.key()) || !rk.contains(&e.key()) {
                        return Err(RuleError::ContextNotCommon {
                            rule: name.into(),
                            a: e.a,
                            b: e.b,
                        });
                    }
                }
                k
            }
            None => PatternGraph {
                vertices: left.vertices.clone(),
                edges: left
                    .edges
                    .iter()
                    .filter(|e| rk.contains(&e.key()))
                    .copied()
                    .collect(),
            },
        };
        for v in &left.vertices {
            if let PatternLabel::Class(c) = &v.label {
                if !label_classes.contains_key(c) {
                    return Err(RuleError::UnknownClass {
                        line: 0,
                        name: c.clone(),
                    });
                }
            }
        }
        Ok(Rule {
            name: name.to_string(),
            left,
            context,
            right,
            label_classes,
            reversible,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn left(&self) -> &PatternGraph {
        &self.left
    }

    pub fn context(&self) -> &PatternGraph {
        &self.context
    }

    pub fn right(&self) -> &PatternGraph {
        &self.right
    }

    pub fn label_classes(&self) -> &BTreeMap<String, BTreeSet<Element>> {
        &self.label_classes
    }

    pub fn is_reversible(&self) -> bool {
        self.reversible
    }

    /// The inverse rule `R <- K -> L`, named `<name>-rev`.
    pub fn reversed(&self) -> Rule {
        Rule {
            name: format!("{}-rev", self.name),
            left: self.right.clone(),
            context: self.context.clone(),
            right: self.left.clone(),
            label_classes: self.label_classes.clone(),
            reversible: false,
        }
    }

    /// Bonds removed by the rule (`L \ K`).
    pub fn deleted_edges(&self) -> Vec<PatternEdge> {
        let k = self.context.edge_keys();
        self.left
            .edges
            .iter()
            .filter(|e| !k.contains(&e.key()))
            .copied()
            .collect()
    }

    /// Bonds created by the rule (`R \ K`).
    pub fn added_edges(&self) -> Vec<PatternEdge> {
        let k = self.context.edge_keys();
        self.right
            .edges
            .iter()
            .filter(|e| !k.contains(&e.key()))
            .copied()
            .collect()
    }

    /// Element sets allowed for a pattern label.
    pub(crate) fn allowed(&self, label: &PatternLabel, element: Element) -> bool {
        match label {
            PatternLabel::Element(e) => *e == element,
            PatternLabel::Class(c) => self
                .label_classes
                .get(c)
                .is_some_and(|s| s.contains(&element)),
        }
    }
}

/// Expands every reversible rule into itself plus its inverse, keeping order.
pub fn with_reverses(rules: &[Rule]) -> Vec<Rule> {
    let mut out = Vec::new();
    for r in rules {
        out.push(r.clone());
        if r.reversible {
            out.push(r.reversed());
        }
    }
    out
}
