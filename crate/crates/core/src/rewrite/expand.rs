use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{apply_rule, find_matches, with_reverses, DerivationRecord, Rule};
use crate::molgraph::{CanonicalForm, Element, MolecularGraph};
use crate::netcore::{Bag, EdgeId, Hypergraph, VertexId};

/// False iff `g` has a cycle of length at most `max_forbidden_ring`.
pub fn right_predicate_no_small_rings(g: &MolecularGraph, max_forbidden_ring: usize) -> bool {
    g.girth().is_none_or(|len| len > max_forbidden_ring)
}

/// False iff some atom of `g` has two or more double bonds.
pub fn right_predicate_no_cumulated_double_bonds(g: &MolecularGraph) -> bool {
    (0..g.atom_count()).all(|p| {
        g.neighbors(p)
            .iter()
            .filter(|(_, order)| *order == crate::molgraph::BondOrder::Double)
            .count()
            < 2
    })
}

/// Product filter applied to every derivation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RightPredicate {
    /// Reject products containing a ring of this size or smaller.
    NoRingsUpTo(usize),
    /// Reject products with an atom carrying two double bonds (allenes,
    /// ketenes, ketenimines).
    NoCumulatedDoubleBonds,
}

impl RightPredicate {
    pub fn accepts(&self, g: &MolecularGraph) -> bool {
        match *self {
            RightPredicate::NoRingsUpTo(k) => right_predicate_no_small_rings(g, k),
            RightPredicate::NoCumulatedDoubleBonds => right_predicate_no_cumulated_double_bonds(g),
        }
    }
}

impl FromStr for RightPredicate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('=') {
            None if s == "no-cumulated" => Ok(RightPredicate::NoCumulatedDoubleBonds),
            Some(("no-rings-le", k)) => k
                .trim()
                .parse()
                .map(RightPredicate::NoRingsUpTo)
                .map_err(|_| format!("invalid ring size `{k}`")),
            _ => Err(format!(
                "unknown filter `{s}` (known: no-rings-le=<k>, no-cumulated)"
            )),
        }
    }
}

impl fmt::Display for RightPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RightPredicate::NoRingsUpTo(k) => write!(f, "no-rings-le={k}"),
            RightPredicate::NoCumulatedDoubleBonds => f.write_str("no-cumulated"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExpansionConfig {
    pub seed_molecules: Vec<MolecularGraph>,
    pub max_iterations: usize,
    /// Per-molecule element caps; derivations producing a molecule above
    /// any cap are dropped whole.
    pub max_element_counts: BTreeMap<Element, u32>,
    pub right_predicates: Vec<RightPredicate>,
    /// Worker threads for match enumeration; `None` uses the rayon default.
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationStats {
    pub iteration: usize,
    pub molecules: usize,
    pub reactions: usize,
}

#[derive(Debug, Clone)]
pub struct Expansion {
    pub network: Hypergraph,
    /// The derivation that created each edge, indexed by edge id.
    pub derivations: Vec<DerivationRecord>,
    /// Counts after each completed iteration.
    pub stats: Vec<IterationStats>,
}

impl Expansion {
    pub fn derivation(&self, e: EdgeId) -> Option<&DerivationRecord> {
        self.derivations.get(e.0)
    }
}

struct Derived {
    reactants: Vec<VertexId>,
    products: Vec<(CanonicalForm, MolecularGraph)>,
    record: DerivationRecord,
}

/// Applies `rules` (plus the inverses of reversible ones) to the seeds in
/// breadth-first strata: each iteration derives from the molecules known at
/// its start and commits all results together. Stops early at a fixed point.
pub fn expand_network(config: &ExpansionConfig, rules: &[Rule]) -> Expansion {
    let rules = with_reverses(rules);
    let mut h = Hypergraph::new();
    let mut frontier: BTreeSet<VertexId> = BTreeSet::new();
    for g in &config.seed_molecules {
        frontier.insert(h.add_molecule(g.clone()));
    }
    let mut derivations = Vec::new();
    let mut stats = Vec::new();
    let pool = config.threads.map(|n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
    });

    for iteration in 1..=config.max_iterations {
        let known: Vec<VertexId> = h.vertices().iter().map(|v| v.id).collect();
        let mut tasks: Vec<(usize, Vec<VertexId>)> = Vec::new();
        for (r, rule) in rules.iter().enumerate() {
            let width = rule.left().components().len();
            for size in 1..=width {
                for combo in multisets(&known, size) {
                    if combo.iter().any(|v| frontier.contains(v)) {
                        tasks.push((r, combo));
                    }
                }
            }
        }
        let run = |(r, combo): &(usize, Vec<VertexId>)| derive(&rules[*r], combo, &h, config);
        let results: Vec<Vec<Derived>> = match &pool {
            Some(p) if p.current_num_threads() > 1 => {
                p.install(|| tasks.par_iter().map(run).collect())
            }
            Some(_) => tasks.iter().map(run).collect(),
            None => tasks.par_iter().map(run).collect(),
        };

        let before = h.vertex_count();
        let edges_before = h.edge_count();
        for d in results.into_iter().flatten() {
            let mut reactants = Bag::new();
            for v in &d.reactants {
                *reactants.entry(*v).or_insert(0) += 1;
            }
            let mut products = Bag::new();
            for (key, g) in d.products {
                let v = h.add_molecule_keyed(key.to_hex(), g);
                *products.entry(v).or_insert(0) += 1;
            }
            let e = h
                .add_reaction(reactants, products)
                .expect("derived reactions are non-empty");
            if e.0 == derivations.len() {
                derivations.push(d.record);
            }
        }
        frontier = (before..h.vertex_count()).map(VertexId).collect();
        stats.push(IterationStats {
            iteration,
            molecules: h.vertex_count(),
            reactions: h.edge_count(),
        });
        log::info!(
            "iteration {iteration}: {} molecules, {} reactions",
            h.vertex_count(),
            h.edge_count()
        );
        if frontier.is_empty() && h.edge_count() == edges_before {
            break;
        }
    }
    Expansion {
        network: h,
        derivations,
        stats,
    }
}

/// All derivations of one rule on one host multiset, after filtering and
/// de-duplication by (reactant keys, product keys). Derivations whose
/// products equal their reactants (e.g. proton exchange in a carboxylic acid)
/// are kept as self-loop edges.
fn derive(
    rule: &Rule,
    combo: &[VertexId],
    h: &Hypergraph,
    config: &ExpansionConfig,
) -> Vec<Derived> {
    let host: Vec<MolecularGraph> = combo
        .iter()
        .map(|v| {
            h.vertex(*v)
                .and_then(|x| x.molecule.clone())
                .expect("expansion vertices are molecules")
        })
        .collect();
    let mut seen: BTreeSet<Vec<CanonicalForm>> = BTreeSet::new();
    let mut out = Vec::new();
    for m in find_matches(rule, &host) {
        let Ok((products, record)) = apply_rule(rule, &m, &host) else {
            continue;
        };
        let within_limits = products.iter().all(|p| {
            let counts = p.element_counts();
            config
                .max_element_counts
                .iter()
                .all(|(e, max)| counts.get(e).copied().unwrap_or(0) <= *max)
        });
        if !within_limits
            || !products
                .iter()
                .all(|p| config.right_predicates.iter().all(|f| f.accepts(p)))
        {
            continue;
        }
        let mut keys = record.products.clone();
        keys.sort();
        if !seen.insert(keys) {
            continue;
        }
        let products = record.products.iter().cloned().zip(products).collect();
        out.push(Derived {
            reactants: combo.to_vec(),
            products,
            record,
        });
    }
    out
}

/// Sorted multisets of `size` elements drawn from `items` with repetition.
fn multisets(items: &[VertexId], size: usize) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn rec(
        items: &[VertexId],
        start: usize,
        size: usize,
        current: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            current.push(items[i]);
            rec(items, i, size, current, out);
            current.pop();
        }
    }
    rec(items, 0, size, &mut current, &mut out);
    out
}
