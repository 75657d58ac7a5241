//! Canonical keys for molecular graphs.
//!
//! Colour refinement on (element, charge) seeded colours, using the multiset
//! of (bond order, neighbour colour) pairs, then individualisation of the
//! smallest non-trivial cell with a full search over its members. The key is
//! the lexicographically smallest leaf certificate. Automorphisms discovered
//! at equal leaves prune sibling branches that lie in the same orbit.

use std::fmt;

use super::MolecularGraph;

/// Permutation-invariant identity of a molecular graph: two graphs share a
/// key exactly when they are isomorphic with respect to element, charge and
/// bond-order labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(s: &str) -> Option<CanonicalForm> {
        if s.len() % 2 != 0 {
            return None;
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect::<Option<Vec<u8>>>()
            .map(CanonicalForm)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

pub fn canonical_form(g: &MolecularGraph) -> CanonicalForm {
    let mut search = Search {
        g,
        best: None,
        automorphisms: Vec::new(),
    };
    let colors = search.initial_colors();
    search.descend(colors, &mut Vec::new());
    CanonicalForm(
        search
            .best
            .map(|(cert, _)| cert)
            .unwrap_or_else(|| vec![0, 0]),
    )
}

struct Search<'a> {
    g: &'a MolecularGraph,
    /// Best certificate so far with its labelling (position -> rank).
    best: Option<(Vec<u8>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn initial_colors(&self) -> Vec<u32> {
        let labels: Vec<(u8, i8)> = self
            .g
            .atoms()
            .iter()
            .map(|a| (a.element.atomic_number(), a.charge))
            .collect();
        rank(&labels)
    }

    fn refine(&self, colors: &mut Vec<u32>) {
        let mut cells = count_cells(colors);
        loop {
            let signatures: Vec<(u32, Vec<(u8, u32)>)> = (0..colors.len())
                .map(|v| {
                    let mut nbrs: Vec<(u8, u32)> = self
                        .g
                        .neighbors(v)
                        .iter()
                        .map(|&(u, order)| (order.code(), colors[u]))
                        .collect();
                    nbrs.sort_unstable();
                    (colors[v], nbrs)
                })
                .collect();
            *colors = rank(&signatures);
            let next = count_cells(colors);
            if next == cells {
                return;
            }
            cells = next;
        }
    }

    fn descend(&mut self, mut colors: Vec<u32>, prefix: &mut Vec<usize>) {
        self.refine(&mut colors);
        let n = colors.len();
        let Some(target) = target_cell(&colors) else {
            self.leaf(&colors);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() {
                let orbits = self.stabiliser_orbits(prefix);
                if explored.iter().any(|&u| orbits.same(u, v)) {
                    continue;
                }
            }
            let individualised: Vec<(u32, u8)> =
                (0..n).map(|u| (colors[u], u8::from(u != v))).collect();
            prefix.push(v);
            self.descend(rank(&individualised), prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    fn leaf(&mut self, colors: &[u32]) {
        let labelling: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let cert = certificate(self.g, &labelling);
        match &self.best {
            None => self.best = Some((cert, labelling)),
            Some((best_cert, best_lab)) => match cert.cmp(best_cert) {
                std::cmp::Ordering::Less => self.best = Some((cert, labelling)),
                std::cmp::Ordering::Equal => {
                    let mut inverse = vec![0; best_lab.len()];
                    for (pos, &r) in best_lab.iter().enumerate() {
                        inverse[r] = pos;
                    }
                    let gamma: Vec<usize> = labelling.iter().map(|&r| inverse[r]).collect();
                    if gamma.iter().enumerate().any(|(i, &j)| i != j) {
                        self.automorphisms.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Orbits of the group generated by known automorphisms fixing `prefix`
    /// pointwise.
    fn stabiliser_orbits(&self, prefix: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.g.atom_count());
        for gamma in &self.automorphisms {
            if prefix.iter().all(|&p| gamma[p] == p) {
                for (i, &j) in gamma.iter().enumerate() {
                    uf.union(i, j);
                }
            }
        }
        uf
    }
}

fn certificate(g: &MolecularGraph, labelling: &[usize]) -> Vec<u8> {
    let n = labelling.len();
    let mut by_rank = vec![0usize; n];
    for (pos, &r) in labelling.iter().enumerate() {
        by_rank[r] = pos;
    }
    let mut cert = Vec::with_capacity(2 + 2 * n + 5 * g.bonds().len());
    cert.extend_from_slice(&(n as u16).to_be_bytes());
    for &pos in &by_rank {
        let atom = g.atoms()[pos];
        cert.push(atom.element.atomic_number());
        cert.push(atom.charge as u8);
    }
    let mut edges: Vec<(usize, usize, u8)> = g
        .bonds()
        .iter()
        .map(|b| {
            let ra = labelling[g.position(b.a).unwrap()];
            let rb = labelling[g.position(b.b).unwrap()];
            (ra.min(rb), ra.max(rb), b.order.code())
        })
        .collect();
    edges.sort_unstable();
    for (a, b, o) in edges {
        cert.extend_from_slice(&(a as u16).to_be_bytes());
        cert.extend_from_slice(&(b as u16).to_be_bytes());
        cert.push(o);
    }
    cert
}

/// Dense ranks of `items` under their natural order.
fn rank<T: Ord + Clone>(items: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = items.to_vec();
    sorted.sort();
    sorted.dedup();
    items
        .iter()
        .map(|x| sorted.binary_search(x).expect("present") as u32)
        .collect()
}

fn count_cells(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Smallest non-singleton cell, ties broken by smallest colour.
fn target_cell(colors: &[u32]) -> Option<u32> {
    let mut sizes = vec![0usize; count_cells(colors)];
    for &c in colors {
        sizes[c as usize] += 1;
    }
    sizes
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > 1)
        .min_by_key(|(c, &s)| (s, *c))
        .map(|(c, _)| c as u32)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn same(&self, a: usize, b: usize) -> bool {
        let root = |mut x: usize| {
            while self.parent[x] != x {
                x = self.parent[x];
            }
            x
        };
        root(a) == root(b)
    }
}
