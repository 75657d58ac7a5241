//! Small published networks used by tests, benches and the CLI demos.
//!
//! Species are abstract vertices named by their labels (`v0`, `v13`, ...).

use std::collections::BTreeMap;

use crate::kinetics::BarrierTable;
use crate::netcore::{Bag, EdgeId, FlowKey, Hyperflow, Hypergraph, VertexId};
use crate::pathopt::{FlowBounds, PathwayQuery, QueryObjective, DEFAULT_FLOW_CAP};

/// A network whose edges carry display labels, indexed by edge id.
#[derive(Debug, Clone)]
pub struct LabeledNetwork {
    pub network: Hypergraph,
    pub edge_labels: Vec<String>,
}

impl LabeledNetwork {
    pub fn edge(&self, label: &str) -> EdgeId {
        EdgeId(self.edge_labels.iter().position(|l| l == label).unwrap_or_else(|| panic!("no edge {label}")))
    }

    pub fn vertex(&self, name: &str) -> VertexId {
        self.network.find_name(name).unwrap_or_else(|| panic!("no vertex {name}"))
    }
}

fn species(h: &mut Hypergraph, name: &str) -> VertexId {
    h.find_name(name).unwrap_or_else(|| h.add_species(name))
}

fn bag(h: &mut Hypergraph, names: &[&str]) -> Bag {
    let mut b = Bag::new();
    for n in names {
        *b.entry(species(h, n)).or_insert(0) += 1;
    }
    b
}

/// Glycolonitrile (`v0`) and water (`v2`) reacting towards glyoxal (`v9`):
/// eleven reactions `e1`..`e11`, then `eN-rev` for the reversible ones.
pub fn glyoxal_network() -> LabeledNetwork {
    const REACTIONS: [(&str, &[&str], &[&str], bool); 11] = [
        ("e1", &["v2", "v0"], &["v3"], false),
        ("e2", &["v2", "v3"], &["v4"], true),
        ("e3", &["v3"], &["v5"], true),
        ("e4", &["v2", "v5"], &["v4"], true),
        ("e5", &["v4"], &["v6", "v1"], false),
        ("e6", &["v3"], &["v7"], true),
        ("e7", &["v5"], &["v7"], true),
        ("e8", &["v7"], &["v8"], true),
        ("e9", &["v8"], &["v9", "v1"], true),
        ("e10", &["v8"], &["v10", "v2"], true),
        ("e11", &["v2", "v8"], &["v11"], true),
    ];
    let mut h = Hypergraph::new();
    for i in 0..12 {
        h.add_species(&format!("v{i}"));
    }
    let mut labels = Vec::new();
    for (label, r, p, _) in REACTIONS {
        let (r, p) = (bag(&mut h, r), bag(&mut h, p));
        h.add_reaction(r, p).expect("fixture reactions are valid");
        labels.push(label.to_string());
    }
    for (label, r, p, reversible) in REACTIONS {
        if reversible {
            let (r, p) = (bag(&mut h, r), bag(&mut h, p));
            h.add_reaction(p, r).expect("fixture reactions are valid");
            labels.push(format!("{label}-rev"));
        }
    }
    LabeledNetwork { network: h, edge_labels: labels }
}

/// Sources `v0` (at most 1) and `v2` (at most 3), one unit of `v9`, ammonia
/// (`v1`) tolerated as a by-product.
pub fn glyoxal_query() -> PathwayQuery {
    PathwayQuery {
        sources: BTreeMap::from([
            (VertexId(0), FlowBounds { min: 0, max: 1 }),
            (VertexId(2), FlowBounds { min: 0, max: 3 }),
        ]),
        targets: BTreeMap::from([(VertexId(9), FlowBounds { min: 1, max: 1 })]),
        byproducts: BTreeMap::from([(VertexId(1), DEFAULT_FLOW_CAP)]),
        ..PathwayQuery::default()
    }
}

/// Same barrier for every edge of `h`, in kJ/mol.
pub fn uniform_barriers(h: &Hypergraph, kj_per_mol: f64) -> BarrierTable {
    let map = (0..h.edge_count()).map(|i| (EdgeId(i), kj_per_mol * 1000.0)).collect();
    BarrierTable::from_joules(h, map).expect("uniform table covers every edge")
}

/// Flux-mode demo: `e_i: 2 v_i -> v3` for sources `v0`, `v1`, `v2`, at most 3
/// units of total inflow, maximize outflow of `v3`. Relaxed optimum 1.5,
/// integer optimum 1 reached by three singleton supports.
pub fn flux_demo() -> (Hypergraph, PathwayQuery) {
    let mut h = Hypergraph::new();
    let v: Vec<VertexId> = (0..4).map(|i| h.add_species(&format!("v{i}"))).collect();
    for &s in &v[..3] {
        h.add_reaction_from(&[(s, 2)], &[(v[3], 1)]).expect("valid");
    }
    (h, flux_query())
}

/// A second flux-mode instance whose integer optima are the flows
/// `(1,1,0)`, `(0,1,1)` and `(1,1,1)` over
/// `e1: v2 -> 2 v0`, `e2: 2 v0 + 2 v1 -> v3`, `e3: v2 -> 2 v1`.
/// Relaxed optimum 1.5 with every flux at 1.5.
pub fn flux_demo_shared_core() -> (Hypergraph, PathwayQuery) {
    let mut h = Hypergraph::new();
    let v: Vec<VertexId> = (0..4).map(|i| h.add_species(&format!("v{i}"))).collect();
    h.add_reaction_from(&[(v[2], 1)], &[(v[0], 2)]).expect("valid");
    h.add_reaction_from(&[(v[0], 2), (v[1], 2)], &[(v[3], 1)]).expect("valid");
    h.add_reaction_from(&[(v[2], 1)], &[(v[1], 2)]).expect("valid");
    (h, flux_query())
}

fn flux_query() -> PathwayQuery {
    let open = FlowBounds { min: 0, max: DEFAULT_FLOW_CAP };
    PathwayQuery {
        sources: (0..3).map(|i| (VertexId(i), open)).collect(),
        targets: BTreeMap::from([(VertexId(3), open)]),
        max_total_inflow: Some(3),
        objective: QueryObjective::MaxOutflow,
        ..PathwayQuery::default()
    }
}

/// One reaction row of a published pathway column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub reactants: &'static [&'static str],
    pub products: &'static [&'static str],
    pub barrier_kj: f64,
}

/// A pathway as printed: its reactions with barriers and the printed sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PathwayColumn {
    pub entries: Vec<TableEntry>,
    pub listed_sum_kj: f64,
}

impl PathwayColumn {
    /// Sum of the per-reaction barriers, kJ/mol.
    pub fn computed_sum_kj(&self) -> f64 {
        self.entries.iter().map(|e| e.barrier_kj).sum()
    }
}

const fn entry(reactants: &'static [&'static str], products: &'static [&'static str], barrier_kj: f64) -> TableEntry {
    TableEntry { reactants, products, barrier_kj }
}

/// The five best pathways from glycolonitrile (`v0`), ammonia (`v1`) and
/// water (`v2`) to glycine (`v9`).
pub fn glycine_pathways() -> Vec<PathwayColumn> {
    const A: TableEntry = entry(&["v0", "v2"], &["v3"], 13.95);
    const B: TableEntry = entry(&["v3"], &["v4"], 7.67);
    const C: TableEntry = entry(&["v4"], &["v5"], 57.69);
    const D: TableEntry = entry(&["v5"], &["v6", "v2"], 1.67);
    const E: TableEntry = entry(&["v6", "v2"], &["v7"], 17.14);
    const F: TableEntry = entry(&["v7"], &["v8"], 0.19);
    const G: TableEntry = entry(&["v8"], &["v9"], 30.42);
    const H: TableEntry = entry(&["v0", "v1"], &["v13"], 33.18);
    const I: TableEntry = entry(&["v13"], &["v14"], 64.17);
    const J: TableEntry = entry(&["v14"], &["v15"], 28.40);
    vec![
        PathwayColumn { entries: vec![A, B, C, D, E, F, G], listed_sum_kj: 128.74 },
        PathwayColumn {
            entries: vec![
                H,
                I,
                J,
                entry(&["v15", "v2"], &["v16"], 19.86),
                entry(&["v16"], &["v7", "v1"], 23.79),
                F,
                G,
            ],
            listed_sum_kj: 200.02,
        },
        PathwayColumn {
            entries: vec![H, I, J, entry(&["v15"], &["v6", "v1"], 29.35), E, F, G],
            listed_sum_kj: 202.85,
        },
        PathwayColumn {
            entries: vec![
                A,
                B,
                C,
                entry(&["v5", "v2"], &["v36"], 67.36),
                entry(&["v36"], &["v7", "v2"], 60.84),
                F,
                G,
            ],
            listed_sum_kj: 238.13,
        },
        PathwayColumn {
            entries: vec![
                A,
                entry(&["v3"], &["v52"], 18.67),
                entry(&["v52"], &["v4"], 13.15),
                C,
                D,
                E,
                F,
                G,
            ],
            listed_sum_kj: 152.90,
        },
    ]
}

/// The six best pathways to glycolic acid (`v7`). Vertex labels are local to
/// this list. Values are kept as printed, including `48.612` next to `48.61`
/// and a repeated `(v3+v2, v6)` reaction carrying two different barriers.
pub fn glycolic_acid_pathways() -> Vec<PathwayColumn> {
    const A: TableEntry = entry(&["v0", "v2"], &["v3"], 13.95);
    const H: TableEntry = entry(&["v0", "v1"], &["v33"], 33.18);
    const Q: TableEntry = entry(&["v15", "v2"], &["v6"], 0.62);
    const Z: TableEntry = entry(&["v6"], &["v7", "v1"], 74.62);
    const S: TableEntry = entry(&["v34"], &["v15", "v1"], 43.64);
    vec![
        PathwayColumn {
            entries: vec![A, entry(&["v3", "v2"], &["v6"], 26.61), Z],
            listed_sum_kj: 118.19,
        },
        PathwayColumn { entries: vec![A, entry(&["v3"], &["v15"], 18.68), Q, Z], listed_sum_kj: 107.87 },
        PathwayColumn {
            entries: vec![A, entry(&["v3"], &["v24"], 7.67), entry(&["v24"], &["v15"], 11.76), Q, Z],
            listed_sum_kj: 108.63,
        },
        PathwayColumn {
            entries: vec![H, entry(&["v33", "v2"], &["v34"], 48.612), S, Q, Z],
            listed_sum_kj: 200.68,
        },
        PathwayColumn {
            entries: vec![A, entry(&["v3", "v1"], &["v34"], 80.53), S, Q, Z],
            listed_sum_kj: 213.38,
        },
        PathwayColumn {
            entries: vec![
                H,
                entry(&["v33", "v2"], &["v34"], 48.61),
                entry(&["v34"], &["v3", "v1"], 33.08),
                entry(&["v3", "v2"], &["v6"], 0.62),
                Z,
            ],
            listed_sum_kj: 219.11,
        },
    ]
}

/// A network holding every reaction of `columns` once, the barrier of its
/// first listing (J/mol), and one unit-flow pathway per column with half-edges
/// balancing the net production.
pub struct PathwayNetwork {
    pub network: Hypergraph,
    pub barriers: BarrierTable,
    pub flows: Vec<Hyperflow>,
}

pub fn pathway_network(columns: &[PathwayColumn]) -> PathwayNetwork {
    let mut h = Hypergraph::new();
    let mut joules = BTreeMap::new();
    let mut flows = Vec::new();
    for col in columns {
        let mut flow = Hyperflow::new();
        for e in &col.entries {
            let (r, p) = (bag(&mut h, e.reactants), bag(&mut h, e.products));
            let id = h.add_reaction(r, p).expect("fixture reactions are valid");
            joules.entry(id).or_insert(e.barrier_kj * 1000.0);
            flow.set(FlowKey::Edge(id), flow.get(FlowKey::Edge(id)) + 1);
        }
        flows.push(flow);
    }
    for flow in &mut flows {
        let balance = crate::netcore::vertex_balance(&h, flow).expect("flow over known edges");
        for (i, b) in balance.into_iter().enumerate() {
            let v = VertexId(i);
            if b > 0 {
                flow.set(FlowKey::Outflow(v), b as u64);
            } else if b < 0 {
                flow.set(FlowKey::Inflow(v), (-b) as u64);
            }
        }
    }
    let barriers = BarrierTable::from_joules(&h, joules).expect("every edge was listed");
    PathwayNetwork { network: h, barriers, flows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netcore::check_conservation;

    #[test]
    fn glyoxal_shape() {
        let g = glyoxal_network();
        assert_eq!(g.network.vertex_count(), 12);
        assert_eq!(g.network.edge_count(), 20);
        let e9 = g.network.edge(g.edge("e9")).unwrap();
        assert_eq!(e9.products.len(), 2);
        assert_eq!(g.network.edge(g.edge("e9-rev")).unwrap().reverse_of, Some(g.edge("e9")));
        assert!(glyoxal_query().validate(&g.network).is_ok());
    }

    #[test]
    fn pathway_flows_conserve() {
        for cols in [glycine_pathways(), glycolic_acid_pathways()] {
            let net = pathway_network(&cols);
            for f in &net.flows {
                assert!(check_conservation(&net.network, f).unwrap());
            }
        }
        let net = pathway_network(&glycine_pathways());
        assert_eq!(net.network.edge_count(), 17);
        // Net reaction of the best glycine pathway: v0 + v2 -> v9.
        let v = |n: &str| net.network.find_name(n).unwrap();
        let f = &net.flows[0];
        assert_eq!(f.get(FlowKey::Inflow(v("v0"))), 1);
        assert_eq!(f.get(FlowKey::Inflow(v("v2"))), 1);
        assert_eq!(f.get(FlowKey::Outflow(v("v9"))), 1);
        assert_eq!(f.inflows().count() + f.outflows().count(), 3);
    }
}
