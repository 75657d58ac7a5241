#![allow(dead_code)]

use std::collections::BTreeMap;

use hyperpath::molgraph::{parse_molecules, Element, MolecularGraph};
use hyperpath::rewrite::{expand_network, parse_rules, Expansion, ExpansionConfig, RightPredicate, Rule};

pub const SEEDS: &str = include_str!("../../data/seeds.mgf");
pub const AMMONIA: &str = include_str!("../../data/ammonia.mgf");
pub const RULES: &str = include_str!("../../data/rules.txt");

pub fn seeds() -> Vec<MolecularGraph> {
    parse_molecules(SEEDS).expect("seed file parses")
}

pub fn rules() -> Vec<Rule> {
    parse_rules(RULES).expect("rule file parses")
}

pub fn element_limits() -> BTreeMap<Element, u32> {
    [(Element::C, 2), (Element::N, 4), (Element::O, 4)].into_iter().collect()
}

pub fn config(iterations: usize, filters: Vec<RightPredicate>, threads: Option<usize>) -> ExpansionConfig {
    ExpansionConfig {
        seed_molecules: seeds(),
        max_iterations: iterations,
        max_element_counts: element_limits(),
        right_predicates: filters,
        threads,
    }
}

pub fn expand(iterations: usize, filters: Vec<RightPredicate>) -> Expansion {
    expand_network(&config(iterations, filters, None), &rules())
}

pub mod random {
    use std::collections::BTreeMap;

    use hyperpath::kinetics::BarrierTable;
    use hyperpath::netcore::{EdgeId, Hypergraph, VertexId};
    use hyperpath::pathopt::{FlowBounds, PathwayQuery};
    use proptest::prelude::*;

    /// A random species network with barriers and a single-target query.
    /// Sources, the target and by-products are pairwise disjoint.
    #[derive(Debug, Clone)]
    pub struct Instance {
        pub network: Hypergraph,
        pub barriers: BarrierTable,
        pub query: PathwayQuery,
    }

    type Side = Vec<(usize, u32)>;

    fn build(
        nv: usize,
        edges: Vec<(Side, Side)>,
        barriers_kj: Vec<f64>,
        target: (usize, u32, u32),
        roles: Vec<(u8, u32)>,
        cap: u32,
    ) -> Instance {
        let mut h = Hypergraph::new();
        let v: Vec<VertexId> = (0..nv).map(|i| h.add_species(&format!("s{i}"))).collect();
        for (mut r, p) in edges {
            if r.is_empty() && p.is_empty() {
                r.push((0, 1));
            }
            let r: Vec<(VertexId, u32)> = r.into_iter().map(|(i, m)| (v[i % nv], m)).collect();
            let p: Vec<(VertexId, u32)> = p.into_iter().map(|(i, m)| (v[i % nv], m)).collect();
            h.add_reaction_from(&r, &p).unwrap();
        }
        let barriers: BTreeMap<EdgeId, f64> = (0..h.edge_count())
            .map(|i| (EdgeId(i), barriers_kj[i] * 1000.0))
            .collect();
        let barriers = BarrierTable::from_joules(&h, barriers).unwrap();
        let t = v[target.0 % nv];
        let mut query = PathwayQuery {
            flow_cap: cap,
            ..PathwayQuery::default()
        };
        query.targets.insert(
            t,
            FlowBounds {
                min: target.1.min(target.2),
                max: target.2,
            },
        );
        for (i, (role, max)) in roles.into_iter().enumerate().take(nv) {
            if v[i] == t {
                continue;
            }
            match role {
                1 => {
                    query.sources.insert(v[i], FlowBounds { min: 0, max });
                }
                2 => {
                    query.byproducts.insert(v[i], max);
                }
                _ => {}
            }
        }
        Instance {
            network: h,
            barriers,
            query,
        }
    }

    /// Up to `max_v` vertices and `max_e` edges, barriers in [0, 100] kJ/mol,
    /// flows capped at `cap`.
    pub fn instance(max_v: usize, max_e: usize, cap: u32) -> impl Strategy<Value = Instance> {
        (2..=max_v, 1..=max_e).prop_flat_map(move |(nv, ne)| {
            let side = prop::collection::vec((0..nv, 1u32..=2), 0..=2);
            (
                prop::collection::vec((side.clone(), side), ne),
                prop::collection::vec(0.0f64..=100.0, ne),
                (0..nv, 0u32..=1, 1u32..=cap),
                prop::collection::vec((0u8..3, 1u32..=cap), nv),
            )
                .prop_map(move |(edges, barriers, target, roles)| {
                    build(nv, edges, barriers, target, roles, cap)
                })
        })
    }
}

pub mod oracle {
    use std::collections::BTreeSet;

    use hyperpath::kinetics::WeightModel;
    use hyperpath::netcore::{EdgeId, FlowKey, Hyperflow, Hypergraph, Support, VertexId};
    use hyperpath::pathopt::PathwayQuery;

    /// Feasible integer hyperflows of `q`, found by enumerating every edge
    /// flow vector in `[0, cap]^E`. Half-edge flows follow from the vertex
    /// balances because each vertex has at most one half-edge.
    pub fn feasible_flows(h: &Hypergraph, q: &PathwayQuery) -> Vec<Hyperflow> {
        let ne = h.edge_count();
        let cap = q.flow_cap as i64;
        let mut out = Vec::new();
        let mut f = vec![0i64; ne];
        loop {
            if let Some(flow) = complete(h, q, &f) {
                out.push(flow);
            }
            let mut i = 0;
            loop {
                if i == ne {
                    return out;
                }
                f[i] += 1;
                if f[i] <= cap {
                    break;
                }
                f[i] = 0;
                i += 1;
            }
        }
    }

    fn complete(h: &Hypergraph, q: &PathwayQuery, f: &[i64]) -> Option<Hyperflow> {
        let mut flow = Hyperflow::new();
        for (i, &x) in f.iter().enumerate() {
            if x > 0 && q.forbidden_edges.contains(&EdgeId(i)) {
                return None;
            }
            flow.set(FlowKey::Edge(EdgeId(i)), x as u64);
        }
        let mut balance = vec![0i64; h.vertex_count()];
        for (e, &x) in h.edges().iter().zip(f) {
            for (v, &m) in &e.products {
                balance[v.0] += x * i64::from(m);
            }
            for (v, &m) in &e.reactants {
                balance[v.0] -= x * i64::from(m);
            }
        }
        let mut total_in = 0i64;
        for (i, &b) in balance.iter().enumerate() {
            let v = VertexId(i);
            if let Some(bounds) = q.sources.get(&v) {
                let need = -b;
                if need < i64::from(bounds.min) || need > i64::from(bounds.max.min(q.flow_cap)) {
                    return None;
                }
                total_in += need;
                flow.set(FlowKey::Inflow(v), need as u64);
            } else if q.targets.contains_key(&v) || q.byproducts.contains_key(&v) {
                let (min, max) = match q.targets.get(&v) {
                    Some(t) => (t.min, t.max),
                    None => (0, q.byproducts[&v]),
                };
                if b < i64::from(min) || b > i64::from(max.min(q.flow_cap)) {
                    return None;
                }
                flow.set(FlowKey::Outflow(v), b as u64);
            } else if b != 0 {
                return None;
            }
        }
        if q.max_total_inflow.is_some_and(|t| total_in > i64::from(t)) {
            return None;
        }
        Some(flow)
    }

    pub fn support_of(f: &Hyperflow) -> Support {
        f.edge_flows().filter(|(_, x)| *x > 0).map(|(e, _)| e).collect::<BTreeSet<_>>()
    }

    pub fn energy(f: &Hyperflow, w: &WeightModel) -> f64 {
        f.edge_flows().map(|(e, x)| x as f64 * w.coeff[&e]).sum()
    }

    /// Minimum energy among flows avoiding every cut superset.
    pub fn best_energy(flows: &[Hyperflow], w: &WeightModel, cuts: &[Support]) -> Option<f64> {
        flows
            .iter()
            .filter(|f| {
                let s = support_of(f);
                !cuts.iter().any(|c| c.is_subset(&s))
            })
            .map(|f| energy(f, w))
            .reduce(f64::min)
    }
}
