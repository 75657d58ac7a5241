//! Energy profiles: cumulative barriers along a pathway.

use std::collections::BTreeSet;
use std::fmt::Write;

use hyperpath::kinetics::BarrierTable;
use hyperpath::netcore::{EdgeId, Hyperflow, Hypergraph, VertexId};

/// Support edges in firing order: repeatedly the smallest-id edge whose
/// reactants are all supplied or already produced; when none is ready (a
/// cycle), the smallest remaining edge.
pub fn firing_order(h: &Hypergraph, flow: &Hyperflow) -> Vec<EdgeId> {
    let mut available: BTreeSet<VertexId> = flow.inflows().map(|(v, _)| v).collect();
    let mut pending: Vec<EdgeId> = flow.edge_flows().filter(|(_, n)| *n > 0).map(|(e, _)| e).collect();
    let mut order = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let ready = pending.iter().position(|e| {
            h.edge(*e)
                .is_some_and(|edge| edge.reactants.keys().all(|v| available.contains(v)))
        });
        let e = pending.remove(ready.unwrap_or(0));
        if let Some(edge) = h.edge(e) {
            available.extend(edge.products.keys().copied());
        }
        order.push(e);
    }
    order
}

pub const HEADER: &str = "rank,step,edge_id,flow,barrier_kj_per_mol,cumulative_kj_per_mol\n";

/// Appends one CSV row per support edge, each contributing flow x barrier.
pub fn append_rows(out: &mut String, rank: usize, h: &Hypergraph, flow: &Hyperflow, barriers: &BarrierTable) {
    let mut total = 0.0;
    for (step, e) in firing_order(h, flow).into_iter().enumerate() {
        let n = flow.get(hyperpath::netcore::FlowKey::Edge(e));
        let g = barriers.get(e).unwrap_or(0.0) / 1000.0;
        total += n as f64 * g;
        writeln!(out, "{rank},{},{},{n},{g},{total}", step + 1, e.0).unwrap();
    }
}
