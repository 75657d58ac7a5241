use std::collections::BTreeMap;

use serde::Serialize;

use super::{IlpSolution, IlpStatus, RankedPathways};

#[derive(Serialize)]
struct SolutionJson {
    status: &'static str,
    objective_j_per_mol: Option<f64>,
    flow: BTreeMap<String, u64>,
    inflow: BTreeMap<String, u64>,
    outflow: BTreeMap<String, u64>,
    support: Vec<usize>,
}

fn to_view(sol: &IlpSolution) -> SolutionJson {
    SolutionJson {
        status: sol.status.as_str(),
        objective_j_per_mol: (sol.status == IlpStatus::Optimal).then_some(sol.objective),
        flow: sol.flow.edge_flows().map(|(e, n)| (e.0.to_string(), n)).collect(),
        inflow: sol.flow.inflows().map(|(v, n)| (v.0.to_string(), n)).collect(),
        outflow: sol.flow.outflows().map(|(v, n)| (v.0.to_string(), n)).collect(),
        support: sol.support().iter().map(|e| e.0).collect(),
    }
}

/// `{"status","objective_j_per_mol","flow","inflow","outflow","support"}`.
pub fn solution_to_json(sol: &IlpSolution) -> serde_json::Value {
    serde_json::to_value(to_view(sol)).expect("solution serializes")
}

#[derive(Serialize)]
struct RankedEntry {
    rank: usize,
    #[serde(flatten)]
    solution: SolutionJson,
    /// Supports cut before this solution was found.
    cuts_before: Vec<Vec<usize>>,
}

/// Ranked solutions as a JSON array, each entry carrying its cut history.
pub fn ranked_to_json(ranked: &RankedPathways) -> serde_json::Value {
    let entries: Vec<RankedEntry> = ranked
        .solutions
        .iter()
        .enumerate()
        .map(|(i, (sol, _))| RankedEntry {
            rank: i + 1,
            solution: to_view(sol),
            cuts_before: ranked.cuts[..i.min(ranked.cuts.len())]
                .iter()
                .map(|s| s.iter().map(|e| e.0).collect())
                .collect(),
        })
        .collect();
    serde_json::to_value(entries).expect("ranking serializes")
}
