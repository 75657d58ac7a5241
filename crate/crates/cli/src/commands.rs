use std::collections::BTreeMap;

use hyperpath::kinetics::{
    load_barriers, objective_coefficients, rate_constant, reaction_probability, BarrierTable,
    Thermo, WeightModel,
};
use hyperpath::molgraph::parse_molecules;
use hyperpath::netcore::{from_json, to_dot, to_json, EdgeId, FlowKey, Hyperflow, Hypergraph, VertexId};
use hyperpath::pathopt::{build_model, export_lp_text, relax, IlpModel, PathwayQuery, QueryObjective};
use hyperpath::rewrite::{expand_network, parse_rules, ExpansionConfig};
use hyperpath::solve::{
    enumerate, ranked_to_json, relaxed_flow, solution_to_json, solve_relaxation, IlpSolution,
    SolveError, SolveOptions,
};
use serde_json::{json, Value};

use crate::args::{AnnotateArgs, Cli, Command, ExpandArgs, ExportDotArgs, ExportLpArgs, ModelArgs, QueryArgs};
use crate::manifest::Recorder;
use crate::{profile, CliError};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut rec = Recorder::new(cli.command.name());
    match &cli.command {
        Command::Expand(a) => {
            let summary = expand(a, &mut rec)?;
            rec.finish(a, summary, &a.out, a.manifest.as_deref())?;
        }
        Command::AnnotateCheck(a) => {
            let summary = annotate_check(a, &mut rec)?;
            rec.finish(a, summary, &a.out, a.manifest.as_deref())?;
        }
        Command::Query(a) => {
            let summary = query(a, &mut rec)?;
            rec.finish(a, summary, &a.out, a.manifest.as_deref())?;
        }
        Command::ExportLp(a) => {
            let summary = export_lp(a, &mut rec)?;
            rec.finish(a, summary, &a.out, a.manifest.as_deref())?;
        }
        Command::ExportDot(a) => {
            let summary = export_dot(a, &mut rec)?;
            rec.finish(a, summary, &a.out, a.manifest.as_deref())?;
        }
    }
    Ok(())
}

fn input_err(context: &str) -> impl Fn(String) -> CliError + '_ {
    move |msg| CliError::Input(format!("{context}: {msg}"))
}

fn expand(a: &ExpandArgs, rec: &mut Recorder) -> Result<Value, CliError> {
    let mut seeds = Vec::new();
    for path in &a.seeds {
        let text = rec.read(path)?;
        let ctx = path.display().to_string();
        seeds.extend(parse_molecules(&text).map_err(|e| input_err(&ctx)(e.to_string()))?);
    }
    let rules_text = rec.read(&a.rules)?;
    let ctx = a.rules.display().to_string();
    let rules = parse_rules(&rules_text).map_err(|e| input_err(&ctx)(e.to_string()))?;
    if a.threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let config = ExpansionConfig {
        seed_molecules: seeds,
        max_iterations: a.max_iterations,
        max_element_counts: a.max_elements.as_ref().map(|l| l.to_elements()).unwrap_or_default(),
        right_predicates: a.filters.clone(),
        threads: a.threads,
    };
    let x = expand_network(&config, &rules);
    for s in &x.stats {
        println!("iteration {}: {} molecules, {} reactions", s.iteration, s.molecules, s.reactions);
    }
    rec.write(&a.out, &to_json(&x.network))?;
    if let Some(dot) = &a.dot {
        rec.write(dot, &to_dot(&x.network, None))?;
    }
    let rule_of: Vec<&str> = x.derivations.iter().map(|d| d.rule.as_str()).collect();
    Ok(json!({
        "molecules": x.network.vertex_count(),
        "reactions": x.network.edge_count(),
        "iterations": x.stats.iter().map(|s| json!({
            "iteration": s.iteration, "molecules": s.molecules, "reactions": s.reactions
        })).collect::<Vec<_>>(),
        "edge_rules": rule_of,
    }))
}

fn load_network(rec: &mut Recorder, path: &std::path::Path) -> Result<Hypergraph, CliError> {
    let text = rec.read(path)?;
    let ctx = path.display().to_string();
    from_json(&text).map_err(|e| input_err(&ctx)(e.to_string()))
}

fn load_table(rec: &mut Recorder, path: &std::path::Path, h: &Hypergraph) -> Result<BarrierTable, CliError> {
    let text = rec.read(path)?;
    let ctx = path.display().to_string();
    load_barriers(&text, h).map_err(|e| input_err(&ctx)(e.to_string()))
}

fn thermo(t: f64) -> Result<Thermo, CliError> {
    Thermo::new(t).map_err(|e| CliError::Usage(e.to_string()))
}

fn annotate_check(a: &AnnotateArgs, rec: &mut Recorder) -> Result<Value, CliError> {
    let h = load_network(rec, &a.network)?;
    let table = load_table(rec, &a.barriers, &h)?;
    let th = thermo(a.thermo.temperature_k)?;
    let w = objective_coefficients(&table, &th, &h).map_err(|e| CliError::Input(e.to_string()))?;
    let edges: Vec<Value> = table
        .iter()
        .map(|(e, g)| {
            json!({
                "edge": e.0,
                "barrier_kj_per_mol": g / 1000.0,
                "rate_constant_per_s": rate_constant(g, &th),
                "probability": reaction_probability(e, &table, &th),
                "coefficient_j_per_mol": w.coefficient(e),
            })
        })
        .collect();
    let report = json!({
        "temperature_k": th.temperature(),
        "rt_j_per_mol": w.rt,
        "log_d": w.log_d,
        "edges": edges,
    });
    rec.write(&a.out, &pretty(&report))?;
    println!("{} edges annotated, ln D = {}", table.len(), w.log_d);
    Ok(json!({ "edges": table.len(), "log_d": w.log_d }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

struct Loaded {
    network: Hypergraph,
    barriers: Option<BarrierTable>,
    model: IlpModel,
}

fn load_model(m: &ModelArgs, rec: &mut Recorder) -> Result<Loaded, CliError> {
    let h = load_network(rec, &m.network)?;
    let q_text = rec.read(&m.query)?;
    let ctx = m.query.display().to_string();
    let mut q = PathwayQuery::from_json(&q_text).map_err(|e| input_err(&ctx)(e.to_string()))?;
    if let Some(cap) = m.flow_cap {
        if cap == 0 {
            return Err(CliError::Usage("--flow-cap must be positive".into()));
        }
        q.flow_cap = cap;
    }
    let th = thermo(m.thermo.temperature_k)?;
    let barriers = match &m.barriers {
        Some(path) => Some(load_table(rec, path, &h)?),
        None => None,
    };
    let weights = match (&barriers, q.objective) {
        (Some(t), _) => objective_coefficients(t, &th, &h).map_err(|e| CliError::Input(e.to_string()))?,
        (None, QueryObjective::MaxOutflow) => WeightModel {
            log_d: 0.0,
            rt: th.rt(),
            coeff: (0..h.edge_count()).map(|i| (EdgeId(i), 0.0)).collect(),
        },
        (None, QueryObjective::MinEnergy) => {
            return Err(CliError::Usage("energy queries need --barriers".into()));
        }
    };
    let model = build_model(&h, &weights, &q).map_err(|e| input_err(&ctx)(e.to_string()))?;
    Ok(Loaded { network: h, barriers, model })
}

fn solve_err(e: SolveError) -> CliError {
    match e {
        SolveError::NodeLimit(_) | SolveError::InstanceTooLarge(_) | SolveError::Numerical => {
            CliError::Limit(e.to_string())
        }
    }
}

fn query(a: &QueryArgs, rec: &mut Recorder) -> Result<Value, CliError> {
    let loaded = load_model(&a.model, rec)?;
    if a.relax {
        let lp = relax(&loaded.model);
        let sol = solve_relaxation(&lp);
        let values = relaxed_flow(&lp, &sol);
        let pick = |f: fn(&FlowKey) -> Option<usize>| -> BTreeMap<String, f64> {
            values.iter().filter_map(|(k, v)| f(k).map(|id| (id.to_string(), *v))).collect()
        };
        let optimal = sol.status == hyperpath::solve::LpStatus::Optimal;
        let doc = json!({
            "status": sol.status.as_str(),
            "objective": optimal.then_some(sol.objective),
            "flow": pick(|k| match k { FlowKey::Edge(e) => Some(e.0), _ => None }),
            "inflow": pick(|k| match k { FlowKey::Inflow(v) => Some(v.0), _ => None }),
            "outflow": pick(|k| match k { FlowKey::Outflow(v) => Some(v.0), _ => None }),
        });
        rec.write(&a.out, &pretty(&doc))?;
        println!("relaxation {}: objective {}", sol.status.as_str(), sol.objective);
        return Ok(json!({ "status": sol.status.as_str(), "objective": optimal.then_some(sol.objective) }));
    }
    if a.k == 0 {
        return Err(CliError::Usage("-k must be at least 1".into()));
    }
    let options = SolveOptions { node_limit: a.node_limit };
    let ranked = enumerate(&loaded.model, a.k, &options).map_err(solve_err)?;
    let doc = if ranked.solutions.is_empty() {
        let mut entry = solution_to_json(&IlpSolution::infeasible());
        entry["rank"] = json!(1);
        entry["cuts_before"] = json!([]);
        json!([entry])
    } else {
        ranked_to_json(&ranked)
    };
    rec.write(&a.out, &pretty(&doc))?;
    if let Some(dir) = &a.dot_dir {
        for (i, (sol, _)) in ranked.solutions.iter().enumerate() {
            let path = dir.join(format!("solution-{}.dot", i + 1));
            rec.write(&path, &to_dot(&loaded.network, Some(&sol.flow)))?;
        }
    }
    if let Some(path) = &a.profile {
        let Some(table) = &loaded.barriers else {
            return Err(CliError::Usage("--profile needs --barriers".into()));
        };
        let mut csv = profile::HEADER.to_string();
        for (i, (sol, _)) in ranked.solutions.iter().enumerate() {
            profile::append_rows(&mut csv, i + 1, &loaded.network, &sol.flow, table);
        }
        rec.write(path, &csv)?;
    }
    if ranked.solutions.is_empty() {
        println!("infeasible");
    }
    for (i, (sol, sup)) in ranked.solutions.iter().enumerate() {
        let ids: Vec<String> = sup.iter().map(|e| e.0.to_string()).collect();
        println!("#{} objective {} support [{}]", i + 1, sol.objective, ids.join(", "));
    }
    Ok(json!({
        "solutions": ranked.solutions.len(),
        "objectives": ranked.solutions.iter().map(|(s, _)| s.objective).collect::<Vec<_>>(),
    }))
}

fn export_lp(a: &ExportLpArgs, rec: &mut Recorder) -> Result<Value, CliError> {
    let loaded = load_model(&a.model, rec)?;
    let p = &loaded.model.program;
    rec.write(&a.out, &export_lp_text(&loaded.model))?;
    Ok(json!({ "variables": p.variables.len(), "constraints": p.rows.len() }))
}

/// Rebuilds a flow from one entry of a solutions file.
fn flow_from_entry(entry: &Value) -> Result<Hyperflow, String> {
    let mut flow = Hyperflow::new();
    let sections: [(&str, fn(usize) -> FlowKey); 3] = [
        ("flow", |i| FlowKey::Edge(EdgeId(i))),
        ("inflow", |i| FlowKey::Inflow(VertexId(i))),
        ("outflow", |i| FlowKey::Outflow(VertexId(i))),
    ];
    for (name, key) in sections {
        let Some(map) = entry.get(name).and_then(Value::as_object) else {
            continue;
        };
        for (id, n) in map {
            let id: usize = id.parse().map_err(|_| format!("bad id `{id}` in `{name}`"))?;
            let n = n.as_u64().ok_or_else(|| format!("non-integer count for `{name}.{id}`"))?;
            flow.set(key(id), n);
        }
    }
    Ok(flow)
}

fn export_dot(a: &ExportDotArgs, rec: &mut Recorder) -> Result<Value, CliError> {
    let h = load_network(rec, &a.network)?;
    let flow = match &a.solutions {
        Some(path) => {
            let text = rec.read(path)?;
            let ctx = path.display().to_string();
            let doc: Value = serde_json::from_str(&text).map_err(|e| input_err(&ctx)(e.to_string()))?;
            let entry = doc
                .as_array()
                .and_then(|list| list.iter().find(|e| e.get("rank").and_then(Value::as_u64) == Some(a.rank as u64)))
                .ok_or_else(|| CliError::Input(format!("{ctx}: no solution with rank {}", a.rank)))?;
            let flow = flow_from_entry(entry).map_err(input_err(&ctx))?;
            for (e, _) in flow.edge_flows() {
                if e.0 >= h.edge_count() {
                    return Err(CliError::Input(format!("{ctx}: edge {e} is not in the network")));
                }
            }
            Some(flow)
        }
        None => None,
    };
    rec.write(&a.out, &to_dot(&h, flow.as_ref()))?;
    Ok(json!({ "highlighted_rank": flow.as_ref().map(|_| a.rank) }))
}
