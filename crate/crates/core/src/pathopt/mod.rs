//! Pathway queries as integer linear programs: flow conservation, big-M
//! indicator linking, query bounds and support-elimination cuts.

mod lp_text;
mod query;

use std::collections::BTreeMap;

pub use lp_text::export_lp_text;
pub use query::{FlowBounds, PathwayQuery, QueryObjective, DEFAULT_FLOW_CAP};

use crate::kinetics::WeightModel;
use crate::netcore::{EdgeId, FlowKey, Hypergraph, Support, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid query: {0}")]
    Query(String),
    #[error("query references unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("no objective weight for edge {0}")]
    MissingWeight(EdgeId),
    #[error("a cut needs a non-empty support")]
    EmptyCut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Integer,
    Binary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowSense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Conservation(VertexId),
    Linking(EdgeId),
    Query,
    Cut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub kind: RowKind,
    /// `(variable index, coefficient)`, variable indices ascending.
    pub terms: Vec<(usize, f64)>,
    pub sense: RowSense,
    pub rhs: f64,
}

impl Row {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(j, a)| a * x[j]).sum()
    }

    pub fn satisfied(&self, x: &[f64], tol: f64) -> bool {
        let lhs = self.activity(x);
        match self.sense {
            RowSense::Le => lhs <= self.rhs + tol,
            RowSense::Ge => lhs >= self.rhs - tol,
            RowSense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveSense {
    Minimize,
    Maximize,
}

/// A bounded linear program; integrality is carried by [`VarKind`].
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: ObjectiveSense,
    pub objective: Vec<f64>,
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
}

impl LinearProgram {
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Bounds and rows within `tol`.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.variables.len()
            && self.variables.iter().zip(x).all(|(v, &xi)| xi >= v.lower - tol && xi <= v.upper + tol)
            && self.rows.iter().all(|r| r.satisfied(x, tol))
    }
}

/// What a model variable stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarRole {
    Flow(FlowKey),
    Indicator(EdgeId),
}

/// The pathway ILP. Variables are ordered `f_e` by edge, `in_v` and `out_v`
/// by vertex, then `z_e` by edge.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub program: LinearProgram,
    pub roles: Vec<VarRole>,
    pub flow_cap: u32,
    cuts: Vec<Support>,
}

/// The continuous relaxation: flow variables only, no indicators or cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct LpModel {
    pub program: LinearProgram,
    pub roles: Vec<VarRole>,
}

impl IlpModel {
    pub fn flow_var(&self, key: FlowKey) -> Option<usize> {
        self.roles.iter().position(|r| *r == VarRole::Flow(key))
    }

    pub fn indicator_var(&self, e: EdgeId) -> Option<usize> {
        self.roles.iter().position(|r| *r == VarRole::Indicator(e))
    }

    pub fn cuts(&self) -> &[Support] {
        &self.cuts
    }

    pub fn count_rows(&self, pred: impl Fn(RowKind) -> bool) -> usize {
        self.program.rows.iter().filter(|r| pred(r.kind)).count()
    }
}

fn var_name(role: VarRole) -> String {
    match role {
        VarRole::Flow(FlowKey::Edge(e)) => format!("f_{}", e.0),
        VarRole::Flow(FlowKey::Inflow(v)) => format!("in_{}", v.0),
        VarRole::Flow(FlowKey::Outflow(v)) => format!("out_{}", v.0),
        VarRole::Indicator(e) => format!("z_{}", e.0),
    }
}

fn sorted_terms(mut terms: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    terms.sort_by_key(|t| t.0);
    let mut merged: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    for (j, a) in terms {
        match merged.last_mut() {
            Some(last) if last.0 == j => last.1 += a,
            _ => merged.push((j, a)),
        }
    }
    merged.retain(|t| t.1 != 0.0);
    merged
}

/// Builds the ILP for `q` over `h` with per-edge costs from `weights`.
pub fn build_model(h: &Hypergraph, weights: &WeightModel, q: &PathwayQuery) -> Result<IlpModel, ModelError> {
    q.validate(h)?;
    let cap = f64::from(q.flow_cap);
    let mut roles = Vec::new();
    roles.extend(h.edges().iter().map(|e| VarRole::Flow(FlowKey::Edge(e.id))));
    roles.extend(q.sources.keys().map(|&v| VarRole::Flow(FlowKey::Inflow(v))));
    let outs: std::collections::BTreeSet<VertexId> = q.targets.keys().chain(q.byproducts.keys()).copied().collect();
    roles.extend(outs.iter().map(|&v| VarRole::Flow(FlowKey::Outflow(v))));
    roles.extend(h.edges().iter().map(|e| VarRole::Indicator(e.id)));
    let index: BTreeMap<VarRole, usize> = roles.iter().enumerate().map(|(j, r)| (*r, j)).collect();
    let position = |role: VarRole| index[&role];

    let mut variables = Vec::with_capacity(roles.len());
    let mut objective = vec![0.0; roles.len()];
    for (j, &role) in roles.iter().enumerate() {
        let (kind, upper) = match role {
            VarRole::Flow(FlowKey::Edge(e)) if q.forbidden_edges.contains(&e) => (VarKind::Integer, 0.0),
            VarRole::Flow(_) => (VarKind::Integer, cap),
            VarRole::Indicator(e) if q.forbidden_edges.contains(&e) => (VarKind::Binary, 0.0),
            VarRole::Indicator(_) => (VarKind::Binary, 1.0),
        };
        variables.push(Variable { name: var_name(role), kind, lower: 0.0, upper });
        match (q.objective, role) {
            (QueryObjective::MinEnergy, VarRole::Flow(FlowKey::Edge(e))) => {
                objective[j] = weights.coefficient(e).ok_or(ModelError::MissingWeight(e))?;
            }
            (QueryObjective::MaxOutflow, VarRole::Flow(FlowKey::Outflow(v))) if q.targets.contains_key(&v) => {
                objective[j] = 1.0;
            }
            _ => {}
        }
    }

    let mut rows = Vec::new();
    // Conservation: inflow + produced = outflow + consumed.
    let mut per_vertex: Vec<Vec<(usize, f64)>> = vec![Vec::new(); h.vertex_count()];
    for e in h.edges() {
        let j = position(VarRole::Flow(FlowKey::Edge(e.id)));
        for (v, &m) in &e.products {
            per_vertex[v.0].push((j, f64::from(m)));
        }
        for (v, &m) in &e.reactants {
            per_vertex[v.0].push((j, -f64::from(m)));
        }
    }
    for &v in q.sources.keys() {
        per_vertex[v.0].push((position(VarRole::Flow(FlowKey::Inflow(v))), 1.0));
    }
    for &v in &outs {
        per_vertex[v.0].push((position(VarRole::Flow(FlowKey::Outflow(v))), -1.0));
    }
    for (i, terms) in per_vertex.into_iter().enumerate() {
        rows.push(Row {
            name: format!("cons_v{i}"),
            kind: RowKind::Conservation(VertexId(i)),
            terms: sorted_terms(terms),
            sense: RowSense::Eq,
            rhs: 0.0,
        });
    }
    for e in h.edges() {
        let f = position(VarRole::Flow(FlowKey::Edge(e.id)));
        let z = position(VarRole::Indicator(e.id));
        rows.push(Row {
            name: format!("link_up_{}", e.id.0),
            kind: RowKind::Linking(e.id),
            terms: vec![(f, 1.0), (z, -cap)],
            sense: RowSense::Le,
            rhs: 0.0,
        });
        rows.push(Row {
            name: format!("link_lo_{}", e.id.0),
            kind: RowKind::Linking(e.id),
            terms: vec![(f, -1.0), (z, 1.0)],
            sense: RowSense::Le,
            rhs: 0.0,
        });
    }
    let mut bound_rows = |name: String, j: usize, min: u32, max: u32| {
        if min > 0 {
            rows.push(Row {
                name: format!("{name}_min"),
                kind: RowKind::Query,
                terms: vec![(j, 1.0)],
                sense: RowSense::Ge,
                rhs: f64::from(min),
            });
        }
        rows.push(Row {
            name: format!("{name}_max"),
            kind: RowKind::Query,
            terms: vec![(j, 1.0)],
            sense: RowSense::Le,
            rhs: f64::from(max),
        });
    };
    for (&v, b) in &q.sources {
        bound_rows(format!("src_{}", v.0), position(VarRole::Flow(FlowKey::Inflow(v))), b.min, b.max);
    }
    for (&v, b) in &q.targets {
        bound_rows(format!("tgt_{}", v.0), position(VarRole::Flow(FlowKey::Outflow(v))), b.min, b.max);
    }
    for (&v, &max) in &q.byproducts {
        bound_rows(format!("byp_{}", v.0), position(VarRole::Flow(FlowKey::Outflow(v))), 0, max);
    }
    if let Some(total) = q.max_total_inflow {
        let terms = q.sources.keys().map(|&v| (position(VarRole::Flow(FlowKey::Inflow(v))), 1.0)).collect();
        rows.push(Row {
            name: "total_inflow_max".into(),
            kind: RowKind::Query,
            terms: sorted_terms(terms),
            sense: RowSense::Le,
            rhs: f64::from(total),
        });
    }
    let sense = match q.objective {
        QueryObjective::MinEnergy => ObjectiveSense::Minimize,
        QueryObjective::MaxOutflow => ObjectiveSense::Maximize,
    };
    Ok(IlpModel {
        program: LinearProgram { sense, objective, variables, rows },
        roles,
        flow_cap: q.flow_cap,
        cuts: Vec::new(),
    })
}

/// Adds `sum_{e in S} z_e <= |S| - 1`, forbidding every later solution whose
/// support contains `support`.
pub fn add_cut(model: &IlpModel, support: &Support) -> Result<IlpModel, ModelError> {
    if support.is_empty() {
        return Err(ModelError::EmptyCut);
    }
    let mut terms = Vec::with_capacity(support.len());
    for &e in support {
        terms.push((model.indicator_var(e).ok_or(ModelError::UnknownEdge(e))?, 1.0));
    }
    let mut next = model.clone();
    next.program.rows.push(Row {
        name: format!("cut_{}", model.cuts.len()),
        kind: RowKind::Cut,
        terms: sorted_terms(terms),
        sense: RowSense::Le,
        rhs: support.len() as f64 - 1.0,
    });
    next.cuts.push(support.clone());
    Ok(next)
}

/// Drops integrality, indicators, linking rows and cuts.
pub fn relax(model: &IlpModel) -> LpModel {
    let keep: Vec<usize> = (0..model.roles.len())
        .filter(|&j| matches!(model.roles[j], VarRole::Flow(_)))
        .collect();
    let mut new_index = vec![usize::MAX; model.roles.len()];
    for (i, &j) in keep.iter().enumerate() {
        new_index[j] = i;
    }
    let p = &model.program;
    let variables = keep
        .iter()
        .map(|&j| Variable { kind: VarKind::Continuous, ..p.variables[j].clone() })
        .collect();
    let rows = p
        .rows
        .iter()
        .filter(|r| matches!(r.kind, RowKind::Conservation(_) | RowKind::Query))
        .map(|r| Row {
            terms: r.terms.iter().map(|&(j, a)| (new_index[j], a)).collect(),
            ..r.clone()
        })
        .collect();
    LpModel {
        program: LinearProgram {
            sense: p.sense,
            objective: keep.iter().map(|&j| p.objective[j]).collect(),
            variables,
            rows,
        },
        roles: keep.iter().map(|&j| model.roles[j]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::{objective_coefficients, BarrierTable, Thermo};

    fn line() -> (Hypergraph, WeightModel) {
        let mut h = Hypergraph::new();
        let a = h.add_species("A");
        let b = h.add_species("B");
        h.add_reaction_from(&[(a, 1)], &[(b, 1)]).unwrap();
        let t = BarrierTable::from_joules(&h, BTreeMap::from([(EdgeId(0), 1000.0)])).unwrap();
        let w = objective_coefficients(&t, &Thermo::default(), &h).unwrap();
        (h, w)
    }

    fn ab_query() -> PathwayQuery {
        PathwayQuery {
            sources: BTreeMap::from([(VertexId(0), FlowBounds { min: 0, max: 2 })]),
            targets: BTreeMap::from([(VertexId(1), FlowBounds { min: 1, max: 1 })]),
            ..PathwayQuery::default()
        }
    }

    #[test]
    fn single_edge_model_shape() {
        let (h, w) = line();
        let m = build_model(&h, &w, &ab_query()).unwrap();
        let names: Vec<&str> = m.program.variables.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["f_0", "in_0", "out_1", "z_0"]);
        assert_eq!(m.count_rows(|k| matches!(k, RowKind::Conservation(_))), 2);
        assert_eq!(m.count_rows(|k| matches!(k, RowKind::Linking(_))), 2);
        assert_eq!(m.program.variables[3].kind, VarKind::Binary);
        assert_eq!(m.program.variables[0].upper, 10.0);
        // f=1, in=1, out=1, z=1 is feasible; z=0 with f=1 is not.
        assert!(m.program.is_feasible(&[1.0, 1.0, 1.0, 1.0], 0.0));
        assert!(!m.program.is_feasible(&[1.0, 1.0, 1.0, 0.0], 0.0));
        assert!(!m.program.is_feasible(&[0.0, 0.0, 0.0, 1.0], 0.0));
        assert!(!m.program.is_feasible(&[0.0, 0.0, 0.0, 0.0], 0.0));
    }

    #[test]
    fn forbidden_edges_are_pinned() {
        let (h, w) = line();
        let mut q = ab_query();
        q.forbidden_edges.insert(EdgeId(0));
        let m = build_model(&h, &w, &q).unwrap();
        assert_eq!(m.program.variables[0].upper, 0.0);
        assert_eq!(m.program.variables[3].upper, 0.0);
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let (h, w) = line();
        let mut q = ab_query();
        q.targets.insert(VertexId(7), FlowBounds { min: 0, max: 1 });
        assert_eq!(build_model(&h, &w, &q), Err(ModelError::UnknownVertex(VertexId(7))));
        let mut q = ab_query();
        q.forbidden_edges.insert(EdgeId(3));
        assert_eq!(build_model(&h, &w, &q), Err(ModelError::UnknownEdge(EdgeId(3))));
        let mut q = ab_query();
        q.sources.insert(VertexId(0), FlowBounds { min: 3, max: 1 });
        assert!(matches!(build_model(&h, &w, &q), Err(ModelError::Query(_))));
    }

    #[test]
    fn cuts_and_relaxation() {
        let (h, w) = line();
        let m = build_model(&h, &w, &ab_query()).unwrap();
        assert_eq!(add_cut(&m, &Support::new()), Err(ModelError::EmptyCut));
        let cut = add_cut(&m, &Support::from([EdgeId(0)])).unwrap();
        assert_eq!(cut.cuts().len(), 1);
        let row = cut.program.rows.last().unwrap();
        assert_eq!((row.terms.clone(), row.rhs), (vec![(3, 1.0)], 0.0));
        let twice = add_cut(&cut, &Support::from([EdgeId(0)])).unwrap();
        assert_eq!(twice.count_rows(|k| k == RowKind::Cut), 2);

        let lp = relax(&twice);
        assert_eq!(lp.program.variables.len(), 3);
        assert!(lp.program.variables.iter().all(|v| v.kind == VarKind::Continuous));
        assert!(lp.program.rows.iter().all(|r| matches!(r.kind, RowKind::Conservation(_) | RowKind::Query)));
        assert!(!lp.program.is_feasible(&[0.5, 0.5, 0.5], 1e-12));
        assert!(lp.program.is_feasible(&[1.0, 1.0, 1.0], 0.0));
    }
}
