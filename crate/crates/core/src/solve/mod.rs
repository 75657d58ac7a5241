//! Exact solvers for pathway models: LP relaxation by simplex, depth-first
//! branch-and-bound, ranked enumeration under support cuts, and an
//! exhaustive oracle for small instances.

mod brute;
mod json;
mod simplex;

use std::cmp::Ordering;
use std::collections::BTreeMap;

pub use brute::{brute_force, BRUTE_FORCE_LIMIT};
pub use json::{ranked_to_json, solution_to_json};
pub use simplex::{simplex_solve, LpSolution, LpStatus};

use crate::netcore::{support, EdgeId, FlowKey, Hyperflow, Support};
use crate::pathopt::{add_cut, IlpModel, LpModel, ObjectiveSense, VarKind, VarRole};

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;
/// Integrality snap and incumbent comparison tolerance.
pub const INT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("branch-and-bound node limit of {0} reached")]
    NodeLimit(u64),
    #[error("brute force needs {0} assignments, above the limit")]
    InstanceTooLarge(u128),
    #[error("LP relaxation failed numerically")]
    Numerical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub node_limit: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { node_limit: DEFAULT_NODE_LIMIT }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IlpStatus {
    Optimal,
    Infeasible,
}

impl IlpStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            IlpStatus::Optimal => "optimal",
            IlpStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlpSolution {
    pub status: IlpStatus,
    pub flow: Hyperflow,
    pub indicator: BTreeMap<EdgeId, u8>,
    /// Objective in model units: J/mol for energy queries, molecules for
    /// outflow maximization.
    pub objective: f64,
    /// Integral values per model variable; empty when infeasible.
    pub values: Vec<f64>,
}

impl IlpSolution {
    pub fn infeasible() -> Self {
        IlpSolution {
            status: IlpStatus::Infeasible,
            flow: Hyperflow::new(),
            indicator: BTreeMap::new(),
            objective: f64::NAN,
            values: Vec::new(),
        }
    }

    pub(crate) fn from_values(model: &IlpModel, values: Vec<f64>) -> Self {
        let mut flow = Hyperflow::new();
        let mut indicator = BTreeMap::new();
        for (role, &x) in model.roles.iter().zip(&values) {
            match *role {
                VarRole::Flow(key) => flow.set(key, x.round() as u64),
                VarRole::Indicator(e) => {
                    indicator.insert(e, x.round() as u8);
                }
            }
        }
        IlpSolution {
            status: IlpStatus::Optimal,
            flow,
            indicator,
            objective: model.program.objective_value(&values),
            values,
        }
    }

    pub fn support(&self) -> Support {
        support(&self.flow)
    }
}

/// Ordering of candidate solutions: better objective first, then the
/// lexicographically smaller support.
pub(crate) fn compare_candidates(sense: ObjectiveSense, a: (f64, &Support), b: (f64, &Support)) -> Ordering {
    let diff = match sense {
        ObjectiveSense::Minimize => a.0 - b.0,
        ObjectiveSense::Maximize => b.0 - a.0,
    };
    if diff < -INT_TOL {
        Ordering::Less
    } else if diff > INT_TOL {
        Ordering::Greater
    } else {
        a.1.iter().cmp(b.1.iter())
    }
}

/// Solves the relaxation of a pathway model.
pub fn solve_relaxation(lp: &LpModel) -> LpSolution {
    simplex_solve(&lp.program)
}

/// Relaxed flow values by flow key, for reporting.
pub fn relaxed_flow(lp: &LpModel, sol: &LpSolution) -> BTreeMap<FlowKey, f64> {
    lp.roles
        .iter()
        .zip(&sol.values)
        .filter_map(|(r, &x)| match r {
            VarRole::Flow(k) => Some((*k, x)),
            VarRole::Indicator(_) => None,
        })
        .collect()
}

pub fn branch_and_bound(model: &IlpModel) -> Result<IlpSolution, SolveError> {
    branch_and_bound_with(model, &SolveOptions::default())
}

/// Depth-first branch-and-bound on the LP relaxation of the full model
/// (indicators and linking rows included). Branches on the most fractional
/// integer variable, smallest index on ties, lower branch first. Nodes are
/// pruned when their bound is worse than the incumbent by more than
/// [`INT_TOL`]; equal-objective incumbents are replaced by ones with a
/// lexicographically smaller support.
pub fn branch_and_bound_with(model: &IlpModel, options: &SolveOptions) -> Result<IlpSolution, SolveError> {
    let p = &model.program;
    let integer: Vec<bool> = p.variables.iter().map(|v| v.kind != VarKind::Continuous).collect();
    let lower: Vec<f64> = p.variables.iter().map(|v| v.lower.ceil()).collect();
    let upper: Vec<f64> = p.variables.iter().map(|v| v.upper.floor()).collect();
    let mut stack = vec![(lower, upper)];
    let mut best: Option<(f64, Support, Vec<f64>)> = None;
    let mut nodes = 0u64;
    while let Some((lo, hi)) = stack.pop() {
        nodes += 1;
        if nodes > options.node_limit {
            return Err(SolveError::NodeLimit(options.node_limit));
        }
        let lp = simplex::solve_with_bounds(p, &lo, &hi);
        match lp.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded | LpStatus::NumericalFailure => return Err(SolveError::Numerical),
        }
        if let Some((inc, _, _)) = &best {
            let worse = match p.sense {
                ObjectiveSense::Minimize => lp.objective > inc + INT_TOL,
                ObjectiveSense::Maximize => lp.objective < inc - INT_TOL,
            };
            if worse {
                continue;
            }
        }
        let branch = (0..lp.values.len())
            .filter(|&j| integer[j])
            .map(|j| {
                let x = lp.values[j];
                (j, x, (x - x.floor()).min(x.ceil() - x))
            })
            .filter(|t| t.2 > INT_TOL)
            .max_by(|a, b| a.2.total_cmp(&b.2).then(b.0.cmp(&a.0)));
        match branch {
            Some((j, x, _)) => {
                let (mut up_lo, mut down_hi) = (lo.clone(), hi.clone());
                up_lo[j] = x.ceil();
                down_hi[j] = x.floor();
                stack.push((up_lo, hi));
                stack.push((lo, down_hi));
            }
            None => {
                let values: Vec<f64> = lp
                    .values
                    .iter()
                    .zip(&integer)
                    .map(|(&x, &int)| if int { x.round() } else { x })
                    .collect();
                if !p.is_feasible(&values, 1e-9) {
                    return Err(SolveError::Numerical);
                }
                let sol = IlpSolution::from_values(model, values.clone());
                let candidate = (sol.objective, sol.support());
                let improves = best.as_ref().is_none_or(|(obj, sup, _)| {
                    compare_candidates(p.sense, (candidate.0, &candidate.1), (*obj, sup)) == Ordering::Less
                });
                if improves {
                    best = Some((candidate.0, candidate.1, values));
                }
            }
        }
    }
    log::debug!("branch-and-bound explored {nodes} nodes");
    Ok(match best {
        Some((_, _, values)) => IlpSolution::from_values(model, values),
        None => IlpSolution::infeasible(),
    })
}

/// Solutions in the order found, with the cuts added after each.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPathways {
    pub solutions: Vec<(IlpSolution, Support)>,
    pub cuts: Vec<Support>,
}

/// Solves, cuts the support, and repeats up to `k` times. Stops early when
/// the model turns infeasible, or after a solution with empty support since
/// that cannot be cut.
pub fn enumerate(model: &IlpModel, k: usize, options: &SolveOptions) -> Result<RankedPathways, SolveError> {
    let mut current = model.clone();
    let mut ranked = RankedPathways { solutions: Vec::new(), cuts: Vec::new() };
    for _ in 0..k {
        let sol = branch_and_bound_with(&current, options)?;
        if sol.status == IlpStatus::Infeasible {
            break;
        }
        let sup = sol.support();
        ranked.solutions.push((sol, sup.clone()));
        if sup.is_empty() {
            break;
        }
        current = add_cut(&current, &sup).expect("support edges come from the model");
        ranked.cuts.push(sup);
    }
    Ok(ranked)
}
