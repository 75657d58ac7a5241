use std::cmp::Ordering;

use super::{compare_candidates, IlpSolution, SolveError};
use crate::netcore::{FlowKey, Support};
use crate::pathopt::{IlpModel, VarRole};

/// Largest number of flow assignments the exhaustive scan accepts.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

/// Exhaustive oracle: tries every integer value of every flow variable within
/// its bounds, derives each indicator as `z_e = [f_e >= 1]`, and checks all
/// rows exactly. Rows are tested as soon as their variables are assigned.
/// Ties resolve to the lexicographically smallest support.
pub fn brute_force(model: &IlpModel) -> Result<IlpSolution, SolveError> {
    let p = &model.program;
    let n = p.variables.len();
    let flows: Vec<usize> = (0..n).filter(|&j| matches!(model.roles[j], VarRole::Flow(_))).collect();
    let assignments = flows.iter().try_fold(1u128, |acc, &j| {
        let v = &p.variables[j];
        let width = (v.upper.floor() - v.lower.ceil() + 1.0).max(0.0) as u128;
        acc.checked_mul(width).filter(|&a| a <= BRUTE_FORCE_LIMIT).ok_or(acc.saturating_mul(width))
    });
    if let Err(needed) = assignments {
        return Err(SolveError::InstanceTooLarge(needed));
    }

    // Indicator of each edge flow variable, and the step at which each
    // variable becomes known.
    let mut indicator_of = vec![None; n];
    let mut step_of = vec![0usize; n];
    for (step, &j) in flows.iter().enumerate() {
        step_of[j] = step;
        if let VarRole::Flow(FlowKey::Edge(e)) = model.roles[j] {
            indicator_of[j] = model.indicator_var(e);
        }
    }
    for j in 0..n {
        if let VarRole::Indicator(e) = model.roles[j] {
            let f = model.flow_var(FlowKey::Edge(e)).expect("every indicator has a flow");
            step_of[j] = step_of[f];
        }
    }
    let mut rows_at: Vec<Vec<usize>> = vec![Vec::new(); flows.len().max(1)];
    for (i, r) in p.rows.iter().enumerate() {
        let step = r.terms.iter().map(|&(j, _)| step_of[j]).max().unwrap_or(0);
        rows_at[step].push(i);
    }

    let mut scan = Scan { model, flows: &flows, indicator_of, rows_at, x: vec![0.0; n], best: None };
    if flows.is_empty() {
        if scan.rows_ok(0) {
            scan.consider();
        }
    } else {
        scan.descend(0);
    }
    Ok(match scan.best {
        Some((_, _, values)) => IlpSolution::from_values(model, values),
        None => IlpSolution::infeasible(),
    })
}

struct Scan<'a> {
    model: &'a IlpModel,
    flows: &'a [usize],
    indicator_of: Vec<Option<usize>>,
    rows_at: Vec<Vec<usize>>,
    x: Vec<f64>,
    best: Option<(f64, Support, Vec<f64>)>,
}

impl Scan<'_> {
    fn rows_ok(&self, step: usize) -> bool {
        let p = &self.model.program;
        self.rows_at[step].iter().all(|&i| p.rows[i].satisfied(&self.x, 1e-9))
    }

    fn descend(&mut self, step: usize) {
        let j = self.flows[step];
        let v = &self.model.program.variables[j];
        let (lo, hi) = (v.lower.ceil() as i64, v.upper.floor() as i64);
        for value in lo..=hi {
            self.x[j] = value as f64;
            if let Some(z) = self.indicator_of[j] {
                let zv = if value >= 1 { 1.0 } else { 0.0 };
                let zvar = &self.model.program.variables[z];
                if zv < zvar.lower || zv > zvar.upper {
                    continue;
                }
                self.x[z] = zv;
            }
            if !self.rows_ok(step) {
                continue;
            }
            if step + 1 == self.flows.len() {
                self.consider();
            } else {
                self.descend(step + 1);
            }
        }
        self.x[j] = 0.0;
    }

    fn consider(&mut self) {
        let objective = self.model.program.objective_value(&self.x);
        let sup: Support = self
            .model
            .roles
            .iter()
            .zip(&self.x)
            .filter_map(|(r, &x)| match r {
                VarRole::Flow(FlowKey::Edge(e)) if x >= 1.0 => Some(*e),
                _ => None,
            })
            .collect();
        let better = self.best.as_ref().is_none_or(|(obj, s, _)| {
            compare_candidates(self.model.program.sense, (objective, &sup), (*obj, s)) == Ordering::Less
        });
        if better {
            self.best = Some((objective, sup, self.x.clone()));
        }
    }
}
