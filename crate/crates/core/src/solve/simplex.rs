//! Dense two-phase tableau simplex with implicit variable bounds.

use crate::pathopt::{LinearProgram, ObjectiveSense, RowSense};

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-9;
/// Consecutive degenerate pivots tolerated under Dantzig pricing before
/// switching to Bland's rule for the rest of the solve.
const DEGENERATE_LIMIT: usize = 50;
const MAX_PIVOTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    /// Pivoting broke down or the final point failed verification.
    NumericalFailure,
}

impl LpStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
            LpStatus::NumericalFailure => "numerical_failure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// One value per program variable; empty unless optimal.
    pub values: Vec<f64>,
    pub objective: f64,
}

impl LpSolution {
    fn failed(status: LpStatus) -> Self {
        LpSolution { status, values: Vec::new(), objective: f64::NAN }
    }
}

/// Solves `lp` ignoring integrality.
pub fn simplex_solve(lp: &LinearProgram) -> LpSolution {
    let lower: Vec<f64> = lp.variables.iter().map(|v| v.lower).collect();
    let upper: Vec<f64> = lp.variables.iter().map(|v| v.upper).collect();
    solve_with_bounds(lp, &lower, &upper)
}

/// Tableau over columns with optional upper bounds. Non-basic columns sit at
/// zero or at their upper bound; `value` holds the basic variables' levels
/// directly rather than a transformed right-hand side.
struct Tableau {
    rows: usize,
    width: usize,
    /// `rows + 1` rows of `width` entries; the last row holds reduced costs.
    data: Vec<f64>,
    basis: Vec<usize>,
    value: Vec<f64>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width;
        let p = self.data[r * w + c];
        for j in 0..w {
            self.data[r * w + j] /= p;
        }
        self.data[r * w + c] = 1.0;
        let (before, rest) = self.data.split_at_mut(r * w);
        let (pivot_row, after) = rest.split_at_mut(w);
        let nonzero: Vec<(usize, f64)> = pivot_row
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != 0.0)
            .map(|(j, &y)| (j, y))
            .collect();
        let eliminate = |row: &mut [f64]| {
            let factor = row[c];
            if factor != 0.0 {
                for &(j, y) in &nonzero {
                    row[j] -= factor * y;
                }
                row[c] = 0.0;
            }
        };
        before.chunks_mut(w).for_each(eliminate);
        after.chunks_mut(w).for_each(eliminate);
        self.basis[r] = c;
    }

    /// Resets the cost row to `cost` priced against the current basis.
    fn price(&mut self, cost: &[f64]) {
        let (m, w) = (self.rows, self.width);
        self.data[m * w..].copy_from_slice(cost);
        for i in 0..m {
            let cb = cost[self.basis[i]];
            if cb != 0.0 {
                for j in 0..w {
                    self.data[m * w + j] -= cb * self.data[i * w + j];
                }
            }
        }
    }

    fn is_basic(&self) -> Vec<bool> {
        let mut basic = vec![false; self.width];
        for &b in &self.basis {
            basic[b] = true;
        }
        basic
    }

    /// Minimizes the priced cost row over columns `< allowed`.
    fn optimize(&mut self, allowed: usize) -> Result<(), LpStatus> {
        let (m, w) = (self.rows, self.width);
        let mut bland = false;
        let mut degenerate = 0;
        let mut basic = self.is_basic();
        for _ in 0..MAX_PIVOTS {
            // A column improves the objective when moving off its bound:
            // up from zero with d < 0, down from its upper bound with d > 0.
            let gain = |j: usize, d: f64| -> f64 {
                if basic[j] {
                    0.0
                } else if self.at_upper[j] {
                    d
                } else {
                    -d
                }
            };
            let cost = &self.data[m * w..m * w + allowed];
            let entering = if bland {
                (0..allowed).find(|&j| gain(j, cost[j]) > PIVOT_TOL)
            } else {
                (0..allowed)
                    .map(|j| (j, gain(j, cost[j])))
                    .filter(|&(_, g)| g > PIVOT_TOL)
                    .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
                    .map(|(j, _)| j)
            };
            let Some(c) = entering else {
                return Ok(());
            };
            // dir = +1 raises the entering column, -1 lowers it.
            let dir = if self.at_upper[c] { -1.0 } else { 1.0 };
            let mut step = self.upper[c];
            let mut leave: Option<(usize, bool)> = None;
            for i in 0..m {
                let rate = dir * self.at(i, c);
                let (limit, to_upper) = if rate > PIVOT_TOL {
                    (self.value[i] / rate, false)
                } else if rate < -PIVOT_TOL && self.upper[self.basis[i]].is_finite() {
                    ((self.upper[self.basis[i]] - self.value[i]) / -rate, true)
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                let better = match leave {
                    None => limit < step - 1e-12 || (limit <= step + 1e-12 && !step.is_finite()),
                    Some((r, _)) => {
                        limit < step - 1e-12 || (limit <= step + 1e-12 && self.basis[i] < self.basis[r])
                    }
                };
                if better {
                    step = limit;
                    leave = Some((i, to_upper));
                }
            }
            if !step.is_finite() {
                return Err(LpStatus::Unbounded);
            }
            if step <= PIVOT_TOL {
                degenerate += 1;
                if degenerate > DEGENERATE_LIMIT {
                    bland = true;
                }
            } else {
                degenerate = 0;
            }
            for i in 0..m {
                let a = self.at(i, c);
                if a != 0.0 {
                    self.value[i] -= dir * a * step;
                }
            }
            let entering_value = if self.at_upper[c] { self.upper[c] - step } else { step };
            match leave {
                None => self.at_upper[c] = !self.at_upper[c],
                Some((r, to_upper)) => {
                    let out = self.basis[r];
                    self.at_upper[out] = to_upper;
                    self.at_upper[c] = false;
                    basic[out] = false;
                    basic[c] = true;
                    self.pivot(r, c);
                    self.value[r] = entering_value;
                }
            }
        }
        Err(LpStatus::NumericalFailure)
    }

    /// Level of column `j`.
    fn level(&self, j: usize, basic_row: &[Option<usize>]) -> f64 {
        match basic_row[j] {
            Some(i) => self.value[i],
            None if self.at_upper[j] => self.upper[j],
            None => 0.0,
        }
    }
}

/// Solves `lp` with the variable bounds replaced by `lower`/`upper`.
pub(crate) fn solve_with_bounds(lp: &LinearProgram, lower: &[f64], upper: &[f64]) -> LpSolution {
    let n = lp.variables.len();
    if (0..n).any(|j| lower[j] > upper[j] + FEAS_TOL || !lower[j].is_finite()) {
        return LpSolution::failed(LpStatus::Infeasible);
    }
    // Structural columns: non-fixed variables, shifted to y = x - lower >= 0.
    let mut col_of = vec![usize::MAX; n];
    let mut var_of = Vec::new();
    for j in 0..n {
        if upper[j] > lower[j] {
            col_of[j] = var_of.len();
            var_of.push(j);
        }
    }
    let ns = var_of.len();
    // (coefficients over structural columns, sense, rhs)
    let mut cons: Vec<(Vec<(usize, f64)>, RowSense, f64)> = Vec::new();
    for row in &lp.rows {
        let mut rhs = row.rhs;
        let mut terms = Vec::new();
        for &(j, a) in &row.terms {
            rhs -= a * lower[j];
            if col_of[j] != usize::MAX {
                terms.push((col_of[j], a));
            }
        }
        if terms.is_empty() {
            let ok = match row.sense {
                RowSense::Le => 0.0 <= rhs + FEAS_TOL,
                RowSense::Ge => 0.0 >= rhs - FEAS_TOL,
                RowSense::Eq => rhs.abs() <= FEAS_TOL,
            };
            if !ok {
                return LpSolution::failed(LpStatus::Infeasible);
            }
            continue;
        }
        cons.push((terms, row.sense, rhs));
    }
    for con in &mut cons {
        if con.2 < 0.0 {
            con.0.iter_mut().for_each(|t| t.1 = -t.1);
            con.2 = -con.2;
            con.1 = match con.1 {
                RowSense::Le => RowSense::Ge,
                RowSense::Ge => RowSense::Le,
                RowSense::Eq => RowSense::Eq,
            };
        }
    }
    let m = cons.len();
    let slacks = cons.iter().filter(|c| c.1 != RowSense::Eq).count();
    let artificials = cons.iter().filter(|c| c.1 != RowSense::Le).count();
    let first_art = ns + slacks;
    let width = first_art + artificials;
    let mut bounds = vec![f64::INFINITY; width];
    for (c, &j) in var_of.iter().enumerate() {
        bounds[c] = upper[j] - lower[j];
    }
    let mut t = Tableau {
        rows: m,
        width,
        data: vec![0.0; (m + 1) * width],
        basis: vec![0; m],
        value: vec![0.0; m],
        upper: bounds,
        at_upper: vec![false; width],
    };
    let (mut s, mut a) = (ns, first_art);
    for (i, (terms, sense, rhs)) in cons.iter().enumerate() {
        for &(c, v) in terms {
            t.data[i * width + c] += v;
        }
        t.value[i] = *rhs;
        match sense {
            RowSense::Le => {
                t.data[i * width + s] = 1.0;
                t.basis[i] = s;
                s += 1;
            }
            RowSense::Ge => {
                t.data[i * width + s] = -1.0;
                s += 1;
                t.data[i * width + a] = 1.0;
                t.basis[i] = a;
                a += 1;
            }
            RowSense::Eq => {
                t.data[i * width + a] = 1.0;
                t.basis[i] = a;
                a += 1;
            }
        }
    }

    if artificials > 0 {
        let mut cost = vec![0.0; width];
        cost[first_art..].iter_mut().for_each(|c| *c = 1.0);
        t.price(&cost);
        if let Err(status) = t.optimize(width) {
            return LpSolution::failed(status);
        }
        let infeasibility: f64 = (0..m).filter(|&i| t.basis[i] >= first_art).map(|i| t.value[i]).sum();
        let scale = cons.iter().map(|c| c.2).fold(1.0, f64::max);
        if infeasibility > FEAS_TOL * scale {
            return LpSolution::failed(LpStatus::Infeasible);
        }
        // Move remaining zero-level artificials out of the basis where possible.
        for i in 0..m {
            if t.basis[i] >= first_art {
                let basic = t.is_basic();
                if let Some(c) = (0..first_art).find(|&c| !basic[c] && t.at(i, c).abs() > PIVOT_TOL) {
                    let level = if t.at_upper[c] { t.upper[c] } else { 0.0 };
                    t.at_upper[c] = false;
                    t.pivot(i, c);
                    t.value[i] = level;
                }
            }
        }
    }

    let flip = if lp.sense == ObjectiveSense::Maximize { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; width];
    for (c, &j) in var_of.iter().enumerate() {
        cost[c] = flip * lp.objective[j];
    }
    t.price(&cost);
    if let Err(status) = t.optimize(first_art) {
        return LpSolution::failed(status);
    }

    let mut basic_row = vec![None; width];
    for (i, &b) in t.basis.iter().enumerate() {
        basic_row[b] = Some(i);
    }
    let mut values: Vec<f64> = lower.to_vec();
    for (c, &j) in var_of.iter().enumerate() {
        values[j] += t.level(c, &basic_row);
    }
    for j in 0..n {
        values[j] = values[j].clamp(lower[j], upper[j]);
    }
    let verified = lp.rows.iter().all(|r| r.satisfied(&values, FEAS_TOL));
    if !verified {
        return LpSolution::failed(LpStatus::NumericalFailure);
    }
    LpSolution { status: LpStatus::Optimal, objective: lp.objective_value(&values), values }
}
