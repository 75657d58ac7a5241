//! Energy barriers, Eyring rates, normalized reaction probabilities and the
//! per-edge objective coefficients `c_e = G_e + RT ln D`.
//!
//! Energies are J/mol internally; barrier files use kJ/mol.

use std::collections::BTreeMap;

use crate::netcore::{EdgeId, Hyperflow, Hypergraph};

/// Molar gas constant, J/(mol K).
pub const GAS_CONSTANT: f64 = 8.314462618;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380649e-23;
/// Planck constant, J s.
pub const PLANCK: f64 = 6.62607015e-34;
pub const DEFAULT_TEMPERATURE_K: f64 = 298.15;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KineticsError {
    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),
    #[error("barrier file line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("barrier file line {line}: unknown edge `{id}`")]
    UnknownEdge { line: usize, id: String },
    #[error("barrier file line {line}: edge {edge} listed twice")]
    DuplicateEdge { line: usize, edge: EdgeId },
    #[error("barrier file line {line}: `{value}` is not a finite number")]
    NonNumeric { line: usize, value: String },
    #[error("no barrier given for edge {0}")]
    MissingEdge(EdgeId),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thermo {
    temperature: f64,
}

impl Default for Thermo {
    fn default() -> Self {
        Thermo {
            temperature: DEFAULT_TEMPERATURE_K,
        }
    }
}

impl Thermo {
    pub fn new(temperature: f64) -> Result<Thermo, KineticsError> {
        if temperature.is_finite() && temperature > 0.0 {
            Ok(Thermo { temperature })
        } else {
            Err(KineticsError::InvalidTemperature(temperature))
        }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// `R T` in J/mol.
    pub fn rt(&self) -> f64 {
        GAS_CONSTANT * self.temperature
    }

    /// `k_B T / h` in 1/s.
    pub fn prefactor(&self) -> f64 {
        BOLTZMANN * self.temperature / PLANCK
    }
}

/// Free-energy barrier per edge, J/mol.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BarrierTable {
    barriers: BTreeMap<EdgeId, f64>,
}

impl BarrierTable {
    /// Builds a table from J/mol values, checking it covers exactly the
    /// edges of `h`.
    pub fn from_joules(
        h: &Hypergraph,
        barriers: BTreeMap<EdgeId, f64>,
    ) -> Result<Self, KineticsError> {
        for (&e, &g) in &barriers {
            if e.0 >= h.edge_count() {
                return Err(KineticsError::UnknownEdge {
                    line: 0,
                    id: e.to_string(),
                });
            }
            if !g.is_finite() {
                return Err(KineticsError::NonNumeric {
                    line: 0,
                    value: g.to_string(),
                });
            }
        }
        if let Some(missing) = (0..h.edge_count())
            .map(EdgeId)
            .find(|e| !barriers.contains_key(e))
        {
            return Err(KineticsError::MissingEdge(missing));
        }
        Ok(BarrierTable { barriers })
    }

    pub fn get(&self, e: EdgeId) -> Option<f64> {
        self.barriers.get(&e).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, f64)> + '_ {
        self.barriers.iter().map(|(e, g)| (*e, *g))
    }

    pub fn len(&self) -> usize {
        self.barriers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.barriers.is_empty()
    }
}

fn parse_edge_id(s: &str) -> Option<usize> {
    let s = s.trim();
    s.strip_prefix('e').unwrap_or(s).parse().ok()
}

/// Reads `edge_id,barrier_kj_per_mol` CSV text. Edge ids may be written
/// `3` or `e3`. Negative barriers are accepted with a warning.
pub fn load_barriers(csv_text: &str, h: &Hypergraph) -> Result<BarrierTable, KineticsError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(csv_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| KineticsError::Csv {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| KineticsError::Csv {
                line: 1,
                message: format!("missing column `{name}`"),
            })
    };
    let (id_col, value_col) = (column("edge_id")?, column("barrier_kj_per_mol")?);
    let mut barriers = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| KineticsError::Csv {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let raw_id = record.get(id_col).unwrap_or("");
        let edge = match parse_edge_id(raw_id) {
            Some(i) if i < h.edge_count() => EdgeId(i),
            _ => {
                return Err(KineticsError::UnknownEdge {
                    line,
                    id: raw_id.to_string(),
                })
            }
        };
        let raw_value = record.get(value_col).unwrap_or("");
        let kj: f64 = raw_value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| KineticsError::NonNumeric {
                line,
                value: raw_value.to_string(),
            })?;
        if kj < 0.0 {
            log::warn!("edge {edge}: negative barrier {kj} kJ/mol");
        }
        if barriers.insert(edge, kj * 1000.0).is_some() {
            return Err(KineticsError::DuplicateEdge { line, edge });
        }
    }
    BarrierTable::from_joules(h, barriers)
}

/// Eyring rate constant `(k_B T / h) exp(-G / RT)` in 1/s.
pub fn rate_constant(barrier: f64, thermo: &Thermo) -> f64 {
    thermo.prefactor() * (-barrier / thermo.rt()).exp()
}

/// `ln D` with `D = sum_i exp(-G_i / RT)`, evaluated with a max shift.
pub fn log_partition(table: &BarrierTable, thermo: &Thermo) -> f64 {
    let rt = thermo.rt();
    let exponents: Vec<f64> = table.iter().map(|(_, g)| -g / rt).collect();
    let Some(max) = exponents.iter().copied().reduce(f64::max) else {
        return f64::NEG_INFINITY;
    };
    max + exponents.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `p(e) = exp(-G_e / RT) / D`, or `None` for an edge without a barrier.
pub fn reaction_probability(e: EdgeId, table: &BarrierTable, thermo: &Thermo) -> Option<f64> {
    let g = table.get(e)?;
    Some((-g / thermo.rt() - log_partition(table, thermo)).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightModel {
    pub log_d: f64,
    pub rt: f64,
    /// `c_e = G_e + RT ln D`, J/mol.
    pub coeff: BTreeMap<EdgeId, f64>,
}

impl WeightModel {
    pub fn coefficient(&self, e: EdgeId) -> Option<f64> {
        self.coeff.get(&e).copied()
    }
}

/// Per-edge weights of the minimization objective over all edges of `h`.
pub fn objective_coefficients(
    table: &BarrierTable,
    thermo: &Thermo,
    h: &Hypergraph,
) -> Result<WeightModel, KineticsError> {
    if let Some(missing) = (0..h.edge_count())
        .map(EdgeId)
        .find(|e| table.get(*e).is_none())
    {
        return Err(KineticsError::MissingEdge(missing));
    }
    let log_d = log_partition(table, thermo);
    let rt = thermo.rt();
    // c_e = (G_e - G_min) + RT ln sum_i exp(-(G_i - G_min) / RT): same value,
    // without cancelling two large terms.
    let g_min = table.iter().map(|(_, g)| g).fold(f64::INFINITY, f64::min);
    let shifted = rt * table.iter().map(|(_, g)| (-(g - g_min) / rt).exp()).sum::<f64>().ln();
    let coeff = table.iter().map(|(e, g)| (e, (g - g_min) + shifted)).collect();
    Ok(WeightModel { log_d, rt, coeff })
}

/// `sum_e f_e c_e` over real edges; half-edges carry no cost.
pub fn pathway_score(f: &Hyperflow, model: &WeightModel) -> f64 {
    f.edge_flows()
        .map(|(e, n)| n as f64 * model.coefficient(e).unwrap_or(0.0))
        .sum()
}
