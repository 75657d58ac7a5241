use std::fmt::Write;

use super::{IlpModel, ObjectiveSense, RowSense, VarKind};

const LINE_WIDTH: usize = 100;

/// Plain decimals for integers, exponent form otherwise, so tiny values do
/// not expand into long digit strings.
fn num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Writes terms as `+ 3 f_0 - z_0`, wrapping long expressions onto
/// continuation lines.
fn write_terms(out: &mut String, head: &str, terms: &[(f64, &str)]) {
    let mut line = head.to_string();
    for (i, &(a, name)) in terms.iter().enumerate() {
        let sign = if a < 0.0 { "-" } else { "+" };
        let mag = a.abs();
        let term = if mag == 1.0 { name.to_string() } else { format!("{} {name}", num(mag)) };
        let piece = if i == 0 && a >= 0.0 { term } else { format!("{sign} {term}") };
        if line.len() + piece.len() + 1 > LINE_WIDTH && line.trim().len() > head.trim().len() {
            out.push_str(&line);
            out.push('\n');
            line = "   ".to_string();
        }
        line.push(' ');
        line.push_str(&piece);
    }
    out.push_str(&line);
}

/// Renders the model in the CPLEX LP file format. Output depends only on the
/// model, so unchanged models export byte-identical text.
pub fn export_lp_text(model: &IlpModel) -> String {
    let p = &model.program;
    let name = |j: usize| p.variables[j].name.as_str();
    let mut out = String::new();
    out.push_str(match p.sense {
        ObjectiveSense::Minimize => "Minimize\n",
        ObjectiveSense::Maximize => "Maximize\n",
    });
    let obj: Vec<(f64, &str)> = p
        .objective
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, &c)| (c, name(j)))
        .collect();
    match (obj.is_empty(), p.variables.first()) {
        (false, _) => write_terms(&mut out, " obj:", &obj),
        (true, Some(v)) => write_terms(&mut out, " obj:", &[(0.0, v.name.as_str())]),
        (true, None) => out.push_str(" obj:"),
    }
    out.push_str("\nSubject To\n");
    for row in &p.rows {
        if row.terms.is_empty() {
            let _ = writeln!(out, "\\ {} has no terms", row.name);
            continue;
        }
        let terms: Vec<(f64, &str)> = row.terms.iter().map(|&(j, a)| (a, name(j))).collect();
        write_terms(&mut out, &format!(" {}:", row.name), &terms);
        let op = match row.sense {
            RowSense::Le => "<=",
            RowSense::Ge => ">=",
            RowSense::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", num(row.rhs));
    }
    out.push_str("Bounds\n");
    for v in p.variables.iter().filter(|v| v.kind != VarKind::Binary) {
        if v.lower == v.upper {
            let _ = writeln!(out, " {} = {}", v.name, num(v.lower));
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", num(v.lower), v.name, num(v.upper));
        }
    }
    for v in p.variables.iter().filter(|v| v.kind == VarKind::Binary && v.upper == 0.0) {
        let _ = writeln!(out, " {} = 0", v.name);
    }
    for (section, kind) in [("Generals", VarKind::Integer), ("Binaries", VarKind::Binary)] {
        let names: Vec<&str> = p.variables.iter().filter(|v| v.kind == kind).map(|v| v.name.as_str()).collect();
        if names.is_empty() {
            continue;
        }
        let _ = writeln!(out, "{section}");
        for chunk in names.chunks(10) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}
