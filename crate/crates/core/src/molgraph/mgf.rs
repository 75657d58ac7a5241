//! MGF, a line-oriented molecule format.
//!
//! ```text
//! # water
//! atom 1 O
//! atom 2 H
//! atom 3 H
//! bond 1 2 1
//! bond 1 3 1
//! ```
//!
//! `atom <id> <element> [charge]` and `bond <id1> <id2> <1|2|3|a>`. `#` starts
//! a comment, blank lines are ignored, `;` separates statements on one line
//! and a line holding only `---` separates molecules.

use std::fmt::Write;

use super::{Atom, Bond, BondOrder, GraphBuilder, MolError, MolecularGraph};

/// Parses a single molecule. A `---` separator is a syntax error here.
pub fn parse_molecule(text: &str) -> Result<MolecularGraph, MolError> {
    let mut builder = GraphBuilder::default();
    for (line_no, stmt) in statements(text) {
        match stmt {
            Statement::Separator => {
                return Err(MolError::Syntax {
                    line: line_no,
                    message: "unexpected `---` in single-molecule input".into(),
                })
            }
            Statement::Atom(atom) => builder.add_atom(line_no, atom)?,
            Statement::Bond(bond) => builder.add_bond(line_no, bond)?,
            Statement::Error(message) => {
                return Err(MolError::Syntax {
                    line: line_no,
                    message,
                })
            }
        }
    }
    Ok(builder.finish())
}

/// Parses a multi-molecule file with `---` separators. Empty sections
/// between separators are skipped.
pub fn parse_molecules(text: &str) -> Result<Vec<MolecularGraph>, MolError> {
    let mut out = Vec::new();
    let mut builder = GraphBuilder::default();
    for (line_no, stmt) in statements(text) {
        match stmt {
            Statement::Separator => {
                let done = std::mem::take(&mut builder);
                if !done.is_empty() {
                    out.push(done.finish());
                }
            }
            Statement::Atom(atom) => builder.add_atom(line_no, atom)?,
            Statement::Bond(bond) => builder.add_bond(line_no, bond)?,
            Statement::Error(message) => {
                return Err(MolError::Syntax {
                    line: line_no,
                    message,
                })
            }
        }
    }
    if !builder.is_empty() {
        out.push(builder.finish());
    }
    Ok(out)
}

pub fn serialize_molecule(g: &MolecularGraph) -> String {
    let mut out = String::new();
    for atom in g.atoms() {
        if atom.charge == 0 {
            writeln!(out, "atom {} {}", atom.id, atom.element).unwrap();
        } else {
            writeln!(out, "atom {} {} {}", atom.id, atom.element, atom.charge).unwrap();
        }
    }
    for bond in g.bonds() {
        writeln!(out, "bond {} {} {}", bond.a, bond.b, bond.order.token()).unwrap();
    }
    out
}

pub(crate) enum Statement {
    Atom(Atom),
    Bond(Bond),
    Separator,
    Error(String),
}

/// Splits text into numbered statements, dropping comments and blanks.
pub(crate) fn statements(text: &str) -> impl Iterator<Item = (usize, Statement)> + '_ {
    text.lines().enumerate().flat_map(|(i, raw)| {
        let line_no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        content
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(move |s| (line_no, parse_statement(s)))
            .collect::<Vec<_>>()
    })
}

pub(crate) fn parse_statement(stmt: &str) -> Statement {
    let tokens: Vec<&str> = stmt.split_whitespace().collect();
    match tokens.as_slice() {
        ["---"] => Statement::Separator,
        ["atom", rest @ ..] => parse_atom(rest).map_or_else(Statement::Error, Statement::Atom),
        ["bond", rest @ ..] => parse_bond(rest).map_or_else(Statement::Error, Statement::Bond),
        [word, ..] => Statement::Error(format!("unknown statement `{word}`")),
        [] => Statement::Error("empty statement".into()),
    }
}

fn parse_atom(tokens: &[&str]) -> Result<Atom, String> {
    let (id, symbol, charge) = match tokens {
        [id, symbol] => (id, symbol, None),
        [id, symbol, charge] => (id, symbol, Some(charge)),
        _ => return Err("expected `atom <id> <element> [charge]`".into()),
    };
    let id = parse_id(id)?;
    let element = symbol
        .parse()
        .map_err(|e: super::UnknownElement| e.to_string())?;
    let charge = match charge {
        Some(c) => c
            .parse::<i8>()
            .map_err(|_| format!("invalid charge `{c}`"))?,
        None => 0,
    };
    Ok(Atom {
        id,
        element,
        charge,
    })
}

fn parse_bond(tokens: &[&str]) -> Result<Bond, String> {
    let [a, b, order] = tokens else {
        return Err("expected `bond <id1> <id2> <order>`".into());
    };
    let order =
        BondOrder::from_token(order).ok_or_else(|| format!("invalid bond order `{order}`"))?;
    Ok(Bond {
        a: parse_id(a)?,
        b: parse_id(b)?,
        order,
    })
}

pub(crate) fn parse_id(tok: &str) -> Result<u32, String> {
    tok.parse::<u32>()
        .map_err(|_| format!("invalid id `{tok}`"))
}
