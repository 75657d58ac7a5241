//! Rule text format.
//!
//! ```text
//! rule tautomer
//! reversible
//! classes: X = {N,O}
//! classes: Y = {N,O}
//! left:
//!   atom 1 C; atom 2 X; atom 3 H; atom 4 Y
//!   bond 1 2 1; bond 2 3 1; bond 1 4 2
//! right:
//!   bond 1 2 2; bond 4 3 1; bond 1 4 1
//! ```
//!
//! `context:` and `right:` may omit their atom lines, in which case they
//! share the left side's atoms. Without a `context:` section the context is
//! the set of bonds common to both sides. Class names may reuse an element
//! symbol; inside that rule the class wins.

use std::collections::{BTreeMap, BTreeSet};

use super::{PatternEdge, PatternGraph, PatternLabel, PatternVertex, Rule, RuleError};
use crate::molgraph::{BondOrder, Element};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Left,
    Context,
    Right,
}

#[derive(Default)]
struct Draft {
    name: String,
    line: usize,
    reversible: bool,
    classes: BTreeMap<String, BTreeSet<Element>>,
    left: PatternGraph,
    context: Option<PatternGraph>,
    right: PatternGraph,
}

/// Parses a text holding exactly one rule.
pub fn parse_rule(text: &str) -> Result<Rule, RuleError> {
    let mut rules = parse_rules(text)?;
    match rules.len() {
        1 => Ok(rules.remove(0)),
        n => Err(RuleError::Syntax {
            line: 1,
            message: format!("expected exactly one rule, found {n}"),
        }),
    }
}

/// Parses a file of one or more rules, each introduced by `rule <name>`.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RuleError> {
    let mut rules = Vec::new();
    let mut draft: Option<Draft> = None;
    let mut section = Section::Header;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        for stmt in content.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let syntax = |message: String| RuleError::Syntax { line, message };
            if let Some(name) = stmt.strip_prefix("rule ").map(str::trim) {
                if let Some(d) = draft.take() {
                    rules.push(finish(d)?);
                }
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(format!("invalid rule name `{name}`")));
                }
                draft = Some(Draft {
                    name: name.to_string(),
                    line,
                    ..Draft::default()
                });
                section = Section::Header;
                continue;
            }
            let Some(d) = draft.as_mut() else {
                return Err(syntax("expected `rule <name>` first".into()));
            };
            match stmt {
                "reversible" => d.reversible = true,
                "left:" => section = Section::Left,
                "context:" => {
                    section = Section::Context;
                    d.context.get_or_insert_with(PatternGraph::default);
                }
                "right:" => section = Section::Right,
                _ if stmt.starts_with("classes:") => {
                    parse_class(d, &stmt["classes:".len()..], line)?;
                }
                _ => {
                    let graph = match section {
                        Section::Header => {
                            return Err(syntax(format!("unexpected `{stmt}` before a side header")))
                        }
                        Section::Left => &mut d.left,
                        Section::Context => d.context.as_mut().expect("created with header"),
                        Section::Right => &mut d.right,
                    };
                    parse_pattern_statement(graph, stmt, line, &d.classes)?;
                }
            }
        }
    }
    if let Some(d) = draft.take() {
        rules.push(finish(d)?);
    }
    if rules.is_empty() {
        return Err(RuleError::Syntax {
            line: 1,
            message: "no rules found".into(),
        });
    }
    Ok(rules)
}

fn parse_class(d: &mut Draft, spec: &str, line: usize) -> Result<(), RuleError> {
    let syntax = |message: String| RuleError::Syntax { line, message };
    let (name, set) = spec
        .split_once('=')
        .ok_or_else(|| syntax("expected `classes: NAME = {El,...}`".into()))?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(syntax(format!("invalid class name `{name}`")));
    }
    let set = set.trim();
    let inner = set
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| syntax(format!("class members must be braced, got `{set}`")))?;
    let mut members = BTreeSet::new();
    for sym in inner.split(',').map(str::trim) {
        let e: Element = sym
            .parse()
            .map_err(|_| syntax(format!("unknown element `{sym}` in class")))?;
        members.insert(e);
    }
    if members.is_empty() {
        return Err(syntax(format!("class `{name}` is empty")));
    }
    if d.classes.insert(name.to_string(), members).is_some() {
        return Err(syntax(format!("class `{name}` defined twice")));
    }
    Ok(())
}

fn parse_pattern_statement(
    g: &mut PatternGraph,
    stmt: &str,
    line: usize,
    classes: &BTreeMap<String, BTreeSet<Element>>,
) -> Result<(), RuleError> {
    let syntax = |message: String| RuleError::Syntax { line, message };
    let tokens: Vec<&str> = stmt.split_whitespace().collect();
    match tokens.as_slice() {
        ["atom", id, label] => {
            let id = crate::molgraph::parse_id(id).map_err(syntax)?;
            // A declared class shadows an element of the same symbol (`Y`).
            let label = if classes.contains_key(*label) {
                PatternLabel::Class(label.to_string())
            } else {
                match label.parse::<Element>() {
                    Ok(e) => PatternLabel::Element(e),
                    Err(_) => {
                        return Err(RuleError::UnknownClass {
                            line,
                            name: label.to_string(),
                        })
                    }
                }
            };
            if g.vertices.iter().any(|v| v.id == id) {
                return Err(syntax(format!("duplicate vertex {id}")));
            }
            g.vertices.push(PatternVertex { id, label });
        }
        ["bond", a, b, order] => {
            let a = crate::molgraph::parse_id(a).map_err(syntax)?;
            let b = crate::molgraph::parse_id(b).map_err(syntax)?;
            let order = BondOrder::from_token(order)
                .ok_or_else(|| syntax(format!("invalid bond order `{order}`")))?;
            if a == b {
                return Err(syntax(format!("bond joins vertex {a} to itself")));
            }
            let key = (a.min(b), a.max(b));
            if g.edges.iter().any(|e| (e.a.min(e.b), e.a.max(e.b)) == key) {
                return Err(syntax(format!("second bond between {a} and {b}")));
            }
            g.edges.push(PatternEdge { a, b, order });
        }
        _ => return Err(syntax(format!("cannot parse `{stmt}`"))),
    }
    Ok(())
}

fn finish(mut d: Draft) -> Result<Rule, RuleError> {
    let syntax = |message: String| RuleError::Syntax {
        line: d.line,
        message,
    };
    if d.left.vertices.is_empty() {
        return Err(syntax(format!("rule `{}` has no left-side atoms", d.name)));
    }
    let ids = d.left.vertex_ids();
    for e in &d.left.edges {
        for id in [e.a, e.b] {
            if !ids.contains(&id) {
                return Err(syntax(format!(
                    "rule `{}`: left bond references missing vertex {id}",
                    d.name
                )));
            }
        }
    }
    if d.right.vertices.is_empty() {
        d.right.vertices = d.left.vertices.clone();
    }
    if let Some(k) = d.context.as_mut() {
        if k.vertices.is_empty() {
            k.vertices = d.left.vertices.clone();
        }
    }
    Rule::new(&d.name, d.left, d.context, d.right, d.classes, d.reversible)
}
