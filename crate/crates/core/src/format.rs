//! Line-oriented text format for finite partial magmas.
//!
//! ```text
//! # comments run to end of line
//! elements: a b c
//! zero: c            # optional, designates the zero of a completed table
//! op: a b -> c
//! ```
//!
//! The `op` keys define the locality relation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{ElementId, FinitePartialMagma};

/// A parsed magma file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagmaDocument {
    pub magma: FinitePartialMagma,
    pub zero: Option<ElementId>,
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
    .trim()
}

pub(crate) fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub(crate) fn label_at(line: usize, token: &str) -> Result<ElementId> {
    ElementId::new(token).map_err(|e| parse_error(line, e.to_string()))
}

pub fn parse_document(text: &str) -> Result<MagmaDocument> {
    let mut elements: Option<(usize, Vec<ElementId>)> = None;
    let mut zero: Option<(usize, ElementId)> = None;
    let mut ops: Vec<(usize, [ElementId; 3])> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_error(lineno, format!("expected `key: value`, got `{line}`")))?;
        match key.trim() {
            "elements" => {
                if elements.is_some() {
                    return Err(parse_error(lineno, "duplicate `elements` line"));
                }
                let labels = rest
                    .split_whitespace()
                    .map(|t| label_at(lineno, t))
                    .collect::<Result<Vec<_>>>()?;
                elements = Some((lineno, labels));
            }
            "zero" => {
                if zero.is_some() {
                    return Err(parse_error(lineno, "duplicate `zero` line"));
                }
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let [token] = tokens[..] else {
                    return Err(parse_error(lineno, "expected exactly one zero label"));
                };
                zero = Some((lineno, label_at(lineno, token)?));
            }
            "op" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let [a, b, "->", c] = tokens[..] else {
                    return Err(parse_error(lineno, "expected `op: a b -> c`"));
                };
                ops.push((
                    lineno,
                    [label_at(lineno, a)?, label_at(lineno, b)?, label_at(lineno, c)?],
                ));
            }
            other => return Err(parse_error(lineno, format!("unknown key `{other}`"))),
        }
    }

    let (elements_line, labels) =
        elements.ok_or_else(|| parse_error(text.lines().count().max(1), "missing `elements` line"))?;
    let mut seen = BTreeSet::new();
    for l in &labels {
        if !seen.insert(l.clone()) {
            return Err(parse_error(elements_line, format!("duplicate element `{l}`")));
        }
    }
    let mut keys = BTreeSet::new();
    for (lineno, [a, b, c]) in &ops {
        for x in [a, b, c] {
            if !seen.contains(x) {
                return Err(parse_error(*lineno, format!("`{x}` is not a declared element")));
            }
        }
        if !keys.insert((a.clone(), b.clone())) {
            return Err(parse_error(*lineno, format!("duplicate product for ({a}, {b})")));
        }
    }
    if let Some((lineno, z)) = &zero {
        if !seen.contains(z) {
            return Err(parse_error(*lineno, format!("zero `{z}` is not a declared element")));
        }
    }
    let magma = FinitePartialMagma::new(labels, ops.into_iter().map(|(_, [a, b, c])| (a, b, c)))?;
    Ok(MagmaDocument {
        magma,
        zero: zero.map(|(_, z)| z),
    })
}

pub fn parse_magma(text: &str) -> Result<FinitePartialMagma> {
    parse_document(text).map(|d| d.magma)
}

pub fn write_magma(out: &mut impl fmt::Write, magma: &FinitePartialMagma, zero: Option<&ElementId>) -> fmt::Result {
    out.write_str("elements:")?;
    for l in magma.labels() {
        write!(out, " {l}")?;
    }
    out.write_char('\n')?;
    if let Some(z) = zero {
        writeln!(out, "zero: {z}")?;
    }
    for (a, b, c) in magma.products() {
        writeln!(out, "op: {a} {b} -> {c}")?;
    }
    Ok(())
}

pub fn serialize_magma(magma: &FinitePartialMagma) -> String {
    magma.to_string()
}

impl fmt::Display for FinitePartialMagma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_magma(f, self, None)
    }
}

impl fmt::Display for MagmaDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_magma(f, &self.magma, self.zero.as_ref())
    }
}

impl FromStr for FinitePartialMagma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_magma(s)
    }
}

impl FromStr for MagmaDocument {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_document(s)
    }
}
