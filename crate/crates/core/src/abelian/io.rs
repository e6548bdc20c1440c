//! Text formats: the group literal `Z9 x Z2`, inline subset literals
//! `{0,2}` / `{(1,0),(2,1)}`, and subset files (one comma-separated residue
//! tuple per line, `#` comments, or a JSON array of arrays).

use serde_json::Value;

use super::{FiniteAbelianGroup, GroupElement, GroupSubset, DEFAULT_ORDER_CAP};
use crate::syntax::{error_at, Cursor, SyntaxError};
use crate::{Error, Result};

/// Parses `group := "Z" int ("x" "Z" int)*` with the given order cap.
pub fn parse_group(text: &str, cap: u64) -> Result<FiniteAbelianGroup> {
    let mut c = Cursor::new(text);
    let mut moduli = Vec::new();
    loop {
        c.expect('Z')?;
        let start = c.position();
        let n = c.uint()?;
        if n == 0 {
            return Err(error_at(start, "cyclic factor Z0 is not a finite group".into()).into());
        }
        moduli.push(n);
        if !c.eat('x') {
            break;
        }
    }
    c.expect_end()?;
    FiniteAbelianGroup::with_cap(&moduli, cap)
}

impl std::str::FromStr for FiniteAbelianGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_group(s, DEFAULT_ORDER_CAP)
    }
}

fn element_from(
    group: &FiniteAbelianGroup,
    values: &[i64],
    line: usize,
    column: usize,
) -> Result<GroupElement> {
    if values.len() != group.rank() {
        return Err(SyntaxError {
            line,
            column,
            message: format!(
                "element has {} residues but {group} has {} factors",
                values.len(),
                group.rank()
            ),
        }
        .into());
    }
    for (&v, &n) in values.iter().zip(group.moduli()) {
        if v < 0 || v as u64 >= n {
            return Err(Error::ResidueOutOfRange {
                residue: v,
                modulus: n,
            });
        }
    }
    let residues: Vec<u64> = values.iter().map(|&v| v as u64).collect();
    group.element(&residues)
}

/// Parses `{e, e, ...}` where each `e` is an integer (rank-1 groups) or a
/// parenthesised residue tuple.
pub fn parse_subset_literal(group: &FiniteAbelianGroup, text: &str) -> Result<GroupSubset> {
    let mut c = Cursor::new(text);
    c.expect('{')?;
    let mut elements = Vec::new();
    if !c.eat('}') {
        loop {
            c.skip_ws();
            let pos = c.position();
            let values = if c.eat('(') {
                let mut v = vec![c.int()?];
                while c.eat(',') {
                    v.push(c.int()?);
                }
                c.expect(')')?;
                v
            } else {
                vec![c.int()?]
            };
            elements.push(element_from(group, &values, pos.line, pos.column)?);
            if c.eat('}') {
                break;
            }
            c.expect(',')?;
        }
    }
    c.expect_end()?;
    GroupSubset::from_elements(group, &elements)
}

/// Parses a subset file: either comma-separated residues per line (with `#`
/// comments) or a JSON array of residue arrays.
pub fn parse_subset_file(group: &FiniteAbelianGroup, text: &str) -> Result<GroupSubset> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty());
    if first.is_some_and(|l| l.starts_with('[')) {
        return parse_subset_json(group, text);
    }
    let mut elements = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::at(content, lineno + 1, 1);
        c.skip_ws();
        let pos = c.position();
        let mut values = vec![c.int()?];
        while c.eat(',') {
            values.push(c.int()?);
        }
        c.expect_end()?;
        elements.push(element_from(group, &values, pos.line, pos.column)?);
    }
    GroupSubset::from_elements(group, &elements)
}

fn parse_subset_json(group: &FiniteAbelianGroup, text: &str) -> Result<GroupSubset> {
    let value: Value = serde_json::from_str(text).map_err(|e| SyntaxError {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let bad = |msg: &str| -> Error {
        SyntaxError {
            line: 1,
            column: 1,
            message: msg.to_string(),
        }
        .into()
    };
    let items = value.as_array().ok_or_else(|| bad("expected a JSON array"))?;
    let mut elements = Vec::with_capacity(items.len());
    for item in items {
        let values: Vec<i64> = match item {
            Value::Array(parts) => parts
                .iter()
                .map(|p| p.as_i64().ok_or_else(|| bad("residues must be integers")))
                .collect::<Result<_>>()?,
            Value::Number(n) => vec![n.as_i64().ok_or_else(|| bad("residues must be integers"))?],
            _ => return Err(bad("each element must be an array of residues")),
        };
        elements.push(element_from(group, &values, 1, 1)?);
    }
    GroupSubset::from_elements(group, &elements)
}

/// Serialises a subset in the line-oriented file format.
pub fn format_subset_file(subset: &GroupSubset) -> String {
    let mut out = format!("# group {}\n", subset.group());
    for x in subset.elements() {
        let line: Vec<String> = x.residues().iter().map(u64::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
