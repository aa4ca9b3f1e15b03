//! Update-stream format: one operation per line, `#` starts a comment.
//!
//! ```text
//! add <u> <kind> <v>
//! del <u> <kind> <v>
//! query <u> <v>
//! classes
//! medges
//! ```
//!
//! `<kind>` is a positive integer meaning `(kind`; it may also be spelled
//! `(kind` or `)kind`, the latter denoting the close edge `u -)kind-> v`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{parse_num, Label, NodeId, Polarity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateOp {
    Insert { u: NodeId, label: Label, v: NodeId },
    Delete { u: NodeId, label: Label, v: NodeId },
    Query { a: NodeId, b: NodeId },
    Classes,
    MergedEdges,
}

impl fmt::Display for UpdateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = |l: &Label| match l.polarity {
            Polarity::Open => l.kind.to_string(),
            Polarity::Close => format!("){}", l.kind),
        };
        match self {
            UpdateOp::Insert { u, label: l, v } => write!(f, "add {u} {} {v}", label(l)),
            UpdateOp::Delete { u, label: l, v } => write!(f, "del {u} {} {v}", label(l)),
            UpdateOp::Query { a, b } => write!(f, "query {a} {b}"),
            UpdateOp::Classes => write!(f, "classes"),
            UpdateOp::MergedEdges => write!(f, "medges"),
        }
    }
}

fn parse_label(field: &str, line: usize) -> Result<Label> {
    if let Some(rest) = field.strip_prefix(')') {
        Ok(Label::close(parse_num(rest, line)?))
    } else {
        Ok(Label::open(parse_num(field.strip_prefix('(').unwrap_or(field), line)?))
    }
}

/// Parses a stream; each op comes with its 1-based source line.
pub fn parse_updates(text: &str) -> Result<Vec<(usize, UpdateOp)>> {
    let mut ops = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let op = match fields[..] {
            ["add", u, k, v] => UpdateOp::Insert {
                u: parse_num(u, line)?,
                label: parse_label(k, line)?,
                v: parse_num(v, line)?,
            },
            ["del", u, k, v] => UpdateOp::Delete {
                u: parse_num(u, line)?,
                label: parse_label(k, line)?,
                v: parse_num(v, line)?,
            },
            ["query", a, b] => UpdateOp::Query { a: parse_num(a, line)?, b: parse_num(b, line)? },
            ["classes"] => UpdateOp::Classes,
            ["medges"] => UpdateOp::MergedEdges,
            _ => {
                return Err(Error::Syntax { line, message: format!("unrecognized update `{body}`") });
            }
        };
        ops.push((line, op));
    }
    Ok(ops)
}

pub fn serialize_updates(ops: &[UpdateOp]) -> String {
    ops.iter().map(|op| format!("{op}\n")).collect()
}
