//! Line-oriented trace format.
//!
//! ```text
//! # comment
//! N <n>
//! INIT <k> u1 v1 ... uk vk
//! INSERT <v> <k> u1 v1 ... uk vk
//! DELETE <k> u1 v1 ... uk vk
//! QUERY <u> <v>
//! ```
//!
//! Vertices are 1-based. Every edge of an `INSERT` must be incident to its
//! center vertex.

use std::fmt;
use std::str::FromStr;

use crate::error::{HarnessError, Result};

/// Directed edge `(from, to)` with 1-based endpoints.
pub type Edge = (usize, usize);

/// Kind of a trace operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    /// Replace the edge set.
    Init,
    /// Centered insertion.
    Insert,
    /// Deletion of an edge set.
    Delete,
    /// Reachability query.
    Query,
}

impl OpKind {
    /// Keyword used in traces and CSV output.
    pub fn as_str(self) -> &'static str {
        match self {
            OpKind::Init => "INIT",
            OpKind::Insert => "INSERT",
            OpKind::Delete => "DELETE",
            OpKind::Query => "QUERY",
        }
    }

    /// Whether the operation modifies the graph.
    pub fn is_update(self) -> bool {
        matches!(self, OpKind::Insert | OpKind::Delete)
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One trace operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceOp {
    /// `E <- edges`.
    Init(Vec<Edge>),
    /// `E <- E + edges`, all edges incident to `v`.
    Insert { v: usize, edges: Vec<Edge> },
    /// `E <- E - edges`.
    Delete(Vec<Edge>),
    /// Is `v` reachable from `u`?
    Query(usize, usize),
}

impl TraceOp {
    /// Kind of the operation.
    pub fn kind(&self) -> OpKind {
        match self {
            TraceOp::Init(_) => OpKind::Init,
            TraceOp::Insert { .. } => OpKind::Insert,
            TraceOp::Delete(_) => OpKind::Delete,
            TraceOp::Query(..) => OpKind::Query,
        }
    }
}

fn write_edges(f: &mut fmt::Formatter<'_>, edges: &[Edge]) -> fmt::Result {
    write!(f, "{}", edges.len())?;
    for (u, v) in edges {
        write!(f, " {u} {v}")?;
    }
    Ok(())
}

impl fmt::Display for TraceOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceOp::Init(e) => {
                f.write_str("INIT ")?;
                write_edges(f, e)
            }
            TraceOp::Insert { v, edges } => {
                write!(f, "INSERT {v} ")?;
                write_edges(f, edges)
            }
            TraceOp::Delete(e) => {
                f.write_str("DELETE ")?;
                write_edges(f, e)
            }
            TraceOp::Query(u, v) => write!(f, "QUERY {u} {v}"),
        }
    }
}

/// A vertex count and an operation sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// Number of vertices.
    pub n: usize,
    /// Operations in execution order.
    pub ops: Vec<TraceOp>,
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N {}", self.n)?;
        for op in &self.ops {
            writeln!(f, "{op}")?;
        }
        Ok(())
    }
}

struct Line<'a> {
    number: usize,
    n: usize,
    words: std::str::SplitWhitespace<'a>,
}

impl Line<'_> {
    fn err(&self, msg: impl Into<String>) -> HarnessError {
        HarnessError::Parse {
            line: self.number,
            msg: msg.into(),
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let word = self
            .words
            .next()
            .ok_or_else(|| self.err(format!("missing {what}")))?;
        word.parse()
            .map_err(|_| self.err(format!("{what} '{word}' is not a non-negative integer")))
    }

    fn vertex(&mut self) -> Result<usize> {
        let v = self.number("vertex")?;
        if (1..=self.n).contains(&v) {
            Ok(v)
        } else {
            Err(self.err(format!("vertex {v} outside 1..={}", self.n)))
        }
    }

    fn edges(&mut self) -> Result<Vec<Edge>> {
        let k = self.number("edge count")?;
        (0..k)
            .map(|_| Ok((self.vertex()?, self.vertex()?)))
            .collect()
    }

    fn finish(mut self) -> Result<()> {
        match self.words.next() {
            None => Ok(()),
            Some(w) => Err(self.err(format!("unexpected trailing token '{w}'"))),
        }
    }
}

impl FromStr for Trace {
    type Err = HarnessError;

    fn from_str(text: &str) -> Result<Self> {
        let mut n = None;
        let mut ops = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut words = content.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let mut line = Line {
                number: idx + 1,
                n: n.unwrap_or(0),
                words,
            };
            if keyword == "N" {
                if n.is_some() {
                    return Err(line.err("duplicate N header"));
                }
                let value = line.number("vertex count")?;
                if value == 0 {
                    return Err(line.err("vertex count must be positive"));
                }
                line.finish()?;
                n = Some(value);
                continue;
            }
            if n.is_none() {
                return Err(line.err("operation before the N header"));
            }
            let op = match keyword {
                "INIT" => TraceOp::Init(line.edges()?),
                "INSERT" => {
                    let v = line.vertex()?;
                    let edges = line.edges()?;
                    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a != v && b != v) {
                        return Err(line.err(format!("edge ({a}, {b}) is not incident to {v}")));
                    }
                    TraceOp::Insert { v, edges }
                }
                "DELETE" => TraceOp::Delete(line.edges()?),
                "QUERY" => TraceOp::Query(line.vertex()?, line.vertex()?),
                other => return Err(line.err(format!("unknown keyword '{other}'"))),
            };
            line.finish()?;
            ops.push(op);
        }
        let n = n.ok_or(HarnessError::Parse {
            line: 0,
            msg: "missing N header".into(),
        })?;
        Ok(Trace { n, ops })
    }
}
