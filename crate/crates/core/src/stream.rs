//! Text format for update streams and its validated parser.
//!
//! Format: a header line `n <count>`, then one event per line —
//! `+ u v` (insert), `- u v` (delete), `q` (query). Blank lines are skipped.
//! Ingestion validates ids against `n`, rejects self-loops, and replays a
//! shadow edge set so that inserts only add absent edges and deletes only
//! remove present ones; the first bad line aborts with its line number.

use crate::graph::{Edge, Graph, VertexId};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateEvent {
    Insert(VertexId, VertexId),
    Delete(VertexId, VertexId),
    Query,
}

impl UpdateEvent {
    pub fn edge(&self) -> Option<Edge> {
        match *self {
            UpdateEvent::Insert(u, v) | UpdateEvent::Delete(u, v) => Some(Edge::new(u, v)),
            UpdateEvent::Query => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateStream {
    pub n: usize,
    pub events: Vec<UpdateEvent>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StreamError {
    #[error("line {line}: expected header \"n <count>\"")]
    BadHeader { line: usize },
    #[error("line {line}: unrecognized event {text:?}")]
    BadLine { line: usize, text: String },
    #[error("line {line}: vertex {v} out of range (n = {n})")]
    OutOfRange { line: usize, v: VertexId, n: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: VertexId },
    #[error("line {line}: insert of already-present edge ({u}, {v})")]
    InsertPresent { line: usize, u: VertexId, v: VertexId },
    #[error("line {line}: delete of absent edge ({u}, {v})")]
    DeleteAbsent { line: usize, u: VertexId, v: VertexId },
}

impl UpdateStream {
    pub fn new(n: usize, events: Vec<UpdateEvent>) -> Self {
        UpdateStream { n, events }
    }

    /// Parses and validates the text format.
    pub fn parse(text: &str) -> Result<Self, StreamError> {
        let mut lines = text.lines().enumerate();
        let (header_line, n) = loop {
            match lines.next() {
                Some((idx, raw)) => {
                    let line = idx + 1;
                    let t = raw.trim();
                    if t.is_empty() {
                        continue;
                    }
                    let mut it = t.split_ascii_whitespace();
                    if it.next() != Some("n") {
                        return Err(StreamError::BadHeader { line });
                    }
                    let n: usize = it
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or(StreamError::BadHeader { line })?;
                    if it.next().is_some() {
                        return Err(StreamError::BadHeader { line });
                    }
                    break (line, n);
                }
                None => return Err(StreamError::BadHeader { line: 1 }),
            }
        };
        let _ = header_line;

        let mut events = Vec::new();
        let mut present: BTreeSet<Edge> = BTreeSet::new();
        for (idx, raw) in lines {
            let line = idx + 1;
            let t = raw.trim();
            if t.is_empty() {
                continue;
            }
            let mut it = t.split_ascii_whitespace();
            let op = it.next().unwrap();
            let ev = match op {
                "q" => {
                    if it.next().is_some() {
                        return Err(StreamError::BadLine {
                            line,
                            text: t.to_string(),
                        });
                    }
                    UpdateEvent::Query
                }
                "+" | "-" => {
                    let parse2 = |w: Option<&str>| w.and_then(|s| s.parse::<usize>().ok());
                    let (u, v) = match (parse2(it.next()), parse2(it.next()), it.next()) {
                        (Some(u), Some(v), None) => (u, v),
                        _ => {
                            return Err(StreamError::BadLine {
                                line,
                                text: t.to_string(),
                            })
                        }
                    };
                    if u >= n {
                        return Err(StreamError::OutOfRange { line, v: u, n });
                    }
                    if v >= n {
                        return Err(StreamError::OutOfRange { line, v, n });
                    }
                    if u == v {
                        return Err(StreamError::SelfLoop { line, v: u });
                    }
                    let e = Edge::new(u, v);
                    if op == "+" {
                        if !present.insert(e) {
                            return Err(StreamError::InsertPresent {
                                line,
                                u: e.u(),
                                v: e.v(),
                            });
                        }
                        UpdateEvent::Insert(u, v)
                    } else {
                        if !present.remove(&e) {
                            return Err(StreamError::DeleteAbsent {
                                line,
                                u: e.u(),
                                v: e.v(),
                            });
                        }
                        UpdateEvent::Delete(u, v)
                    }
                }
                _ => {
                    return Err(StreamError::BadLine {
                        line,
                        text: t.to_string(),
                    })
                }
            };
            events.push(ev);
        }
        Ok(UpdateStream { n, events })
    }

    /// Renders back to the text format (inverse of `parse`).
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n {}", self.n);
        for ev in &self.events {
            match *ev {
                UpdateEvent::Insert(u, v) => {
                    let _ = writeln!(out, "+ {} {}", u, v);
                }
                UpdateEvent::Delete(u, v) => {
                    let _ = writeln!(out, "- {} {}", u, v);
                }
                UpdateEvent::Query => {
                    let _ = writeln!(out, "q");
                }
            }
        }
        out
    }

    pub fn is_insert_only(&self) -> bool {
        self.events
            .iter()
            .all(|e| !matches!(e, UpdateEvent::Delete(_, _)))
    }

    /// Insert edges in arrival order; meaningful for insert-only streams.
    pub fn insert_sequence(&self) -> Vec<Edge> {
        self.events
            .iter()
            .filter_map(|e| match *e {
                UpdateEvent::Insert(u, v) => Some(Edge::new(u, v)),
                _ => None,
            })
            .collect()
    }

    /// Graph left standing after all inserts and deletes.
    pub fn final_graph(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for ev in &self.events {
            match *ev {
                UpdateEvent::Insert(u, v) => {
                    g.insert_edge(u, v).expect("stream validated at ingestion");
                }
                UpdateEvent::Delete(u, v) => {
                    g.delete_edge(u, v).expect("stream validated at ingestion");
                }
                UpdateEvent::Query => {}
            }
        }
        g
    }
}
