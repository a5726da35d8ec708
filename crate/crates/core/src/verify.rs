//! Independent linkage verifier.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::connectivity::Path;
use crate::tournament::{Tournament, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    PathCount { expected: usize, found: usize },
    EmptyPath { path: usize },
    OutOfRange { path: usize, vertex: Vertex },
    WrongStart { path: usize, expected: Vertex, found: Vertex },
    WrongEnd { path: usize, expected: Vertex, found: Vertex },
    NotAnArc { path: usize, step: usize, from: Vertex, to: Vertex },
    RepeatedVertex { path: usize, vertex: Vertex },
    SharedVertex { vertex: Vertex, first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PathCount { expected, found } => write!(f, "expected {expected} paths, found {found}"),
            Violation::EmptyPath { path } => write!(f, "path {path} is empty"),
            Violation::OutOfRange { path, vertex } => write!(f, "path {path}: vertex {vertex} out of range"),
            Violation::WrongStart { path, expected, found } => {
                write!(f, "path {path} starts at {found}, expected {expected}")
            }
            Violation::WrongEnd { path, expected, found } => {
                write!(f, "path {path} ends at {found}, expected {expected}")
            }
            Violation::NotAnArc { path, step, from, to } => {
                write!(f, "path {path}, step {step}: {from} -> {to} is not an arc")
            }
            Violation::RepeatedVertex { path, vertex } => write!(f, "path {path} repeats vertex {vertex}"),
            Violation::SharedVertex { vertex, first, second } => {
                write!(f, "vertex {vertex} is shared by paths {first} and {second}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageReport {
    pub violation: Option<Violation>,
}

impl LinkageReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that path `i` runs from `sources[i]` to `sinks[i]` along arcs of
/// `t` and that no vertex is used twice anywhere. Accepts arbitrary input and
/// reports the first violation.
pub fn verify_linkage(t: &Tournament, sources: &[Vertex], sinks: &[Vertex], paths: &[Path]) -> LinkageReport {
    LinkageReport {
        violation: first_violation(t, sources, sinks, paths),
    }
}

fn first_violation(t: &Tournament, sources: &[Vertex], sinks: &[Vertex], paths: &[Path]) -> Option<Violation> {
    if sources.len() != sinks.len() || paths.len() != sources.len() {
        return Some(Violation::PathCount {
            expected: sources.len().min(sinks.len()),
            found: paths.len(),
        });
    }
    let mut owner: HashMap<Vertex, usize> = HashMap::new();
    for (i, p) in paths.iter().enumerate() {
        let vs = p.vertices();
        let (Some(&first), Some(&last)) = (vs.first(), vs.last()) else {
            return Some(Violation::EmptyPath { path: i });
        };
        if let Some(&v) = vs.iter().find(|&&v| v >= t.n()) {
            return Some(Violation::OutOfRange { path: i, vertex: v });
        }
        if first != sources[i] {
            return Some(Violation::WrongStart { path: i, expected: sources[i], found: first });
        }
        if last != sinks[i] {
            return Some(Violation::WrongEnd { path: i, expected: sinks[i], found: last });
        }
        if let Some((step, w)) = vs.windows(2).enumerate().find(|(_, w)| !t.arc(w[0], w[1])) {
            return Some(Violation::NotAnArc { path: i, step, from: w[0], to: w[1] });
        }
        for &v in vs {
            match owner.insert(v, i) {
                Some(j) if j == i => return Some(Violation::RepeatedVertex { path: i, vertex: v }),
                Some(j) => return Some(Violation::SharedVertex { vertex: v, first: j, second: i }),
                None => {}
            }
        }
    }
    None
}
