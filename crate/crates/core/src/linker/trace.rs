//! Trace records of a linker run and the assertion log.

use serde::{Deserialize, Serialize};

use crate::anchoring::AnchoredPair;
use crate::connectivity::Path;
use crate::error::{Error, Result};
use crate::tournament::{Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkMode {
    /// Theorem thresholds are checked first; any failed inequality aborts.
    Strict,
    /// No threshold check; inequalities that depend on the thresholds are
    /// logged but only the construction itself can fail.
    Unchecked,
}

impl std::fmt::Display for LinkMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LinkMode::Strict => "strict",
            LinkMode::Unchecked => "unchecked",
        })
    }
}

/// One greedy round: `u` has minimum out-degree in the remaining tournament,
/// `v` minimum out-degree inside `N+(u)`, and `a` is their common
/// out-neighbourhood there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub i: usize,
    pub u: Vertex,
    pub v: Vertex,
    #[serde(rename = "A")]
    pub a: VertexSet,
    pub d_u: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub i: usize,
    pub u: Vertex,
    pub v: Vertex,
    #[serde(rename = "A")]
    pub a: VertexSet,
    /// Stage that produced `(u, v)`.
    pub stage: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreSelection {
    /// Anchoring side, ordered by stage index.
    #[serde(rename = "Vp")]
    pub vp: Vec<Vertex>,
    #[serde(rename = "Vpp")]
    pub vpp: Vec<Vertex>,
    #[serde(rename = "Vstar")]
    pub vstar: VertexSet,
    #[serde(rename = "Up")]
    pub up: Vec<Vertex>,
    #[serde(rename = "Ustar")]
    pub ustar: VertexSet,
    pub pairing: Vec<Pairing>,
    /// All `v_i`; the anchored pair lives in `T<v_set>` local coordinates.
    #[serde(skip)]
    pub v_set: VertexSet,
    #[serde(skip)]
    pub anchored: Option<AnchoredPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondHop {
    pub i: usize,
    pub x: Vertex,
}

/// Whether a picked vertex still belonged to the tournament of the stage that
/// produced its pairing. The common-out-neighbourhood argument about `A'_i`
/// only applies when it did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipFlag {
    pub i: usize,
    pub role: String,
    pub vertex: Vertex,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstLegs {
    #[serde(rename = "Xp")]
    pub xp: Vec<Vertex>,
    /// 1-based indices whose `x'_i` has an arc to `u'_i` or `v'_i`.
    #[serde(rename = "Ihat")]
    pub ihat: Vec<usize>,
    #[serde(rename = "Xpp")]
    pub xpp: Vec<SecondHop>,
    #[serde(rename = "P")]
    pub p: Vec<Path>,
    pub tprime_membership_hypothesis: Vec<MembershipFlag>,
}

impl FirstLegs {
    pub fn xpp_set(&self) -> VertexSet {
        self.xpp.iter().map(|h| h.x).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssertionRecord {
    pub eq: String,
    pub lhs: f64,
    pub rel: String,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

impl Rel {
    fn holds(self, lhs: f64, rhs: f64) -> bool {
        match self {
            Rel::Le => lhs <= rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Eq => lhs == rhs,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Eq => "==",
        }
    }
}

/// Inequalities that follow from the greedy construction alone are
/// `Structural` and abort in every mode. Those that need the theorem's
/// thresholds are `Conditional` and abort only in strict mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Structural,
    Conditional,
}

#[derive(Clone, Debug)]
pub struct AssertionLog {
    mode: LinkMode,
    records: Vec<AssertionRecord>,
}

impl AssertionLog {
    pub fn new(mode: LinkMode) -> Self {
        AssertionLog {
            mode,
            records: Vec::new(),
        }
    }

    pub fn mode(&self) -> LinkMode {
        self.mode
    }

    pub fn records(&self) -> &[AssertionRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<AssertionRecord> {
        self.records
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssertionRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// Logs `lhs rel rhs`; returns `AssertionViolation` when it fails and is
    /// fatal in the current mode. The attached trace holds only the log; the
    /// pipeline replaces it with the full partial trace.
    pub fn check(&mut self, eq: &str, lhs: f64, rel: Rel, rhs: f64, kind: Kind) -> Result<bool> {
        let pass = rel.holds(lhs, rhs);
        self.records.push(AssertionRecord {
            eq: eq.to_string(),
            lhs,
            rel: rel.symbol().to_string(),
            rhs,
            pass,
        });
        if !pass && (kind == Kind::Structural || self.mode == LinkMode::Strict) {
            let trace = LinkTrace {
                mode: self.mode,
                assertions: self.records.clone(),
                ..LinkTrace::default()
            };
            return Err(Error::AssertionViolation {
                eq: eq.to_string(),
                trace: Box::new(trace),
            });
        }
        Ok(pass)
    }
}

/// Full record of a linker run, serialized as the trace JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkTrace {
    pub k: usize,
    pub mode: LinkMode,
    pub stages: Vec<Stage>,
    pub core: Option<CoreSelection>,
    pub first: Option<FirstLegs>,
    #[serde(rename = "R")]
    pub r: Vec<Path>,
    #[serde(rename = "M")]
    pub m: Vec<Path>,
    #[serde(rename = "Q")]
    pub q: Vec<Path>,
    pub assertions: Vec<AssertionRecord>,
}

impl Default for LinkTrace {
    fn default() -> Self {
        LinkTrace {
            k: 0,
            mode: LinkMode::Strict,
            stages: Vec::new(),
            core: None,
            first: None,
            r: Vec::new(),
            m: Vec::new(),
            q: Vec::new(),
            assertions: Vec::new(),
        }
    }
}

impl LinkTrace {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssertionRecord> {
        self.assertions.iter().filter(|r| !r.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conditional_failures_are_fatal_only_in_strict_mode() {
        let mut log = AssertionLog::new(LinkMode::Unchecked);
        assert!(!log.check("eq6", 7.0, Rel::Le, 1.0, Kind::Conditional).unwrap());
        assert!(log.check("eq1", 2.0, Rel::Le, 1.0, Kind::Structural).is_err());
        assert_eq!(log.failures().count(), 2);

        let mut log = AssertionLog::new(LinkMode::Strict);
        assert!(log.check("eq6", 1.0, Rel::Le, 1.0, Kind::Conditional).unwrap());
        match log.check("eq6", 7.0, Rel::Le, 1.0, Kind::Conditional) {
            Err(Error::AssertionViolation { eq, trace }) => {
                assert_eq!(eq, "eq6");
                assert_eq!(trace.assertions.len(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trace_json_field_names() {
        let v: serde_json::Value = serde_json::from_str(&LinkTrace::default().to_json()).unwrap();
        for key in ["k", "mode", "stages", "core", "first", "R", "M", "Q", "assertions"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
