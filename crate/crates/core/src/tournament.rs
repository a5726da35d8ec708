//! Tournament data model.
//!
//! A [`Tournament`] stores its orientation as a dense `n x n` boolean matrix.
//! Sub-tournaments produced by [`Tournament::induced`] and
//! [`Tournament::remove`] keep a label map back to the ids of the tournament
//! they were cut from, composed all the way to the root, so anything reported
//! from a sub-view can be expressed in root coordinates.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Vertex index, always in `0..n` for the tournament it addresses.
pub type Vertex = usize;

/// Ordered set of vertices without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: Vertex) -> bool {
        self.0.remove(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Builds a set from a slice, rejecting repeated vertices.
    pub fn from_distinct(vertices: &[Vertex]) -> Result<Self> {
        let set: VertexSet = vertices.iter().copied().collect();
        if set.len() != vertices.len() {
            return invalid(format!("duplicate vertex in {vertices:?}"));
        }
        Ok(set)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(vs: [Vertex; N]) -> Self {
        vs.into_iter().collect()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, Vertex>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A tournament: exactly one arc between every pair of distinct vertices.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tournament {
    n: usize,
    /// Row-major `n x n`; `arcs[i * n + j]` iff `i -> j`.
    arcs: Vec<bool>,
    out_deg: Vec<usize>,
    /// Root id of each local vertex; `None` for a root tournament.
    labels: Option<Vec<Vertex>>,
}

impl Tournament {
    /// Builds a tournament from the orientation of each pair `i < j`:
    /// `forward(i, j)` returns true for `i -> j`, false for `j -> i`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(Vertex, Vertex) -> bool) -> Self {
        let mut arcs = vec![false; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                if forward(i, j) {
                    arcs[i * n + j] = true;
                } else {
                    arcs[j * n + i] = true;
                }
            }
        }
        Self::from_raw(n, arcs, None)
    }

    /// Builds a tournament from a full adjacency matrix, rejecting anything
    /// that is not a tournament.
    pub fn from_matrix(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut arcs = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return invalid(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            arcs.extend_from_slice(row);
        }
        check_orientation(n, &arcs)?;
        Ok(Self::from_raw(n, arcs, None))
    }

    /// Builds a tournament from an explicit arc list. Every unordered pair must
    /// appear exactly once.
    pub fn from_arcs(n: usize, list: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut arcs = vec![false; n * n];
        for &(u, v) in list {
            if u >= n || v >= n {
                return invalid(format!("arc ({u},{v}) out of range for n={n}"));
            }
            arcs[u * n + v] = true;
        }
        check_orientation(n, &arcs)?;
        Ok(Self::from_raw(n, arcs, None))
    }

    fn from_raw(n: usize, arcs: Vec<bool>, labels: Option<Vec<Vertex>>) -> Self {
        let out_deg = (0..n)
            .map(|i| arcs[i * n..(i + 1) * n].iter().filter(|&&a| a).count())
            .collect();
        Tournament {
            n,
            arcs,
            out_deg,
            labels,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        (0..self.n).collect()
    }

    /// Unchecked arc query; `u == v` yields false.
    #[inline]
    pub fn arc(&self, u: Vertex, v: Vertex) -> bool {
        self.arcs[u * self.n + v]
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            return invalid(format!("vertex {v} out of range for n={}", self.n));
        }
        Ok(())
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> Result<bool> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return invalid(format!("has_arc on equal vertices {u}"));
        }
        Ok(self.arc(u, v))
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out_deg[v]
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.n - 1 - self.out_deg[v]
    }

    pub fn out_degrees(&self) -> &[usize] {
        &self.out_deg
    }

    pub fn out_neighbors(&self, v: Vertex) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok((0..self.n).filter(|&w| self.arc(v, w)).collect())
    }

    pub fn in_neighbors(&self, v: Vertex) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok((0..self.n).filter(|&w| self.arc(w, v)).collect())
    }

    pub fn min_out_degree(&self) -> Option<usize> {
        self.out_deg.iter().copied().min()
    }

    pub fn max_out_degree(&self) -> Option<usize> {
        self.out_deg.iter().copied().max()
    }

    pub fn min_in_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.in_degree(v)).min()
    }

    /// Vertex of minimum out-degree, lowest id among ties.
    pub fn min_out_degree_vertex(&self) -> Result<Vertex> {
        (0..self.n)
            .min_by_key(|&v| (self.out_deg[v], v))
            .ok_or_else(|| Error::InvalidInput("empty tournament".into()))
    }

    /// Root id of local vertex `v`.
    pub fn label(&self, v: Vertex) -> Vertex {
        match &self.labels {
            Some(l) => l[v],
            None => v,
        }
    }

    pub fn is_root(&self) -> bool {
        self.labels.is_none()
    }

    /// Local index of root vertex `root`, if present in this view.
    pub fn local_of(&self, root: Vertex) -> Option<Vertex> {
        match &self.labels {
            Some(l) => l.binary_search(&root).ok(),
            None => (root < self.n).then_some(root),
        }
    }

    /// `T<X>`: the subtournament induced by `x`, labelled in root coordinates.
    pub fn induced(&self, x: &VertexSet) -> Result<Tournament> {
        if let Some(bad) = x.iter().find(|&v| v >= self.n) {
            return invalid(format!("vertex {bad} not in tournament of order {}", self.n));
        }
        let keep = x.to_vec();
        let m = keep.len();
        let mut arcs = vec![false; m * m];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                arcs[a * m + b] = self.arc(i, j);
            }
        }
        let labels = keep.iter().map(|&v| self.label(v)).collect();
        Ok(Self::from_raw(m, arcs, Some(labels)))
    }

    /// `T - X`.
    pub fn remove(&self, x: &VertexSet) -> Result<Tournament> {
        if let Some(bad) = x.iter().find(|&v| v >= self.n) {
            return invalid(format!("vertex {bad} not in tournament of order {}", self.n));
        }
        self.induced(&self.vertices().difference(x))
    }

    /// Checks the tournament invariants; always true for values built through
    /// the public constructors.
    pub fn check_invariants(&self) -> Result<()> {
        check_orientation(self.n, &self.arcs)?;
        let total: usize = self.out_deg.iter().sum();
        if total != self.n * self.n.saturating_sub(1) / 2 {
            return Err(Error::Internal(format!("out-degree sum {total} is wrong")));
        }
        Ok(())
    }

    /// Same orientation, ignoring label maps.
    pub fn same_orientation(&self, other: &Tournament) -> bool {
        self.n == other.n && self.arcs == other.arcs
    }

    /// Renders the TRN1 text format.
    pub fn to_trn1(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1) + 8);
        let _ = writeln!(s, "TRN1");
        let _ = writeln!(s, "{}", self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                s.push(if self.arc(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the TRN1 text format.
    pub fn from_trn1(text: &str) -> Result<Tournament> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };

        match lines.next() {
            Some((_, "TRN1")) => {}
            Some((l, other)) => return Err(parse_err(l, format!("expected `TRN1`, got `{other}`"))),
            None => return Err(parse_err(1, "empty input".into())),
        }
        let (nl, nline) = lines
            .next()
            .ok_or_else(|| parse_err(2, "missing vertex count".into()))?;
        let n: usize = nline
            .trim()
            .parse()
            .map_err(|e| parse_err(nl, format!("bad vertex count `{nline}`: {e}")))?;

        let mut arcs = Vec::with_capacity(n * n);
        for row in 0..n {
            let (l, line) = lines
                .next()
                .ok_or_else(|| parse_err(3 + row, format!("missing row {row}")))?;
            if line.len() != n {
                return Err(parse_err(l, format!("row {row} has length {}, expected {n}", line.len())));
            }
            for c in line.chars() {
                match c {
                    '0' => arcs.push(false),
                    '1' => arcs.push(true),
                    _ => return Err(parse_err(l, format!("invalid character `{c}`"))),
                }
            }
        }
        for (l, line) in lines {
            if !line.trim().is_empty() {
                return Err(parse_err(l, "trailing content".into()));
            }
        }
        check_orientation(n, &arcs).map_err(|e| match e {
            Error::InvalidInput(msg) => parse_err(0, msg),
            other => other,
        })?;
        Ok(Self::from_raw(n, arcs, None))
    }
}

fn check_orientation(n: usize, arcs: &[bool]) -> Result<()> {
    for i in 0..n {
        if arcs[i * n + i] {
            return invalid(format!("self-arc at vertex {i}"));
        }
        for j in (i + 1)..n {
            match (arcs[i * n + j], arcs[j * n + i]) {
                (true, false) | (false, true) => {}
                (true, true) => return invalid(format!("both arcs {i}->{j} and {j}->{i}")),
                (false, false) => return invalid(format!("no arc between {i} and {j}")),
            }
        }
    }
    Ok(())
}
