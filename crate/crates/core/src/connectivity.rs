//! Strong connectivity, vertex connectivity and Menger-style disjoint path
//! systems.
//!
//! All flow computations split each vertex `v` into `v_in -> v_out` with unit
//! capacity; arcs of the tournament become `u_out -> v_in` edges of unbounded
//! capacity, so every minimum cut is a set of vertices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::flow::{FlowNetwork, INF};
use crate::tournament::{Tournament, Vertex, VertexSet};

/// A directed path as an ordered vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(Vec<Vertex>);

impl Path {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        Path(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<Vertex> {
        self.0
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Vertex> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    /// Inner vertices, endpoints excluded.
    pub fn inner(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    /// Non-empty, follows arcs of `t`, and repeats no vertex.
    pub fn is_valid_in(&self, t: &Tournament) -> bool {
        if self.0.is_empty() || self.0.iter().any(|&v| v >= t.n()) {
            return false;
        }
        let distinct: VertexSet = self.0.iter().copied().collect();
        distinct.len() == self.0.len() && self.0.windows(2).all(|w| t.arc(w[0], w[1]))
    }

    /// Rewrites local ids of a sub-view into root ids.
    pub fn to_root(&self, view: &Tournament) -> Path {
        Path(self.0.iter().map(|&v| view.label(v)).collect())
    }
}

impl From<Vec<Vertex>> for Path {
    fn from(v: Vec<Vertex>) -> Self {
        Path(v)
    }
}

impl std::fmt::Display for Path {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "->")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A vertex separator together with the two sides it separates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutWitness {
    pub separator: VertexSet,
    /// Everything reachable from the source once the separator is deleted.
    pub side_from: VertexSet,
    pub side_to: VertexSet,
}

/// Vertices reachable from `start` in `t - removed`, optionally following arcs
/// backwards.
pub(crate) fn reach(t: &Tournament, start: Vertex, removed: &[bool], backwards: bool) -> Vec<bool> {
    let n = t.n();
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for w in 0..n {
            let adjacent = if backwards { t.arc(w, u) } else { t.arc(u, w) };
            if adjacent && !seen[w] && !removed[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

pub fn is_strong(t: &Tournament) -> Result<bool> {
    if t.n() == 0 {
        return invalid("strong connectivity of an empty tournament");
    }
    let none = vec![false; t.n()];
    Ok(reach(t, 0, &none, false).iter().all(|&r| r) && reach(t, 0, &none, true).iter().all(|&r| r))
}

/// Split network over the whole tournament, reused across vertex pairs.
struct PairNetwork {
    net: FlowNetwork,
}

impl PairNetwork {
    fn new(t: &Tournament) -> Self {
        let n = t.n();
        let mut net = FlowNetwork::new(2 * n);
        for v in 0..n {
            net.add_edge(2 * v, 2 * v + 1, 1);
        }
        for u in 0..n {
            for v in 0..n {
                if t.arc(u, v) {
                    net.add_edge(2 * u + 1, 2 * v, INF);
                }
            }
        }
        PairNetwork { net }
    }

    /// Internally disjoint `s -> t` paths, at most `limit`.
    fn flow(&mut self, s: Vertex, t: Vertex, limit: usize) -> usize {
        self.net.reset();
        self.net.max_flow(2 * s + 1, 2 * t, limit)
    }
}

/// Largest `k` such that `t` is k-strong; 0 iff `t` is not strong.
///
/// The minimum over non-adjacent ordered pairs is attained at a pair whose
/// first or second vertex lies outside a minimum separator. Any `kappa + 1`
/// vertices contain such a vertex, so scanning stops once more vertices have
/// been processed than the current bound.
pub fn vertex_connectivity(t: &Tournament) -> Result<usize> {
    let n = t.n();
    if n < 2 {
        return invalid(format!("vertex connectivity needs n >= 2, got {n}"));
    }
    let mut net = PairNetwork::new(t);
    let mut best = n - 1;
    for v in 0..n {
        if v > best {
            break;
        }
        for w in 0..n {
            if w == v {
                continue;
            }
            // Exactly one of (v, w), (w, v) lacks an arc.
            let k = if t.arc(v, w) { net.flow(w, v, best) } else { net.flow(v, w, best) };
            best = best.min(k);
            if best == 0 {
                return Ok(0);
            }
        }
    }
    Ok(best)
}

/// Reference implementation of [`vertex_connectivity`]: the minimum over
/// every ordered pair lacking a forward arc.
pub fn vertex_connectivity_all_pairs(t: &Tournament) -> Result<usize> {
    let n = t.n();
    if n < 2 {
        return invalid(format!("vertex connectivity needs n >= 2, got {n}"));
    }
    let mut net = PairNetwork::new(t);
    let mut best = n - 1;
    for u in 0..n {
        for v in 0..n {
            if u != v && !t.arc(u, v) {
                best = best.min(net.flow(u, v, usize::MAX));
            }
        }
    }
    Ok(best)
}

/// At least `k + 1` vertices and strongly connected after deleting any
/// `k - 1` of them.
pub fn is_k_strong(t: &Tournament, k: usize) -> Result<bool> {
    if k < 1 {
        return invalid("k-strong needs k >= 1");
    }
    let n = t.n();
    if n < k + 1 {
        return Ok(false);
    }
    // A separator of size < k misses one of any k vertices.
    let mut net = PairNetwork::new(t);
    for v in 0..k {
        for w in 0..n {
            if w == v {
                continue;
            }
            let f = if t.arc(v, w) { net.flow(w, v, k) } else { net.flow(v, w, k) };
            if f < k {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Minimum vertex separator between `s` and `t`.
pub fn min_vertex_cut(tour: &Tournament, s: Vertex, t: Vertex) -> Result<CutWitness> {
    let n = tour.n();
    if s >= n || t >= n || s == t {
        return invalid(format!("bad cut endpoints ({s},{t}) for n={n}"));
    }
    if tour.arc(s, t) {
        return Err(Error::Uncuttable { s, t });
    }
    let mut pn = PairNetwork::new(tour);
    pn.flow(s, t, usize::MAX);
    let res = pn.net.residual_reach(2 * s + 1);
    let separator: VertexSet = (0..n)
        .filter(|&v| v != s && v != t && res[2 * v] && !res[2 * v + 1])
        .collect();

    let mut removed = vec![false; n];
    separator.iter().for_each(|v| removed[v] = true);
    let from = reach(tour, s, &removed, false);
    let side_from: VertexSet = (0..n).filter(|&v| from[v]).collect();
    let side_to = tour.vertices().difference(&side_from).difference(&separator);
    if !side_to.contains(t) {
        return Err(Error::Internal(format!("cut {separator} does not separate {s} from {t}")));
    }
    Ok(CutWitness {
        separator,
        side_from,
        side_to,
    })
}

/// Number of internally disjoint `s -> t` paths (non-adjacent pairs only).
pub fn local_connectivity(tour: &Tournament, s: Vertex, t: Vertex) -> Result<usize> {
    Ok(min_vertex_cut(tour, s, t)?.separator.len())
}

/// A maximum family of fully vertex-disjoint paths from `sources` to `sinks`.
///
/// Each path starts at its only vertex in `sources` and ends at its only
/// vertex in `sinks`.
pub fn max_disjoint_paths_between_sets(
    t: &Tournament,
    sources: &VertexSet,
    sinks: &VertexSet,
) -> Result<Vec<Path>> {
    set_flow(t, sources, sinks, usize::MAX)
}

/// `k` fully vertex-disjoint paths from `sources` to `sinks`, or `None` when
/// fewer exist.
pub fn disjoint_paths_between_sets(
    t: &Tournament,
    sources: &VertexSet,
    sinks: &VertexSet,
    k: usize,
) -> Result<Option<Vec<Path>>> {
    if k < 1 || sources.len() < k || sinks.len() < k {
        return invalid(format!(
            "need k >= 1 and both sets of size >= k (k={k}, |S|={}, |Z|={})",
            sources.len(),
            sinks.len()
        ));
    }
    let paths = set_flow(t, sources, sinks, k)?;
    Ok((paths.len() == k).then_some(paths))
}

fn set_flow(t: &Tournament, sources: &VertexSet, sinks: &VertexSet, limit: usize) -> Result<Vec<Path>> {
    let n = t.n();
    if sources.is_empty() || sinks.is_empty() {
        return invalid("source and sink sets must be nonempty");
    }
    if !sources.is_disjoint(sinks) {
        return invalid(format!("source set {sources} meets sink set {sinks}"));
    }
    if let Some(v) = sources.iter().chain(sinks.iter()).find(|&v| v >= n) {
        return invalid(format!("vertex {v} out of range for n={n}"));
    }

    let (src, snk) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    // Sinks have no v_in -> v_out edge: a path stops at the first sink it meets.
    for v in 0..n {
        if !sinks.contains(v) {
            net.add_edge(2 * v, 2 * v + 1, 1);
        }
    }
    for u in 0..n {
        for v in 0..n {
            if t.arc(u, v) {
                net.add_edge(2 * u + 1, 2 * v, INF);
            }
        }
    }
    let mut starts = Vec::new();
    for s in sources {
        starts.push(net.add_edge(src, 2 * s, 1));
    }
    for z in sinks {
        net.add_edge(2 * z, snk, 1);
    }
    net.max_flow(src, snk, limit);

    let mut paths = Vec::new();
    for (e, s) in starts.into_iter().zip(sources.iter()) {
        if net.flow(e) == 0 {
            continue;
        }
        let mut path = vec![s];
        let mut v = s;
        while !sinks.contains(v) {
            let next = net
                .edges_from(2 * v + 1)
                .find(|&(e, w)| net.is_forward(e) && w < 2 * n && net.flow(e) > 0)
                .map(|(_, w)| w / 2)
                .ok_or_else(|| Error::Internal(format!("flow leaks at vertex {v}")))?;
            path.push(next);
            v = next;
        }
        let from = path.iter().rposition(|&v| sources.contains(v)).unwrap_or(0);
        paths.push(Path(path.split_off(from)));
    }
    Ok(paths)
}
