//! Exhaustive linkage search for small instances.
//!
//! Depth-first backtracking: path `i` is extended one vertex at a time, lowest
//! id first, and a branch is dropped as soon as some unfinished pair can no
//! longer reach its sink through the vertices still free. Absence of a result
//! is therefore a proof that no linkage exists.

use serde::{Deserialize, Serialize};

use crate::connectivity::Path;
use crate::error::{invalid, Error, Result};
use crate::tournament::{Tournament, Vertex, VertexSet};

/// Largest vertex pool the solver accepts (one machine word per mask).
pub const MAX_SOLVER_VERTICES: usize = 64;

/// Pairwise vertex-disjoint paths, path `i` running from `pairs[i].0` to
/// `pairs[i].1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub pairs: Vec<(Vertex, Vertex)>,
    pub paths: Vec<Path>,
}

impl Linkage {
    pub fn sources(&self) -> Vec<Vertex> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn sinks(&self) -> Vec<Vertex> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn to_root(&self, view: &Tournament) -> Linkage {
        Linkage {
            pairs: self.pairs.iter().map(|&(s, t)| (view.label(s), view.label(t))).collect(),
            paths: self.paths.iter().map(|p| p.to_root(view)).collect(),
        }
    }
}

/// Linkage file format: `{"k", "sources", "sinks", "paths"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkageDocument {
    pub k: usize,
    pub sources: Vec<Vertex>,
    pub sinks: Vec<Vertex>,
    pub paths: Vec<Path>,
}

impl From<&Linkage> for LinkageDocument {
    fn from(l: &Linkage) -> Self {
        LinkageDocument {
            k: l.pairs.len(),
            sources: l.sources(),
            sinks: l.sinks(),
            paths: l.paths.clone(),
        }
    }
}

impl LinkageDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("linkage serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: LinkageDocument =
            serde_json::from_str(s).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        if doc.sources.len() != doc.k || doc.sinks.len() != doc.k {
            return invalid(format!(
                "k={} but {} sources and {} sinks",
                doc.k,
                doc.sources.len(),
                doc.sinks.len()
            ));
        }
        Ok(doc)
    }
}

/// Reusable exact solver over a fixed vertex pool of one tournament.
pub struct LinkageSolver<'a> {
    tour: &'a Tournament,
    /// Compact index -> tournament vertex.
    pool: Vec<Vertex>,
    /// Tournament vertex -> compact index.
    index: Vec<Option<usize>>,
    out: Vec<u64>,
    budget: Option<u64>,
    visited: u64,
}

struct Frame<'p> {
    sources: &'p [usize],
    sinks: &'p [usize],
}

impl<'a> LinkageSolver<'a> {
    /// Solver restricted to `allowed` (all vertices when `None`).
    pub fn new(tour: &'a Tournament, allowed: Option<&VertexSet>) -> Result<Self> {
        let pool: Vec<Vertex> = match allowed {
            Some(a) => {
                if let Some(v) = a.iter().find(|&v| v >= tour.n()) {
                    return invalid(format!("allowed vertex {v} out of range"));
                }
                a.to_vec()
            }
            None => (0..tour.n()).collect(),
        };
        if pool.len() > MAX_SOLVER_VERTICES {
            return Err(Error::InstanceTooLarge(format!(
                "exact solver handles at most {MAX_SOLVER_VERTICES} vertices, got {}",
                pool.len()
            )));
        }
        let mut index = vec![None; tour.n()];
        for (i, &v) in pool.iter().enumerate() {
            index[v] = Some(i);
        }
        let out = pool
            .iter()
            .map(|&u| {
                pool.iter()
                    .enumerate()
                    .filter(|&(_, &w)| tour.arc(u, w))
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        Ok(LinkageSolver {
            tour,
            pool,
            index,
            out,
            budget: None,
            visited: 0,
        })
    }

    /// Caps the total number of search nodes over all subsequent solves.
    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn visited(&self) -> u64 {
        self.visited
    }

    fn all(&self) -> u64 {
        if self.pool.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.pool.len()) - 1
        }
    }

    /// First linkage in lexicographic search order, or `None` if none exists.
    pub fn solve(&mut self, pairs: &[(Vertex, Vertex)]) -> Result<Option<Linkage>> {
        if pairs.is_empty() {
            return invalid("linkage needs at least one pair");
        }
        if let Some(&(s, _)) = pairs.iter().find(|(s, t)| s == t) {
            return invalid(format!("pair ({s},{s}) has equal endpoints"));
        }
        let mut sources = Vec::with_capacity(pairs.len());
        let mut sinks = Vec::with_capacity(pairs.len());
        for &(s, t) in pairs {
            for v in [s, t] {
                if v >= self.tour.n() || self.index[v].is_none() {
                    return invalid(format!("endpoint {v} is not an allowed vertex"));
                }
            }
            sources.push(self.index[s].unwrap());
            sinks.push(self.index[t].unwrap());
        }
        // Paths are disjoint including endpoints, so a shared endpoint rules out any linkage.
        let mut endpoints: Vec<Vertex> = pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
        endpoints.sort_unstable();
        if endpoints.windows(2).any(|w| w[0] == w[1]) {
            return Ok(None);
        }
        let reserved = sources.iter().chain(&sinks).fold(0u64, |m, &v| m | 1 << v);
        let frame = Frame {
            sources: &sources,
            sinks: &sinks,
        };
        let free = self.all() & !reserved;
        if !(0..pairs.len()).all(|j| self.reaches(sources[j], sinks[j], free)) {
            return Ok(None);
        }

        let mut done: Vec<Vec<usize>> = Vec::with_capacity(pairs.len());
        let mut current = vec![sources[0]];
        if !self.dfs(&frame, 0, &mut current, &mut done, free)? {
            return Ok(None);
        }
        let paths = done
            .into_iter()
            .map(|p| Path::new(p.into_iter().map(|i| self.pool[i]).collect()))
            .collect();
        Ok(Some(Linkage {
            pairs: pairs.to_vec(),
            paths,
        }))
    }

    /// Whether `to` is reachable from `from` using only `via` as inner vertices.
    fn reaches(&self, from: usize, to: usize, via: u64) -> bool {
        let target = 1u64 << to;
        let mut seen = 1u64 << from;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.out[v];
            }
            if next & target != 0 {
                return true;
            }
            next &= via & !seen;
            seen |= next;
            frontier = next;
        }
        false
    }

    fn dfs(
        &mut self,
        frame: &Frame<'_>,
        pair: usize,
        current: &mut Vec<usize>,
        done: &mut Vec<Vec<usize>>,
        free: u64,
    ) -> Result<bool> {
        self.visited += 1;
        if let Some(b) = self.budget {
            if self.visited > b {
                return Err(Error::BudgetExhausted { visited: self.visited });
            }
        }
        let head = *current.last().unwrap();
        let sink = frame.sinks[pair];
        let mut cand = self.out[head] & (free | 1 << sink);
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if w == sink {
                current.push(w);
                done.push(std::mem::take(current));
                if pair + 1 == frame.sources.len() {
                    return Ok(true);
                }
                current.push(frame.sources[pair + 1]);
                if self.dfs(frame, pair + 1, current, done, free)? {
                    return Ok(true);
                }
                *current = done.pop().unwrap();
                current.pop();
                continue;
            }
            let rest = free & !(1 << w);
            if !self.reaches(w, sink, rest) {
                continue;
            }
            if !((pair + 1)..frame.sources.len())
                .all(|j| self.reaches(frame.sources[j], frame.sinks[j], rest))
            {
                continue;
            }
            current.push(w);
            if self.dfs(frame, pair, current, done, rest)? {
                return Ok(true);
            }
            current.pop();
        }
        Ok(false)
    }
}

/// Disjoint `(source, sink)` paths inside `allowed` (default: everything).
pub fn find_linkage(
    tour: &Tournament,
    pairs: &[(Vertex, Vertex)],
    allowed: Option<&VertexSet>,
) -> Result<Option<Linkage>> {
    LinkageSolver::new(tour, allowed)?.solve(pairs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLinkedReport {
    pub linked: bool,
    /// A choice of pairs admitting no linkage, when `linked` is false.
    pub witness: Option<Vec<(Vertex, Vertex)>>,
}

/// Brute-force k-linkedness: every choice of `k` disjoint source/sink pairs
/// must admit a linkage.
///
/// Refuses `k > 3` or `n > 16` unless `force` is set. Sources are tried in
/// increasing out-degree and sinks in increasing in-degree, so violations
/// tend to surface early.
pub fn is_k_linked_bruteforce(tour: &Tournament, k: usize, force: bool) -> Result<KLinkedReport> {
    let n = tour.n();
    if k < 1 {
        return invalid("k-linkedness needs k >= 1");
    }
    if n < 2 * k {
        return invalid(format!("k-linkedness needs n >= 2k (n={n}, k={k})"));
    }
    if !force && (k > 3 || n > 16) {
        return Err(Error::InstanceTooLarge(format!(
            "brute-force k-linkedness refuses k > 3 or n > 16 (k={k}, n={n})"
        )));
    }
    let mut by_out: Vec<Vertex> = (0..n).collect();
    by_out.sort_by_key(|&v| (tour.out_degree(v), v));
    let mut by_in: Vec<Vertex> = (0..n).collect();
    by_in.sort_by_key(|&v| (tour.in_degree(v), v));

    let mut solver = LinkageSolver::new(tour, None)?;
    let mut chosen = Vec::with_capacity(k);
    let mut witness = None;
    source_sets(&by_out, k, 0, &mut chosen, &mut |sources| {
        let mut used: Vec<bool> = vec![false; n];
        sources.iter().for_each(|&s| used[s] = true);
        let mut sinks = Vec::with_capacity(k);
        sink_tuples(&by_in, k, &mut used, &mut sinks, &mut |sinks| {
            let pairs: Vec<_> = sources.iter().copied().zip(sinks.iter().copied()).collect();
            match solver.solve(&pairs) {
                Ok(Some(_)) => Ok(true),
                Ok(None) => {
                    witness = Some(pairs);
                    Ok(false)
                }
                Err(e) => Err(e),
            }
        })
    })?;
    Ok(KLinkedReport {
        linked: witness.is_none(),
        witness,
    })
}

/// Calls `f` on each `k`-subset of `order` (in order positions); stops when
/// `f` returns false.
fn source_sets(
    order: &[Vertex],
    k: usize,
    start: usize,
    chosen: &mut Vec<Vertex>,
    f: &mut dyn FnMut(&[Vertex]) -> Result<bool>,
) -> Result<bool> {
    if chosen.len() == k {
        return f(chosen);
    }
    for i in start..order.len() {
        chosen.push(order[i]);
        let go = source_sets(order, k, i + 1, chosen, f)?;
        chosen.pop();
        if !go {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sink_tuples(
    order: &[Vertex],
    k: usize,
    used: &mut [bool],
    chosen: &mut Vec<Vertex>,
    f: &mut dyn FnMut(&[Vertex]) -> Result<bool>,
) -> Result<bool> {
    if chosen.len() == k {
        return f(chosen);
    }
    for &v in order {
        if used[v] {
            continue;
        }
        used[v] = true;
        chosen.push(v);
        let go = sink_tuples(order, k, used, chosen, f)?;
        chosen.pop();
        used[v] = false;
        if !go {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::is_strong;

    fn c3() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tt3() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn single_pair() {
        let l = find_linkage(&c3(), &[(0, 2)], None).unwrap().unwrap();
        assert_eq!(l.paths, vec![Path::new(vec![0, 1, 2])]);
        assert!(find_linkage(&tt3(), &[(2, 0)], None).unwrap().is_none());
    }

    #[test]
    fn c3_two_pairs_impossible() {
        assert!(find_linkage(&c3(), &[(0, 2), (1, 0)], None).unwrap().is_none());
    }

    #[test]
    fn endpoint_errors() {
        assert!(find_linkage(&c3(), &[(0, 0)], None).is_err());
        assert!(find_linkage(&c3(), &[(0, 1), (1, 2)], None).unwrap().is_none());
        assert!(find_linkage(&c3(), &[(0, 5)], None).is_err());
        assert!(find_linkage(&c3(), &[(0, 2)], Some(&[0, 1].into())).is_err());
        assert!(find_linkage(&c3(), &[], None).is_err());
    }

    #[test]
    fn allowed_set_restricts_inner_vertices() {
        // 0 -> 2 only through 1 in C3.
        assert!(find_linkage(&c3(), &[(0, 2)], Some(&[0, 2].into())).unwrap().is_none());
    }

    #[test]
    fn budget_is_reported() {
        let t = Tournament::from_fn(10, |i, j| (i + j) % 3 != 0);
        let mut s = LinkageSolver::new(&t, None).unwrap().with_budget(Some(0));
        assert!(matches!(s.solve(&[(0, 1)]), Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn k1_small() {
        assert!(is_k_linked_bruteforce(&c3(), 1, false).unwrap().linked);
        let r = is_k_linked_bruteforce(&tt3(), 1, false).unwrap();
        assert!(!r.linked);
        assert_eq!(r.witness, Some(vec![(2, 0)]));
        assert!(is_k_linked_bruteforce(&c3(), 2, false).is_err());
        let big = Tournament::from_fn(17, |i, j| (i + j) % 2 == 0);
        assert!(matches!(is_k_linked_bruteforce(&big, 1, false), Err(Error::InstanceTooLarge(_))));
        assert_eq!(
            is_k_linked_bruteforce(&big, 1, true).unwrap().linked,
            is_strong(&big).unwrap()
        );
    }
}
