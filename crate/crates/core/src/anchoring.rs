//! Anchored vertex sets.
//!
//! `X` anchors `Y` when, for every bijection from `X` to `Y`, the pairs can be
//! joined by vertex-disjoint paths. A tournament on at least `9p - 6`
//! vertices always contains such a pair with `|X| = |Y| = p`; nothing here
//! constructs it directly, [`find_anchored_pair`] searches for it.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact::{Linkage, LinkageSolver};
use crate::tournament::{Tournament, Vertex, VertexSet};

/// Largest `p` accepted by [`anchors`] (p! linkage searches).
pub const MAX_ANCHOR_SIZE: usize = 4;

/// Smallest order for which an anchored pair of size `p` is guaranteed.
pub fn anchor_order_bound(p: usize) -> usize {
    (9 * p).saturating_sub(6)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchoredPair {
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    pub p: usize,
    /// Linkages computed so far, keyed by permutation (`x[i] -> y[perm[i]]`).
    #[serde(skip)]
    pub certificates: BTreeMap<Vec<usize>, Linkage>,
    pub candidates_examined: u64,
    pub nodes_visited: u64,
}

impl AnchoredPair {
    /// Linkage for `perm`, computed on first request and cached.
    pub fn certificate(&mut self, t: &Tournament, perm: &[usize]) -> Result<&Linkage> {
        if !self.certificates.contains_key(perm) {
            let l = anchoring_linkage(t, self, perm)?;
            self.certificates.insert(perm.to_vec(), l);
        }
        Ok(&self.certificates[perm])
    }

    /// Same pair with `X` listed in a different order; certificates are
    /// dropped since their keys depend on the order.
    pub fn reorder_x(&self, order: &[Vertex]) -> Result<AnchoredPair> {
        let mut a = order.to_vec();
        let mut b = self.x.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return invalid(format!("{order:?} is not a reordering of {:?}", self.x));
        }
        Ok(AnchoredPair {
            x: order.to_vec(),
            certificates: BTreeMap::new(),
            ..self.clone()
        })
    }
}

/// Outcome of [`find_anchored_pair`]. Running out of budget and exhausting
/// the candidate space are distinct results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnchorSearch {
    Found(AnchoredPair),
    BudgetExhausted { visited: u64 },
    /// Every candidate failed. `lemma_violation` is set when `n >= 9p - 6`,
    /// where a pair is guaranteed to exist.
    Exhausted { lemma_violation: bool },
}

fn check_sets(t: &Tournament, x: &[Vertex], y: &[Vertex]) -> Result<()> {
    if x.is_empty() || x.len() != y.len() {
        return invalid(format!("anchoring needs equal nonempty sets, got {} and {}", x.len(), y.len()));
    }
    let xs = VertexSet::from_distinct(x)?;
    let ys = VertexSet::from_distinct(y)?;
    if !xs.is_disjoint(&ys) {
        return invalid(format!("{xs} and {ys} intersect"));
    }
    if let Some(v) = x.iter().chain(y).find(|&&v| v >= t.n()) {
        return invalid(format!("vertex {v} out of range for n={}", t.n()));
    }
    Ok(())
}

fn pairs_for(x: &[Vertex], y: &[Vertex], perm: &[usize]) -> Vec<(Vertex, Vertex)> {
    x.iter().zip(perm).map(|(&a, &j)| (a, y[j])).collect()
}

/// Checks all `p!` permutations in lexicographic order, stopping at the
/// first failure.
fn anchors_with(solver: &mut LinkageSolver<'_>, x: &[Vertex], y: &[Vertex]) -> Result<bool> {
    for perm in (0..x.len()).permutations(x.len()) {
        if solver.solve(&pairs_for(x, y, &perm))?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `x` anchors `y` in `t`.
pub fn anchors(t: &Tournament, x: &[Vertex], y: &[Vertex]) -> Result<bool> {
    check_sets(t, x, y)?;
    if x.len() > MAX_ANCHOR_SIZE {
        return Err(Error::InstanceTooLarge(format!(
            "anchoring check refuses p > {MAX_ANCHOR_SIZE} (p={})",
            x.len()
        )));
    }
    let mut solver = LinkageSolver::new(t, None)?;
    anchors_with(&mut solver, x, y)
}

/// Disjoint paths `x[i] -> y[perm[i]]` for an anchored pair.
///
/// Every vertex of `X ∪ Y` is an endpoint, so inner vertices avoid both sets.
pub fn anchoring_linkage(t: &Tournament, pair: &AnchoredPair, perm: &[usize]) -> Result<Linkage> {
    check_sets(t, &pair.x, &pair.y)?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..pair.p).collect::<Vec<_>>() || pair.x.len() != pair.p {
        return invalid(format!("{perm:?} is not a permutation of 0..{}", pair.p));
    }
    find_linkage_or_not_anchored(t, &pairs_for(&pair.x, &pair.y, perm), perm)
}

fn find_linkage_or_not_anchored(t: &Tournament, pairs: &[(Vertex, Vertex)], perm: &[usize]) -> Result<Linkage> {
    LinkageSolver::new(t, None)?
        .solve(pairs)?
        .ok_or_else(|| Error::NotAnchored { perm: perm.to_vec() })
}

/// Searches for disjoint `X`, `Y` of size `p` with `X` anchoring `Y`.
///
/// Candidates are visited with `X` in lexicographic order and, for each `X`,
/// `Y` in lexicographic order among the remaining vertices. A first pass
/// only tries candidates where every `x` has an arc into `Y`; a second pass
/// covers the rest, so the filter affects ordering only. `budget` caps the
/// total number of exact-solver nodes.
pub fn find_anchored_pair(t: &Tournament, p: usize, budget: Option<u64>) -> Result<AnchorSearch> {
    if p < 1 {
        return invalid("anchored pair needs p >= 1");
    }
    let n = t.n();
    let lemma_violation = n >= anchor_order_bound(p);
    if 2 * p > n {
        return Ok(AnchorSearch::Exhausted { lemma_violation });
    }
    let mut solver = LinkageSolver::new(t, None)?.with_budget(budget);
    let mut examined = 0u64;
    for first_pass in [true, false] {
        for x in (0..n).combinations(p) {
            let rest: Vec<Vertex> = (0..n).filter(|v| !x.contains(v)).collect();
            for y in rest.iter().copied().combinations(p) {
                let promising = x.iter().all(|&a| y.iter().any(|&b| t.arc(a, b)));
                if promising != first_pass {
                    continue;
                }
                examined += 1;
                match anchors_with(&mut solver, &x, &y) {
                    Ok(true) => {
                        return Ok(AnchorSearch::Found(AnchoredPair {
                            x,
                            y,
                            p,
                            certificates: BTreeMap::new(),
                            candidates_examined: examined,
                            nodes_visited: solver.visited(),
                        }))
                    }
                    Ok(false) => {}
                    Err(Error::BudgetExhausted { visited }) => {
                        return Ok(AnchorSearch::BudgetExhausted { visited })
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(AnchorSearch::Exhausted { lemma_violation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn tt3() -> Tournament {
        Tournament::from_arcs(3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn singletons() {
        assert!(anchors(&tt3(), &[0], &[2]).unwrap());
        assert!(!anchors(&tt3(), &[2], &[0]).unwrap());
        assert!(anchors(&tt3(), &[0], &[0]).is_err());
        assert!(anchors(&tt3(), &[0, 1], &[2]).is_err());
    }

    #[test]
    fn c3_first_found() {
        match find_anchored_pair(&c3(), 1, None).unwrap() {
            AnchorSearch::Found(pair) => {
                assert_eq!((pair.x, pair.y), (vec![0], vec![1]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn too_small_is_not_a_violation() {
        let t = Tournament::from_fn(3, |_, _| true);
        assert_eq!(
            find_anchored_pair(&t, 2, None).unwrap(),
            AnchorSearch::Exhausted { lemma_violation: false }
        );
    }

    #[test]
    fn budget_distinct_from_exhaustion() {
        let t = Tournament::from_fn(12, |i, j| (i * 7 + j * 3) % 5 < 2);
        assert!(matches!(
            find_anchored_pair(&t, 2, Some(1)).unwrap(),
            AnchorSearch::BudgetExhausted { .. }
        ));
    }

    #[test]
    fn linkage_for_identity() {
        let pair = match find_anchored_pair(&tt3(), 1, None).unwrap() {
            AnchorSearch::Found(p) => p,
            other => panic!("{other:?}"),
        };
        let l = anchoring_linkage(&tt3(), &pair, &[0]).unwrap();
        assert_eq!(l.paths.len(), 1);
        assert!(anchoring_linkage(&tt3(), &pair, &[1]).is_err());

        let fake = AnchoredPair { x: vec![2], y: vec![0], ..pair };
        assert!(matches!(anchoring_linkage(&tt3(), &fake, &[0]), Err(Error::NotAnchored { .. })));
    }
}
