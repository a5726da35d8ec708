//! Fixed values on small named tournaments, each checked against a
//! brute-force computation that shares no code with the library.

use itertools::Itertools;
use tourlink::anchoring::{anchoring_linkage, anchors, find_anchored_pair, AnchorSearch};
use tourlink::connectivity::{disjoint_paths_between_sets, is_k_strong, min_vertex_cut, vertex_connectivity};
use tourlink::exact::{find_linkage, is_k_linked_bruteforce};
use tourlink::generate::{paley_tournament, random_tournament};
use tourlink::linker::{build_stages, choose_anchored_core, AssertionLog, LinkMode};
use tourlink::verify::verify_linkage;
use tourlink::{Path, Tournament, VertexSet};

fn strong_without(t: &Tournament, removed: &[usize]) -> bool {
    let alive: Vec<usize> = (0..t.n()).filter(|v| !removed.contains(v)).collect();
    let Some(&start) = alive.first() else { return false };
    let closure = |fwd: bool| {
        let mut seen = vec![start];
        let mut i = 0;
        while i < seen.len() {
            let u = seen[i];
            for &w in &alive {
                let arc = if fwd { t.arc(u, w) } else { t.arc(w, u) };
                if arc && !seen.contains(&w) {
                    seen.push(w);
                }
            }
            i += 1;
        }
        seen.len()
    };
    closure(true) == alive.len() && closure(false) == alive.len()
}

/// Largest `k` with `n >= k+1` and strong after removing any `k-1` vertices.
fn kappa_by_removal(t: &Tournament) -> usize {
    let mut k = 0;
    while k + 2 <= t.n() && (0..t.n()).combinations(k).all(|w| strong_without(t, &w)) {
        k += 1;
    }
    k
}

fn simple_paths(t: &Tournament, from: usize, to: usize) -> Vec<Vec<usize>> {
    fn go(t: &Tournament, path: &mut Vec<usize>, to: usize, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == to {
            out.push(path.clone());
            return;
        }
        for w in 0..t.n() {
            if t.arc(u, w) && !path.contains(&w) {
                path.push(w);
                go(t, path, to, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut vec![from], to, &mut out);
    out
}

/// Plain backtracking: route pair 0 every possible way, then the rest.
fn linkable(t: &Tournament, pairs: &[(usize, usize)]) -> bool {
    fn route(t: &Tournament, pairs: &[(usize, usize)], used: &mut Vec<bool>, at: usize) -> bool {
        let Some(&(_, sink)) = pairs.first() else { return true };
        if at == sink {
            return route_next(t, &pairs[1..], used);
        }
        for w in 0..t.n() {
            if t.arc(at, w) && !used[w] && (w == sink || !pairs[1..].iter().any(|&(a, b)| a == w || b == w)) {
                used[w] = true;
                if route(t, pairs, used, w) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    fn route_next(t: &Tournament, pairs: &[(usize, usize)], used: &mut Vec<bool>) -> bool {
        match pairs.first() {
            None => true,
            Some(&(s, _)) => route(t, pairs, used, s),
        }
    }
    let mut used = vec![false; t.n()];
    for &(s, z) in pairs {
        used[s] = true;
        used[z] = false;
    }
    // Sinks are marked used only once their own path reaches them.
    route_next(t, pairs, &mut used)
}

#[test]
fn paley7_connectivity_is_3() {
    let t = paley_tournament(7).unwrap();
    assert_eq!(kappa_by_removal(&t), 3);
    assert_eq!(vertex_connectivity(&t).unwrap(), 3);
    assert!(is_k_strong(&t, 3).unwrap());
    assert!(!is_k_strong(&t, 4).unwrap());
}

#[test]
fn paley11_connectivity_is_5() {
    let t = paley_tournament(11).unwrap();
    assert_eq!(kappa_by_removal(&t), 5);
    assert_eq!(vertex_connectivity(&t).unwrap(), 5);
}

#[test]
fn kappa_matches_removal_on_random() {
    for seed in 0..60 {
        let t = random_tournament(3 + seed as usize % 7, seed).unwrap();
        assert_eq!(vertex_connectivity(&t).unwrap(), kappa_by_removal(&t), "seed {seed}");
    }
}

#[test]
fn paley7_cut_between_0_and_3() {
    let t = paley_tournament(7).unwrap();
    let cut = min_vertex_cut(&t, 0, 3).unwrap();
    assert_eq!(cut.separator, VertexSet::from([1, 2, 4]));
    // No 2-set avoiding 0 and 3 blocks every 0 -> 3 path.
    for w in (0..7).filter(|&v| v != 0 && v != 3).combinations(2) {
        assert!(simple_paths(&t, 0, 3).iter().any(|p| p.iter().all(|v| !w.contains(v))));
    }
    assert!(simple_paths(&t, 0, 3).iter().all(|p| p[1..p.len() - 1].iter().any(|v| cut.separator.contains(*v))));
}

#[test]
fn paley7_three_disjoint_set_paths() {
    let t = paley_tournament(7).unwrap();
    let s = VertexSet::from([0, 1, 2]);
    let z = VertexSet::from([4, 5, 6]);
    let paths = disjoint_paths_between_sets(&t, &s, &z, 3).unwrap().unwrap();
    let all: Vec<usize> = paths.iter().flat_map(|p| p.vertices().to_vec()).collect();
    assert!(all.iter().all_unique());
    assert!(paths.iter().all(|p| p.is_valid_in(&t)));
    for w in (0..7).combinations(2) {
        let ok = paths.iter().any(|p| p.vertices().iter().all(|v| !w.contains(v)));
        assert!(ok, "a 2-set cannot block three disjoint paths");
    }
}

#[test]
fn paley7_linkage_0_3_and_1_5() {
    let t = paley_tournament(7).unwrap();
    assert!(linkable(&t, &[(0, 3), (1, 5)]));
    let l = find_linkage(&t, &[(0, 3), (1, 5)], None).unwrap().unwrap();
    assert_eq!(l.paths, vec![Path::new(vec![0, 2, 3]), Path::new(vec![1, 5])]);
    assert!(verify_linkage(&t, &[0, 1], &[3, 5], &l.paths).passed());
}

#[test]
fn paley7_is_not_2_linked() {
    let t = paley_tournament(7).unwrap();
    assert!(!linkable(&t, &[(0, 3), (1, 4)]));
    let r = is_k_linked_bruteforce(&t, 2, false).unwrap();
    assert!(!r.linked);
    assert_eq!(r.witness, Some(vec![(0, 3), (1, 4)]));
}

#[test]
fn find_linkage_agrees_with_path_enumeration() {
    for seed in 0..40 {
        let n = 5 + seed as usize % 3;
        let t = random_tournament(n, seed).unwrap();
        for v in (0..n).permutations(4).step_by(7) {
            let pairs = [(v[0], v[1]), (v[2], v[3])];
            let found = find_linkage(&t, &pairs, None).unwrap();
            assert_eq!(found.is_some(), linkable(&t, &pairs), "seed {seed} {pairs:?}");
            if let Some(l) = found {
                assert!(verify_linkage(&t, &[v[0], v[2]], &[v[1], v[3]], &l.paths).passed());
            }
        }
    }
}

#[test]
fn paley7_anchors_01_to_35() {
    let t = paley_tournament(7).unwrap();
    assert!(linkable(&t, &[(0, 3), (1, 5)]));
    assert!(linkable(&t, &[(0, 5), (1, 3)]));
    assert!(anchors(&t, &[0, 1], &[3, 5]).unwrap());

    let swap = find_linkage(&t, &[(0, 5), (1, 3)], None).unwrap().unwrap();
    assert_eq!(swap.paths, vec![Path::new(vec![0, 2, 4, 5]), Path::new(vec![1, 3])]);
}

#[test]
fn anchoring_linkage_follows_permutation() {
    let t = random_tournament(12, 42).unwrap();
    let AnchorSearch::Found(pair) = find_anchored_pair(&t, 2, None).unwrap() else {
        panic!("no anchored pair on 12 vertices");
    };
    assert_eq!((pair.x.clone(), pair.y.clone()), (vec![0, 1], vec![2, 10]));
    for perm in [[0, 1], [1, 0]] {
        let pairs: Vec<(usize, usize)> = (0..2).map(|i| (pair.x[i], pair.y[perm[i]])).collect();
        assert!(linkable(&t, &pairs));
        let l = anchoring_linkage(&t, &pair, &perm).unwrap();
        assert_eq!(l.pairs, pairs);
        assert!(verify_linkage(&t, &l.sources(), &l.sinks(), &l.paths).passed());
    }
}

#[test]
fn random30_core_selection() {
    let t = random_tournament(30, 7).unwrap();
    let mut log = AssertionLog::new(LinkMode::Unchecked);
    let stages = build_stages(&t, &[0], &[1], 1, &mut log).unwrap();
    let uv: Vec<(usize, usize)> = stages.iter().map(|s| (s.u, s.v)).collect();
    assert_eq!(uv, vec![(18, 20), (26, 6), (10, 15)]);
    let core = choose_anchored_core(&t, &stages, 1, None, &mut log).unwrap();
    assert_eq!((core.vp.clone(), core.vpp.clone(), core.up.clone()), (vec![15], vec![6], vec![10]));
    assert_eq!(core.vstar, VertexSet::from([20]));
    let view = t.induced(&VertexSet::from([6, 15, 20])).unwrap();
    let (a, b) = (view.local_of(15).unwrap(), view.local_of(6).unwrap());
    assert!(linkable(&view, &[(a, b)]));
    assert_eq!(log.failures().count(), 0);
}
