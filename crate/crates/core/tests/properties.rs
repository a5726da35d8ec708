use proptest::prelude::*;
use tourlink::connectivity::{
    is_k_strong, is_strong, local_connectivity, max_disjoint_paths_between_sets, min_vertex_cut, vertex_connectivity,
    vertex_connectivity_all_pairs,
};
use tourlink::exact::{find_linkage, is_k_linked_bruteforce};
use tourlink::generate::{random_terminals, random_tournament};
use tourlink::linker::{link, LinkMode, LinkOptions};
use tourlink::verify::verify_linkage;
use tourlink::{Error, Tournament, VertexSet};

fn tournament(max_n: usize) -> impl Strategy<Value = Tournament> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_tournament(n, seed).unwrap())
}

fn subset(n: usize) -> impl Strategy<Value = VertexSet> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|bits| {
        bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trn1_round_trip(t in tournament(20)) {
        let back = Tournament::from_trn1(&t.to_trn1()).unwrap();
        prop_assert!(back.same_orientation(&t));
        prop_assert_eq!(back.to_trn1(), t.to_trn1());
    }

    #[test]
    fn induced_views_keep_root_labels((t, x) in tournament(14).prop_flat_map(|t| { let n = t.n(); (Just(t), subset(n)) })) {
        let view = t.induced(&x).unwrap();
        prop_assert_eq!(view.n(), x.len());
        view.check_invariants().unwrap();
        for a in 0..view.n() {
            prop_assert!(x.contains(view.label(a)));
            for b in 0..view.n() {
                if a != b {
                    prop_assert_eq!(view.arc(a, b), t.arc(view.label(a), view.label(b)));
                }
            }
        }
        let rest = t.remove(&x).unwrap();
        let nested = rest.induced(&(0..rest.n()).filter(|v| v % 2 == 0).collect()).unwrap();
        for a in 0..nested.n() {
            prop_assert!(!x.contains(nested.label(a)));
            prop_assert_eq!(nested.label(a), rest.label(2 * a));
        }
    }

    #[test]
    fn connectivity_reduction_matches_all_pairs(t in tournament(10)) {
        prop_assume!(t.n() >= 2);
        let kappa = vertex_connectivity(&t).unwrap();
        prop_assert_eq!(kappa, vertex_connectivity_all_pairs(&t).unwrap());
        prop_assert_eq!(kappa > 0, is_strong(&t).unwrap());
        for k in 1..=kappa + 1 {
            prop_assert_eq!(is_k_strong(&t, k).unwrap(), k <= kappa);
        }
    }

    #[test]
    fn min_cut_separates(t in tournament(12), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        prop_assume!(t.n() >= 3);
        let (s, z) = (a.index(t.n()), b.index(t.n()));
        prop_assume!(s != z && !t.arc(s, z));
        let cut = min_vertex_cut(&t, s, z).unwrap();
        prop_assert_eq!(cut.separator.len(), local_connectivity(&t, s, z).unwrap());
        prop_assert!(!cut.separator.contains(s) && !cut.separator.contains(z));
        let rest = t.remove(&cut.separator).unwrap();
        let (ls, lz) = (rest.local_of(s).unwrap(), rest.local_of(z).unwrap());
        let single = |v| [v].into_iter().collect::<VertexSet>();
        prop_assert!(max_disjoint_paths_between_sets(&rest, &single(ls), &single(lz)).unwrap().is_empty());
    }

    #[test]
    fn set_paths_are_disjoint_and_valid(t in tournament(14), seed in any::<u64>(), k in 1usize..4) {
        prop_assume!(t.n() >= 2 * k);
        let (s, z) = random_terminals(t.n(), k, seed).unwrap();
        let (s, z): (VertexSet, VertexSet) = (s.into_iter().collect(), z.into_iter().collect());
        let paths = max_disjoint_paths_between_sets(&t, &s, &z).unwrap();
        prop_assert!(paths.len() <= k);
        let mut seen = VertexSet::new();
        for p in &paths {
            prop_assert!(p.is_valid_in(&t));
            prop_assert!(s.contains(p.first().unwrap()) && z.contains(p.last().unwrap()));
            prop_assert!(p.inner().iter().all(|&v| !s.contains(v) && !z.contains(v)));
            for &v in p.vertices() {
                prop_assert!(seen.insert(v));
            }
        }
    }

    #[test]
    fn exact_solver_output_verifies(t in tournament(9), seed in any::<u64>()) {
        prop_assume!(t.n() >= 4);
        let (s, z) = random_terminals(t.n(), 2, seed).unwrap();
        let pairs = [(s[0], z[0]), (s[1], z[1])];
        if let Some(l) = find_linkage(&t, &pairs, None).unwrap() {
            prop_assert!(verify_linkage(&t, &s, &z, &l.paths).passed());
        }
        let everything = t.vertices();
        prop_assert_eq!(
            find_linkage(&t, &pairs, Some(&everything)).unwrap().is_some(),
            find_linkage(&t, &pairs, None).unwrap().is_some()
        );
    }

    #[test]
    fn allowed_pool_matches_induced_view((t, x, seed) in tournament(9).prop_flat_map(|t| { let n = t.n(); (Just(t), subset(n), any::<u64>()) })) {
        prop_assume!(x.len() >= 4);
        let view = t.induced(&x).unwrap();
        let (s, z) = random_terminals(view.n(), 2, seed).unwrap();
        let local = [(s[0], z[0]), (s[1], z[1])];
        let root: Vec<(usize, usize)> = local.iter().map(|&(a, b)| (view.label(a), view.label(b))).collect();
        let pooled = find_linkage(&t, &root, Some(&x)).unwrap();
        let induced = find_linkage(&view, &local, None).unwrap();
        prop_assert_eq!(pooled.is_some(), induced.is_some());
        if let (Some(p), Some(i)) = (pooled, induced) {
            prop_assert_eq!(p, i.to_root(&view));
        }
    }

    #[test]
    fn one_linked_iff_strong(t in tournament(7)) {
        prop_assume!(t.n() >= 2);
        prop_assert_eq!(is_k_linked_bruteforce(&t, 1, false).unwrap().linked, is_strong(&t).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unchecked_link_never_returns_a_bad_linkage(n in 16usize..60, seed in any::<u64>(), k in 1usize..3) {
        let t = random_tournament(n, seed).unwrap();
        let (x0, y0) = random_terminals(n, k, seed ^ 1).unwrap();
        match link(&t, &x0, &y0, LinkOptions::new(LinkMode::Unchecked)) {
            Ok((l, trace)) => {
                prop_assert!(verify_linkage(&t, &x0, &y0, &l.paths).passed());
                prop_assert_eq!(trace.stages.len(), 9 * k - 6);
            }
            Err(Error::StageConstruction { .. })
            | Err(Error::SelectionExhausted(_))
            | Err(Error::MengerFailure { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn strict_link_below_threshold_is_refused(n in 4usize..30, seed in any::<u64>()) {
        let t = random_tournament(n, seed).unwrap();
        let (x0, y0) = random_terminals(n, 1, seed).unwrap();
        let refused = matches!(link(&t, &x0, &y0, LinkOptions::default()), Err(Error::PreconditionViolation(_)));
        prop_assert!(refused);
    }
}
