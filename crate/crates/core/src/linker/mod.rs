//! Constructive linkage for highly connected tournaments.
//!
//! Given a `(13k-6)`-strong tournament with minimum out-degree at least
//! `28k-13` and disjoint terminals `x_1..x_k`, `y_1..y_k`, the pipeline
//!
//! 1. peels off `9k-6` greedy pairs `(u_i, v_i)` ([`build_stages`]),
//! 2. finds `V'` anchoring `V''` among the `v_i` ([`choose_anchored_core`]),
//! 3. routes each `x_i` to `v'_i` in at most four hops ([`select_first_legs`]),
//! 4. routes `V''` to the sinks by a Menger step ([`route_terminal_legs`]),
//! 5. joins the two halves through the anchored pair ([`stitch`]).
//!
//! Every counting inequality the construction relies on is re-checked on the
//! concrete instance and recorded in an [`AssertionLog`].

mod trace;

pub use trace::*;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::anchoring::{anchoring_linkage, find_anchored_pair, AnchorSearch};
use crate::connectivity::{disjoint_paths_between_sets, is_k_strong, max_disjoint_paths_between_sets, Path};
use crate::error::{invalid, Error, Result};
use crate::exact::Linkage;
use crate::tournament::{Tournament, Vertex, VertexSet};
use crate::verify::verify_linkage;

/// Node budget for the anchored-pair search inside a link run.
pub const DEFAULT_ANCHOR_BUDGET: u64 = 200_000_000;

pub fn strong_threshold(k: usize) -> usize {
    13 * k - 6
}

pub fn degree_threshold(k: usize) -> usize {
    28 * k - 13
}

pub fn stage_count(k: usize) -> usize {
    9 * k - 6
}

fn half(d: usize) -> f64 {
    (d as f64 - 1.0) / 2.0
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionReport {
    pub k: usize,
    pub n: usize,
    pub strong_threshold: usize,
    pub degree_threshold: usize,
    pub k_strong: bool,
    pub min_out_degree: usize,
    pub degree_ok: bool,
}

impl PreconditionReport {
    pub fn ok(&self) -> bool {
        self.k_strong && self.degree_ok
    }
}

impl fmt::Display for PreconditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strong = if self.k_strong { "" } else { "not " };
        let cmp = if self.degree_ok { ">=" } else { "<" };
        write!(
            f,
            "{strong}{}-strong; minimum out-degree {} {cmp} {}",
            self.strong_threshold, self.min_out_degree, self.degree_threshold
        )
    }
}

/// Evaluates both hypotheses of the linkage theorem for `k`.
pub fn check_preconditions(t: &Tournament, k: usize) -> Result<PreconditionReport> {
    if k < 1 {
        return invalid("k must be at least 1");
    }
    let min_out_degree = t.min_out_degree().unwrap_or(0);
    Ok(PreconditionReport {
        k,
        n: t.n(),
        strong_threshold: strong_threshold(k),
        degree_threshold: degree_threshold(k),
        k_strong: is_k_strong(t, strong_threshold(k))?,
        min_out_degree,
        degree_ok: t.n() > 0 && min_out_degree >= degree_threshold(k),
    })
}

fn check_terminals(t: &Tournament, x0: &[Vertex], y0: &[Vertex]) -> Result<(VertexSet, VertexSet)> {
    if x0.is_empty() || x0.len() != y0.len() {
        return invalid(format!(
            "need equally many sources and sinks, at least one (got {} and {})",
            x0.len(),
            y0.len()
        ));
    }
    let xs = VertexSet::from_distinct(x0)?;
    let ys = VertexSet::from_distinct(y0)?;
    if !xs.is_disjoint(&ys) {
        return invalid(format!("sources {xs} and sinks {ys} overlap"));
    }
    if let Some(v) = x0.iter().chain(y0).find(|&&v| v >= t.n()) {
        return invalid(format!("vertex {v} out of range for n={}", t.n()));
    }
    Ok((xs, ys))
}

/// Greedy rounds on `T_0 = T - (X0 ∪ Y0)`.
pub fn build_stages(
    t: &Tournament,
    x0: &[Vertex],
    y0: &[Vertex],
    k: usize,
    log: &mut AssertionLog,
) -> Result<Vec<Stage>> {
    let (xs, ys) = check_terminals(t, x0, y0)?;
    let n = t.n();
    let mut alive: Vec<bool> = (0..n).map(|v| !xs.contains(v) && !ys.contains(v)).collect();
    let mut stages = Vec::with_capacity(stage_count(k));
    let mut deg = vec![0usize; n];

    for i in 1..=stage_count(k) {
        let members: Vec<Vertex> = (0..n).filter(|&v| alive[v]).collect();
        let Some(&first) = members.first() else {
            return Err(Error::StageConstruction {
                stage: i,
                reason: "no vertices remain".into(),
            });
        };
        for &v in &members {
            deg[v] = members.iter().filter(|&&w| t.arc(v, w)).count();
        }
        let u = members.iter().copied().fold(first, |b, v| if deg[v] < deg[b] { v } else { b });
        let nbrs: Vec<Vertex> = members.iter().copied().filter(|&w| t.arc(u, w)).collect();
        if nbrs.is_empty() {
            return Err(Error::StageConstruction {
                stage: i,
                reason: format!(
                    "vertex {u} has no out-neighbour among the {} remaining vertices",
                    members.len()
                ),
            });
        }
        let v = nbrs
            .iter()
            .copied()
            .min_by_key(|&w| (nbrs.iter().filter(|&&x| t.arc(w, x)).count(), w))
            .unwrap();
        let a: VertexSet = nbrs.iter().copied().filter(|&x| t.arc(v, x)).collect();
        let d_u = nbrs.len();
        let size = a.len() as f64;

        log.check("eq1", size, Rel::Le, half(d_u), Kind::Structural)?;
        for z in &a {
            log.check("eq2", size, Rel::Le, half(deg[z]), Kind::Structural)?;
            log.check("eq3", size, Rel::Le, half(t.out_degree(z)), Kind::Structural)?;
        }
        alive[u] = false;
        alive[v] = false;
        stages.push(Stage { i, u, v, a, d_u });
    }
    Ok(stages)
}

/// Anchored pair `V'`, `V''` inside `T<V>` and the matching `u'_i`, `A'_i`.
pub fn choose_anchored_core(
    t: &Tournament,
    stages: &[Stage],
    k: usize,
    budget: Option<u64>,
    log: &mut AssertionLog,
) -> Result<CoreSelection> {
    let m = stage_count(k);
    log.check("card_U", stages.len() as f64, Rel::Eq, m as f64, Kind::Structural)?;
    let v_set: VertexSet = stages.iter().map(|s| s.v).collect();
    let u_set: VertexSet = stages.iter().map(|s| s.u).collect();
    log.check("card_V", v_set.len() as f64, Rel::Eq, m as f64, Kind::Structural)?;

    let view = t.induced(&v_set)?;
    let pair = match find_anchored_pair(&view, k, budget)? {
        AnchorSearch::Found(p) => p,
        AnchorSearch::BudgetExhausted { visited } => return Err(Error::BudgetExhausted { visited }),
        AnchorSearch::Exhausted { .. } => return Err(Error::LemmaViolation { n: view.n(), p: k }),
    };
    let stage_of = |root: Vertex| stages.iter().position(|s| s.v == root).expect("v_i of some stage");

    let mut x_local = pair.x.clone();
    x_local.sort_by_key(|&l| stage_of(view.label(l)));
    let pair = pair.reorder_x(&x_local)?;

    let vp: Vec<Vertex> = pair.x.iter().map(|&l| view.label(l)).collect();
    let vpp: Vec<Vertex> = pair.y.iter().map(|&l| view.label(l)).collect();
    let vstar = v_set
        .difference(&vp.iter().copied().collect())
        .difference(&vpp.iter().copied().collect());

    let mut pairing = Vec::with_capacity(k);
    for (i, &v) in vp.iter().enumerate() {
        let st = &stages[stage_of(v)];
        log.check("core_arc", flag(t.arc(st.u, v)), Rel::Eq, 1.0, Kind::Structural)?;
        let size = st.a.len() as f64;
        for z in &st.a {
            log.check("eq4", size, Rel::Le, half(t.out_degree(z)), Kind::Structural)?;
        }
        pairing.push(Pairing {
            i: i + 1,
            u: st.u,
            v,
            a: st.a.clone(),
            stage: st.i,
        });
    }
    let up: Vec<Vertex> = pairing.iter().map(|p| p.u).collect();
    let ustar = u_set.difference(&up.iter().copied().collect());
    Ok(CoreSelection {
        vp,
        vpp,
        vstar,
        up,
        ustar,
        pairing,
        v_set,
        anchored: Some(pair),
    })
}

/// Paths `P_i` from `x_i` to `v'_i` of the form
/// `x x' v'`, `x x' u' v'`, `x x' x'' v'` or `x x' x'' u' v'`.
pub fn select_first_legs(
    t: &Tournament,
    x0: &[Vertex],
    y0: &[Vertex],
    stages: &[Stage],
    core: &CoreSelection,
    k: usize,
    log: &mut AssertionLog,
) -> Result<FirstLegs> {
    let n = t.n();
    let (xs, ys) = check_terminals(t, x0, y0)?;
    let up_set: VertexSet = core.up.iter().copied().collect();
    let removed = xs.union(&ys).union(&up_set).union(&core.v_set);
    log.check(
        "card_X0Y0UpV",
        removed.len() as f64,
        Rel::Eq,
        (12 * k - 6) as f64,
        Kind::Structural,
    )?;

    let mut xp: Vec<Vertex> = Vec::with_capacity(k);
    for (i, &x) in x0.iter().enumerate() {
        let cands: Vec<Vertex> = (0..n).filter(|&w| t.arc(x, w) && !removed.contains(w)).collect();
        log.check(
            "xp_outdeg",
            cands.len() as f64,
            Rel::Ge,
            (16 * k - 7) as f64,
            Kind::Conditional,
        )?;
        match cands.into_iter().find(|w| !xp.contains(w)) {
            Some(w) => xp.push(w),
            None => {
                log.check("select_xp", 0.0, Rel::Ge, 1.0, Kind::Conditional)?;
                return Err(Error::SelectionExhausted(format!(
                    "no unused out-neighbour of x_{} = {x} outside X0 ∪ Y0 ∪ U' ∪ V",
                    i + 1
                )));
            }
        }
    }
    let xp_set: VertexSet = xp.iter().copied().collect();

    let ihat: Vec<usize> = (0..k)
        .filter(|&i| t.arc(xp[i], core.vp[i]) || t.arc(xp[i], core.up[i]))
        .map(|i| i + 1)
        .collect();

    // Vertex w is in T_{j-1} iff it is not a terminal and no earlier stage took it.
    let alive_before = |w: Vertex, stage: usize| {
        !xs.contains(w) && !ys.contains(w) && stages[..stage - 1].iter().all(|s| s.u != w && s.v != w)
    };

    let mut flags = Vec::new();
    let mut xpp: Vec<SecondHop> = Vec::new();
    for i in (0..k).filter(|i| !ihat.contains(&(i + 1))) {
        let pr = &core.pairing[i];
        let x1 = xp[i];
        let d = t.out_degree(x1);
        let a_size = pr.a.len();
        let in_a = pr.a.contains(x1);
        let alive = alive_before(x1, pr.stage);
        flags.push(MembershipFlag {
            i: i + 1,
            role: "xp".into(),
            vertex: x1,
            holds: alive,
        });
        // u' and v' both beat x'_i here, so x'_i ∈ A'_i exactly when it was still present.
        log.check("xp_in_A", flag(in_a), Rel::Eq, flag(alive), Kind::Structural)?;
        if in_a {
            log.check("eq5", a_size as f64, Rel::Le, half(d), Kind::Structural)?;
        }
        let blocked = x0.len() + y0.len() + core.up.len() + core.v_set.len() + xp.len() + k - 1;
        log.check("eq6_sum", blocked as f64, Rel::Eq, (14 * k - 7) as f64, Kind::Structural)?;
        log.check("eq6", blocked as f64, Rel::Le, half(d), Kind::Conditional)?;
        log.check("eq6a", (a_size + blocked) as f64, Rel::Le, d as f64 - 1.0, Kind::Conditional)?;
        log.check("eq6b", (a_size + blocked + 1) as f64, Rel::Le, d as f64, Kind::Conditional)?;

        let excluded = pr.a.union(&removed).union(&xp_set);
        let avail: Vec<Vertex> = (0..n).filter(|&w| t.arc(x1, w) && !excluded.contains(w)).collect();
        log.check("x2_avail", avail.len() as f64, Rel::Ge, k as f64, Kind::Conditional)?;

        let (u1, v1) = (core.up[i], core.vp[i]);
        let pick = avail
            .iter()
            .copied()
            .find(|&w| !xpp.iter().any(|h| h.x == w) && (t.arc(w, u1) || t.arc(w, v1)));
        match pick {
            Some(w) => {
                flags.push(MembershipFlag {
                    i: i + 1,
                    role: "xpp".into(),
                    vertex: w,
                    holds: alive_before(w, pr.stage),
                });
                xpp.push(SecondHop { i: i + 1, x: w });
            }
            None => {
                log.check("select_xpp", 0.0, Rel::Ge, 1.0, Kind::Conditional)?;
                let without_arc = avail.iter().filter(|&&w| !t.arc(w, u1) && !t.arc(w, v1)).count();
                return Err(Error::SelectionExhausted(format!(
                    "no x''_{} for x'_{} = {x1}: {} candidates outside the excluded sets, \
                     {without_arc} without an arc to u'={u1} or v'={v1}; x' present at stage {}: {alive}",
                    i + 1,
                    i + 1,
                    avail.len(),
                    pr.stage
                )));
            }
        }
    }

    let mut paths = Vec::with_capacity(k);
    for i in 0..k {
        let (x, x1, u1, v1) = (x0[i], xp[i], core.up[i], core.vp[i]);
        let mut p = vec![x, x1];
        if let Some(h) = xpp.iter().find(|h| h.i == i + 1) {
            p.push(h.x);
        }
        let last = *p.last().unwrap();
        if !t.arc(last, v1) {
            p.push(u1);
        }
        p.push(v1);
        paths.push(Path::new(p));
    }
    let invalid_paths = paths.iter().filter(|p| !p.is_valid_in(t)).count();
    log.check("P_valid", invalid_paths as f64, Rel::Eq, 0.0, Kind::Structural)?;
    let total: usize = paths.iter().map(Path::len).sum();
    let distinct: VertexSet = paths.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    log.check("P_disjoint", distinct.len() as f64, Rel::Eq, total as f64, Kind::Structural)?;

    Ok(FirstLegs {
        xp,
        ihat,
        xpp,
        p: paths,
        tprime_membership_hypothesis: flags,
    })
}

/// Disjoint paths `R_i` from `V''` to `y_i` in
/// `T* = T - (X0 ∪ U' ∪ V' ∪ V* ∪ X' ∪ X'')`.
pub fn route_terminal_legs(
    t: &Tournament,
    x0: &[Vertex],
    y0: &[Vertex],
    core: &CoreSelection,
    first: &FirstLegs,
    k: usize,
    log: &mut AssertionLog,
) -> Result<Vec<Path>> {
    let (xs, _) = check_terminals(t, x0, y0)?;
    let deletion: VertexSet = xs
        .iter()
        .chain(core.up.iter().copied())
        .chain(core.vp.iter().copied())
        .chain(core.vstar.iter())
        .chain(first.xp.iter().copied())
        .chain(first.xpp.iter().map(|h| h.x))
        .collect();
    log.check(
        "tstar_budget",
        deletion.len() as f64,
        Rel::Le,
        (12 * k - 6) as f64,
        Kind::Structural,
    )?;
    let tstar = t.remove(&deletion)?;
    let to_local = |v: Vertex| tstar.local_of(v);
    let missing = core.vpp.iter().chain(y0).filter(|&&v| to_local(v).is_none()).count();
    log.check("tstar_contains", missing as f64, Rel::Eq, 0.0, Kind::Structural)?;

    if log.mode() == LinkMode::Strict {
        let strong = is_k_strong(&tstar, k)?;
        log.check("tstar_k_strong", flag(strong), Rel::Eq, 1.0, Kind::Conditional)?;
    }

    let s_local: VertexSet = core.vpp.iter().filter_map(|&v| to_local(v)).collect();
    let z_local: VertexSet = y0.iter().filter_map(|&v| to_local(v)).collect();
    let Some(paths) = disjoint_paths_between_sets(&tstar, &s_local, &z_local, k)? else {
        let found = max_disjoint_paths_between_sets(&tstar, &s_local, &z_local)?.len();
        log.check("menger", found as f64, Rel::Ge, k as f64, Kind::Conditional)?;
        return Err(Error::MengerFailure { found, needed: k });
    };
    let mut roots: Vec<Path> = paths.iter().map(|p| p.to_root(&tstar)).collect();
    let mut r = Vec::with_capacity(k);
    for &y in y0 {
        let pos = roots
            .iter()
            .position(|p| p.last() == Some(y))
            .ok_or_else(|| Error::Internal(format!("no Menger path ends at {y}")))?;
        r.push(roots.swap_remove(pos));
    }

    let p_vertices: VertexSet = first.p.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    let clashes = r
        .iter()
        .flat_map(|p| p.vertices().iter())
        .filter(|&&v| p_vertices.contains(v))
        .count();
    log.check("R_avoids_P", clashes as f64, Rel::Eq, 0.0, Kind::Structural)?;
    Ok(r)
}

/// Middle legs `M_i` through the anchored pair and the composed
/// `Q_i = P_i M_i R_i`. Returns `(M, Q)`.
pub fn stitch(
    t: &Tournament,
    core: &CoreSelection,
    first: &FirstLegs,
    r: &[Path],
    k: usize,
    log: &mut AssertionLog,
) -> Result<(Vec<Path>, Vec<Path>)> {
    let view = t.induced(&core.v_set)?;
    let pair = core
        .anchored
        .as_ref()
        .ok_or_else(|| Error::Internal("core selection carries no anchored pair".into()))?;
    if first.p.len() != k || r.len() != k {
        return Err(Error::Internal(format!(
            "stitching {} first legs and {} terminal legs for k={k}",
            first.p.len(),
            r.len()
        )));
    }

    let mut perm = Vec::with_capacity(k);
    for i in 0..k {
        if first.p[i].last() != Some(core.vp[i]) {
            return Err(Error::Internal(format!("P_{} does not end at v'_{}", i + 1, i + 1)));
        }
        let start = r[i].first().unwrap_or(usize::MAX);
        let j = core
            .vpp
            .iter()
            .position(|&v| v == start)
            .ok_or_else(|| Error::Internal(format!("R_{} does not start in V''", i + 1)))?;
        perm.push(j);
    }
    let linkage = anchoring_linkage(&view, pair, &perm).map_err(|e| match e {
        Error::NotAnchored { perm } => Error::Internal(format!("anchored pair fails permutation {perm:?}")),
        other => other,
    })?;
    let m: Vec<Path> = linkage.paths.iter().map(|p| p.to_root(&view)).collect();
    let stray = m
        .iter()
        .flat_map(|p| p.inner().iter())
        .filter(|&&v| !core.vstar.contains(v))
        .count();
    log.check("M_inner_in_Vstar", stray as f64, Rel::Eq, 0.0, Kind::Structural)?;

    let mut q = Vec::with_capacity(k);
    for i in 0..k {
        let mut path = first.p[i].vertices().to_vec();
        path.extend_from_slice(&m[i].vertices()[1..]);
        path.extend_from_slice(&r[i].vertices()[1..]);
        debug_assert_eq!(path.len(), first.p[i].len() + m[i].len() + r[i].len() - 2);
        q.push(Path::new(path));
    }
    Ok((m, q))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinkOptions {
    pub mode: LinkMode,
    pub anchor_budget: Option<u64>,
}

impl Default for LinkOptions {
    fn default() -> Self {
        LinkOptions {
            mode: LinkMode::Strict,
            anchor_budget: Some(DEFAULT_ANCHOR_BUDGET),
        }
    }
}

impl LinkOptions {
    pub fn new(mode: LinkMode) -> Self {
        LinkOptions {
            mode,
            ..Self::default()
        }
    }
}

/// Runs the pipeline and always returns the trace, complete or partial.
/// On `AssertionViolation` the error carries the same trace.
pub fn run_link(t: &Tournament, x0: &[Vertex], y0: &[Vertex], opts: LinkOptions) -> (Result<Linkage>, LinkTrace) {
    let mut trace = LinkTrace {
        k: x0.len(),
        mode: opts.mode,
        ..LinkTrace::default()
    };
    if let Err(e) = check_terminals(t, x0, y0) {
        return (Err(e), trace);
    }
    let k = x0.len();
    if opts.mode == LinkMode::Strict {
        match check_preconditions(t, k) {
            Ok(report) if report.ok() => {}
            Ok(report) => return (Err(Error::PreconditionViolation(report)), trace),
            Err(e) => return (Err(e), trace),
        }
    }

    let mut log = AssertionLog::new(opts.mode);
    let result = pipeline(t, x0, y0, k, opts, &mut trace, &mut log);
    trace.assertions = log.into_records();
    let result = match result {
        Ok(()) => {
            let report = verify_linkage(t, x0, y0, &trace.q);
            match report.violation {
                None => Ok(Linkage {
                    pairs: x0.iter().copied().zip(y0.iter().copied()).collect(),
                    paths: trace.q.clone(),
                }),
                Some(v) => Err(Error::Internal(format!("composed linkage fails verification: {v}"))),
            }
        }
        Err(Error::AssertionViolation { eq, .. }) => Err(Error::AssertionViolation {
            eq,
            trace: Box::new(trace.clone()),
        }),
        Err(e) => Err(e),
    };
    (result, trace)
}

fn pipeline(
    t: &Tournament,
    x0: &[Vertex],
    y0: &[Vertex],
    k: usize,
    opts: LinkOptions,
    trace: &mut LinkTrace,
    log: &mut AssertionLog,
) -> Result<()> {
    trace.stages = build_stages(t, x0, y0, k, log)?;
    let core = choose_anchored_core(t, &trace.stages, k, opts.anchor_budget, log)?;
    trace.core = Some(core.clone());
    let first = select_first_legs(t, x0, y0, &trace.stages, &core, k, log)?;
    trace.first = Some(first.clone());
    trace.r = route_terminal_legs(t, x0, y0, &core, &first, k, log)?;
    let (m, q) = stitch(t, &core, &first, &trace.r, k, log)?;
    trace.m = m;
    trace.q = q;
    Ok(())
}

/// Links `x0[i]` to `y0[i]` for every `i`, returning the linkage and its
/// trace.
pub fn link(t: &Tournament, x0: &[Vertex], y0: &[Vertex], opts: LinkOptions) -> Result<(Linkage, LinkTrace)> {
    let (res, trace) = run_link(t, x0, y0, opts);
    res.map(|l| (l, trace))
}
