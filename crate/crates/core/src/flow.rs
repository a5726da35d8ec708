//! Small Edmonds-Karp residual network used by the connectivity routines.

use std::collections::VecDeque;

pub(crate) const INF: u32 = u32::MAX / 2;

#[derive(Clone, Debug)]
pub(crate) struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    orig: Vec<u32>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
            orig: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, c: u32) -> usize {
        let e = self.to.len();
        self.adj[u].push(e);
        self.to.push(v);
        self.cap.push(c);
        self.orig.push(c);
        self.adj[v].push(e + 1);
        self.to.push(u);
        self.cap.push(0);
        self.orig.push(0);
        e
    }

    /// Restores every edge to its original capacity.
    pub fn reset(&mut self) {
        self.cap.copy_from_slice(&self.orig);
    }

    /// Flow currently carried by forward edge `e`.
    pub fn flow(&self, e: usize) -> u32 {
        self.orig[e].saturating_sub(self.cap[e])
    }

    pub fn edges_from(&self, u: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj[u].iter().map(move |&e| (e, self.to[e]))
    }

    pub fn is_forward(&self, e: usize) -> bool {
        e.is_multiple_of(2)
    }

    /// Augments along shortest paths until `limit` units flow or no augmenting
    /// path remains. Edges are scanned in insertion order, so the result is
    /// deterministic.
    pub fn max_flow(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let mut total = 0;
        let mut pred = vec![usize::MAX; self.adj.len()];
        while total < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            if !self.bfs(s, t, &mut pred) {
                break;
            }
            let mut v = t;
            while v != s {
                let e = pred[v];
                self.cap[e] -= 1;
                self.cap[e ^ 1] += 1;
                v = self.to[e ^ 1];
            }
            total += 1;
        }
        total
    }

    fn bfs(&self, s: usize, t: usize, pred: &mut [usize]) -> bool {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    pred[v] = e;
                    if v == t {
                        return true;
                    }
                    queue.push_back(v);
                }
            }
        }
        false
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }
}
