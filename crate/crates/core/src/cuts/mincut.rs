//! Unit-capacity max-flow on windows, used to propose separators between two
//! anchor vertices.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::Window;

const INF: u32 = u32::MAX / 4;

struct Arc {
    to: usize,
    cap: u32,
    rev: usize,
}

struct Network {
    arcs: Vec<Vec<Arc>>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network {
            arcs: (0..n).map(|_| Vec::new()).collect(),
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: u32) {
        let rf = self.arcs[to].len();
        let rt = self.arcs[from].len();
        self.arcs[from].push(Arc { to, cap, rev: rf });
        self.arcs[to].push(Arc {
            to: from,
            cap: 0,
            rev: rt,
        });
    }

    /// Edmonds-Karp; stops once the flow exceeds `limit`.
    fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        loop {
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.arcs.len()];
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; self.arcs.len()];
            seen[s] = true;
            while let Some(v) = queue.pop_front() {
                if v == t {
                    break;
                }
                for (k, a) in self.arcs[v].iter().enumerate() {
                    if a.cap > 0 && !seen[a.to] {
                        seen[a.to] = true;
                        prev[a.to] = Some((v, k));
                        queue.push_back(a.to);
                    }
                }
            }
            if !seen[t] {
                return flow;
            }
            let mut push = INF;
            let mut v = t;
            while let Some((u, k)) = prev[v] {
                push = push.min(self.arcs[u][k].cap);
                v = u;
            }
            let mut v = t;
            while let Some((u, k)) = prev[v] {
                self.arcs[u][k].cap -= push;
                let rev = self.arcs[u][k].rev;
                self.arcs[v][rev].cap += push;
                v = u;
            }
            flow += push;
            if flow > limit {
                return flow;
            }
        }
    }

    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.arcs.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for a in &self.arcs[v] {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    queue.push_back(a.to);
                }
            }
        }
        seen
    }
}

/// Minimum vertex separator between `s` and `t` inside the window, the one
/// closest to `s`. `None` when the two are adjacent, equal, or need more than
/// `limit` vertices.
pub fn min_vertex_cut(window: &Window, s: usize, t: usize, limit: u32) -> Option<BTreeSet<usize>> {
    if s == t || window.neighbors(s).contains(&t) {
        return None;
    }
    let n = window.len();
    let mut net = Network::new(2 * n);
    for v in 0..n {
        let cap = if v == s || v == t { INF } else { 1 };
        net.add(2 * v, 2 * v + 1, cap);
        for &w in window.neighbors(v) {
            net.add(2 * v + 1, 2 * w, INF);
        }
    }
    let flow = net.max_flow(2 * s + 1, 2 * t, limit);
    if flow == 0 || flow > limit {
        return None;
    }
    let side = net.reachable(2 * s + 1);
    Some((0..n).filter(|&v| side[2 * v] && !side[2 * v + 1]).collect())
}

/// Minimum edge cut between `s` and `t` inside the window, the one closest to
/// `s`, as ordered index pairs.
pub fn min_edge_cut(
    window: &Window,
    s: usize,
    t: usize,
    limit: u32,
) -> Option<BTreeSet<(usize, usize)>> {
    if s == t {
        return None;
    }
    let n = window.len();
    let mut net = Network::new(n);
    for v in 0..n {
        for &w in window.neighbors(v) {
            if v < w {
                net.add(v, w, 1);
                net.add(w, v, 1);
            }
        }
    }
    let flow = net.max_flow(s, t, limit);
    if flow == 0 || flow > limit {
        return None;
    }
    let side = net.reachable(s);
    let mut cut = BTreeSet::new();
    for v in (0..n).filter(|&v| side[v]) {
        for &w in window.neighbors(v) {
            if !side[w] {
                cut.insert((v.min(w), v.max(w)));
            }
        }
    }
    Some(cut)
}
