//! Maximum flow (Dinic) and unit-step min-cost flow.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId, WeightedGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub value: i64,
    /// Flow on every edge with positive flow, sorted by edge id.
    pub flow: Vec<(EdgeId, i64)>,
}

#[derive(Clone, Copy, Debug)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

struct Dinic {
    adj: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic { adj: vec![Vec::new(); n], level: vec![0; n], iter: vec![0; n] }
    }

    /// Returns the position of the forward arc in `adj[u]`.
    fn add(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let pos = self.adj[u].len();
        let rev_pos = self.adj[v].len() + usize::from(u == v);
        self.adj[u].push(Arc { to: v, cap, rev: rev_pos });
        self.adj[v].push(Arc { to: u, cap: 0, rev: pos });
        pos
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for a in &self.adj[u] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    q.push_back(a.to);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.iter[u] < self.adj[u].len() {
            let i = self.iter[u];
            let a = self.adj[u][i];
            if a.cap > 0 && self.level[u] < self.level[a.to] {
                let d = self.dfs(a.to, t, f.min(a.cap));
                if d > 0 {
                    self.adj[u][i].cap -= d;
                    self.adj[a.to][a.rev].cap += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn run(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}

/// Maximum `s`-`t` flow with capacities `w`. Undirected edges carry flow either way.
pub fn max_flow(g: &WeightedGraph, s: VertexId, t: VertexId) -> Result<FlowResult> {
    let si = g.vertex_index(s).ok_or(Error::TerminalMissing(s))?;
    let ti = g.vertex_index(t).ok_or(Error::TerminalMissing(t))?;
    if si == ti {
        return Err(Error::InvalidInput("source equals sink".into()));
    }
    let mut net = Dinic::new(g.vertex_count());
    let mut arcs = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let u = g.vertex_index(e.tail).unwrap();
        let v = g.vertex_index(e.head).unwrap();
        let fwd = net.add(u, v, e.w);
        let back = if g.is_directed() { None } else { Some(net.add(v, u, e.w)) };
        arcs.push((e.id, u, fwd, v, back));
    }
    let value = net.run(si, ti);
    let mut flow = Vec::new();
    for (id, u, fwd, v, back) in arcs {
        let e = g.edge(id).unwrap();
        let mut f = e.w - net.adj[u][fwd].cap;
        if let Some(b) = back {
            f -= e.w - net.adj[v][b].cap;
        }
        if f != 0 {
            flow.push((id, f.abs()));
        }
    }
    flow.sort_unstable();
    Ok(FlowResult { value, flow })
}

/// Source side of a minimum cut: the vertices reachable from `s` in the residual network
/// of a maximum flow. Sorted by vertex id.
pub fn min_cut_side(g: &WeightedGraph, s: VertexId, t: VertexId) -> Result<Vec<VertexId>> {
    if !g.is_directed() {
        return Err(Error::UndirectedInput);
    }
    let flow: std::collections::HashMap<EdgeId, i64> = max_flow(g, s, t)?.flow.into_iter().collect();
    let n = g.vertex_count();
    let mut residual: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        let u = g.vertex_index(e.tail).unwrap();
        let v = g.vertex_index(e.head).unwrap();
        let f = flow.get(&e.id).copied().unwrap_or(0);
        if f < e.w {
            residual[u].push(v);
        }
        if f > 0 {
            residual[v].push(u);
        }
    }
    let si = g.vertex_index(s).unwrap();
    let mut seen = vec![false; n];
    seen[si] = true;
    let mut queue = VecDeque::from([si]);
    while let Some(i) = queue.pop_front() {
        for &j in &residual[i] {
            if !seen[j] {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    let mut side: Vec<VertexId> = (0..n).filter(|&i| seen[i]).map(|i| g.vertices()[i]).collect();
    side.sort_unstable();
    Ok(side)
}

#[derive(Clone, Copy, Debug)]
struct CostArc {
    to: usize,
    cap: i64,
    cost: i64,
    rev: usize,
}

/// Successive shortest paths with Johnson potentials. Arc costs must be non-negative.
pub(crate) struct MinCostFlow {
    adj: Vec<Vec<CostArc>>,
    dual: Vec<i64>,
}

impl MinCostFlow {
    pub(crate) fn new(n: usize) -> Self {
        MinCostFlow { adj: vec![Vec::new(); n], dual: vec![0; n] }
    }

    pub(crate) fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> (usize, usize) {
        debug_assert!(cost >= 0 && u != v);
        let pos = self.adj[u].len();
        let rev = self.adj[v].len();
        self.adj[u].push(CostArc { to: v, cap, cost, rev });
        self.adj[v].push(CostArc { to: u, cap: 0, cost: -cost, rev: pos });
        (u, pos)
    }

    pub(crate) fn residual(&self, arc: (usize, usize)) -> i64 {
        self.adj[arc.0][arc.1].cap
    }

    /// Pushes flow along one cheapest path. Returns the amount and its cost per unit.
    pub(crate) fn augment(&mut self, s: usize, t: usize, limit: i64) -> Option<(i64, i64)> {
        let n = self.adj.len();
        let mut dist = vec![i64::MAX; n];
        let mut prev: Vec<(usize, usize)> = vec![(usize::MAX, 0); n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[s] = 0;
        heap.push(Reverse((0i64, s)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if u == t {
                break;
            }
            for (i, a) in self.adj[u].iter().enumerate() {
                if a.cap == 0 {
                    continue;
                }
                let nd = d + a.cost - self.dual[a.to] + self.dual[u];
                if nd < dist[a.to] {
                    dist[a.to] = nd;
                    prev[a.to] = (u, i);
                    heap.push(Reverse((nd, a.to)));
                }
            }
        }
        if !done[t] {
            return None;
        }
        for v in 0..n {
            if done[v] {
                self.dual[v] -= dist[t] - dist[v];
            }
        }
        let mut push = limit;
        let mut v = t;
        while v != s {
            let (u, i) = prev[v];
            push = push.min(self.adj[u][i].cap);
            v = u;
        }
        let mut unit_cost = 0;
        let mut v = t;
        while v != s {
            let (u, i) = prev[v];
            let a = self.adj[u][i];
            self.adj[u][i].cap -= push;
            self.adj[a.to][a.rev].cap += push;
            unit_cost += a.cost;
            v = u;
        }
        Some((push, unit_cost))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_flow() {
        let mut g = WeightedGraph::with_vertices(true, 4);
        g.add_edge(0, 1, 3, 0).unwrap();
        g.add_edge(0, 2, 2, 0).unwrap();
        g.add_edge(1, 2, 5, 0).unwrap();
        g.add_edge(1, 3, 2, 0).unwrap();
        g.add_edge(2, 3, 3, 0).unwrap();
        let f = max_flow(&g, 0, 3).unwrap();
        assert_eq!(f.value, 5);
        let out: i64 = f.flow.iter().filter(|(e, _)| *e < 2).map(|(_, x)| x).sum();
        assert_eq!(out, 5);
        let side = min_cut_side(&g, 0, 3).unwrap();
        assert!(side.contains(&0) && !side.contains(&3));
        let cap: i64 = g
            .edges()
            .iter()
            .filter(|e| side.contains(&e.tail) && !side.contains(&e.head))
            .map(|e| e.w)
            .sum();
        assert_eq!(cap, 5);
    }

    #[test]
    fn no_path_means_zero() {
        let mut g = WeightedGraph::with_vertices(true, 3);
        g.add_edge(1, 0, 4, 0).unwrap();
        assert_eq!(max_flow(&g, 0, 2).unwrap().value, 0);
        assert!(max_flow(&g, 0, 7).is_err());
    }

    #[test]
    fn cheapest_path_first() {
        let mut m = MinCostFlow::new(4);
        m.add(0, 1, 1, 1);
        m.add(0, 2, 1, 5);
        m.add(1, 3, 1, 1);
        m.add(2, 3, 1, 0);
        assert_eq!(m.augment(0, 3, 10), Some((1, 2)));
        assert_eq!(m.augment(0, 3, 10), Some((1, 5)));
        assert_eq!(m.augment(0, 3, 10), None);
    }
}
