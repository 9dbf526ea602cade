//! Maximum weight, maximum weight perfect and minimum weight perfect matchings.
//!
//! Bipartite inputs go through successive shortest paths, everything else through the
//! blossom algorithm. Loops are ignored and of several parallel edges only the most
//! useful one (lowest id on ties) can be chosen.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::blossom;
use super::flow::MinCostFlow;
use crate::error::{Error, Result};
use crate::graph::{bipartition, EdgeId, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingMode {
    MaxWeight,
    MaxWeightPerfect,
    MinWeightPerfect,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// Matched edge ids, sorted.
    pub edges: Vec<EdgeId>,
    pub weight: i64,
}

pub fn max_weight_matching(g: &WeightedGraph) -> Matching {
    solve_matching(g, MatchingMode::MaxWeight).expect("maximum weight matching always exists")
}

pub fn max_weight_perfect_matching(g: &WeightedGraph) -> Result<Matching> {
    solve_matching(g, MatchingMode::MaxWeightPerfect)
}

pub fn min_weight_perfect_matching(g: &WeightedGraph) -> Result<Matching> {
    solve_matching(g, MatchingMode::MinWeightPerfect)
}

pub fn solve_matching(g: &WeightedGraph, mode: MatchingMode) -> Result<Matching> {
    match bipartition(g) {
        Some(side) => bipartite(g, mode, &side),
        None => general_matching(g, mode),
    }
}

/// Score to maximise for each mode, larger is better.
fn score(mode: MatchingMode, w: i64, big: i64) -> i64 {
    match mode {
        MatchingMode::MaxWeight => w,
        MatchingMode::MaxWeightPerfect => w + big,
        MatchingMode::MinWeightPerfect => big - w,
    }
}

/// One representative per vertex pair: best score, then lowest id.
fn representatives(g: &WeightedGraph, mode: MatchingMode) -> Vec<(usize, usize, i64, EdgeId)> {
    let big = g.edges().iter().map(|e| e.w).max().unwrap_or(0) + 1;
    let mut best: HashMap<(usize, usize), (i64, EdgeId)> = HashMap::new();
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        let a = g.vertex_index(e.tail).unwrap();
        let b = g.vertex_index(e.head).unwrap();
        let key = (a.min(b), a.max(b));
        let s = score(mode, e.w, big);
        best.entry(key)
            .and_modify(|cur| {
                if s > cur.0 || (s == cur.0 && e.id < cur.1) {
                    *cur = (s, e.id);
                }
            })
            .or_insert((s, e.id));
    }
    let mut out: Vec<_> = best.into_iter().map(|((a, b), (s, id))| (a, b, s, id)).collect();
    out.sort_unstable_by_key(|r| r.3);
    out
}

fn finish(g: &WeightedGraph, mut edges: Vec<EdgeId>, mode: MatchingMode) -> Result<Matching> {
    edges.sort_unstable();
    if mode != MatchingMode::MaxWeight && 2 * edges.len() != g.vertex_count() {
        return Err(Error::NoPerfectMatching);
    }
    let weight = edges.iter().map(|&e| g.edge(e).unwrap().w).sum();
    Ok(Matching { edges, weight })
}

/// Blossom-based solver, usable on any graph.
pub fn general_matching(g: &WeightedGraph, mode: MatchingMode) -> Result<Matching> {
    if mode != MatchingMode::MaxWeight && g.vertex_count() % 2 == 1 {
        return Err(Error::NoPerfectMatching);
    }
    let reps: Vec<_> = representatives(g, mode)
        .into_iter()
        .filter(|r| mode != MatchingMode::MaxWeight || r.2 > 0)
        .collect();
    let simple: Vec<(usize, usize, i64)> = reps.iter().map(|r| (r.0, r.1, r.2)).collect();
    let by_pair: HashMap<(usize, usize), EdgeId> = reps.iter().map(|r| ((r.0, r.1), r.3)).collect();
    let mates = blossom::solve(g.vertex_count(), &simple, mode != MatchingMode::MaxWeight);
    let mut edges = Vec::new();
    for (i, m) in mates.iter().enumerate() {
        if let Some(j) = *m {
            if i < j {
                edges.push(by_pair[&(i, j)]);
            }
        }
    }
    finish(g, edges, mode)
}

/// Successive shortest path solver for bipartite graphs.
pub fn bipartite_matching(g: &WeightedGraph, mode: MatchingMode) -> Result<Matching> {
    let side = bipartition(g).ok_or_else(|| Error::InvalidInput("graph is not bipartite".into()))?;
    bipartite(g, mode, &side)
}

fn bipartite(g: &WeightedGraph, mode: MatchingMode, side: &[bool]) -> Result<Matching> {
    let n = g.vertex_count();
    let left: Vec<usize> = (0..n).filter(|&i| !side[i]).collect();
    let right_count = n - left.len();
    if mode != MatchingMode::MaxWeight && left.len() != right_count {
        return Err(Error::NoPerfectMatching);
    }
    let reps = representatives(g, mode);
    let top = reps.iter().map(|r| r.2).max().unwrap_or(0).max(0);
    // every cost is shifted by `top` so it is non-negative; each augmenting path uses one
    // more forward pair arc than backward, so the shift is the same for all solutions
    let (src, sink) = (n, n + 1);
    let mut net = MinCostFlow::new(n + 2);
    for &l in &left {
        net.add(src, l, 1, 0);
        if mode == MatchingMode::MaxWeight {
            net.add(l, sink, 1, top);
        }
    }
    for r in (0..n).filter(|&i| side[i]) {
        net.add(r, sink, 1, 0);
    }
    let mut arcs = Vec::with_capacity(reps.len());
    for &(a, b, s, id) in &reps {
        let (l, r) = if side[a] { (b, a) } else { (a, b) };
        arcs.push((net.add(l, r, 1, top - s), id));
    }
    for _ in 0..left.len() {
        if net.augment(src, sink, 1).is_none() {
            return Err(Error::NoPerfectMatching);
        }
    }
    let edges: Vec<EdgeId> = arcs
        .into_iter()
        .filter(|(arc, _)| net.residual(*arc) == 0)
        .map(|(_, id)| id)
        .collect();
    let out = finish(g, edges, mode)?;
    if mode == MatchingMode::MaxWeight {
        // zero-weight pairs are not needed for the optimum
        let edges = out.edges.into_iter().filter(|&e| g.edge(e).unwrap().w > 0).collect();
        return finish(g, edges, mode);
    }
    Ok(out)
}

/// True when no two listed edges share an endpoint and none is a loop.
pub fn is_matching(g: &WeightedGraph, edges: &[EdgeId]) -> bool {
    let mut used = std::collections::HashSet::new();
    edges.iter().all(|&id| match g.edge(id) {
        Some(e) => !e.is_loop() && used.insert(e.tail) && used.insert(e.head),
        None => false,
    })
}
