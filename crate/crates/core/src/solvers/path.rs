//! Shortest paths with non-negative lengths.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId, WeightedGraph};

/// Path length where an unreachable target counts as larger than every finite length.
/// Serialises as the length, or `null` when unreachable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Distance {
    Finite(i64),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<i64> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    pub fn at_least(self, bound: i64) -> bool {
        self >= Distance::Finite(bound)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestPath {
    pub distance: Distance,
    /// Edges of one shortest path from source to target, empty when unreachable.
    pub edges: Vec<EdgeId>,
}

/// Dijkstra from `s` to `t` using edge weights `w` as lengths.
pub fn shortest_path(g: &WeightedGraph, s: VertexId, t: VertexId) -> Result<ShortestPath> {
    let si = g.vertex_index(s).ok_or(Error::TerminalMissing(s))?;
    let ti = g.vertex_index(t).ok_or(Error::TerminalMissing(t))?;
    let n = g.vertex_count();
    let mut adj: Vec<Vec<(usize, i64, EdgeId)>> = vec![Vec::new(); n];
    for e in g.edges() {
        let a = g.vertex_index(e.tail).unwrap();
        let b = g.vertex_index(e.head).unwrap();
        adj[a].push((b, e.w, e.id));
        if !g.is_directed() {
            adj[b].push((a, e.w, e.id));
        }
    }
    let mut dist = vec![i64::MAX; n];
    let mut via: Vec<Option<(usize, EdgeId)>> = vec![None; n];
    let mut heap = BinaryHeap::from([Reverse((0i64, si))]);
    dist[si] = 0;
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == ti {
            break;
        }
        for &(v, w, id) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                via[v] = Some((u, id));
                heap.push(Reverse((nd, v)));
            }
        }
    }
    if dist[ti] == i64::MAX {
        return Ok(ShortestPath { distance: Distance::Unreachable, edges: Vec::new() });
    }
    let mut edges = Vec::new();
    let mut v = ti;
    while let Some((u, id)) = via[v] {
        edges.push(id);
        v = u;
    }
    edges.reverse();
    Ok(ShortestPath { distance: Distance::Finite(dist[ti]), edges })
}
