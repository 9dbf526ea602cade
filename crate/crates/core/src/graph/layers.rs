use std::collections::{HashMap, VecDeque};

use super::{EdgeId, VertexId, WeightedGraph};
use crate::error::{Error, Result};

/// Breadth-first levels of a graph, read as undirected, and the edge layers between them.
#[derive(Clone, Debug, Default)]
pub struct Layering {
    /// Level of every reachable vertex.
    pub level: HashMap<VertexId, usize>,
    /// `layers[i]` holds the edges joining level `i` to level `i + 1`.
    pub layers: Vec<Vec<EdgeId>>,
    /// Edges with both ends on the same level, loops included.
    pub intra: Vec<EdgeId>,
    /// Edges between vertices no root reaches.
    pub residual: Vec<EdgeId>,
}

impl Layering {
    /// Index of the last edge layer, `None` when there is none.
    pub fn depth(&self) -> Option<usize> {
        self.layers.len().checked_sub(1)
    }

    /// Union of every layer whose index is congruent to `i` modulo `k`.
    pub fn class(&self, i: usize, k: usize) -> Vec<EdgeId> {
        assert!(k > 0, "period must be positive");
        let mut out: Vec<EdgeId> = self
            .layers
            .iter()
            .enumerate()
            .filter(|(j, _)| j % k == i % k)
            .flat_map(|(_, l)| l.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

pub fn bfs_layers(g: &WeightedGraph, root: VertexId) -> Result<Layering> {
    bfs_layers_multi(g, &[root])
}

/// Levels grown from several roots at once, all on level 0.
pub fn bfs_layers_multi(g: &WeightedGraph, roots: &[VertexId]) -> Result<Layering> {
    let inc = g.incidence();
    let mut level = HashMap::new();
    let mut queue = VecDeque::new();
    for &r in roots {
        if !g.has_vertex(r) {
            return Err(Error::UnknownVertex(r));
        }
        if level.insert(r, 0usize).is_none() {
            queue.push_back(r);
        }
    }
    while let Some(v) = queue.pop_front() {
        let lv = level[&v];
        for &e in &inc[g.vertex_index(v).unwrap()] {
            let u = g.edge(e).unwrap().other(v);
            if let std::collections::hash_map::Entry::Vacant(e) = level.entry(u) {
                e.insert(lv + 1);
                queue.push_back(u);
            }
        }
    }
    let max_level = level.values().copied().max().unwrap_or(0);
    let mut out = Layering {
        layers: vec![Vec::new(); max_level],
        ..Default::default()
    };
    for e in g.edges() {
        match (level.get(&e.tail), level.get(&e.head)) {
            (Some(&a), Some(&b)) if a == b => out.intra.push(e.id),
            (Some(&a), Some(&b)) => out.layers[a.min(b)].push(e.id),
            _ => out.residual.push(e.id),
        }
    }
    out.level = level;
    Ok(out)
}
