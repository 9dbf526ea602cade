use std::collections::VecDeque;

use serde::Serialize;

use super::{check_euler, VertexId, WeightedGraph};

/// Connected components, ignoring directions, each sorted by vertex id.
pub fn components(g: &WeightedGraph) -> Vec<Vec<VertexId>> {
    let inc = g.incidence();
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![g.vertices()[start]];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let v = g.vertices()[i];
            for &e in &inc[i] {
                let j = g.vertex_index(g.edge(e).unwrap().other(v)).unwrap();
                if !seen[j] {
                    seen[j] = true;
                    comp.push(g.vertices()[j]);
                    queue.push_back(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Two-colouring by dense vertex index, or `None` when an odd cycle exists.
pub fn bipartition(g: &WeightedGraph) -> Option<Vec<bool>> {
    let inc = g.incidence();
    let n = g.vertex_count();
    let mut side: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let v = g.vertices()[i];
            let s = side[i].unwrap();
            for &e in &inc[i] {
                let j = g.vertex_index(g.edge(e).unwrap().other(v)).unwrap();
                match side[j] {
                    None => {
                        side[j] = Some(!s);
                        queue.push_back(j);
                    }
                    Some(t) if t == s => return None,
                    _ => {}
                }
            }
        }
    }
    Some(side.into_iter().map(|s| s.unwrap()).collect())
}

pub fn is_bipartite(g: &WeightedGraph) -> bool {
    bipartition(g).is_some()
}

/// Summary of the structural properties the reductions rely on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub vertices: usize,
    pub edges: usize,
    pub connected: bool,
    pub bipartite: bool,
    pub simple: bool,
    pub max_degree: usize,
    /// Euler check on the attached embedding, `None` without one.
    pub planar: Option<bool>,
}

pub fn check_structure(g: &WeightedGraph) -> StructureReport {
    StructureReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        connected: components(g).len() <= 1,
        bipartite: is_bipartite(g),
        simple: g.is_simple(),
        max_degree: g.incidence().iter().map(Vec::len).max().unwrap_or(0),
        planar: g.rotation().map(|_| check_euler(g).is_ok()),
    }
}
