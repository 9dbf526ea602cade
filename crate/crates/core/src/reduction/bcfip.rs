//! Independent set to budget-constrained flow improvement on a directed graph.
//!
//! The source is joined to one node per vertex, each vertex node feeds the nodes of its
//! incident edges, and every edge node and vertex node drains into the sink. Only the
//! source arcs cost anything, so a budget of `k` picks `k` vertex nodes, and the flow
//! reaches `k * d` exactly when the picked vertices are pairwise non-adjacent.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ArtifactSummary, Stage};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId, WeightedGraph};
use crate::instance::{Instance, ProblemKind};

/// Role of an arc in the flow network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeClass {
    /// Source to a vertex node.
    Supply,
    /// Vertex node to an incident edge node.
    Incidence,
    /// Edge node to the sink.
    EdgeDrain,
    /// Vertex node to the sink.
    VertexDrain,
}

#[derive(Clone, Debug)]
pub struct IsToBcfip {
    pub source: WeightedGraph,
    pub k: usize,
    /// Maximum degree, raised to 1 for edgeless graphs.
    pub d: i64,
    pub instance: Instance,
    pub s: VertexId,
    pub t: VertexId,
    pub vertex_node: BTreeMap<VertexId, VertexId>,
    pub edge_node: BTreeMap<EdgeId, VertexId>,
    pub supply: BTreeMap<VertexId, EdgeId>,
    /// Arcs from the tail-side and head-side vertex nodes into each edge node.
    pub incidence: BTreeMap<EdgeId, [EdgeId; 2]>,
    pub edge_drain: BTreeMap<EdgeId, EdgeId>,
    pub vertex_drain: BTreeMap<VertexId, EdgeId>,
    pub class: BTreeMap<EdgeId, EdgeClass>,
}

pub fn is_to_bcfip(g: &WeightedGraph, k: usize) -> Result<IsToBcfip> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if !g.is_simple() {
        return Err(Error::NotSimple("independent set input".into()));
    }
    if k == 0 {
        return Err(Error::InvalidInput("target size must be at least 1".into()));
    }
    let n = g.vertex_count();
    let m = g.edge_count();
    let d = g.vertices().iter().map(|&v| g.degree(v)).max().unwrap_or(0).max(1) as i64;

    let mut h = WeightedGraph::with_vertices(true, 2 + n + m);
    let (s, t) = (0, 1);
    let vertex_node: BTreeMap<_, _> = g.vertices().iter().enumerate().map(|(i, &v)| (v, 2 + i)).collect();
    let edge_node: BTreeMap<_, _> = g.edges().iter().enumerate().map(|(j, e)| (e.id, 2 + n + j)).collect();
    let mut class = BTreeMap::new();

    let mut supply = BTreeMap::new();
    for &v in g.vertices() {
        let id = h.add_edge(s, vertex_node[&v], d, 1)?;
        supply.insert(v, id);
        class.insert(id, EdgeClass::Supply);
    }
    let mut incidence = BTreeMap::new();
    for e in g.edges() {
        let a = h.add_edge(vertex_node[&e.tail], edge_node[&e.id], 1, 0)?;
        let b = h.add_edge(vertex_node[&e.head], edge_node[&e.id], 1, 0)?;
        incidence.insert(e.id, [a, b]);
        class.insert(a, EdgeClass::Incidence);
        class.insert(b, EdgeClass::Incidence);
    }
    let mut edge_drain = BTreeMap::new();
    for e in g.edges() {
        let id = h.add_edge(edge_node[&e.id], t, 1, 0)?;
        edge_drain.insert(e.id, id);
        class.insert(id, EdgeClass::EdgeDrain);
    }
    let mut vertex_drain = BTreeMap::new();
    for &v in g.vertices() {
        let id = h.add_edge(vertex_node[&v], t, d - g.degree(v) as i64, 0)?;
        vertex_drain.insert(v, id);
        class.insert(id, EdgeClass::VertexDrain);
    }
    let instance = Instance::new(h, k as i64, ProblemKind::Bcfip).with_terminals(s, t);
    Ok(IsToBcfip {
        source: g.clone(),
        k,
        d,
        instance,
        s,
        t,
        vertex_node,
        edge_node,
        supply,
        incidence,
        edge_drain,
        vertex_drain,
        class,
    })
}

impl IsToBcfip {
    /// Flow value reached exactly when an independent set of size `k` exists.
    pub fn threshold(&self) -> i64 {
        self.k as i64 * self.d
    }

    /// Supply arcs of the first `k` given vertices plus every free arc.
    pub fn forward(&self, independent: &[VertexId]) -> Vec<EdgeId> {
        let mut set: Vec<EdgeId> = independent.iter().take(self.k).filter_map(|v| self.supply.get(v).copied()).collect();
        set.extend(self.instance.graph.edges().iter().filter(|e| e.c == 0).map(|e| e.id));
        set.sort_unstable();
        set.dedup();
        set
    }

    /// Vertices whose supply arc is bought.
    pub fn backward(&self, set: &[EdgeId]) -> Vec<VertexId> {
        let mut out: Vec<VertexId> =
            self.supply.iter().filter(|(_, e)| set.contains(e)).map(|(&v, _)| v).collect();
        out.sort_unstable();
        out
    }

    pub fn summary(&self) -> ArtifactSummary {
        let mut edge_map = BTreeMap::new();
        for (&v, &e) in &self.supply {
            edge_map.insert(v, vec![e]);
        }
        let mut vertex_map = BTreeMap::new();
        for (&v, &x) in &self.vertex_node {
            vertex_map.insert(v, vec![x]);
        }
        let params = [("k".to_string(), self.k as i64), ("d".to_string(), self.d)].into();
        ArtifactSummary {
            stage: Stage::Bcfip,
            vertices: self.instance.graph.vertex_count(),
            edges: self.instance.graph.edge_count(),
            budget: self.instance.budget,
            threshold: self.threshold(),
            params,
            edge_map,
            vertex_map,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{max_independent_set, oracle_interdict, Distance, DEFAULT_MAX_SUBSETS};

    pub(crate) fn diamond_with_tail() -> WeightedGraph {
        // edges a, b, c, d of the four-vertex example
        let mut g = WeightedGraph::with_vertices(false, 4);
        g.add_edge(0, 1, 0, 0).unwrap();
        g.add_edge(0, 2, 0, 0).unwrap();
        g.add_edge(1, 2, 0, 0).unwrap();
        g.add_edge(2, 3, 0, 0).unwrap();
        g
    }

    #[test]
    fn four_vertex_labels() {
        let r = is_to_bcfip(&diamond_with_tail(), 2).unwrap();
        assert_eq!(r.d, 3);
        let h = &r.instance.graph;
        for e in r.supply.values() {
            let e = h.edge(*e).unwrap();
            assert_eq!((e.w, e.c), (3, 1));
        }
        assert_eq!(h.edge(r.vertex_drain[&3]).unwrap().w, 2);
        assert_eq!(h.edge(r.vertex_drain[&2]).unwrap().w, 0);
        assert_eq!(h.edge_count(), 4 + 8 + 4 + 4);
    }

    #[test]
    fn triangle_has_no_pair() {
        let mut g = WeightedGraph::with_vertices(false, 3);
        g.add_edge(0, 1, 0, 0).unwrap();
        g.add_edge(1, 2, 0, 0).unwrap();
        g.add_edge(0, 2, 0, 0).unwrap();
        let r = is_to_bcfip(&g, 2).unwrap();
        let best = oracle_interdict(&r.instance, DEFAULT_MAX_SUBSETS).unwrap();
        assert!(best.value < Distance::Finite(r.threshold()));
        assert_eq!(max_independent_set(&g).unwrap().len(), 1);
        let r = is_to_bcfip(&g, 1).unwrap();
        let best = oracle_interdict(&r.instance, DEFAULT_MAX_SUBSETS).unwrap();
        assert_eq!(best.value, Distance::Finite(r.threshold()));
    }

    #[test]
    fn edgeless_graph_uses_unit_degree() {
        let g = WeightedGraph::with_vertices(false, 3);
        let r = is_to_bcfip(&g, 3).unwrap();
        assert_eq!(r.d, 1);
        let best = oracle_interdict(&r.instance, DEFAULT_MAX_SUBSETS).unwrap();
        assert_eq!(best.value, Distance::Finite(3));
        assert_eq!(r.backward(&best.interdiction), vec![0, 1, 2]);
    }
}
