//! Weighted multigraphs with per-edge interdiction costs and optional
//! rotation systems.

mod embedding;
mod layers;
mod line;
mod structure;

pub use embedding::{check_euler, dual, face_area2, faces, rotation_from_positions, Faces, Point, Rotation};
pub(crate) use embedding::orbit_visits;
pub use layers::{bfs_layers, bfs_layers_multi, Layering};
pub use line::{directed_line_graph, line_arcs, LineArc, LineGraph, Side};
pub use structure::{bipartition, check_structure, components, is_bipartite, StructureReport};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
/// A half-edge. Dart `2 * id` sits at the tail of edge `id`, dart `2 * id + 1` at its head.
pub type Dart = usize;

#[inline]
pub fn dart_edge(d: Dart) -> EdgeId {
    d / 2
}

#[inline]
pub fn reverse(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub fn tail_dart(e: EdgeId) -> Dart {
    2 * e
}

#[inline]
pub fn head_dart(e: EdgeId) -> Dart {
    2 * e + 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    /// Matching weight, path length or flow capacity depending on the problem.
    pub w: i64,
    /// Interdiction cost.
    pub c: i64,
}

impl Edge {
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug)]
pub struct WeightedGraph {
    directed: bool,
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    vpos: HashMap<VertexId, usize>,
    epos: HashMap<EdgeId, usize>,
    rotation: Option<Rotation>,
}

impl WeightedGraph {
    pub fn new(directed: bool) -> Self {
        WeightedGraph {
            directed,
            vertices: Vec::new(),
            edges: Vec::new(),
            vpos: HashMap::new(),
            epos: HashMap::new(),
            rotation: None,
        }
    }

    /// Graph on vertices `0..n` without edges.
    pub fn with_vertices(directed: bool, n: usize) -> Self {
        let mut g = Self::new(directed);
        for v in 0..n {
            g.vpos.insert(v, v);
            g.vertices.push(v);
        }
        g
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vpos.contains_key(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.epos.contains_key(&e)
    }

    /// Dense position of a vertex in `vertices()`.
    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vpos.get(&v).copied()
    }

    /// Dense position of an edge in `edges()`.
    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.epos.get(&e).copied()
    }

    pub fn edge(&self, e: EdgeId) -> Option<&Edge> {
        self.epos.get(&e).map(|&i| &self.edges[i])
    }

    pub fn edge_mut(&mut self, e: EdgeId) -> Option<&mut Edge> {
        match self.epos.get(&e) {
            Some(&i) => Some(&mut self.edges[i]),
            None => None,
        }
    }

    /// Adds a vertex with the next unused id.
    pub fn add_vertex(&mut self) -> VertexId {
        let id = self.vertices.iter().max().map_or(0, |&v| v + 1);
        self.insert_vertex(id).expect("fresh id");
        id
    }

    pub fn insert_vertex(&mut self, v: VertexId) -> Result<()> {
        if self.vpos.contains_key(&v) {
            return Err(Error::InvalidGraph(format!("duplicate vertex {v}")));
        }
        self.vpos.insert(v, self.vertices.len());
        self.vertices.push(v);
        Ok(())
    }

    fn next_edge_id(&self) -> EdgeId {
        self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0)
    }

    /// Adds an edge with the next unused id. Weights and costs must be non-negative.
    pub fn add_edge(&mut self, tail: VertexId, head: VertexId, w: i64, c: i64) -> Result<EdgeId> {
        let id = self.next_edge_id();
        self.insert_edge(Edge { id, tail, head, w, c })?;
        Ok(id)
    }

    pub fn insert_edge(&mut self, edge: Edge) -> Result<()> {
        if self.epos.contains_key(&edge.id) {
            return Err(Error::InvalidGraph(format!("duplicate edge id {}", edge.id)));
        }
        for v in [edge.tail, edge.head] {
            if !self.vpos.contains_key(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        if edge.w < 0 || edge.c < 0 {
            return Err(Error::InvalidGraph(format!(
                "edge {} has negative weight or cost",
                edge.id
            )));
        }
        self.epos.insert(edge.id, self.edges.len());
        self.edges.push(edge);
        self.rotation = None;
        Ok(())
    }

    pub fn rotation(&self) -> Option<&Rotation> {
        self.rotation.as_ref()
    }

    /// Attaches a rotation system after checking that it lists every dart exactly once.
    pub fn set_rotation(&mut self, rotation: Rotation) -> Result<()> {
        rotation.validate(self)?;
        self.rotation = Some(rotation);
        Ok(())
    }

    pub fn clear_rotation(&mut self) {
        self.rotation = None;
    }

    /// Vertex a dart is attached to.
    pub fn dart_vertex(&self, d: Dart) -> Option<VertexId> {
        let e = self.edge(dart_edge(d))?;
        Some(if d.is_multiple_of(2) { e.tail } else { e.head })
    }

    /// Incident edge ids per dense vertex index, both directions, loops listed twice.
    pub fn incidence(&self) -> Vec<Vec<EdgeId>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            inc[self.vpos[&e.tail]].push(e.id);
            inc[self.vpos[&e.head]].push(e.id);
        }
        inc
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    pub fn total_cost(&self, set: &[EdgeId]) -> i64 {
        set.iter().filter_map(|&e| self.edge(e)).map(|e| e.c).sum()
    }

    pub fn total_weight(&self, set: &[EdgeId]) -> i64 {
        set.iter().filter_map(|&e| self.edge(e)).map(|e| e.w).sum()
    }

    /// Copy with the given edges removed. Ids of the survivors are unchanged and
    /// the rotation system, if any, is restricted to the remaining darts.
    pub fn delete_edges(&self, removed: &[EdgeId]) -> WeightedGraph {
        let drop: std::collections::HashSet<EdgeId> = removed.iter().copied().collect();
        self.filter_edges(|e| !drop.contains(&e.id))
    }

    /// Copy keeping every vertex but only the listed edges.
    pub fn edge_subgraph(&self, kept: &[EdgeId]) -> WeightedGraph {
        let keep: std::collections::HashSet<EdgeId> = kept.iter().copied().collect();
        self.filter_edges(|e| keep.contains(&e.id))
    }

    fn filter_edges(&self, keep: impl Fn(&Edge) -> bool) -> WeightedGraph {
        let mut g = WeightedGraph {
            directed: self.directed,
            vertices: self.vertices.clone(),
            edges: Vec::new(),
            vpos: self.vpos.clone(),
            epos: HashMap::new(),
            rotation: None,
        };
        for e in self.edges.iter().filter(|e| keep(e)) {
            g.epos.insert(e.id, g.edges.len());
            g.edges.push(e.clone());
        }
        if let Some(rot) = &self.rotation {
            g.rotation = Some(rot.restrict(|d| g.epos.contains_key(&dart_edge(d))));
        }
        g
    }

    /// Same graph with every edge direction forgotten.
    pub fn as_undirected(&self) -> WeightedGraph {
        let mut g = self.clone();
        g.directed = false;
        g
    }

    /// True when there are no loops and no two edges share an endpoint pair.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|e| {
            let key = if self.directed {
                (e.tail, e.head)
            } else {
                (e.tail.min(e.head), e.tail.max(e.head))
            };
            !e.is_loop() && seen.insert(key)
        })
    }
}
