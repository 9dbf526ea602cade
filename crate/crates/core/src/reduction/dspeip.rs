//! Planar flow improvement to shortest path interdiction through the planar dual.
//!
//! Every face of the flow network becomes a vertex. The face with both terminals on its
//! boundary is split in two, `u` taking the dual edges of the boundary from the sink back
//! to the source and `v` the ones from the source to the sink, so `u`-`v` paths are
//! exactly the source-sink cuts. Each dual edge is tripled: a protected copy with the
//! capacity as length, a free copy the leader may delete, and a protected reversed copy.
//! Deleting the free copy of an edge forces paths across it to pay its capacity.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use super::planarize::PlanarBcfip;
use super::{ArtifactSummary, Reduction, Stage};
use crate::error::{Error, Result};
use crate::graph::{
    check_euler, components, dart_edge, face_area2, faces, head_dart, orbit_visits, tail_dart, Dart, EdgeId,
    Faces, Point, Rotation, VertexId, WeightedGraph,
};
use crate::instance::{Instance, ProblemKind};
use crate::solvers::{max_flow, min_cut_side, shortest_path, Distance};

#[derive(Clone, Debug)]
pub struct BcfipToDspeip {
    pub source: Instance,
    pub instance: Instance,
    pub faces: Faces,
    pub outer_face: usize,
    /// Dual vertex of every face except the outer one.
    pub face_vertex: BTreeMap<usize, VertexId>,
    pub u: VertexId,
    pub v: VertexId,
    /// Outer boundary darts from the source up to the sink.
    pub walk_st: Vec<Dart>,
    /// Outer boundary darts from the sink back to the source.
    pub walk_ts: Vec<Dart>,
    /// Weighted copy, free copy and reversed copy of every source edge.
    pub copies: BTreeMap<EdgeId, [EdgeId; 3]>,
    /// Source edge of every target edge.
    pub origin: BTreeMap<EdgeId, EdgeId>,
    /// Dual endpoints of every source edge, in the direction of its first two copies.
    pub ends: BTreeMap<EdgeId, (VertexId, VertexId)>,
    /// Flow value of the source decision problem, zero when none was given.
    pub threshold: i64,
}

/// Outcome of comparing both sides of the duality for one set of bought edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualCheck {
    /// Maximum flow through the bought edges.
    pub alpha: i64,
    /// Shortest `u`-`v` path once the free copies of the bought edges are deleted.
    pub rho: Distance,
    /// Length of the path built from a minimum cut, if the cut dualised to a simple path.
    pub cut_path: Option<i64>,
    /// Capacity of the cut read off a shortest path, if that cut separates the terminals.
    pub path_cut: Option<i64>,
}

impl DualCheck {
    pub fn holds(&self) -> bool {
        let rho = Distance::Finite(self.alpha);
        self.rho == rho
            && self.cut_path == Some(self.alpha)
            && self.path_cut.is_some_and(|c| Distance::Finite(c) <= self.rho)
    }
}

/// Builds the dual instance of the network produced by crossing removal.
pub fn bcfip_to_dspeip(p: &PlanarBcfip) -> Result<BcfipToDspeip> {
    let mut out = dual_split(&p.instance, Some(&p.positions))?;
    out.threshold = p.threshold();
    Ok(out)
}

/// Vertices other than `x` all lie in one component of the graph without `x`.
fn connected_without(g: &WeightedGraph, x: VertexId) -> bool {
    let rest = g.delete_edges(
        &g.edges().iter().filter(|e| e.tail == x || e.head == x).map(|e| e.id).collect::<Vec<_>>(),
    );
    components(&rest).iter().filter(|c| c != &&vec![x]).count() <= 1
}

/// Face whose boundary holds both terminals once: the unbounded face of the drawing when
/// positions are known, otherwise the longest such face, ties going to the smallest dart.
fn outer_face(
    g: &WeightedGraph,
    f: &Faces,
    s: VertexId,
    t: VertexId,
    positions: Option<&HashMap<VertexId, Point>>,
) -> Result<usize> {
    let once = |i: usize| orbit_visits(g, &f.orbits[i], s) == 1 && orbit_visits(g, &f.orbits[i], t) == 1;
    if let Some(pos) = positions {
        let zero = num_rational::Ratio::from_integer(0);
        let outer: Vec<usize> = (0..f.count()).filter(|&i| face_area2(g, &f.orbits[i], pos) > zero).collect();
        // a drawing without area, such as a tree, falls through to the combinatorial rule
        match outer.as_slice() {
            [i] if once(*i) => return Ok(*i),
            [] => {}
            _ => return Err(Error::WalkNotFound),
        }
    }
    (0..f.count())
        .filter(|&i| once(i))
        .max_by_key(|&i| (f.orbits[i].len(), std::cmp::Reverse(f.orbits[i][0])))
        .ok_or(Error::WalkNotFound)
}

/// Dual split of any embedded flow network whose terminals share a face. Positions, when
/// given, pick the unbounded face as the split face.
pub fn dual_split(inst: &Instance, positions: Option<&HashMap<VertexId, Point>>) -> Result<BcfipToDspeip> {
    let g = &inst.graph;
    if !g.is_directed() {
        return Err(Error::UndirectedInput);
    }
    let (s, t) = inst.terminals()?;
    for x in [s, t] {
        if !g.has_vertex(x) {
            return Err(Error::TerminalMissing(x));
        }
    }
    if g.rotation().is_none() {
        return Err(Error::EmbeddingMissing);
    }
    check_euler(g)?;
    if components(g).len() != 1 {
        return Err(Error::AssumptionViolated("flow network is not connected".into()));
    }
    for x in [s, t] {
        if !connected_without(g, x) {
            return Err(Error::AssumptionViolated(format!("removing terminal {x} disconnects the network")));
        }
    }
    let f = faces(g)?;
    let outer = outer_face(g, &f, s, t, positions)?;

    let orbit = &f.orbits[outer];
    let start = orbit.iter().position(|&d| g.dart_vertex(d) == Some(s)).unwrap();
    let walk: Vec<Dart> = orbit[start..].iter().chain(&orbit[..start]).copied().collect();
    let mid = walk.iter().position(|&d| g.dart_vertex(d) == Some(t)).unwrap();
    let walk_st = walk[..mid].to_vec();
    let walk_ts = walk[mid..].to_vec();
    let on_ts: HashSet<Dart> = walk_ts.iter().copied().collect();

    let (u, v) = (0, 1);
    let mut face_vertex = BTreeMap::new();
    for i in (0..f.count()).filter(|&i| i != outer) {
        face_vertex.insert(i, 2 + face_vertex.len());
    }
    let end = |d: Dart| -> VertexId {
        let face = f.face_of[&d];
        if face != outer {
            face_vertex[&face]
        } else if on_ts.contains(&d) {
            u
        } else {
            v
        }
    };

    let big = inst.budget + 1;
    let mut h = WeightedGraph::with_vertices(true, 2 + face_vertex.len());
    let mut copies = BTreeMap::new();
    let mut origin = BTreeMap::new();
    let mut ends = BTreeMap::new();
    for (idx, e) in g.edges().iter().enumerate() {
        // the dual edge runs from the face left of the edge to the face on its right
        let (from, to) = (end(head_dart(e.id)), end(tail_dart(e.id)));
        let ids = [3 * idx, 3 * idx + 1, 3 * idx + 2];
        for (id, (a, b, w, c)) in ids.into_iter().zip([(from, to, e.w, big), (from, to, 0, e.c), (to, from, 0, big)]) {
            h.insert_edge(crate::graph::Edge { id, tail: a, head: b, w, c })?;
            origin.insert(id, e.id);
        }
        copies.insert(e.id, ids);
        ends.insert(e.id, (from, to));
    }

    let mut order: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    let mut place = |at: VertexId, d: Dart| {
        let [a, b, c] = copies[&dart_edge(d)];
        let darts = if d % 2 == 1 {
            [tail_dart(a), tail_dart(b), head_dart(c)]
        } else {
            [tail_dart(c), head_dart(b), head_dart(a)]
        };
        order.entry(at).or_default().extend(darts);
    };
    for (&face, &x) in &face_vertex {
        for &d in &f.orbits[face] {
            place(x, d);
        }
    }
    for &d in &walk_ts {
        place(u, d);
    }
    for &d in &walk_st {
        place(v, d);
    }
    let mut rot = Rotation::new();
    for x in h.vertices().to_vec() {
        rot.set(x, order.remove(&x).unwrap_or_default());
    }
    h.set_rotation(rot)?;
    check_euler(&h)?;

    let instance = Instance::new(h, inst.budget, ProblemKind::Dspeip).with_terminals(u, v);
    Ok(BcfipToDspeip {
        source: inst.clone(),
        instance,
        faces: f,
        outer_face: outer,
        face_vertex,
        u,
        v,
        walk_st,
        walk_ts,
        copies,
        origin,
        ends,
        threshold: 0,
    })
}

impl BcfipToDspeip {
    /// Source edges crossed by a set of target edges.
    pub fn crossed(&self, path: &[EdgeId]) -> Vec<EdgeId> {
        let set: BTreeSet<EdgeId> = path.iter().filter_map(|e| self.origin.get(e)).copied().collect();
        set.into_iter().collect()
    }

    /// Directed `u`-`v` path crossing exactly the edges of the cut given by `side`.
    ///
    /// The side is first enlarged to everything outside the sink's component, so that both
    /// shores are connected and the cut is a bond. Fails with `AssumptionViolated` when the
    /// dual of the bond is not a simple `u`-`v` path.
    pub fn cut_to_path(&self, bought: &[EdgeId], side: &[VertexId]) -> Result<Vec<EdgeId>> {
        let g = &self.source.graph;
        let (_, t) = self.source.terminals()?;
        let side: HashSet<VertexId> = side.iter().copied().collect();
        let far = shore(g, t, |e| !(side.contains(&e.tail) || side.contains(&e.head)));
        let bought: HashSet<EdgeId> = bought.iter().copied().collect();

        let mut links: HashMap<VertexId, Vec<(EdgeId, VertexId)>> = HashMap::new();
        let mut count = 0;
        for e in g.edges() {
            if far.contains(&e.tail) == far.contains(&e.head) {
                continue;
            }
            let (a, b) = self.ends[&e.id];
            if a == b {
                return Err(Error::AssumptionViolated(format!("cut edge {} dualises to a loop", e.id)));
            }
            links.entry(a).or_default().push((e.id, b));
            links.entry(b).or_default().push((e.id, a));
            count += 1;
        }
        let simple = links.iter().all(|(&x, l)| l.len() == if x == self.u || x == self.v { 1 } else { 2 });
        if !simple || !links.contains_key(&self.u) || !links.contains_key(&self.v) {
            return Err(Error::AssumptionViolated("cut does not dualise to a simple path".into()));
        }
        let mut path = Vec::with_capacity(count);
        let (mut at, mut last) = (self.u, None);
        while at != self.v {
            let &(e, next) = links[&at].iter().find(|(e, _)| Some(*e) != last).unwrap();
            let [a, b, c] = self.copies[&e];
            let forward = self.ends[&e] == (at, next);
            path.push(if !forward {
                c
            } else if bought.contains(&e) {
                a
            } else {
                b
            });
            last = Some(e);
            at = next;
        }
        if path.len() != count {
            return Err(Error::AssumptionViolated("cut dual has a cycle apart from the path".into()));
        }
        Ok(path)
    }

    /// Source side of the cut crossed by a target path: what the source still reaches
    /// once every crossed edge is removed.
    pub fn path_to_cut(&self, path: &[EdgeId]) -> Result<Vec<VertexId>> {
        let (s, _) = self.source.terminals()?;
        let crossed: HashSet<EdgeId> = self.crossed(path).into_iter().collect();
        let mut side: Vec<VertexId> = shore(&self.source.graph, s, |e| !crossed.contains(&e.id)).into_iter().collect();
        side.sort_unstable();
        Ok(side)
    }

    /// Compares flow and path values for one set of bought edges and checks both
    /// certificate translations.
    pub fn check(&self, bought: &[EdgeId]) -> Result<DualCheck> {
        let g = &self.source.graph;
        let (s, t) = self.source.terminals()?;
        let sub = g.edge_subgraph(bought);
        let alpha = max_flow(&sub, s, t)?.value;
        let deleted = self.forward(bought);
        let cut_graph = self.instance.graph.delete_edges(&deleted);
        let sp = shortest_path(&cut_graph, self.u, self.v)?;

        let side = min_cut_side(&sub, s, t)?;
        let cut_path = match self.cut_to_path(bought, &side) {
            Ok(path) if is_walk(&cut_graph, &path, self.u, self.v) => {
                Some(path.iter().map(|&e| cut_graph.edge(e).unwrap().w).sum())
            }
            Ok(_) | Err(Error::AssumptionViolated(_)) => None,
            Err(e) => return Err(e),
        };

        let path_cut = if sp.distance == Distance::Unreachable {
            None
        } else {
            let side: HashSet<VertexId> = self.path_to_cut(&sp.edges)?.into_iter().collect();
            (!side.contains(&t)).then(|| {
                sub.edges().iter().filter(|e| side.contains(&e.tail) && !side.contains(&e.head)).map(|e| e.w).sum()
            })
        };
        Ok(DualCheck { alpha, rho: sp.distance, cut_path, path_cut })
    }
}

/// Vertices reachable from `root` along edges accepted by `keep`, ignoring directions.
fn shore(g: &WeightedGraph, root: VertexId, keep: impl Fn(&crate::graph::Edge) -> bool) -> HashSet<VertexId> {
    let mut adj: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for e in g.edges().iter().filter(|e| keep(e)) {
        adj.entry(e.tail).or_default().push(e.head);
        adj.entry(e.head).or_default().push(e.tail);
    }
    let mut seen = HashSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &y in adj.get(&x).map_or(&[][..], |v| v.as_slice()) {
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// The edges, all present in `g`, form a directed walk from `a` to `b` in the given order.
fn is_walk(g: &WeightedGraph, path: &[EdgeId], a: VertexId, b: VertexId) -> bool {
    let mut at = a;
    for &e in path {
        match g.edge(e) {
            Some(e) if e.tail == at => at = e.head,
            _ => return false,
        }
    }
    at == b
}

impl Reduction for BcfipToDspeip {
    fn target(&self) -> &Instance {
        &self.instance
    }

    /// Free copies of the bought edges, which the leader deletes.
    fn forward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = set.iter().filter_map(|e| self.copies.get(e)).map(|c| c[1]).collect();
        out.sort_unstable();
        out
    }

    /// Source edges whose free copy is deleted.
    fn backward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> =
            set.iter().filter(|&&e| e % 3 == 1).filter_map(|e| self.origin.get(e)).copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn summary(&self) -> ArtifactSummary {
        let mut params = BTreeMap::new();
        params.insert("faces".into(), self.faces.count() as i64);
        params.insert("outer_face".into(), self.outer_face as i64);
        params.insert("u".into(), self.u as i64);
        params.insert("v".into(), self.v as i64);
        ArtifactSummary {
            stage: Stage::Dspeip,
            vertices: self.instance.graph.vertex_count(),
            edges: self.instance.graph.edge_count(),
            budget: self.instance.budget,
            threshold: self.threshold,
            params,
            edge_map: self.copies.iter().map(|(&e, c)| (e, c.to_vec())).collect(),
            vertex_map: BTreeMap::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::{is_to_bcfip, planarize_bcfip};
    use crate::solvers::{for_each_feasible, FreeEdges};

    fn figure_graph() -> WeightedGraph {
        let mut g = WeightedGraph::with_vertices(false, 4);
        g.add_edge(0, 1, 0, 0).unwrap();
        g.add_edge(0, 2, 0, 0).unwrap();
        g.add_edge(1, 2, 0, 0).unwrap();
        g.add_edge(2, 3, 0, 0).unwrap();
        g
    }

    #[test]
    fn single_path_network() {
        let g = WeightedGraph::with_vertices(false, 1);
        let p = planarize_bcfip(&is_to_bcfip(&g, 1).unwrap()).unwrap();
        let d = bcfip_to_dspeip(&p).unwrap();
        assert_eq!(d.instance.graph.vertex_count(), 2);
        assert_eq!(d.instance.graph.edge_count(), 6);
        for bought in [vec![], vec![0], vec![1], vec![0, 1]] {
            assert!(d.check(&bought).unwrap().holds(), "{bought:?}");
        }
    }

    #[test]
    fn figure_instance_duality() {
        let p = planarize_bcfip(&is_to_bcfip(&figure_graph(), 2).unwrap()).unwrap();
        let d = bcfip_to_dspeip(&p).unwrap();
        assert_eq!(d.faces.count(), 18);
        assert_eq!(d.instance.graph.vertex_count(), 19);
        assert_eq!(d.instance.graph.edge_count(), 96);
        // the supply arcs lie on the outer boundary and dualise to edges at u
        let supply = p.children[&p.source.supply[&0]][0];
        let [a, b, c] = d.copies[&supply];
        let e = d.instance.graph.edge(a).unwrap();
        assert_eq!((e.w, e.c), (16, p.instance.budget + 1));
        assert!(e.tail == d.u || e.head == d.u);
        assert_eq!(d.instance.graph.edge(b).unwrap().c, 16);
        assert_eq!(d.instance.graph.edge(c).unwrap().w, 0);

        let full = d.check(&p.forward(&p.source.forward(&[0, 3]))).unwrap();
        assert!(full.holds());
        assert_eq!(full.alpha, p.threshold());
        assert!(d.check(&[]).unwrap().holds());
        let all: Vec<EdgeId> = p.instance.graph.edges().iter().map(|e| e.id).collect();
        assert!(d.check(&all).unwrap().holds());
    }

    #[test]
    fn every_affordable_set_on_an_edge() {
        let mut g = WeightedGraph::with_vertices(false, 2);
        g.add_edge(0, 1, 0, 0).unwrap();
        let p = planarize_bcfip(&is_to_bcfip(&g, 1).unwrap()).unwrap();
        let d = bcfip_to_dspeip(&p).unwrap();
        let n = for_each_feasible(&p.instance.graph, p.instance.budget, FreeEdges::Enumerate, 1 << 16, |set| {
            let c = d.check(set)?;
            assert!(c.holds(), "{set:?} {c:?}");
            Ok(())
        })
        .unwrap();
        assert!(n > 1);
    }

    #[test]
    fn rejects_terminals_off_a_common_face() {
        // the sink is isolated
        let mut g = WeightedGraph::with_vertices(true, 3);
        g.add_edge(0, 1, 1, 1).unwrap();
        let mut inst = Instance::new(g, 1, ProblemKind::Bcfip).with_terminals(0, 2);
        inst.graph.set_rotation(Rotation { order: [(0, vec![0]), (1, vec![1]), (2, vec![])].into() }).unwrap();
        assert!(matches!(dual_split(&inst, None), Err(Error::AssumptionViolated(_))));
    }
}
