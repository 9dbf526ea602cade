//! Shortest path interdiction to minimum perfect matching interdiction.
//!
//! The path graph first gets leaf terminals and has every vertex of degree above three
//! (or carrying a loop) blown up into a directed cycle of protected edges, following the
//! rotation. Its directed line graph is then planar. Each line vertex is stretched into a
//! path `a - b - c - d` whose middle edge carries the weight and cost of the edge it
//! stands for; arcs leave from `d` and enter at `a`. A perfect matching takes the middle
//! edges along one path from the first terminal to the last and the two outer edges
//! everywhere else, so minimum perfect matchings are shortest paths.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use super::{ArtifactSummary, Reduction, Stage};
use crate::error::{Error, Result};
use crate::graph::{
    bipartition, check_euler, dart_edge, directed_line_graph, head_dart, tail_dart, Dart, Edge, EdgeId,
    LineGraph, Rotation, VertexId, WeightedGraph,
};
use crate::instance::{Instance, ProblemKind};
use crate::solvers::{is_matching, min_weight_perfect_matching, shortest_path, Distance};

/// Directed cycle replacing one vertex; `cycle[i]` runs from `corners[i]` to `corners[i + 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gadget {
    pub corners: Vec<VertexId>,
    pub cycle: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct DspeipToMpmeip {
    pub source: Instance,
    /// Path graph with leaf terminals and maximum degree three. Source edges keep their ids.
    pub bounded: WeightedGraph,
    /// Start and end terminals of the bounded graph, and the edges leaving and entering them.
    pub u1: VertexId,
    pub v1: VertexId,
    pub first: EdgeId,
    pub last: EdgeId,
    pub gadgets: BTreeMap<VertexId, Gadget>,
    pub line: LineGraph,
    pub instance: Instance,
    pub u3: VertexId,
    pub v3: VertexId,
    /// Edges joining `u3` and `v3` to the paths of the first and last edge.
    pub to_u3: EdgeId,
    pub to_v3: EdgeId,
    /// The four path vertices `a, b, c, d` of every bounded-graph edge.
    pub split: BTreeMap<EdgeId, [VertexId; 4]>,
    /// Edges `a-b`, `b-c` and `c-d` of every bounded-graph edge.
    pub pieces: BTreeMap<EdgeId, [EdgeId; 3]>,
    /// Target edge joining `d` of the first edge to `a` of the second.
    pub links: HashMap<(EdgeId, EdgeId), EdgeId>,
    pub threshold: i64,
}

/// Outcome of comparing path length and matching weight for one deletion set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingCheck {
    pub rho: Distance,
    /// Minimum perfect matching weight, `Unreachable` when none exists.
    pub mu: Distance,
    /// Weight of the perfect matching built from a shortest path.
    pub path_matching: Option<i64>,
    /// Length of the path read off a minimum perfect matching.
    pub matching_path: Option<i64>,
}

impl MatchingCheck {
    pub fn holds(&self) -> bool {
        self.rho == self.mu
            && match self.rho {
                Distance::Finite(r) => self.path_matching == Some(r) && self.matching_path == Some(r),
                Distance::Unreachable => true,
            }
    }
}

struct Bounded {
    graph: WeightedGraph,
    u1: VertexId,
    v1: VertexId,
    first: EdgeId,
    last: EdgeId,
    gadgets: BTreeMap<VertexId, Gadget>,
}

/// Adds leaf terminals where needed and replaces crowded vertices by cycles.
fn bound_degrees(g: &WeightedGraph, u: VertexId, v: VertexId, big: i64) -> Result<Bounded> {
    let rot = g.rotation().ok_or(Error::EmbeddingMissing)?;
    let mut order: BTreeMap<VertexId, Vec<Dart>> = g.vertices().iter().map(|&x| (x, rot.at(x).to_vec())).collect();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut vertices: Vec<VertexId> = g.vertices().to_vec();
    let mut next_v = vertices.iter().max().map_or(0, |&x| x + 1);
    let mut next_e = edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
    let mut pos: HashMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, e)| (e.id, i)).collect();

    // a terminal that is already a leaf pointing the right way needs no new leaf
    let (u1, first) = match order[&u].as_slice() {
        &[d] if d % 2 == 0 && !edges[pos[&dart_edge(d)]].is_loop() => (u, dart_edge(d)),
        _ => {
            let (x, id) = (next_v, next_e);
            edges.push(Edge { id, tail: x, head: u, w: 0, c: big });
            order.get_mut(&u).unwrap().push(head_dart(id));
            order.insert(x, vec![tail_dart(id)]);
            vertices.push(x);
            (next_v, next_e) = (next_v + 1, next_e + 1);
            (x, id)
        }
    };
    let (v1, last) = match order[&v].as_slice() {
        &[d] if d % 2 == 1 && !edges[pos[&dart_edge(d)]].is_loop() => (v, dart_edge(d)),
        _ => {
            let (x, id) = (next_v, next_e);
            edges.push(Edge { id, tail: v, head: x, w: 0, c: big });
            order.get_mut(&v).unwrap().push(tail_dart(id));
            order.insert(x, vec![head_dart(id)]);
            vertices.push(x);
            (next_v, next_e) = (next_v + 1, next_e + 1);
            (x, id)
        }
    };
    pos = edges.iter().enumerate().map(|(i, e)| (e.id, i)).collect();

    let loops: HashSet<VertexId> = edges.iter().filter(|e| e.is_loop()).map(|e| e.tail).collect();
    let mut gadgets = BTreeMap::new();
    for x in vertices.clone() {
        let darts = order[&x].clone();
        if darts.len() <= 3 && !loops.contains(&x) {
            continue;
        }
        let k = darts.len();
        let corners: Vec<VertexId> = (next_v..next_v + k).collect();
        let cycle: Vec<EdgeId> = (next_e..next_e + k).collect();
        next_v += k;
        next_e += k;
        for (i, &d) in darts.iter().enumerate() {
            let e = &mut edges[pos[&dart_edge(d)]];
            if d % 2 == 0 {
                e.tail = corners[i];
            } else {
                e.head = corners[i];
            }
        }
        for i in 0..k {
            let j = (i + 1) % k;
            edges.push(Edge { id: cycle[i], tail: corners[i], head: corners[j], w: 0, c: big });
            let prev = cycle[(i + k - 1) % k];
            order.insert(corners[i], vec![darts[i], tail_dart(cycle[i]), head_dart(prev)]);
        }
        order.remove(&x);
        vertices.retain(|&y| y != x);
        vertices.extend(&corners);
        gadgets.insert(x, Gadget { corners, cycle });
    }

    let mut h = WeightedGraph::new(true);
    for &x in &vertices {
        h.insert_vertex(x)?;
    }
    for e in edges {
        h.insert_edge(e)?;
    }
    let mut rot = Rotation::new();
    for (x, ds) in order {
        rot.set(x, ds);
    }
    h.set_rotation(rot)?;
    check_euler(&h)?;
    Ok(Bounded { graph: h, u1, v1, first, last, gadgets })
}

/// Builds the matching instance. The input needs an embedding; its budget is kept.
pub fn dspeip_to_mpmeip(inst: &Instance) -> Result<DspeipToMpmeip> {
    let g = &inst.graph;
    if !g.is_directed() {
        return Err(Error::UndirectedInput);
    }
    let (u, v) = inst.terminals()?;
    for x in [u, v] {
        if !g.has_vertex(x) {
            return Err(Error::TerminalMissing(x));
        }
    }
    if g.rotation().is_none() {
        return Err(Error::EmbeddingMissing);
    }
    check_euler(g)?;
    let big = inst.budget + 1;
    let b = bound_degrees(g, u, v, big)?;
    let line = directed_line_graph(&b.graph)?;
    let lrot = line
        .graph
        .rotation()
        .ok_or_else(|| Error::AssumptionViolated("line graph of the bounded graph has no embedding".into()))?
        .clone();
    check_euler(&line.graph)?;

    let m = b.graph.edge_count();
    let arcs = line.arcs.len();
    let (u3, v3) = (4 * m, 4 * m + 1);
    let mut h = WeightedGraph::with_vertices(false, 4 * m + 2);
    let mut split = BTreeMap::new();
    let mut pieces = BTreeMap::new();
    let mut order: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    for (j, e) in b.graph.edges().iter().enumerate() {
        let [a, bb, c, d] = [4 * j, 4 * j + 1, 4 * j + 2, 4 * j + 3];
        let ids = [3 * j, 3 * j + 1, 3 * j + 2];
        h.insert_edge(Edge { id: ids[0], tail: a, head: bb, w: 0, c: big })?;
        h.insert_edge(Edge { id: ids[1], tail: bb, head: c, w: e.w, c: e.c })?;
        h.insert_edge(Edge { id: ids[2], tail: c, head: d, w: 0, c: big })?;
        order.insert(bb, vec![tail_dart(ids[1]), head_dart(ids[0])]);
        order.insert(c, vec![tail_dart(ids[2]), head_dart(ids[1])]);
        split.insert(e.id, [a, bb, c, d]);
        pieces.insert(e.id, ids);
    }
    let mut links = HashMap::new();
    for (i, arc) in line.arcs.iter().enumerate() {
        let id = 3 * m + i;
        h.insert_edge(Edge { id, tail: split[&arc.from][3], head: split[&arc.to][0], w: 0, c: big })?;
        links.insert((arc.from, arc.to), id);
    }
    let to_u3 = 3 * m + arcs;
    let to_v3 = to_u3 + 1;
    h.insert_edge(Edge { id: to_u3, tail: u3, head: split[&b.first][0], w: 0, c: big })?;
    h.insert_edge(Edge { id: to_v3, tail: split[&b.last][3], head: v3, w: 0, c: big })?;

    // stretch each line vertex: its outgoing arcs stay at d, the incoming ones move to a
    for (j, e) in b.graph.edges().iter().enumerate() {
        let around = lrot.at(line.vertex_of[&e.id]);
        let out = |d: &Dart| d.is_multiple_of(2);
        let start = (0..around.len())
            .find(|&i| out(&around[i]) && !out(&around[(i + around.len() - 1) % around.len()]))
            .unwrap_or(0);
        let cyc: Vec<Dart> = around[start..].iter().chain(&around[..start]).copied().collect();
        let lift = |d: Dart| if d.is_multiple_of(2) { tail_dart(3 * m + dart_edge(d)) } else { head_dart(3 * m + dart_edge(d)) };
        let mut at_d: Vec<Dart> = cyc.iter().filter(|d| out(d)).map(|&d| lift(d)).collect();
        let mut at_a: Vec<Dart> = cyc.iter().filter(|d| !out(d)).map(|&d| lift(d)).collect();
        let contiguous = cyc.iter().skip_while(|d| out(d)).all(|d| !out(d));
        if !contiguous {
            return Err(Error::AssumptionViolated(format!("arcs at line vertex of edge {} interleave", e.id)));
        }
        if e.id == b.first {
            at_a.push(head_dart(to_u3));
        }
        if e.id == b.last {
            at_d.push(tail_dart(to_v3));
        }
        at_d.push(head_dart(3 * j + 2));
        at_a.push(tail_dart(3 * j));
        order.insert(4 * j + 3, at_d);
        order.insert(4 * j, at_a);
    }
    order.insert(u3, vec![tail_dart(to_u3)]);
    order.insert(v3, vec![head_dart(to_v3)]);
    let mut rot = Rotation::new();
    for (x, ds) in order {
        rot.set(x, ds);
    }
    h.set_rotation(rot)?;
    check_euler(&h)?;
    if bipartition(&h).is_none() {
        return Err(Error::AssumptionViolated("matching graph is not bipartite".into()));
    }

    let instance = Instance::new(h, inst.budget, ProblemKind::Mpmeip);
    Ok(DspeipToMpmeip {
        source: inst.clone(),
        bounded: b.graph,
        u1: b.u1,
        v1: b.v1,
        first: b.first,
        last: b.last,
        gadgets: b.gadgets,
        line,
        instance,
        u3,
        v3,
        to_u3,
        to_v3,
        split,
        pieces,
        links,
        threshold: 0,
    })
}

impl DspeipToMpmeip {
    /// Carries a `u`-`v` path of the source to a perfect matching of the target: middle
    /// edges along the path, outer edges elsewhere, and the arcs joining the path.
    pub fn path_to_matching(&self, path: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let bounded = self.lift_path(path)?;
        let on: HashSet<EdgeId> = bounded.iter().copied().collect();
        let mut out = Vec::new();
        for (e, p) in &self.pieces {
            if on.contains(e) {
                out.push(p[1]);
            } else {
                out.push(p[0]);
                out.push(p[2]);
            }
        }
        for w in bounded.windows(2) {
            out.push(self.links[&(w[0], w[1])]);
        }
        out.push(self.to_u3);
        out.push(self.to_v3);
        out.sort_unstable();
        Ok(out)
    }

    /// Path of the bounded graph from `u1` to `v1` running through the given source path.
    fn lift_path(&self, path: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let bad = || Error::InvalidInput(format!("{path:?} is not a path between the terminals"));
        let mut corner: HashMap<VertexId, (VertexId, usize)> = HashMap::new();
        for (&x, gd) in &self.gadgets {
            for (i, &c) in gd.corners.iter().enumerate() {
                corner.insert(c, (x, i));
            }
        }
        let g = &self.bounded;
        let mut seq: Vec<EdgeId> = Vec::new();
        if self.u1 != self.source.terminals()?.0 {
            seq.push(self.first);
        }
        seq.extend(path);
        if self.v1 != self.source.terminals()?.1 {
            seq.push(self.last);
        }
        let mut out: Vec<EdgeId> = Vec::with_capacity(seq.len());
        for (i, &e) in seq.iter().enumerate() {
            let edge = g.edge(e).ok_or_else(bad)?;
            if i == 0 && edge.tail != self.u1 {
                return Err(bad());
            }
            if let Some(&prev) = out.last() {
                let from = g.edge(prev).unwrap().head;
                if from != edge.tail {
                    let (Some(&(x, i)), Some(&(y, j))) = (corner.get(&from), corner.get(&edge.tail)) else {
                        return Err(bad());
                    };
                    if x != y {
                        return Err(bad());
                    }
                    let gd = &self.gadgets[&x];
                    let k = gd.cycle.len();
                    let mut at = i;
                    while at != j {
                        out.push(gd.cycle[at]);
                        at = (at + 1) % k;
                    }
                }
            }
            out.push(e);
        }
        if out.last().map(|&e| g.edge(e).unwrap().head) != Some(self.v1) {
            return Err(bad());
        }
        Ok(out)
    }

    /// Follows middle edges from the first terminal edge and returns the source edges met.
    pub fn matching_to_path(&self, matching: &[EdgeId]) -> Result<Vec<EdgeId>> {
        let h = &self.instance.graph;
        let mut partner: HashMap<VertexId, VertexId> = HashMap::new();
        for &id in matching {
            let e = h.edge(id).ok_or(Error::UnknownEdge(id))?;
            partner.insert(e.tail, e.head);
            partner.insert(e.head, e.tail);
        }
        let owner: HashMap<VertexId, EdgeId> = self.split.iter().map(|(&e, s)| (s[0], e)).collect();
        let mut out = Vec::new();
        let mut e = self.first;
        for _ in 0..=self.split.len() {
            let [_, b, c, d] = self.split[&e];
            if partner.get(&b) != Some(&c) {
                return Err(Error::InvalidInput("matching leaves the middle edge of a path edge".into()));
            }
            if self.source.graph.has_edge(e) {
                out.push(e);
            }
            match partner.get(&d) {
                Some(&x) if x == self.v3 => return Ok(out),
                Some(x) => e = *owner.get(x).ok_or_else(|| Error::InvalidInput("matching breaks the path".into()))?,
                None => return Err(Error::InvalidInput("matching is not perfect".into())),
            }
        }
        Err(Error::InvalidInput("matching path does not end".into()))
    }

    /// Compares shortest path and minimum perfect matching after deleting `set` and
    /// checks both certificate translations.
    pub fn check(&self, set: &[EdgeId]) -> Result<MatchingCheck> {
        let (u, v) = self.source.terminals()?;
        let rest = self.source.graph.delete_edges(set);
        let sp = shortest_path(&rest, u, v)?;
        let h = self.instance.graph.delete_edges(&self.forward(set));
        let best = match min_weight_perfect_matching(&h) {
            Ok(m) => Some(m),
            Err(Error::NoPerfectMatching) => None,
            Err(e) => return Err(e),
        };
        let mu = best.as_ref().map_or(Distance::Unreachable, |m| Distance::Finite(m.weight));

        let path_matching = match sp.distance {
            Distance::Finite(_) => {
                let m = self.path_to_matching(&sp.edges)?;
                let perfect = is_matching(&h, &m) && 2 * m.len() == h.vertex_count();
                perfect.then(|| h.total_weight(&m))
            }
            Distance::Unreachable => None,
        };
        let matching_path = match &best {
            Some(m) => match self.matching_to_path(&m.edges) {
                Ok(p) if is_path(&rest, &p, u, v) => Some(rest.total_weight(&p)),
                Ok(_) | Err(Error::InvalidInput(_)) => None,
                Err(e) => return Err(e),
            },
            None => None,
        };
        Ok(MatchingCheck { rho: sp.distance, mu, path_matching, matching_path })
    }
}

/// The edges, all present in `g`, form a directed walk from `a` to `b` in the given order.
fn is_path(g: &WeightedGraph, path: &[EdgeId], a: VertexId, b: VertexId) -> bool {
    let mut at = a;
    for &e in path {
        match g.edge(e) {
            Some(e) if e.tail == at => at = e.head,
            _ => return false,
        }
    }
    at == b
}

impl Reduction for DspeipToMpmeip {
    fn target(&self) -> &Instance {
        &self.instance
    }

    /// Middle edges of the deleted source edges.
    fn forward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = set.iter().filter_map(|e| self.pieces.get(e)).map(|p| p[1]).collect();
        out.sort_unstable();
        out
    }

    /// Source edges whose middle edge is deleted.
    fn backward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        let middle: HashMap<EdgeId, EdgeId> = self.pieces.iter().map(|(&e, p)| (p[1], e)).collect();
        let mut out: Vec<EdgeId> =
            set.iter().filter_map(|x| middle.get(x)).filter(|e| self.source.graph.has_edge(**e)).copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn summary(&self) -> ArtifactSummary {
        let mut params = BTreeMap::new();
        params.insert("bounded_vertices".into(), self.bounded.vertex_count() as i64);
        params.insert("bounded_edges".into(), self.bounded.edge_count() as i64);
        params.insert("gadgets".into(), self.gadgets.len() as i64);
        params.insert("line_arcs".into(), self.line.arcs.len() as i64);
        params.insert("u3".into(), self.u3 as i64);
        params.insert("v3".into(), self.v3 as i64);
        let edge_map = self
            .source
            .graph
            .edges()
            .iter()
            .map(|e| (e.id, self.pieces[&e.id].to_vec()))
            .collect();
        let vertex_map = self.gadgets.iter().map(|(&x, gd)| (x, gd.corners.clone())).collect();
        ArtifactSummary {
            stage: Stage::Mpmeip,
            vertices: self.instance.graph.vertex_count(),
            edges: self.instance.graph.edge_count(),
            budget: self.instance.budget,
            threshold: self.threshold,
            params,
            edge_map,
            vertex_map,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{rotation_from_positions, Point};
    use crate::solvers::{for_each_feasible, FreeEdges};
    use num_rational::Ratio;

    /// Nine-vertex path graph with a crowded centre, start 7 and end 2.
    pub(crate) fn crowded_hub() -> Instance {
        let names = ["A0", "A1", "A2", "H0", "H1", "H2", "H3", "H4", "H5"];
        let at = [(0, 0), (0, 1), (0, 2), (1, 1), (2, 2), (3, 2), (4, 1), (3, 0), (2, 0)];
        let id = |n: &str| names.iter().position(|&x| x == n).unwrap();
        let mut g = WeightedGraph::with_vertices(true, names.len());
        for (a, b, w) in [
            ("H0", "A0", 1),
            ("A1", "H0", 2),
            ("H0", "A2", 3),
            ("H1", "H0", 3),
            ("H2", "H1", 2),
            ("H3", "H2", 6),
            ("H4", "H3", 4),
            ("H4", "H5", 1),
            ("H5", "H0", 2),
            ("H4", "H1", 3),
        ] {
            g.add_edge(id(a), id(b), w, 1).unwrap();
        }
        let pos: HashMap<VertexId, Point> = at
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| (i, (Ratio::from_integer(x), Ratio::from_integer(y))))
            .collect();
        g.set_rotation(rotation_from_positions(&g, &pos).unwrap()).unwrap();
        Instance::new(g, 2, ProblemKind::Dspeip).with_terminals(id("H4"), id("A2"))
    }

    #[test]
    fn hub_gadget_and_line_graph() {
        let r = dspeip_to_mpmeip(&crowded_hub()).unwrap();
        assert_eq!(r.bounded.vertex_count(), 17);
        assert_eq!(r.line.graph.vertex_count(), 20);
        let hub = &r.gadgets[&3];
        assert_eq!(hub.cycle.len(), 5);
        assert!(hub.cycle.iter().all(|&e| r.bounded.edge(e).unwrap().w == 0));
        assert_eq!(r.gadgets[&7].cycle.len(), 4);
        assert_eq!(r.gadgets.len(), 2);
        assert!(bipartition(&r.instance.graph).is_some());
        assert_eq!(r.check(&[]).unwrap().mu, Distance::Finite(6));
    }

    #[test]
    fn every_affordable_deletion_keeps_the_value() {
        let inst = crowded_hub();
        let r = dspeip_to_mpmeip(&inst).unwrap();
        for_each_feasible(&inst.graph, inst.budget, FreeEdges::Enumerate, 1 << 12, |set| {
            let c = r.check(set)?;
            assert!(c.holds(), "{set:?} {c:?}");
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn loop_and_low_degree_vertices() {
        // path 0 -> 1 -> 2 and a separate vertex 3 carrying only a loop
        let mut g = WeightedGraph::with_vertices(true, 4);
        g.add_edge(0, 1, 2, 1).unwrap();
        g.add_edge(1, 2, 3, 1).unwrap();
        g.add_edge(3, 3, 5, 1).unwrap();
        let rot = Rotation { order: [(0, vec![0]), (1, vec![1, 2]), (2, vec![3]), (3, vec![4, 5])].into() };
        g.set_rotation(rot).unwrap();
        let inst = Instance::new(g, 1, ProblemKind::Dspeip).with_terminals(0, 2);
        let r = dspeip_to_mpmeip(&inst).unwrap();
        assert_eq!((r.u1, r.v1), (0, 2));
        assert_eq!(r.gadgets.len(), 1);
        for set in [vec![], vec![0], vec![1], vec![2]] {
            assert!(r.check(&set).unwrap().holds(), "{set:?}");
        }
    }
}
