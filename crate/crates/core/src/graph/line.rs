//! Directed line graphs and their embedding for graphs of maximum degree three.

use std::collections::{BTreeMap, HashMap};

use super::{head_dart, tail_dart, Dart, EdgeId, Rotation, VertexId, WeightedGraph};
use crate::error::{Error, Result};

/// Which of the two angles next to a dart an arc is routed through: `Ccw` is the angle
/// between the dart and its counterclockwise successor, `Cw` the one before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Ccw,
    Cw,
}

/// One arc `from -> to` of the line graph, through vertex `at = head(from) = tail(to)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineArc {
    pub from: EdgeId,
    pub to: EdgeId,
    pub at: VertexId,
    /// Angle used next to the head dart of `from`; `None` when the graph is not embedded.
    pub from_side: Option<Side>,
    /// Angle used next to the tail dart of `to`.
    pub to_side: Option<Side>,
}

/// Arcs of the directed line graph in `(from, to)` order. When the graph is embedded and
/// every vertex has degree at most three, each arc is assigned an angle at `at` so that
/// drawing it inside that angle keeps the line graph plane.
pub fn line_arcs(g: &WeightedGraph) -> Result<Vec<LineArc>> {
    if !g.is_directed() {
        return Err(Error::UndirectedInput);
    }
    let mut out_of: HashMap<VertexId, Vec<EdgeId>> = HashMap::new();
    for e in g.edges() {
        out_of.entry(e.tail).or_default().push(e.id);
    }
    let embedded = g.rotation().is_some() && g.vertices().iter().all(|&v| g.degree(v) <= 3);
    let succ = g.rotation().map(|r| r.successor_map());
    let mut arcs = Vec::new();
    for e in g.edges() {
        for &f in out_of.get(&e.head).map_or(&[][..], |v| v.as_slice()) {
            let (mut from_side, mut to_side) = (None, None);
            if embedded && e.id != f {
                let succ = succ.as_ref().unwrap();
                let x = head_dart(e.id);
                let y = tail_dart(f);
                if succ[&x] == y {
                    from_side = Some(Side::Ccw);
                    to_side = Some(Side::Cw);
                } else if succ[&y] == x {
                    from_side = Some(Side::Cw);
                    to_side = Some(Side::Ccw);
                }
            }
            arcs.push(LineArc { from: e.id, to: f, at: e.head, from_side, to_side });
        }
    }
    arcs.sort_by_key(|a| (a.from, a.to));
    Ok(arcs)
}

/// Directed line graph with the correspondence from input edges to its vertices.
#[derive(Clone, Debug)]
pub struct LineGraph {
    pub graph: WeightedGraph,
    pub vertex_of: BTreeMap<EdgeId, VertexId>,
    pub arcs: Vec<LineArc>,
}

/// Line graph with one vertex per edge and an arc `e -> f` whenever `e` ends where `f`
/// starts. Arc `i` of `arcs` has edge id `i`. An embedding is attached when the input is
/// embedded, loop-free and of maximum degree three.
pub fn directed_line_graph(g: &WeightedGraph) -> Result<LineGraph> {
    let arcs = line_arcs(g)?;
    let mut lg = WeightedGraph::new(true);
    let mut vertex_of = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        lg.insert_vertex(i)?;
        vertex_of.insert(e.id, i);
    }
    for a in &arcs {
        lg.add_edge(vertex_of[&a.from], vertex_of[&a.to], 0, 0)?;
    }
    let loops = g.edges().iter().any(|e| e.is_loop());
    if arcs.iter().all(|a| a.from_side.is_some()) && g.rotation().is_some() && !loops {
        let mut slots: HashMap<(EdgeId, bool, Side), Vec<Dart>> = HashMap::new();
        for (i, a) in arcs.iter().enumerate() {
            slots.entry((a.from, true, a.from_side.unwrap())).or_default().push(tail_dart(i));
            slots.entry((a.to, false, a.to_side.unwrap())).or_default().push(head_dart(i));
        }
        let mut rot = Rotation::new();
        for e in g.edges() {
            let mut order = Vec::new();
            for key in [(true, Side::Ccw), (true, Side::Cw), (false, Side::Ccw), (false, Side::Cw)] {
                if let Some(ds) = slots.get(&(e.id, key.0, key.1)) {
                    order.extend(ds);
                }
            }
            rot.set(vertex_of[&e.id], order);
        }
        lg.set_rotation(rot)?;
    }
    Ok(LineGraph { graph: lg, vertex_of, arcs })
}
