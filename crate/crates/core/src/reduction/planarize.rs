//! Crossing removal for the flow network of the first stage.
//!
//! The network is drawn with the source on the left, vertex nodes on the line `x = 4`,
//! edge nodes on `x = 8` and the sink on the right, all arcs straight. Every crossing
//! becomes a vertex. Capacities make the two arcs through a crossing distinguishable,
//! and costs are capacity times the number of sweep positions an arc spans, so a unit
//! of flow costs at least `r + 3` and any flow that leaves an arc half full pays extra.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_rational::Ratio;
use serde::Serialize;

use super::bcfip::{EdgeClass, IsToBcfip};
use super::{ArtifactSummary, Reduction, Stage};
use crate::error::{Error, Result};
use crate::graph::{check_euler, rotation_from_positions, EdgeId, Point, VertexId, WeightedGraph};
use crate::instance::{Instance, ProblemKind};
use crate::solvers::max_flow;

const MAX_ATTEMPTS: usize = 8;

type Q = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    /// Position in the left-to-right order, starting at 1.
    pub index: usize,
    pub vertex: VertexId,
    /// The two crossing arcs of the first-stage network, smaller id first.
    pub parents: [EdgeId; 2],
    #[serde(skip)]
    pub at: Point,
}

#[derive(Clone, Debug)]
pub struct PlanarBcfip {
    pub source: IsToBcfip,
    pub instance: Instance,
    pub k: usize,
    /// Square of the edge count of the independent set graph, counting at least four edges.
    pub unit: i64,
    pub r: usize,
    pub positions: HashMap<VertexId, Point>,
    pub crossings: Vec<Crossing>,
    pub parent: BTreeMap<EdgeId, EdgeId>,
    /// Pieces of every first-stage arc, from its tail to its head.
    pub children: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Label of every edge of the independent set graph, `1..=m` in edge order.
    pub labels: BTreeMap<EdgeId, i64>,
    /// Sweep position of every vertex. Each arc costs its capacity times the rise.
    pub potential: BTreeMap<VertexId, i64>,
    /// Whether the two arcs at every crossing have different capacities.
    pub distinct_capacities: bool,
    pub s: VertexId,
    pub t: VertexId,
}

fn q(x: i128) -> Q {
    Ratio::from_integer(x)
}

fn cross(o: Point, a: Point, b: Point) -> Q {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

/// Proper intersection point of two segments, `Err` when they touch or overlap.
fn intersect(a: (Point, Point), b: (Point, Point)) -> std::result::Result<Option<Point>, ()> {
    let zero = q(0);
    let d1 = cross(a.0, a.1, b.0);
    let d2 = cross(a.0, a.1, b.1);
    let d3 = cross(b.0, b.1, a.0);
    let d4 = cross(b.0, b.1, a.1);
    if d1 == zero && on_segment(b.0, a.0, a.1)
        || d2 == zero && on_segment(b.1, a.0, a.1)
        || d3 == zero && on_segment(a.0, b.0, b.1)
        || d4 == zero && on_segment(a.1, b.0, b.1)
    {
        return Err(());
    }
    if (d1 > zero) != (d2 > zero) && (d3 > zero) != (d4 > zero) && d1 != zero && d2 != zero && d3 != zero && d4 != zero {
        let r = a.1 .0 - a.0 .0;
        let s = a.1 .1 - a.0 .1;
        let t = cross(a.0, b.0, b.1) / ((r) * (b.1 .1 - b.0 .1) - (s) * (b.1 .0 - b.0 .0));
        return Ok(Some((a.0 .0 + t * r, a.0 .1 + t * s)));
    }
    Ok(None)
}

fn layout(src: &IsToBcfip, attempt: usize) -> HashMap<VertexId, Point> {
    let n = src.vertex_node.len() as i128;
    let m = src.edge_node.len() as i128;
    let h = n.max(m);
    let mid = if h % 2 == 0 { h + 1 } else { h };
    let eps = if attempt == 0 { q(0) } else { Ratio::new(1, 64 * attempt as i128 * (n + m + 1).pow(3)) };
    let mut pos = HashMap::new();
    pos.insert(src.s, (q(0), q(mid) + eps));
    pos.insert(src.t, (q(12), q(mid) + eps));
    for (i, &x) in src.vertex_node.values().enumerate() {
        let i = i as i128;
        pos.insert(x, (q(4), q(2 * (n - i)) + eps * i * i));
    }
    for (j, &x) in src.edge_node.values().enumerate() {
        let j = j as i128;
        pos.insert(x, (q(8), q(2 * (m - j)) + eps * (j + 1).pow(3)));
    }
    pos
}

/// Crossings of the drawing sorted by `x`, then smaller parent id, then `y`.
fn find_crossings(src: &IsToBcfip, pos: &HashMap<VertexId, Point>) -> Option<Vec<([EdgeId; 2], Point)>> {
    let g = &src.instance.graph;
    let movable: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| matches!(src.class[&e.id], EdgeClass::Incidence | EdgeClass::VertexDrain))
        .collect();
    let mut found = Vec::new();
    for (i, a) in movable.iter().enumerate() {
        for b in &movable[i + 1..] {
            let sa = (pos[&a.tail], pos[&a.head]);
            let sb = (pos[&b.tail], pos[&b.head]);
            let shared = [a.tail, a.head].iter().any(|v| *v == b.tail || *v == b.head);
            if shared {
                // segments from a common endpoint only meet there unless they overlap
                let o = if a.tail == b.tail || a.tail == b.head { sa.0 } else { sa.1 };
                let other_a = if o == sa.0 { sa.1 } else { sa.0 };
                let other_b = if o == sb.0 { sb.1 } else { sb.0 };
                if cross(o, other_a, other_b) == q(0)
                    && (other_a.0 - o.0) * (other_b.0 - o.0) + (other_a.1 - o.1) * (other_b.1 - o.1) > q(0)
                {
                    return None;
                }
                continue;
            }
            match intersect(sa, sb) {
                Err(()) => return None,
                Ok(Some(p)) => found.push(([a.id.min(b.id), a.id.max(b.id)], p)),
                Ok(None) => {}
            }
        }
    }
    let mut points = HashSet::new();
    for (_, p) in &found {
        if !points.insert(*p) {
            return None;
        }
    }
    found.sort_by(|(ea, pa), (eb, pb)| pa.0.cmp(&pb.0).then(ea[0].cmp(&eb[0])).then(pa.1.cmp(&pb.1)));
    Some(found)
}

/// Capacity of every first-stage arc under the given edge labels.
fn capacities(src: &IsToBcfip, unit: i64, labels: &BTreeMap<EdgeId, i64>) -> BTreeMap<EdgeId, i64> {
    let mut load: BTreeMap<VertexId, i64> = BTreeMap::new();
    for e in src.source.edges() {
        *load.entry(e.tail).or_default() += labels[&e.id];
        *load.entry(e.head).or_default() += labels[&e.id];
    }
    let mut cap = BTreeMap::new();
    for (&v, &e) in &src.supply {
        cap.insert(e, unit);
        cap.insert(src.vertex_drain[&v], unit - load.get(&v).copied().unwrap_or(0));
    }
    for (&x, pair) in &src.incidence {
        cap.insert(pair[0], labels[&x]);
        cap.insert(pair[1], labels[&x]);
        cap.insert(src.edge_drain[&x], labels[&x]);
    }
    cap
}

pub fn planarize_bcfip(src: &IsToBcfip) -> Result<PlanarBcfip> {
    let g1 = &src.instance.graph;
    // below four edges the square is too small to keep drains apart from labels
    let m = src.source.edge_count().max(4) as i64;
    let unit = m * m;
    let (pos1, crossings) = (0..MAX_ATTEMPTS)
        .find_map(|a| {
            let pos = layout(src, a);
            find_crossings(src, &pos).map(|c| (pos, c))
        })
        .ok_or(Error::DegenerateLayout(MAX_ATTEMPTS))?;
    let r = crossings.len();
    let labels: BTreeMap<EdgeId, i64> =
        src.source.edges().iter().enumerate().map(|(i, e)| (e.id, i as i64 + 1)).collect();
    let cap = capacities(src, unit, &labels);
    let distinct = crossings.iter().all(|(p, _)| cap[&p[0]] != cap[&p[1]]);

    let base = g1.vertex_count();
    let mut g2 = WeightedGraph::with_vertices(true, base + r);
    let mut positions = pos1.clone();
    let mut potential = BTreeMap::new();
    potential.insert(src.s, -1);
    potential.insert(src.t, r as i64 + 2);
    for &x in src.vertex_node.values() {
        potential.insert(x, 0);
    }
    for &x in src.edge_node.values() {
        potential.insert(x, r as i64 + 1);
    }
    let mut on_edge: BTreeMap<EdgeId, Vec<(Q, VertexId)>> = BTreeMap::new();
    let mut list = Vec::with_capacity(r);
    for (i, (parents, p)) in crossings.iter().enumerate() {
        let v = base + i;
        positions.insert(v, *p);
        potential.insert(v, i as i64 + 1);
        for &e in parents {
            on_edge.entry(e).or_default().push((p.0, v));
        }
        list.push(Crossing { index: i + 1, vertex: v, parents: *parents, at: *p });
    }
    let mut parent = BTreeMap::new();
    let mut children = BTreeMap::new();
    for e in g1.edges() {
        let mut stops = on_edge.remove(&e.id).unwrap_or_default();
        stops.sort();
        let mut chain = vec![e.tail];
        chain.extend(stops.iter().map(|&(_, v)| v));
        chain.push(e.head);
        let w = cap[&e.id];
        let mut kids = Vec::new();
        for pair in chain.windows(2) {
            let rise = potential[&pair[1]] - potential[&pair[0]];
            let id = g2.add_edge(pair[0], pair[1], w, rise * w)?;
            parent.insert(id, e.id);
            kids.push(id);
        }
        children.insert(e.id, kids);
    }
    g2.set_rotation(rotation_from_positions(&g2, &positions)?)?;
    check_euler(&g2)?;
    let budget = (r as i64 + 3) * src.k as i64 * unit;
    let instance = Instance::new(g2, budget, ProblemKind::Bcfip).with_terminals(src.s, src.t);
    Ok(PlanarBcfip {
        source: src.clone(),
        instance,
        k: src.k,
        unit,
        r,
        positions,
        crossings: list,
        parent,
        children,
        labels,
        potential,
        distinct_capacities: distinct,
        s: src.s,
        t: src.t,
    })
}

impl PlanarBcfip {
    /// Flow value that certifies an independent set of size `k`.
    pub fn threshold(&self) -> i64 {
        self.k as i64 * self.unit
    }

    /// Whether the arcs at every crossing of the built graph carry different capacities.
    pub fn capacities_distinct(&self) -> bool {
        let g = &self.instance.graph;
        self.crossings.iter().all(|c| {
            let w = |p: EdgeId| g.edge(self.children[&p][0]).unwrap().w;
            w(c.parents[0]) != w(c.parents[1])
        })
    }

    /// First-stage arcs that carry flow when the vertices bought in `set` send their full supply.
    fn support(&self, chosen: &[VertexId]) -> Vec<EdgeId> {
        let src = &self.source;
        let mut out = Vec::new();
        for &v in chosen {
            out.push(src.supply[&v]);
            out.push(src.vertex_drain[&v]);
        }
        for e in src.source.edges() {
            for (i, end) in [e.tail, e.head].into_iter().enumerate() {
                if chosen.contains(&end) {
                    out.push(src.incidence[&e.id][i]);
                    out.push(src.edge_drain[&e.id]);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl Reduction for PlanarBcfip {
    fn target(&self) -> &Instance {
        &self.instance
    }

    /// Pieces of every arc the bought vertices send flow along.
    fn forward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        let chosen = self.source.backward(set);
        let mut out: Vec<EdgeId> = self.support(&chosen).iter().flat_map(|p| self.children[p].clone()).collect();
        out.sort_unstable();
        out
    }

    /// Supply arcs whose piece is bought, plus every free first-stage arc.
    fn backward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = set
            .iter()
            .filter_map(|e| self.parent.get(e))
            .filter(|p| self.source.class[p] == EdgeClass::Supply)
            .copied()
            .collect();
        out.extend(self.source.instance.graph.edges().iter().filter(|e| e.c == 0).map(|e| e.id));
        out.sort_unstable();
        out.dedup();
        out
    }

    fn summary(&self) -> ArtifactSummary {
        let mut params = BTreeMap::new();
        params.insert("k".into(), self.k as i64);
        params.insert("r".into(), self.r as i64);
        params.insert("unit".into(), self.unit);
        params.insert("distinct_capacities".into(), i64::from(self.distinct_capacities));
        ArtifactSummary {
            stage: Stage::PlanarBcfip,
            vertices: self.instance.graph.vertex_count(),
            edges: self.instance.graph.edge_count(),
            budget: self.instance.budget,
            threshold: self.threshold(),
            params,
            edge_map: self.children.clone(),
            vertex_map: self.source.instance.graph.vertices().iter().map(|&v| (v, vec![v])).collect(),
        }
    }
}

/// Outcome of checking that arc costs dominate capacity times potential rise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialReport {
    /// Potential difference between sink and source, the cost floor per unit of flow.
    pub per_unit: i64,
    /// Every arc costs at least capacity times its rise, and no arc descends.
    pub lower_bound: bool,
    /// Additionally every arc with capacity rises, so a partly used arc costs extra.
    pub strict: bool,
    /// Every arc costs exactly capacity times rise.
    pub tight: bool,
    pub violations: Vec<EdgeId>,
}

impl PotentialReport {
    pub fn holds(&self) -> bool {
        self.lower_bound && self.strict
    }
}

/// Checks a potential certificate: if `c(e) >= (p(head) - p(tail)) w(e)` with non-negative
/// rises, any flow of value `V` costs at least `(p(t) - p(s)) V` over the arcs it uses,
/// and strictly more when some rising arc is used below capacity.
pub fn potential_certificate(inst: &Instance, potential: &BTreeMap<VertexId, i64>) -> Result<PotentialReport> {
    let (s, t) = inst.terminals()?;
    let mut report = PotentialReport {
        per_unit: potential[&t] - potential[&s],
        lower_bound: true,
        strict: true,
        tight: true,
        violations: Vec::new(),
    };
    for e in inst.graph.edges() {
        let rise = potential[&e.head] - potential[&e.tail];
        let mut bad = false;
        if rise < 0 || e.c < rise * e.w {
            report.lower_bound = false;
            bad = true;
        }
        if e.w > 0 && rise < 1 {
            report.strict = false;
            bad = true;
        }
        if e.c != rise * e.w {
            report.tight = false;
        }
        if bad {
            report.violations.push(e.id);
        }
    }
    Ok(report)
}

/// Arc sets `F` on which the flow equal to the capacity on `F` and zero elsewhere is an
/// `s`-`t` flow of value exactly `value`. Searches vertices in topological order and
/// returns the first set found. With a tight potential certificate
/// this decides whether some arc set of cost at most `per_unit * value` carries `value`.
pub fn threshold_flow_search(inst: &Instance, value: i64) -> Result<Option<Vec<EdgeId>>> {
    let g = &inst.graph;
    let (s, t) = inst.terminals()?;
    let n = g.vertex_count();
    let idx = |v: VertexId| g.vertex_index(v).unwrap();
    let mut out_arcs: Vec<Vec<(EdgeId, usize, i64)>> = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for e in g.edges().iter().filter(|e| e.w > 0) {
        out_arcs[idx(e.tail)].push((e.id, idx(e.head), e.w));
        indeg[idx(e.head)] += 1;
    }
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    while let Some(i) = stack.pop() {
        order.push(i);
        for &(_, j, _) in &out_arcs[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                stack.push(j);
            }
        }
    }
    if order.len() != n {
        return Err(Error::InvalidInput("threshold search needs an acyclic network".into()));
    }
    struct Dfs<'a> {
        order: &'a [usize],
        out_arcs: &'a [Vec<(EdgeId, usize, i64)>],
        inflow: Vec<i64>,
        chosen: Vec<EdgeId>,
        s: usize,
        t: usize,
        value: i64,
    }
    impl Dfs<'_> {
        fn at(&mut self, pos: usize) -> bool {
            if pos == self.order.len() {
                return self.inflow[self.t] == self.value;
            }
            let v = self.order[pos];
            if v == self.t {
                return self.at(pos + 1);
            }
            let need = if v == self.s { self.value } else { self.inflow[v] };
            self.pick(pos, v, 0, need)
        }

        fn pick(&mut self, pos: usize, v: usize, i: usize, left: i64) -> bool {
            let arcs = &self.out_arcs[v];
            if left == 0 {
                return self.at(pos + 1);
            }
            if i == arcs.len() || left < 0 {
                return false;
            }
            let (id, head, w) = arcs[i];
            if w <= left {
                self.chosen.push(id);
                self.inflow[head] += w;
                if self.pick(pos, v, i + 1, left - w) {
                    return true;
                }
                self.inflow[head] -= w;
                self.chosen.pop();
            }
            self.pick(pos, v, i + 1, left)
        }
    }
    let mut dfs = Dfs {
        order: &order,
        out_arcs: &out_arcs,
        inflow: vec![0; n],
        chosen: Vec::new(),
        s: idx(s),
        t: idx(t),
        value,
    };
    if value <= 0 {
        return Ok(Some(Vec::new()));
    }
    if dfs.at(0) {
        let mut set = dfs.chosen;
        set.sort_unstable();
        Ok(Some(set))
    } else {
        Ok(None)
    }
}

/// Maximum flow restricted to the given arcs.
pub fn flow_through(inst: &Instance, set: &[EdgeId]) -> Result<i64> {
    let (s, t) = inst.terminals()?;
    Ok(max_flow(&inst.graph.edge_subgraph(set), s, t)?.value)
}

/// Result of enumerating the arc sets that can carry a large flow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowCostReport {
    /// Arc sets of cost at most the bound that were examined.
    pub examined: u64,
    /// Cheapest set that carries a flow of the target value with every arc in use.
    pub cheapest: Option<i64>,
    /// Cheapest such set where some arc can stay below capacity.
    pub cheapest_partial: Option<i64>,
    /// Every flow of the target value costs at least the bound.
    pub lower_bound: bool,
    /// Every such flow with an arc below capacity costs more than the bound.
    pub partial_surcharge: bool,
    /// Arc set of the first violation found.
    pub counterexample: Option<Vec<EdgeId>>,
}

/// Whether some flow of value at least `value` uses exactly the arcs in `set`, each with
/// at least one unit, with arc `cut` (if any) one unit below its capacity.
fn exact_support_flow(g: &WeightedGraph, s: VertexId, t: VertexId, set: &[EdgeId], cut: Option<EdgeId>, value: i64) -> Result<bool> {
    let n = g.vertex_count();
    let idx = |v: VertexId| g.vertex_index(v).unwrap();
    let mut net = WeightedGraph::with_vertices(true, n + 2);
    let (src, snk) = (n, n + 1);
    let mut excess = vec![0i64; n];
    let mut total = value;
    for &id in set {
        let e = g.edge(id).unwrap();
        let upper = if cut == Some(id) { e.w - 1 } else { e.w };
        if upper < 1 {
            return Ok(false);
        }
        total += upper;
        net.add_edge(idx(e.tail), idx(e.head), upper - 1, 0)?;
        excess[idx(e.head)] += 1;
        excess[idx(e.tail)] -= 1;
    }
    // return arc from sink to source with lower bound `value`
    net.add_edge(idx(t), idx(s), total, 0)?;
    excess[idx(s)] += value;
    excess[idx(t)] -= value;
    let mut need = 0;
    for (i, &x) in excess.iter().enumerate() {
        if x > 0 {
            net.add_edge(src, i, x, 0)?;
            need += x;
        } else if x < 0 {
            net.add_edge(i, snk, -x, 0)?;
        }
    }
    Ok(max_flow(&net, src, snk)?.value == need)
}

/// Enumerates every set of positive-capacity arcs costing at most `bound` and checks that
/// none carries a flow of `value` with all of its arcs in use for less than `bound`, and
/// none does so at cost exactly `bound` while leaving an arc below capacity.
pub fn flow_cost_bounds(inst: &Instance, value: i64, bound: i64, max_arcs: usize) -> Result<FlowCostReport> {
    let g = &inst.graph;
    let (s, t) = inst.terminals()?;
    let arcs: Vec<&crate::graph::Edge> = g.edges().iter().filter(|e| e.w > 0).collect();
    if arcs.len() > max_arcs {
        return Err(Error::TooLargeForOracle(format!("{} arcs carry capacity, limit {max_arcs}", arcs.len())));
    }
    let mut report = FlowCostReport {
        examined: 0,
        cheapest: None,
        cheapest_partial: None,
        lower_bound: true,
        partial_surcharge: true,
        counterexample: None,
    };
    for mask in 0u64..1 << arcs.len() {
        let set: Vec<EdgeId> = (0..arcs.len()).filter(|i| mask >> i & 1 == 1).map(|i| arcs[i].id).collect();
        let cost = g.total_cost(&set);
        if cost > bound {
            continue;
        }
        report.examined += 1;
        if !exact_support_flow(g, s, t, &set, None, value)? {
            continue;
        }
        report.cheapest = Some(report.cheapest.map_or(cost, |c| c.min(cost)));
        if cost < bound {
            report.lower_bound = false;
            report.counterexample.get_or_insert(set);
            continue;
        }
        for &e in &set {
            if exact_support_flow(g, s, t, &set, Some(e), value)? {
                report.cheapest_partial = Some(report.cheapest_partial.map_or(cost, |c| c.min(cost)));
                report.partial_surcharge = false;
                report.counterexample.get_or_insert(set.clone());
                break;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::faces;
    use crate::reduction::is_to_bcfip;

    fn figure_graph() -> WeightedGraph {
        let mut g = WeightedGraph::with_vertices(false, 4);
        g.add_edge(0, 1, 0, 0).unwrap();
        g.add_edge(0, 2, 0, 0).unwrap();
        g.add_edge(1, 2, 0, 0).unwrap();
        g.add_edge(2, 3, 0, 0).unwrap();
        g
    }

    #[test]
    fn four_vertex_example_matches_drawing() {
        let src = is_to_bcfip(&figure_graph(), 2).unwrap();
        let p = planarize_bcfip(&src).unwrap();
        assert_eq!(p.r, 6);
        assert_eq!(p.unit, 16);
        let g = &p.instance.graph;
        assert_eq!((g.vertex_count(), g.edge_count()), (16, 32));
        assert_eq!(faces(g).unwrap().count(), 18);
        assert!(p.distinct_capacities);
        for e in src.supply.values() {
            let c = g.edge(p.children[e][0]).unwrap();
            assert_eq!((c.w, c.c), (16, 16));
        }
        // first vertex node straight into the first edge node
        let a0a = src.incidence[&0][0];
        assert_eq!(p.children[&a0a].len(), 1);
        let c = g.edge(p.children[&a0a][0]).unwrap();
        assert_eq!((c.w, c.c), (1, 7));
        let drain = &p.children[&src.vertex_drain[&0]];
        let first = g.edge(drain[0]).unwrap();
        let at = p.crossings.iter().find(|c| c.vertex == first.head).unwrap();
        assert_eq!(first.w, 13);
        assert_eq!(first.c, 13 * at.index as i64);
        assert_eq!(p.instance.budget, 9 * 2 * 16);
        let rep = potential_certificate(&p.instance, &p.potential).unwrap();
        assert_eq!(rep.per_unit, 9);
        assert!(rep.holds() && rep.tight);
        // straight arcs put two crossings at 44/7 and two at 36/5
        let xs: Vec<f64> = p.crossings.iter().map(|c| *c.at.0.numer() as f64 / *c.at.0.denom() as f64).collect();
        assert_eq!(xs[0], 6.0);
        assert_eq!(xs[1], 6.0);
        assert_eq!(&xs[2..], &[44.0 / 7.0, 44.0 / 7.0, 7.2, 7.2]);
    }

    #[test]
    fn threshold_search_agrees_with_independence() {
        let src = is_to_bcfip(&figure_graph(), 2).unwrap();
        let p = planarize_bcfip(&src).unwrap();
        let f = threshold_flow_search(&p.instance, p.threshold()).unwrap().unwrap();
        assert_eq!(p.instance.graph.total_cost(&f), p.instance.budget);
        assert_eq!(flow_through(&p.instance, &f).unwrap(), p.threshold());
        let src = is_to_bcfip(&figure_graph(), 3).unwrap();
        let p = planarize_bcfip(&src).unwrap();
        assert!(threshold_flow_search(&p.instance, p.threshold()).unwrap().is_none());
    }

    #[test]
    fn forward_translation_is_affordable() {
        let src = is_to_bcfip(&figure_graph(), 2).unwrap();
        let p = planarize_bcfip(&src).unwrap();
        let set = p.forward(&src.forward(&[0, 3]));
        assert_eq!(p.instance.graph.total_cost(&set), p.instance.budget);
        assert_eq!(flow_through(&p.instance, &set).unwrap(), p.threshold());
        assert_eq!(src.backward(&p.backward(&set)), vec![0, 3]);
    }

    #[test]
    fn flow_costs_on_a_single_edge() {
        let mut g = WeightedGraph::with_vertices(false, 2);
        g.add_edge(0, 1, 0, 0).unwrap();
        let src = is_to_bcfip(&g, 1).unwrap();
        let p = planarize_bcfip(&src).unwrap();
        let rep = flow_cost_bounds(&p.instance, p.threshold(), p.instance.budget, 12).unwrap();
        assert!(rep.lower_bound && rep.partial_surcharge, "{rep:?}");
        assert_eq!(rep.cheapest, Some(p.instance.budget));
        assert_eq!(rep.cheapest_partial, None);

        let cert = p.forward(&src.forward(&[0]));
        let mut cheaper = p.instance.clone();
        cheaper.graph.edge_mut(cert[0]).unwrap().c -= 1;
        let rep = flow_cost_bounds(&cheaper, p.threshold(), p.instance.budget, 12).unwrap();
        assert!(!rep.lower_bound);
        assert_eq!(rep.cheapest, Some(p.instance.budget - 1));
    }

    #[test]
    fn flow_costs_refuse_large_networks() {
        let p = planarize_bcfip(&is_to_bcfip(&figure_graph(), 2).unwrap()).unwrap();
        assert!(matches!(
            flow_cost_bounds(&p.instance, p.threshold(), p.instance.budget, 12),
            Err(Error::TooLargeForOracle(_))
        ));
    }
}
