use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{components, head_dart, reverse, tail_dart, Dart, VertexId, WeightedGraph};
use crate::error::{Error, Result};

/// Cyclic counterclockwise order of darts around every vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rotation {
    pub order: BTreeMap<VertexId, Vec<Dart>>,
}

impl Rotation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: VertexId, darts: Vec<Dart>) {
        self.order.insert(v, darts);
    }

    pub fn at(&self, v: VertexId) -> &[Dart] {
        self.order.get(&v).map_or(&[], |d| d.as_slice())
    }

    /// Counterclockwise successor of every dart around its vertex.
    pub fn successor_map(&self) -> HashMap<Dart, Dart> {
        let mut next = HashMap::new();
        for darts in self.order.values() {
            for (i, &d) in darts.iter().enumerate() {
                next.insert(d, darts[(i + 1) % darts.len()]);
            }
        }
        next
    }

    /// Counterclockwise predecessor of every dart around its vertex.
    pub fn predecessor_map(&self) -> HashMap<Dart, Dart> {
        self.successor_map().into_iter().map(|(a, b)| (b, a)).collect()
    }

    pub(crate) fn restrict(&self, keep: impl Fn(Dart) -> bool) -> Rotation {
        Rotation {
            order: self
                .order
                .iter()
                .map(|(&v, ds)| (v, ds.iter().copied().filter(|&d| keep(d)).collect()))
                .collect(),
        }
    }

    /// Checks that each vertex lists exactly the darts attached to it.
    pub fn validate(&self, g: &WeightedGraph) -> Result<()> {
        let mut seen = HashMap::new();
        for (&v, darts) in &self.order {
            if !g.has_vertex(v) {
                return Err(Error::MalformedRotation(format!("unknown vertex {v}")));
            }
            for &d in darts {
                match g.dart_vertex(d) {
                    None => {
                        return Err(Error::MalformedRotation(format!("dart {d} has no edge")))
                    }
                    Some(u) if u != v => {
                        return Err(Error::MalformedRotation(format!(
                            "dart {d} belongs to vertex {u}, listed at {v}"
                        )))
                    }
                    _ => {}
                }
                if seen.insert(d, v).is_some() {
                    return Err(Error::MalformedRotation(format!("dart {d} listed twice")));
                }
            }
        }
        for e in g.edges() {
            for d in [tail_dart(e.id), head_dart(e.id)] {
                if !seen.contains_key(&d) {
                    return Err(Error::MalformedRotation(format!("dart {d} is missing")));
                }
            }
        }
        Ok(())
    }
}

/// Face boundaries of an embedded graph. `face_of[d]` is the face on the right of dart `d`.
#[derive(Clone, Debug)]
pub struct Faces {
    pub orbits: Vec<Vec<Dart>>,
    pub face_of: HashMap<Dart, usize>,
}

impl Faces {
    pub fn count(&self) -> usize {
        self.orbits.len()
    }
}

/// Traces the orbits of `d -> succ(reverse(d))`.
pub fn faces(g: &WeightedGraph) -> Result<Faces> {
    let rot = g.rotation().ok_or(Error::EmbeddingMissing)?;
    let succ = rot.successor_map();
    let mut darts: Vec<Dart> = g
        .edges()
        .iter()
        .flat_map(|e| [tail_dart(e.id), head_dart(e.id)])
        .collect();
    darts.sort_unstable();
    let mut face_of = HashMap::with_capacity(darts.len());
    let mut orbits = Vec::new();
    for &start in &darts {
        if face_of.contains_key(&start) {
            continue;
        }
        let f = orbits.len();
        let mut orbit = Vec::new();
        let mut d = start;
        loop {
            face_of.insert(d, f);
            orbit.push(d);
            d = succ[&reverse(d)];
            if d == start {
                break;
            }
        }
        orbits.push(orbit);
    }
    Ok(Faces { orbits, face_of })
}

/// Checks V - E + F = 2C, counting one face per isolated vertex.
pub fn check_euler(g: &WeightedGraph) -> Result<()> {
    let f = faces(g)?;
    let comps = components(g);
    let isolated = comps.iter().filter(|c| c.len() == 1 && g.degree(c[0]) == 0).count();
    let lhs = g.vertex_count() as i64 - g.edge_count() as i64 + (f.count() + isolated) as i64;
    let rhs = 2 * comps.len() as i64;
    if lhs != rhs {
        return Err(Error::NotPlanarEmbedding(format!(
            "V - E + F = {lhs}, expected {rhs}"
        )));
    }
    Ok(())
}

/// Planar dual of a connected embedded graph.
///
/// Face `i` becomes vertex `i`. Edge `e` keeps its id, weight and cost and runs from the
/// face right of its tail dart to the face right of its head dart. The dual rotation uses the
/// same darts, so dualising twice gives back the original rotation.
pub fn dual(g: &WeightedGraph) -> Result<(WeightedGraph, Faces)> {
    check_euler(g)?;
    if components(g).len() != 1 {
        return Err(Error::InvalidInput("dual requires a connected graph".into()));
    }
    let f = faces(g)?;
    let n = f.count().max(1);
    let mut d = WeightedGraph::with_vertices(g.is_directed(), n);
    for e in g.edges() {
        d.insert_edge(super::Edge {
            id: e.id,
            tail: f.face_of[&tail_dart(e.id)],
            head: f.face_of[&head_dart(e.id)],
            w: e.w,
            c: e.c,
        })?;
    }
    let mut rot = Rotation::new();
    for (i, orbit) in f.orbits.iter().enumerate() {
        rot.set(i, orbit.clone());
    }
    if f.count() == 0 {
        rot.set(0, Vec::new());
    }
    d.set_rotation(rot)?;
    Ok((d, f))
}

/// Signed doubled area of a face drawn with the given positions. With faces on the right of
/// their darts, bounded faces come out negative and the outer face positive.
pub fn face_area2(g: &WeightedGraph, orbit: &[Dart], pos: &HashMap<VertexId, Point>) -> Ratio<i128> {
    let mut sum = Ratio::from_integer(0);
    for &d in orbit {
        let a = pos[&g.dart_vertex(d).expect("dart of g")];
        let b = pos[&g.dart_vertex(reverse(d)).expect("dart of g")];
        sum += a.0 * b.1 - a.1 * b.0;
    }
    sum
}

pub type Point = (Ratio<i128>, Ratio<i128>);

/// Counterclockwise rotation read off a straight-line drawing.
///
/// Darts at a vertex are sorted by the direction to the other endpoint with exact
/// arithmetic. Two darts pointing the same way make the drawing degenerate.
pub fn rotation_from_positions(g: &WeightedGraph, pos: &HashMap<VertexId, Point>) -> Result<Rotation> {
    let zero = Ratio::from_integer(0);
    let dir = |d: Dart| -> Result<Point> {
        let a = pos.get(&g.dart_vertex(d).unwrap()).ok_or_else(|| {
            Error::InvalidInput(format!("no position for vertex {}", g.dart_vertex(d).unwrap()))
        })?;
        let b = pos.get(&g.dart_vertex(reverse(d)).unwrap()).ok_or_else(|| {
            Error::InvalidInput(format!("no position for vertex {}", g.dart_vertex(reverse(d)).unwrap()))
        })?;
        Ok((b.0 - a.0, b.1 - a.1))
    };
    let half = |p: &Point| -> u8 { u8::from(!(p.1 > zero || (p.1 == zero && p.0 > zero))) };
    let mut rot = Rotation::new();
    for &v in g.vertices() {
        rot.set(v, Vec::new());
    }
    let mut by_vertex: BTreeMap<VertexId, Vec<(Point, Dart)>> = BTreeMap::new();
    for e in g.edges() {
        if e.is_loop() {
            return Err(Error::InvalidInput(format!("edge {} is a loop and has no straight drawing", e.id)));
        }
        for d in [tail_dart(e.id), head_dart(e.id)] {
            let p = dir(d)?;
            if p.0 == zero && p.1 == zero {
                return Err(Error::InvalidInput(format!("edge {} has coincident endpoints", e.id)));
            }
            by_vertex.entry(g.dart_vertex(d).unwrap()).or_default().push((p, d));
        }
    }
    for (v, mut darts) in by_vertex {
        darts.sort_by(|(a, _), (b, _)| {
            half(a).cmp(&half(b)).then_with(|| (b.0 * a.1).cmp(&(a.0 * b.1)))
        });
        for w in darts.windows(2) {
            let (a, b) = (w[0].0, w[1].0);
            if half(&a) == half(&b) && a.0 * b.1 == a.1 * b.0 {
                return Err(Error::InvalidInput(format!("two edges leave vertex {v} in the same direction")));
            }
        }
        rot.set(v, darts.into_iter().map(|(_, d)| d).collect());
    }
    Ok(rot)
}

/// Darts of an orbit that start at `v`.
pub(crate) fn orbit_visits(g: &WeightedGraph, orbit: &[Dart], v: VertexId) -> usize {
    orbit.iter().filter(|&&d| g.dart_vertex(d) == Some(v)).count()
}


#[cfg(test)]
mod tests {
    use super::*;

    /// Square 0-1-2-3 drawn counterclockwise.
    fn square() -> WeightedGraph {
        let mut g = WeightedGraph::with_vertices(false, 4);
        for i in 0..4 {
            g.add_edge(i, (i + 1) % 4, 1, 1).unwrap();
        }
        // vertex i holds the tail dart of edge i and the head dart of edge i-1
        let mut rot = Rotation::new();
        for i in 0..4 {
            let prev = (i + 3) % 4;
            rot.set(i, vec![tail_dart(i), head_dart(prev)]);
        }
        g.set_rotation(rot).unwrap();
        g
    }

    #[test]
    fn square_has_two_faces() {
        let g = square();
        let f = faces(&g).unwrap();
        assert_eq!(f.count(), 2);
        check_euler(&g).unwrap();
    }

    #[test]
    fn double_dual_restores_rotation() {
        let g = square();
        let (d, _) = dual(&g).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 4);
        let (dd, faces_of_dual) = dual(&d).unwrap();
        assert_eq!(dd.vertex_count(), 4);
        // each face of the dual is a vertex rotation of the original
        for orbit in &faces_of_dual.orbits {
            let v = g.dart_vertex(orbit[0]).unwrap();
            let mut a = orbit.clone();
            let mut b = g.rotation().unwrap().at(v).to_vec();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
        let r1 = g.rotation().unwrap().successor_map();
        let r2 = dd.rotation().unwrap().successor_map();
        assert_eq!(r1, r2);
    }

    fn pt(x: i128, y: i128) -> Point {
        (Ratio::from_integer(x), Ratio::from_integer(y))
    }

    #[test]
    fn positions_give_planar_rotation() {
        // a wheel: hub 4 inside the square 0..4
        let mut g = WeightedGraph::with_vertices(false, 5);
        for i in 0..4 {
            g.add_edge(i, (i + 1) % 4, 0, 0).unwrap();
            g.add_edge(i, 4, 0, 0).unwrap();
        }
        let pos: HashMap<_, _> =
            [(0, pt(0, 0)), (1, pt(2, 0)), (2, pt(2, 2)), (3, pt(0, 2)), (4, pt(1, 1))].into();
        g.set_rotation(rotation_from_positions(&g, &pos).unwrap()).unwrap();
        check_euler(&g).unwrap();
        let f = faces(&g).unwrap();
        assert_eq!(f.count(), 5);
        let positive: Vec<_> =
            f.orbits.iter().filter(|o| face_area2(&g, o, &pos) > Ratio::from_integer(0)).collect();
        assert_eq!(positive.len(), 1);
        assert_eq!(positive[0].len(), 4);
    }

    #[test]
    fn rejects_missing_dart() {
        let mut g = WeightedGraph::with_vertices(false, 2);
        g.add_edge(0, 1, 0, 0).unwrap();
        let mut rot = Rotation::new();
        rot.set(0, vec![0]);
        rot.set(1, vec![]);
        assert!(matches!(g.set_rotation(rot), Err(Error::MalformedRotation(_))));
    }

    #[test]
    fn bad_rotation_fails_euler() {
        // K4 with a rotation that is not planar
        let mut g = WeightedGraph::with_vertices(false, 4);
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (u, v) in pairs {
            g.add_edge(u, v, 0, 0).unwrap();
        }
        let mut rot = Rotation::new();
        rot.set(0, vec![0, 2, 4]);
        rot.set(1, vec![1, 6, 8]);
        rot.set(2, vec![3, 7, 10]);
        rot.set(3, vec![5, 9, 11]);
        g.set_rotation(rot).unwrap();
        assert!(check_euler(&g).is_err());
    }
}
