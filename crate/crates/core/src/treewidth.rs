//! Tree decompositions: heuristic construction, validation and nice normal form.

use std::collections::{BTreeSet, HashMap, HashSet};

type Bags = Vec<Vec<usize>>;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_layers, components, VertexId, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "lowercase")]
pub enum NodeKind {
    Leaf,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

/// Rooted form where every node is a leaf, introduce, forget or join node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceForm {
    pub root: usize,
    pub kinds: Vec<NodeKind>,
    pub children: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Bags, each sorted by vertex id.
    pub bags: Vec<Vec<VertexId>>,
    pub tree_edges: Vec<(usize, usize)>,
    /// Declared width, the largest bag size minus one.
    pub width: usize,
    pub nice: Option<NiceForm>,
}

fn width_of(bags: &[Vec<VertexId>]) -> usize {
    bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<VertexId>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags: Vec<Vec<VertexId>> = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        let width = width_of(&bags);
        TreeDecomposition { bags, tree_edges, width, nice: None }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .bags
            .iter()
            .enumerate()
            .map(|(i, b)| serde_json::json!({ "id": i, "bag": b }))
            .collect();
        let edges: Vec<_> = self.tree_edges.iter().map(|&(a, b)| serde_json::json!([a, b])).collect();
        serde_json::json!({ "nodes": nodes, "edges": edges })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub problems: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks vertex coverage, edge coverage, connected occurrence, tree shape and width.
/// A nice form, when present, is checked as well.
pub fn validate(g: &WeightedGraph, td: &TreeDecomposition) -> ValidationReport {
    let mut problems = Vec::new();
    let n = td.bags.len();
    if n == 0 {
        if g.vertex_count() > 0 {
            problems.push("no bags for a non-empty graph".into());
        }
        return ValidationReport { problems };
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &td.tree_edges {
        if a >= n || b >= n || a == b {
            problems.push(format!("bad tree edge ({a}, {b})"));
            return ValidationReport { problems };
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    if td.tree_edges.len() != n - 1 || reach(&adj, 0, |_| true).len() != n {
        problems.push("decomposition graph is not a tree".into());
        return ValidationReport { problems };
    }
    let mut holders: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if !g.has_vertex(v) {
                problems.push(format!("bag {i} holds unknown vertex {v}"));
            }
            holders.entry(v).or_default().push(i);
        }
    }
    for &v in g.vertices() {
        match holders.get(&v) {
            None => problems.push(format!("vertex {v} is in no bag")),
            Some(nodes) => {
                let inside: HashSet<usize> = nodes.iter().copied().collect();
                if reach(&adj, nodes[0], |x| inside.contains(&x)).len() != nodes.len() {
                    problems.push(format!("bags holding vertex {v} are not connected"));
                }
            }
        }
    }
    let bag_sets: Vec<HashSet<VertexId>> = td.bags.iter().map(|b| b.iter().copied().collect()).collect();
    for e in g.edges() {
        if !bag_sets.iter().any(|b| b.contains(&e.tail) && b.contains(&e.head)) {
            problems.push(format!("edge {} is in no bag", e.id));
        }
    }
    let actual = width_of(&td.bags);
    if actual != td.width {
        problems.push(format!("declared width {} but largest bag gives {actual}", td.width));
    }
    if let Some(nice) = &td.nice {
        problems.extend(check_nice(td, nice));
    }
    ValidationReport { problems }
}

fn reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> HashSet<usize> {
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if allowed(v) && seen.insert(v) {
                stack.push(v);
            }
        }
    }
    seen
}

fn check_nice(td: &TreeDecomposition, nice: &NiceForm) -> Vec<String> {
    let mut out = Vec::new();
    if !td.bags[nice.root].is_empty() {
        out.push("root bag is not empty".into());
    }
    for (i, kind) in nice.kinds.iter().enumerate() {
        let bag = &td.bags[i];
        let ch = &nice.children[i];
        let ok = match *kind {
            NodeKind::Leaf => ch.is_empty() && bag.len() <= 1,
            NodeKind::Introduce(v) => {
                ch.len() == 1 && {
                    let mut expect = td.bags[ch[0]].clone();
                    !expect.contains(&v) && {
                        expect.push(v);
                        expect.sort_unstable();
                        &expect == bag
                    }
                }
            }
            NodeKind::Forget(v) => {
                ch.len() == 1 && td.bags[ch[0]].contains(&v) && {
                    let expect: Vec<_> = td.bags[ch[0]].iter().copied().filter(|&x| x != v).collect();
                    &expect == bag
                }
            }
            NodeKind::Join => ch.len() == 2 && ch.iter().all(|&c| &td.bags[c] == bag),
        };
        if !ok {
            out.push(format!("node {i} is not a valid {kind:?} node"));
        }
    }
    out
}

/// Simple undirected adjacency on dense indices, loops and parallel edges dropped.
fn adjacency(g: &WeightedGraph) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); g.vertex_count()];
    for e in g.edges() {
        let a = g.vertex_index(e.tail).unwrap();
        let b = g.vertex_index(e.head).unwrap();
        if a != b {
            adj[a].insert(b);
            adj[b].insert(a);
        }
    }
    adj
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Heuristic {
    MinDegree,
    MinFill,
    /// Deepest breadth-first level first, minimum degree inside a level.
    LevelMajor,
}

/// Elimination order of the vertices in `part` (dense indices).
fn elimination_order(
    adj: &[BTreeSet<usize>],
    part: &[usize],
    heuristic: Heuristic,
    level: &HashMap<usize, usize>,
) -> Vec<usize> {
    let mut work: HashMap<usize, BTreeSet<usize>> = part.iter().map(|&v| (v, adj[v].clone())).collect();
    let mut order = Vec::with_capacity(part.len());
    let mut alive: BTreeSet<usize> = part.iter().copied().collect();
    while !alive.is_empty() {
        let key = |v: usize| -> (i64, usize, usize) {
            let nb = &work[&v];
            match heuristic {
                Heuristic::MinDegree => (0, nb.len(), v),
                Heuristic::LevelMajor => (-(level.get(&v).copied().unwrap_or(0) as i64), nb.len(), v),
                Heuristic::MinFill => {
                    let list: Vec<usize> = nb.iter().copied().collect();
                    let mut fill = 0;
                    for (i, &a) in list.iter().enumerate() {
                        for &b in &list[i + 1..] {
                            if !work[&a].contains(&b) {
                                fill += 1;
                            }
                        }
                    }
                    (0, fill, v)
                }
            }
        };
        let v = alive.iter().copied().min_by_key(|&v| key(v)).unwrap();
        let nb: Vec<usize> = work[&v].iter().copied().collect();
        for &a in &nb {
            let entry = work.get_mut(&a).unwrap();
            entry.remove(&v);
            for &b in &nb {
                if a != b {
                    entry.insert(b);
                }
            }
        }
        work.remove(&v);
        alive.remove(&v);
        order.push(v);
    }
    order
}

/// Decomposition from an elimination order: one bag per vertex, linked to the bag of
/// its earliest eliminated higher neighbour. Returns bags of dense indices and tree edges.
fn from_order(adj: &[BTreeSet<usize>], order: &[usize]) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let pos: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut work: HashMap<usize, BTreeSet<usize>> = order.iter().map(|&v| (v, adj[v].clone())).collect();
    let mut bags = Vec::with_capacity(order.len());
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let nb: Vec<usize> = work[&v].iter().copied().collect();
        let mut bag = nb.clone();
        bag.push(v);
        bags.push(bag);
        match nb.iter().map(|u| pos[u]).min() {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
        for &a in &nb {
            let entry = work.get_mut(&a).unwrap();
            entry.remove(&v);
            for &b in &nb {
                if a != b {
                    entry.insert(b);
                }
            }
        }
        work.remove(&v);
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    (bags, edges)
}

/// Builds a tree decomposition by trying several elimination heuristics per component
/// and keeping the narrowest. With `strict_bound` set, fails when the width exceeds it.
pub fn build_tree_decomposition(g: &WeightedGraph, strict_bound: Option<usize>) -> Result<TreeDecomposition> {
    let adj = adjacency(g);
    let mut bags: Vec<Vec<VertexId>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut previous_piece: Option<usize> = None;
    for comp in components(g) {
        let part: Vec<usize> = comp.iter().map(|&v| g.vertex_index(v).unwrap()).collect();
        let layering = bfs_layers(g, comp[0])?;
        let level: HashMap<usize, usize> = layering
            .level
            .iter()
            .map(|(&v, &l)| (g.vertex_index(v).unwrap(), l))
            .collect();
        let mut best: Option<(Bags, Vec<(usize, usize)>)> = None;
        for h in [Heuristic::MinDegree, Heuristic::MinFill, Heuristic::LevelMajor] {
            let order = elimination_order(&adj, &part, h, &level);
            let cand = from_order(&adj, &order);
            let better = match &best {
                None => true,
                Some(b) => width_of(&cand.0) < width_of(&b.0),
            };
            if better {
                best = Some(cand);
            }
        }
        let (cbags, cedges) = best.unwrap();
        let offset = bags.len();
        for b in cbags {
            bags.push(b.into_iter().map(|i| g.vertices()[i]).collect());
        }
        edges.extend(cedges.into_iter().map(|(a, b)| (a + offset, b + offset)));
        if let Some(p) = previous_piece {
            edges.push((p, offset));
        }
        previous_piece = Some(offset);
    }
    let td = TreeDecomposition::new(bags, edges);
    if let Some(bound) = strict_bound {
        if td.width > bound {
            return Err(Error::WidthBoundExceeded { width: td.width, bound });
        }
    }
    Ok(td)
}

/// Converts any valid decomposition into nice form rooted at an empty bag.
pub fn make_nice(td: &TreeDecomposition) -> TreeDecomposition {
    let mut bags: Vec<Vec<VertexId>> = Vec::new();
    let mut kinds: Vec<NodeKind> = Vec::new();
    let mut children: Vec<Vec<usize>> = Vec::new();
    let mut push = |bag: Vec<VertexId>, kind: NodeKind, ch: Vec<usize>| -> usize {
        bags.push(bag);
        kinds.push(kind);
        children.push(ch);
        bags.len() - 1
    };

    let n = td.bags.len();
    if n == 0 {
        let root = push(Vec::new(), NodeKind::Leaf, Vec::new());
        let nice = NiceForm { root, kinds, children };
        return TreeDecomposition { bags, tree_edges: Vec::new(), width: 0, nice: Some(nice) };
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &td.tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    // iterative post-order from node 0
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                parent[v] = u;
                stack.push(v);
            }
        }
    }
    let mut top = vec![usize::MAX; n];
    for &u in order.iter().rev() {
        let target = &td.bags[u];
        let mut subtrees = Vec::new();
        for &c in &adj[u] {
            if parent[c] == u {
                subtrees.push(chain(&mut push, top[c], &td.bags[c], target));
            }
        }
        top[u] = if subtrees.is_empty() {
            let mut bag: Vec<VertexId> = target.first().copied().into_iter().collect();
            let leaf = push(bag.clone(), NodeKind::Leaf, Vec::new());
            let mut cur = leaf;
            for &v in target.iter().skip(1) {
                bag.push(v);
                bag.sort_unstable();
                cur = push(bag.clone(), NodeKind::Introduce(v), vec![cur]);
            }
            cur
        } else {
            let mut cur = subtrees[0];
            for &s in &subtrees[1..] {
                cur = push(target.clone(), NodeKind::Join, vec![cur, s]);
            }
            cur
        };
    }
    let root = chain(&mut push, top[0], &td.bags[0], &[]);
    let tree_edges = children
        .iter()
        .enumerate()
        .flat_map(|(p, ch)| ch.iter().map(move |&c| (c, p)))
        .collect();
    let width = width_of(&bags);
    TreeDecomposition { bags, tree_edges, width, nice: Some(NiceForm { root, kinds, children }) }
}

/// Forgets then introduces vertices to move from bag `from` (node `start`) to bag `to`.
fn chain(
    push: &mut impl FnMut(Vec<VertexId>, NodeKind, Vec<usize>) -> usize,
    start: usize,
    from: &[VertexId],
    to: &[VertexId],
) -> usize {
    let mut bag = from.to_vec();
    let mut cur = start;
    for &v in from {
        if !to.contains(&v) {
            bag.retain(|&x| x != v);
            cur = push(bag.clone(), NodeKind::Forget(v), vec![cur]);
        }
    }
    for &v in to {
        if !from.contains(&v) {
            bag.push(v);
            bag.sort_unstable();
            cur = push(bag.clone(), NodeKind::Introduce(v), vec![cur]);
        }
    }
    cur
}
