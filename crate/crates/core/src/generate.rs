//! Seeded random instances: connected grid subgraphs for the approximation scheme and
//! small general graphs for the exact solvers.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::WeightedGraph;
use crate::instance::{Instance, ProblemKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridConfig {
    /// Side length of the square grid the vertices are taken from.
    pub side: usize,
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_weight: i64,
    pub max_cost: i64,
    pub max_budget: i64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            side: 4,
            min_vertices: 2,
            max_vertices: 16,
            max_edges: 24,
            max_weight: 6,
            max_cost: 3,
            max_budget: 5,
        }
    }
}

/// Connected subgraph of a square grid with random weights, costs and budget.
///
/// Cells are grown from a random start by repeatedly adding a random neighbouring cell,
/// which keeps the tree of growth edges. Each other grid edge between chosen cells is kept
/// with a probability drawn once per instance.
pub fn grid_instance<R: Rng>(rng: &mut R, cfg: &GridConfig) -> Instance {
    let side = cfg.side.max(1);
    let cells = side * side;
    let n = rng.gen_range(cfg.min_vertices.max(1)..=cfg.max_vertices.min(cells).max(cfg.min_vertices.max(1)));
    let mut id = vec![usize::MAX; cells];
    let start = rng.gen_range(0..cells);
    id[start] = 0;
    let mut order = vec![start];
    let mut tree = Vec::new();
    let neighbours = |c: usize| {
        let (x, y) = (c % side, c / side);
        let mut out = Vec::with_capacity(4);
        if x > 0 {
            out.push(c - 1);
        }
        if x + 1 < side {
            out.push(c + 1);
        }
        if y > 0 {
            out.push(c - side);
        }
        if y + 1 < side {
            out.push(c + side);
        }
        out
    };
    while order.len() < n {
        let frontier: Vec<(usize, usize)> = order
            .iter()
            .flat_map(|&c| neighbours(c).into_iter().filter(|&d| id[d] == usize::MAX).map(move |d| (c, d)))
            .collect();
        let &(from, to) = frontier.choose(rng).expect("grid has room");
        id[to] = order.len();
        order.push(to);
        tree.push((from.min(to), from.max(to)));
    }
    let keep = rng.gen_range(0.0..=1.0);
    let mut pairs = tree.clone();
    for &c in &order {
        for d in neighbours(c) {
            if c < d && id[d] != usize::MAX && !tree.contains(&(c, d)) && rng.gen_bool(keep) {
                pairs.push((c, d));
            }
        }
    }
    pairs.truncate(cfg.max_edges.max(n - 1));
    pairs.sort_by_key(|&(a, b)| (id[a].min(id[b]), id[a].max(id[b])));
    let mut g = WeightedGraph::with_vertices(false, n);
    for (a, b) in pairs {
        let w = rng.gen_range(0..=cfg.max_weight);
        let c = rng.gen_range(0..=cfg.max_cost);
        g.add_edge(id[a], id[b], w, c).expect("vertices exist");
    }
    let budget = rng.gen_range(0..=cfg.max_budget);
    Instance::new(g, budget, ProblemKind::Mmeip)
}

/// Simple undirected graph with `n` vertices and up to `m` distinct random edges.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, m: usize, max_weight: i64, max_cost: i64) -> WeightedGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    pairs.sort_unstable();
    let mut g = WeightedGraph::with_vertices(false, n);
    for (a, b) in pairs {
        let w = rng.gen_range(0..=max_weight);
        let c = rng.gen_range(0..=max_cost);
        g.add_edge(a, b, w, c).expect("vertices exist");
    }
    g
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::components;

    #[test]
    fn grid_instances_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = GridConfig::default();
        for _ in 0..200 {
            let inst = grid_instance(&mut rng, &cfg);
            let g = &inst.graph;
            assert!((2..=16).contains(&g.vertex_count()));
            assert!(g.edge_count() <= 24);
            assert_eq!(components(g).len(), 1);
            assert!(g.is_simple());
            assert!((0..=5).contains(&inst.budget));
            assert!(g.edges().iter().all(|e| (0..=6).contains(&e.w) && (0..=3).contains(&e.c)));
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = grid_instance(&mut ChaCha8Rng::seed_from_u64(9), &GridConfig::default());
        let b = grid_instance(&mut ChaCha8Rng::seed_from_u64(9), &GridConfig::default());
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.budget, b.budget);
    }
}
