//! Seeded inputs shared by the benchmarks.

use interdiction_core::generate::{grid_instance, GridConfig};
use interdiction_core::{Instance, WeightedGraph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Grid instances of the size used by the approximation tables.
pub fn grid_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GridConfig { min_vertices: 12, ..GridConfig::default() };
    (0..count).map(|_| grid_instance(&mut rng, &cfg)).collect()
}

/// Full grid of the given side with weights cycling through 1..=6 and unit costs.
pub fn full_grid(side: usize) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(false, side * side);
    let mut w = 0;
    for y in 0..side {
        for x in 0..side {
            let v = y * side + x;
            if x + 1 < side {
                w = w % 6 + 1;
                g.add_edge(v, v + 1, w, 1).unwrap();
            }
            if y + 1 < side {
                w = w % 6 + 1;
                g.add_edge(v, v + side, w, 1).unwrap();
            }
        }
    }
    g
}

/// The four vertex graph of the hardness example: a triangle with a pendant edge.
pub fn triangle_with_tail() -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(false, 4);
    for (a, b) in [(0, 1), (0, 2), (1, 2), (2, 3)] {
        g.add_edge(a, b, 0, 0).unwrap();
    }
    g
}
