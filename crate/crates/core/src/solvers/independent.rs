//! Exact maximum independent set for small graphs.

use crate::error::{Error, Result};
use crate::graph::{VertexId, WeightedGraph};

/// A maximum independent set, directions and loops-free edges considered undirected.
///
/// Vertices with a loop are never chosen. Limited to 64 vertices.
pub fn max_independent_set(g: &WeightedGraph) -> Result<Vec<VertexId>> {
    let n = g.vertex_count();
    if n > 64 {
        return Err(Error::TooLargeForOracle(format!("{n} vertices, independent set search handles 64")));
    }
    let mut adj = vec![0u64; n];
    let mut banned = 0u64;
    for e in g.edges() {
        let a = g.vertex_index(e.tail).unwrap();
        let b = g.vertex_index(e.head).unwrap();
        if a == b {
            banned |= 1 << a;
        } else {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = 0u64;
    search(&adj, all & !banned, 0, &mut best);
    let mut out: Vec<VertexId> = (0..n).filter(|&i| best >> i & 1 == 1).map(|i| g.vertices()[i]).collect();
    out.sort_unstable();
    Ok(out)
}

fn search(adj: &[u64], candidates: u64, chosen: u64, best: &mut u64) {
    if candidates == 0 {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        return;
    }
    if chosen.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    // branch on a vertex of maximum degree inside the candidates; low degree vertices are taken
    let mut pick = candidates.trailing_zeros() as usize;
    let mut pick_deg = 0;
    let mut rest = candidates;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & candidates).count_ones();
        if d <= 1 {
            search(adj, candidates & !(1 << v) & !adj[v], chosen | 1 << v, best);
            return;
        }
        if d > pick_deg {
            pick = v;
            pick_deg = d;
        }
    }
    search(adj, candidates & !(1 << pick) & !adj[pick], chosen | 1 << pick, best);
    search(adj, candidates & !(1 << pick), chosen, best);
}
