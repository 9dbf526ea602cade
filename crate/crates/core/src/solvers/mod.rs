//! Exact combinatorial solvers used as building blocks and as oracles.

mod blossom;
pub mod flow;
pub mod independent;
pub mod matching;
pub mod oracle;
pub mod path;

pub use flow::{max_flow, min_cut_side, FlowResult};
pub use independent::max_independent_set;
pub use matching::{
    is_matching, max_weight_matching, max_weight_perfect_matching, min_weight_perfect_matching,
    solve_matching, Matching, MatchingMode,
};
pub use oracle::{evaluate, for_each_feasible, oracle_interdict, FreeEdges, OracleResult, DEFAULT_MAX_SUBSETS};
pub use path::{shortest_path, Distance, ShortestPath};
