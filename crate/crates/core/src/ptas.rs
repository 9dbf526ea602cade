//! Layer-shifting approximation scheme for budgeted matching interdiction.
//!
//! The edge layers of a breadth-first layering are grouped by index modulo `k`. For each
//! shift `i` the graph splits into `G_i` (every layer outside class `i`) and `H_i` (class
//! `i` alone), both of bounded treewidth. Their exact budget tables are combined over all
//! splits of the budget, and the combined deletion set with the smallest true matching
//! weight is returned.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_layers_multi, components, EdgeId, Layering, WeightedGraph};
use crate::solvers::max_weight_matching;
use crate::treewidth::build_tree_decomposition;
use crate::tw_interdict::{solve_tw_budget_table, BudgetTable, DEFAULT_STATE_CAP};

#[derive(Clone, Debug)]
pub struct PtasConfig {
    pub eps: f64,
    /// Fail when a band decomposition is wider than `3k - 1`.
    pub strict_width: bool,
    pub state_cap: usize,
}

impl PtasConfig {
    pub fn new(eps: f64) -> Self {
        PtasConfig { eps, strict_width: false, state_cap: DEFAULT_STATE_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PtasCell {
    pub shift: usize,
    pub split: i64,
    /// Optimum on the bands with budget `split`.
    pub bands_value: i64,
    /// Optimum on the removed class with the remaining budget.
    pub class_value: i64,
    /// True matching weight after deleting the combined set.
    pub value: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PtasRun {
    pub eps: f64,
    pub k: usize,
    pub shift: usize,
    pub split: i64,
    pub interdiction: Vec<EdgeId>,
    pub cost: i64,
    pub value: i64,
    /// Widths of the band and class decompositions per shift.
    pub widths: Vec<(usize, usize)>,
    /// One row per shift and per budget split where either table changes.
    pub table: Vec<PtasCell>,
}

/// Number of layer classes for a given accuracy. Values above 1 are treated as 1.
pub fn period_for(eps: f64) -> Result<usize> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidEpsilon(eps));
    }
    let eps = eps.min(1.0);
    Ok((2.0 / eps).ceil() as usize)
}

/// Splits a graph into the bands `G_i` (every edge outside class `i`) and the class `H_i`.
pub fn slice(g: &WeightedGraph, layering: &Layering, k: usize, i: usize) -> (WeightedGraph, WeightedGraph) {
    let class = layering.class(i, k);
    (g.delete_edges(&class), g.edge_subgraph(&class))
}

/// Budget splits `b` at which either `bands(b)` or `class(budget - b)` changes value.
fn split_points(bands: &BudgetTable, class: &BudgetTable, budget: i64) -> Vec<i64> {
    let mut pts = vec![0];
    pts.extend(bands.steps.iter().map(|s| s.cost).filter(|&c| c <= budget));
    pts.extend(class.steps.iter().map(|s| budget - s.cost + 1).filter(|&b| b > 0 && b <= budget));
    pts.sort_unstable();
    pts.dedup();
    pts
}

pub fn ptas_mmeip(g: &WeightedGraph, budget: i64, cfg: &PtasConfig) -> Result<PtasRun> {
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    if budget < 0 {
        return Err(Error::InvalidInput(format!("negative budget {budget}")));
    }
    let k = period_for(cfg.eps)?;
    let roots: Vec<_> = components(g).iter().map(|c| c[0]).collect();
    let layering = bfs_layers_multi(g, &roots)?;
    let bound = cfg.strict_width.then_some(3 * k - 1);

    let free: Vec<EdgeId> = g.edges().iter().filter(|e| e.c == 0).map(|e| e.id).collect();
    let mut best: Option<(i64, usize, i64, Vec<EdgeId>)> = None;
    let mut table = Vec::new();
    let mut widths = Vec::new();
    for i in 0..k {
        let (bands, removed) = slice(g, &layering, k, i);
        let td_bands = build_tree_decomposition(&bands, bound)?;
        let td_class = build_tree_decomposition(&removed, None)?;
        widths.push((td_bands.width, td_class.width));
        let t_bands = solve_tw_budget_table(&bands, &td_bands, budget, cfg.state_cap)?;
        let t_class = solve_tw_budget_table(&removed, &td_class, budget, cfg.state_cap)?;
        let mut seen: HashMap<(i64, i64), i64> = HashMap::new();
        for b in split_points(&t_bands, &t_class, budget) {
            let sb = t_bands.step_at(b);
            let sc = t_class.step_at(budget - b);
            let candidate = || {
                // free edges never raise the matching, so they are always removed
                let mut set = sb.witness.clone();
                set.extend(&sc.witness);
                set.extend(&free);
                set.sort_unstable();
                set.dedup();
                set
            };
            let value = *seen
                .entry((sb.cost, sc.cost))
                .or_insert_with(|| max_weight_matching(&g.delete_edges(&candidate())).weight);
            table.push(PtasCell { shift: i, split: b, bands_value: sb.value, class_value: sc.value, value });
            if best.as_ref().is_none_or(|(v, _, _, _)| value < *v) {
                best = Some((value, i, b, candidate()));
            }
        }
    }
    let (value, shift, split, interdiction) = best.expect("at least one shift");
    let cost = g.total_cost(&interdiction);
    debug_assert!(cost <= budget);
    Ok(PtasRun { eps: cfg.eps.min(1.0), k, shift, split, interdiction, cost, value, widths, table })
}
