//! Exhaustive search over every affordable edge set.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::instance::{Instance, ProblemKind};

use super::flow::max_flow;
use super::matching::{max_weight_matching, min_weight_perfect_matching};
use super::path::{shortest_path, Distance};

/// Default limit on the number of candidate sets the oracle will evaluate.
pub const DEFAULT_MAX_SUBSETS: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    /// Optimal objective. Only a cut path yields `Unreachable`.
    pub value: Distance,
    /// Optimal edge set, lexicographically smallest among optimal ones.
    pub interdiction: Vec<EdgeId>,
    pub cost: i64,
    /// Number of candidate sets evaluated.
    pub evaluated: u64,
}

/// How edges of cost zero are treated while enumerating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreeEdges {
    /// Every free edge is in every candidate. All objectives are monotone in the set, so
    /// this loses no optimal value.
    AlwaysTake,
    /// Free edges are toggled like any other edge.
    Enumerate,
}

/// Objective value of one edge set. For the deletion problems the set is removed, for
/// the flow problem it is the set of usable edges.
pub fn evaluate(inst: &Instance, set: &[EdgeId]) -> Result<Distance> {
    let g = &inst.graph;
    match inst.kind {
        ProblemKind::Mmeip => Ok(Distance::Finite(max_weight_matching(&g.delete_edges(set)).weight)),
        ProblemKind::Mpmeip => match min_weight_perfect_matching(&g.delete_edges(set)) {
            Ok(m) => Ok(Distance::Finite(m.weight)),
            Err(Error::NoPerfectMatching) => Err(Error::AssumptionViolated(format!(
                "deleting {set:?} leaves no perfect matching"
            ))),
            Err(e) => Err(e),
        },
        ProblemKind::Dspeip => {
            let (s, t) = inst.terminals()?;
            Ok(shortest_path(&g.delete_edges(set), s, t)?.distance)
        }
        ProblemKind::Bcfip => {
            let (s, t) = inst.terminals()?;
            Ok(Distance::Finite(max_flow(&g.edge_subgraph(set), s, t)?.value))
        }
    }
}

/// Edges split into the ones always taken and the ones to branch on.
fn split(g: &WeightedGraph, free: FreeEdges) -> (Vec<EdgeId>, Vec<(EdgeId, i64)>) {
    let mut fixed = Vec::new();
    let mut toggled = Vec::new();
    for e in g.edges() {
        if e.c == 0 && free == FreeEdges::AlwaysTake {
            fixed.push(e.id);
        } else {
            toggled.push((e.id, e.c));
        }
    }
    toggled.sort_unstable();
    (fixed, toggled)
}

/// Number of affordable subsets of `toggled`, stopping once it exceeds `cap`.
fn count_up_to(toggled: &[(EdgeId, i64)], budget: i64, cap: u64) -> u64 {
    fn rec(i: usize, left: i64, toggled: &[(EdgeId, i64)], cap: u64, count: &mut u64) {
        if *count > cap {
            return;
        }
        if i == toggled.len() {
            *count += 1;
            return;
        }
        rec(i + 1, left, toggled, cap, count);
        if toggled[i].1 <= left {
            rec(i + 1, left - toggled[i].1, toggled, cap, count);
        }
    }
    let mut count = 0;
    rec(0, budget, toggled, cap, &mut count);
    count
}

/// Calls `f` on every edge set of total cost at most `budget`, each sorted by id.
/// Fails before any call when there are more than `cap` sets.
pub fn for_each_feasible(
    g: &WeightedGraph,
    budget: i64,
    free: FreeEdges,
    cap: u64,
    mut f: impl FnMut(&[EdgeId]) -> Result<()>,
) -> Result<u64> {
    let (fixed, toggled) = split(g, free);
    let count = count_up_to(&toggled, budget, cap);
    if count > cap {
        return Err(Error::TooLargeForOracle(format!(
            "more than {cap} affordable edge sets over {} edges",
            toggled.len()
        )));
    }
    fn rec(
        i: usize,
        left: i64,
        toggled: &[(EdgeId, i64)],
        current: &mut Vec<EdgeId>,
        fixed: &[EdgeId],
        f: &mut dyn FnMut(&[EdgeId]) -> Result<()>,
    ) -> Result<()> {
        if i == toggled.len() {
            let mut set: Vec<EdgeId> = fixed.iter().chain(current.iter()).copied().collect();
            set.sort_unstable();
            return f(&set);
        }
        rec(i + 1, left, toggled, current, fixed, f)?;
        if toggled[i].1 <= left {
            current.push(toggled[i].0);
            rec(i + 1, left - toggled[i].1, toggled, current, fixed, f)?;
            current.pop();
        }
        Ok(())
    }
    rec(0, budget, &toggled, &mut Vec::new(), &fixed, &mut f)?;
    Ok(count)
}

/// Exact optimum by enumeration. Minimises for matching deletion, maximises otherwise.
pub fn oracle_interdict(inst: &Instance, max_subsets: u64) -> Result<OracleResult> {
    inst.validate()?;
    let minimise = inst.kind == ProblemKind::Mmeip;
    let mut best: Option<(Distance, Vec<EdgeId>)> = None;
    let evaluated = for_each_feasible(&inst.graph, inst.budget, FreeEdges::AlwaysTake, max_subsets, |set| {
        let v = evaluate(inst, set)?;
        let better = match &best {
            None => true,
            Some((bv, bs)) => {
                if v == *bv {
                    set < bs.as_slice()
                } else {
                    (v < *bv) == minimise
                }
            }
        };
        if better {
            best = Some((v, set.to_vec()));
        }
        Ok(())
    })?;
    let (value, interdiction) = best.expect("the empty set is always affordable");
    let cost = inst.graph.total_cost(&interdiction);
    Ok(OracleResult { value, interdiction, cost, evaluated })
}
