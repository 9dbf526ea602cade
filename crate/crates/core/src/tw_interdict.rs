//! Exact budgeted matching interdiction by dynamic programming over a nice tree
//! decomposition.
//!
//! A table entry at a node pairs a deletion cost with a profile: for every subset `A` of
//! the bag, the best matching weight over the edges handled so far when bag vertices
//! outside `A` must stay unmatched. Vertices already forgotten are unconstrained. Entries
//! that cost more and match no less are discarded.

use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, VertexId, WeightedGraph};
use crate::treewidth::{make_nice, NiceForm, NodeKind, TreeDecomposition};

/// Default limit on stored profile cells across one node table.
pub const DEFAULT_STATE_CAP: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    /// Smallest budget at which `value` is reached.
    pub cost: i64,
    pub value: i64,
    /// Deleted edges, sorted, of total cost `cost`.
    pub witness: Vec<EdgeId>,
}

/// Optimal post-deletion matching weight as a step function of the budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BudgetTable {
    pub budget: i64,
    /// Steps with increasing cost and strictly decreasing value. The first has cost 0.
    pub steps: Vec<Step>,
}

impl BudgetTable {
    pub fn step_at(&self, b: i64) -> &Step {
        let idx = self.steps.partition_point(|s| s.cost <= b);
        &self.steps[idx.max(1) - 1]
    }

    pub fn value_at(&self, b: i64) -> i64 {
        self.step_at(b).value
    }

    pub fn witness_at(&self, b: i64) -> &[EdgeId] {
        &self.step_at(b).witness
    }

    /// Values for every budget `0..=budget`.
    pub fn dense(&self) -> Vec<i64> {
        (0..=self.budget).map(|b| self.value_at(b)).collect()
    }
}

enum Witness {
    Nil,
    Cons(EdgeId, Rc<Witness>),
    Union(Rc<Witness>, Rc<Witness>),
}

fn flatten(w: &Rc<Witness>) -> Vec<EdgeId> {
    let mut out = Vec::new();
    let mut stack = vec![w.clone()];
    while let Some(w) = stack.pop() {
        match &*w {
            Witness::Nil => {}
            Witness::Cons(e, rest) => {
                out.push(*e);
                stack.push(rest.clone());
            }
            Witness::Union(a, b) => {
                stack.push(a.clone());
                stack.push(b.clone());
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone)]
struct Entry {
    cost: i64,
    profile: Vec<i64>,
    witness: Rc<Witness>,
}

struct Dp<'a> {
    budget: i64,
    cap: usize,
    /// Edges with positive weight at each vertex: (edge, other end, weight, cost).
    incident: HashMap<VertexId, Vec<(EdgeId, VertexId, i64, i64)>>,
    bags: &'a [Vec<VertexId>],
}

/// Removes bit `p` from a mask, shifting higher bits down.
#[inline]
fn drop_bit(m: usize, p: usize) -> usize {
    (m & ((1 << p) - 1)) | ((m >> (p + 1)) << p)
}

/// Inserts bit value `bit` at position `p`, shifting higher bits up.
#[inline]
fn insert_bit(m: usize, p: usize, bit: usize) -> usize {
    (m & ((1 << p) - 1)) | (bit << p) | ((m >> p) << (p + 1))
}

fn pareto(mut entries: Vec<Entry>) -> Vec<Entry> {
    entries.sort_by(|a, b| a.cost.cmp(&b.cost).then_with(|| a.profile.cmp(&b.profile)));
    let mut kept: Vec<Entry> = Vec::new();
    for e in entries {
        let dominated = kept
            .iter()
            .any(|k| k.profile.iter().zip(&e.profile).all(|(x, y)| x <= y));
        if !dominated {
            kept.push(e);
        }
    }
    kept
}

impl<'a> Dp<'a> {
    fn check_cap(&self, entries: &[Entry]) -> Result<()> {
        let cells: usize = entries.iter().map(|e| e.profile.len()).sum();
        if cells > self.cap {
            return Err(Error::StateExplosion(cells));
        }
        Ok(())
    }

    fn introduce(&self, child: Vec<Entry>, bag: &[VertexId], v: VertexId) -> Vec<Entry> {
        let p = bag.binary_search(&v).unwrap();
        child
            .into_iter()
            .map(|e| {
                let profile = (0..1usize << bag.len()).map(|m| e.profile[drop_bit(m, p)]).collect();
                Entry { profile, ..e }
            })
            .collect()
    }

    /// Handles the edges from `v` to the rest of the child bag, then drops `v`.
    fn forget(&self, mut entries: Vec<Entry>, child_bag: &[VertexId], v: VertexId) -> Result<Vec<Entry>> {
        let pv = child_bag.binary_search(&v).unwrap();
        if let Some(list) = self.incident.get(&v) {
            for &(id, u, w, c) in list {
                let Ok(pu) = child_bag.binary_search(&u) else { continue };
                let both = (1usize << pv) | (1usize << pu);
                let mut next = Vec::with_capacity(entries.len() * 2);
                for e in &entries {
                    let kept: Vec<i64> = (0..e.profile.len())
                        .map(|m| {
                            if m & both == both {
                                e.profile[m].max(e.profile[m & !both] + w)
                            } else {
                                e.profile[m]
                            }
                        })
                        .collect();
                    next.push(Entry { cost: e.cost, profile: kept, witness: e.witness.clone() });
                    if e.cost + c <= self.budget {
                        next.push(Entry {
                            cost: e.cost + c,
                            profile: e.profile.clone(),
                            witness: Rc::new(Witness::Cons(id, e.witness.clone())),
                        });
                    }
                }
                entries = pareto(next);
                self.check_cap(&entries)?;
            }
        }
        let len = 1usize << (child_bag.len() - 1);
        let out = entries
            .into_iter()
            .map(|e| {
                let profile = (0..len).map(|m| e.profile[insert_bit(m, pv, 1)]).collect();
                Entry { profile, ..e }
            })
            .collect();
        Ok(pareto(out))
    }

    fn join(&self, a: &[Entry], b: &[Entry], bag_len: usize) -> Result<Vec<Entry>> {
        let size = 1usize << bag_len;
        let mut out = Vec::new();
        for x in a {
            for y in b {
                let cost = x.cost + y.cost;
                if cost > self.budget {
                    continue;
                }
                let mut profile = vec![0i64; size];
                for (m, slot) in profile.iter_mut().enumerate() {
                    let mut best = i64::MIN;
                    let mut s = m;
                    loop {
                        best = best.max(x.profile[s] + y.profile[m & !s]);
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & m;
                    }
                    *slot = best;
                }
                out.push(Entry {
                    cost,
                    profile,
                    witness: Rc::new(Witness::Union(x.witness.clone(), y.witness.clone())),
                });
            }
            self.check_cap(&out)?;
        }
        Ok(pareto(out))
    }

    fn run(&self, nice: &NiceForm) -> Result<Vec<Entry>> {
        let n = nice.kinds.len();
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![(nice.root, false)];
        while let Some((u, expanded)) = stack.pop() {
            if expanded {
                order.push(u);
            } else {
                stack.push((u, true));
                for &c in &nice.children[u] {
                    stack.push((c, false));
                }
            }
        }
        let mut tables: Vec<Option<Vec<Entry>>> = vec![None; n];
        for u in order {
            let bag = &self.bags[u];
            let ch = &nice.children[u];
            let table = match nice.kinds[u] {
                NodeKind::Leaf => vec![Entry {
                    cost: 0,
                    profile: vec![0; 1 << bag.len()],
                    witness: Rc::new(Witness::Nil),
                }],
                NodeKind::Introduce(v) => self.introduce(tables[ch[0]].take().unwrap(), bag, v),
                NodeKind::Forget(v) => self.forget(tables[ch[0]].take().unwrap(), &self.bags[ch[0]], v)?,
                NodeKind::Join => {
                    let a = tables[ch[0]].take().unwrap();
                    let b = tables[ch[1]].take().unwrap();
                    self.join(&a, &b, bag.len())?
                }
            };
            self.check_cap(&table)?;
            tables[u] = Some(table);
        }
        Ok(tables[nice.root].take().unwrap())
    }
}

/// Optimal matching weight after deleting edges of total cost at most `b`, for every
/// `b` up to `budget`, with one optimal deletion set per step.
pub fn solve_tw_budget_table(
    g: &WeightedGraph,
    td: &TreeDecomposition,
    budget: i64,
    state_cap: usize,
) -> Result<BudgetTable> {
    if budget < 0 {
        return Err(Error::InvalidInput(format!("negative budget {budget}")));
    }
    let owned;
    let td = if td.nice.is_some() {
        td
    } else {
        owned = make_nice(td);
        &owned
    };
    let nice = td.nice.as_ref().unwrap();
    let report = crate::treewidth::validate(g, td);
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(report.problems.join("; ")));
    }
    let mut incident: HashMap<VertexId, Vec<(EdgeId, VertexId, i64, i64)>> = HashMap::new();
    for e in g.edges().iter().filter(|e| e.w > 0 && !e.is_loop()) {
        incident.entry(e.tail).or_default().push((e.id, e.head, e.w, e.c));
        incident.entry(e.head).or_default().push((e.id, e.tail, e.w, e.c));
    }
    let dp = Dp { budget, cap: state_cap, incident, bags: &td.bags };
    let root = dp.run(nice)?;
    let mut finals: Vec<(i64, i64, Vec<EdgeId>)> =
        root.iter().map(|e| (e.cost, e.profile[0], flatten(&e.witness))).collect();
    finals.sort();
    let mut steps: Vec<Step> = Vec::new();
    for (cost, value, witness) in finals {
        if steps.last().is_none_or(|s| value < s.value) {
            steps.push(Step { cost, value, witness });
        }
    }
    debug_assert_eq!(steps[0].cost, 0);
    Ok(BudgetTable { budget, steps })
}

/// Optimal value and deletion set for a single budget.
pub fn solve_tw_mmeip(g: &WeightedGraph, td: &TreeDecomposition, budget: i64) -> Result<(i64, Vec<EdgeId>)> {
    let table = solve_tw_budget_table(g, td, budget, DEFAULT_STATE_CAP)?;
    let step = table.step_at(budget);
    Ok((step.value, step.witness.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Instance, ProblemKind};
    use crate::solvers::{max_weight_matching, oracle_interdict, Distance};
    use crate::treewidth::build_tree_decomposition;
    use rand::{Rng, SeedableRng};

    #[test]
    fn bit_helpers() {
        assert_eq!(drop_bit(0b1011, 1), 0b101);
        assert_eq!(insert_bit(0b101, 1, 1), 0b1011);
        assert_eq!(insert_bit(0b101, 0, 0), 0b1010);
    }

    #[test]
    fn path_example() {
        let mut g = WeightedGraph::with_vertices(false, 4);
        g.add_edge(0, 1, 1, 1).unwrap();
        g.add_edge(1, 2, 2, 1).unwrap();
        g.add_edge(2, 3, 3, 1).unwrap();
        let td = build_tree_decomposition(&g, None).unwrap();
        let table = solve_tw_budget_table(&g, &td, 2, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(table.dense(), vec![4, 2, 1]);
    }

    #[test]
    fn matches_oracle_on_random_graphs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let mut g = WeightedGraph::with_vertices(false, n);
            for _ in 0..rng.gen_range(0..=9) {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(0..n);
                g.add_edge(a, b, rng.gen_range(0..=5), rng.gen_range(0..=3)).unwrap();
            }
            let budget = rng.gen_range(0..=5);
            let td = build_tree_decomposition(&g, None).unwrap();
            let table = solve_tw_budget_table(&g, &td, budget, DEFAULT_STATE_CAP).unwrap();
            for b in 0..=budget {
                let inst = Instance::new(g.clone(), b, ProblemKind::Mmeip);
                let want = oracle_interdict(&inst, 1 << 20).unwrap().value;
                assert_eq!(Distance::Finite(table.value_at(b)), want);
                let step = table.step_at(b);
                assert!(g.total_cost(&step.witness) <= b);
                assert_eq!(max_weight_matching(&g.delete_edges(&step.witness)).weight, step.value);
            }
        }
    }
}
