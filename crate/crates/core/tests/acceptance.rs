//! Acceptance suite. Runs every criterion, prints one line each, then fails if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use interdiction_core::generate::{grid_instance, random_graph, GridConfig};
use interdiction_core::graph::{bfs_layers_multi, check_euler, components, is_bipartite};
use interdiction_core::ptas::{ptas_mmeip, slice, PtasConfig};
use interdiction_core::reduction::{
    bcfip_to_dspeip, dspeip_to_mpmeip, flow_cost_bounds, is_to_bcfip, mpmeip_to_mmeip, planarize_bcfip,
    potential_certificate, threshold_flow_search, verify_chain, ChainOptions, Reduction, EXHAUSTIVE_ARCS,
};
use interdiction_core::solvers::{
    for_each_feasible, max_independent_set, max_weight_matching, min_weight_perfect_matching, oracle_interdict,
    Distance, FreeEdges,
};
use interdiction_core::table::{run_table, to_csv, TableConfig};
use interdiction_core::treewidth::build_tree_decomposition;
use interdiction_core::tw_interdict::{solve_tw_budget_table, DEFAULT_STATE_CAP};
use interdiction_core::{Error, Instance, ProblemKind, WeightedGraph};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const CAP: u64 = 1 << 22;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nu(g: &WeightedGraph) -> i64 {
    max_weight_matching(g).weight
}

fn graph(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(false, n);
    for &(a, b) in edges {
        g.add_edge(a, b, 0, 0).unwrap();
    }
    g
}

fn triangle_with_tail() -> WeightedGraph {
    graph(4, &[(0, 1), (0, 2), (1, 2), (2, 3)])
}

fn complete4() -> WeightedGraph {
    graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
}

/// Every simple undirected graph on `1..=5` labelled vertices.
fn all_small_graphs() -> Vec<WeightedGraph> {
    let mut out = Vec::new();
    for n in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        for mask in 0u32..1 << pairs.len() {
            let chosen: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
            out.push(graph(n, &chosen));
        }
    }
    out
}

/// The chain instances whose dual stages are checked on every affordable set: up to three
/// vertices with at most one edge, each with target sizes one to five.
fn chain_sources() -> Vec<(WeightedGraph, usize)> {
    let shapes = [graph(1, &[]), graph(2, &[]), graph(2, &[(0, 1)]), graph(3, &[])];
    shapes.iter().flat_map(|g| (1..=5).map(move |k| (g.clone(), k))).collect()
}

fn approximation_guarantee() -> Verdict {
    let cfg = TableConfig { seed: 20261016, instances: 300, timing: false, oracle_cap: CAP, ..TableConfig::default() };
    let rows = run_table(&cfg).map_err(|e| e.to_string())?;
    let missing = rows.iter().filter(|r| r.oracle.is_none()).count();
    ensure(missing == 0, || format!("{missing} rows without an optimum"))?;
    let bad: Vec<_> = rows.iter().filter(|r| !r.within_guarantee()).collect();
    ensure(bad.is_empty(), || format!("violations: {bad:?}"))?;
    let worst = rows.iter().filter_map(|r| r.ratio).fold(1.0, f64::max);
    Ok(format!("{} instances x 2 accuracies, 0 violations, worst ratio {worst:.3}", cfg.instances))
}

fn path_instance() -> Verdict {
    let mut g = WeightedGraph::with_vertices(false, 3);
    g.add_edge(0, 1, 5, 1).unwrap();
    g.add_edge(1, 2, 3, 1).unwrap();
    let run = ptas_mmeip(&g, 1, &PtasConfig::new(0.5)).map_err(|e| e.to_string())?;
    ensure(run.value == 3 && run.cost <= 1, || format!("objective {} at cost {}", run.value, run.cost))?;
    Ok(format!("objective {} with edges {:?}", run.value, run.interdiction))
}

fn budget_table_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut compared = 0;
    for trial in 0..200 {
        let n = rng.gen_range(2..=7);
        let m = rng.gen_range(0..=10);
        let g = random_graph(&mut rng, n, m, 5, 3);
        let budget = rng.gen_range(0..=4);
        let td = build_tree_decomposition(&g, None).map_err(|e| e.to_string())?;
        let table = solve_tw_budget_table(&g, &td, budget, DEFAULT_STATE_CAP).map_err(|e| e.to_string())?;
        let mut last = i64::MAX;
        for b in 0..=budget {
            let inst = Instance::new(g.clone(), b, ProblemKind::Mmeip);
            let best = oracle_interdict(&inst, CAP).map_err(|e| e.to_string())?.value;
            let value = table.value_at(b);
            ensure(best == Distance::Finite(value), || format!("trial {trial} budget {b}: table {value}, oracle {best}"))?;
            ensure(value <= last, || format!("trial {trial}: table rises at budget {b}"))?;
            let witness = table.witness_at(b);
            ensure(nu(&g.delete_edges(witness)) == value && g.total_cost(witness) <= b, || {
                format!("trial {trial} budget {b}: witness {witness:?} does not reach {value}")
            })?;
            last = value;
            compared += 1;
        }
    }
    Ok(format!("200 graphs, {compared} budgets, 0 violations"))
}

fn slice_matching_bounds() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let cfg = GridConfig::default();
    // removing edges never raises the matching
    for trial in 0..500 {
        let g = grid_instance(&mut rng, &cfg).graph;
        let kept: Vec<_> = g.edges().iter().filter(|_| rng.gen_bool(0.5)).map(|e| e.id).collect();
        let (h, full) = (nu(&g.edge_subgraph(&kept)), nu(&g));
        ensure(h <= full, || format!("subgraph trial {trial}: {h} > {full}"))?;
    }
    let (mut splits, mut sums) = (0, 0);
    for trial in 0..500 {
        let g = grid_instance(&mut rng, &cfg).graph;
        let roots: Vec<_> = components(&g).iter().map(|c| c[0]).collect();
        let layering = bfs_layers_multi(&g, &roots).map_err(|e| e.to_string())?;
        let full = nu(&g);
        for k in 2..=4 {
            let mut total = 0;
            for i in 0..k {
                let (bands, class) = slice(&g, &layering, k, i);
                let (a, b) = (nu(&bands), nu(&class));
                ensure(full <= a + b, || format!("split trial {trial} k {k} i {i}: {full} > {a} + {b}"))?;
                splits += 1;
                total += b;
            }
            ensure(total <= 2 * full, || format!("class sum trial {trial} k {k}: {total} > 2 * {full}"))?;
            sums += 1;
        }
    }
    Ok(format!("500 subgraphs, {splits} splits, {sums} class sums, 0 violations"))
}

fn independent_set_equivalence() -> Verdict {
    let graphs = all_small_graphs();
    let mut runs = 0;
    for g in &graphs {
        let alpha = max_independent_set(g).map_err(|e| e.to_string())?.len();
        for k in 1..=5 {
            let b = is_to_bcfip(g, k).map_err(|e| e.to_string())?;
            let best = oracle_interdict(&b.instance, CAP).map_err(|e| e.to_string())?.value;
            let hits = best == Distance::Finite(b.threshold());
            ensure(hits == (alpha >= k), || format!("{:?} k {k}: flow {best}, independence {alpha}", g.edges()))?;
            let p = planarize_bcfip(&b).map_err(|e| e.to_string())?;
            let pot = potential_certificate(&p.instance, &p.potential).map_err(|e| e.to_string())?;
            ensure(pot.holds() && pot.tight && pot.per_unit * p.threshold() == p.instance.budget, || {
                format!("{:?} k {k}: potential certificate {pot:?}", g.edges())
            })?;
            let found = threshold_flow_search(&p.instance, p.threshold()).map_err(|e| e.to_string())?;
            let yes = found.is_some_and(|f| p.instance.graph.total_cost(&f) <= p.instance.budget);
            ensure(yes == (alpha >= k), || format!("{:?} k {k}: planar answer {yes}, independence {alpha}", g.edges()))?;
            runs += 1;
        }
    }
    let b = is_to_bcfip(&triangle_with_tail(), 2).map_err(|e| e.to_string())?;
    let p = planarize_bcfip(&b).map_err(|e| e.to_string())?;
    let supply_ok = b.supply.values().all(|e| {
        let c = p.instance.graph.edge(p.children[e][0]).unwrap();
        (c.w, c.c) == (16, 16)
    });
    let per_unit = potential_certificate(&p.instance, &p.potential).map_err(|e| e.to_string())?.per_unit;
    ensure(p.r == 6 && supply_ok && per_unit == 9, || {
        format!("example: r {}, supply labels ok {supply_ok}, per unit {per_unit}", p.r)
    })?;
    Ok(format!("{} graphs x 5 sizes = {runs} runs agree; example has r 6, supply 16|16, unit cost 9", graphs.len()))
}

fn flow_cost_bounds_sweep() -> Verdict {
    let (mut exhaustive, mut certified, mut crossings) = (0, 0, 0);
    for g in all_small_graphs() {
        for k in 1..=5 {
            let b = is_to_bcfip(&g, k).map_err(|e| e.to_string())?;
            let p = planarize_bcfip(&b).map_err(|e| e.to_string())?;
            ensure(p.capacities_distinct(), || format!("{:?} k {k}: equal capacities at a crossing", g.edges()))?;
            crossings += p.crossings.len();
            match flow_cost_bounds(&p.instance, p.threshold(), p.instance.budget, EXHAUSTIVE_ARCS) {
                Ok(r) => {
                    ensure(r.lower_bound && r.partial_surcharge, || format!("{:?} k {k}: {r:?}", g.edges()))?;
                    exhaustive += 1;
                }
                Err(Error::TooLargeForOracle(_)) => {
                    let pot = potential_certificate(&p.instance, &p.potential).map_err(|e| e.to_string())?;
                    ensure(pot.holds() && pot.per_unit * p.threshold() == p.instance.budget, || {
                        format!("{:?} k {k}: {pot:?}", g.edges())
                    })?;
                    certified += 1;
                }
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(format!(
        "{exhaustive} networks enumerated, {certified} by potential certificate, {crossings} crossings all distinct"
    ))
}

/// Runs `per_instance` on every chain source in parallel and sums the counts.
fn over_chain_sources(per_instance: fn(&WeightedGraph, usize) -> Result<u64, String>) -> Result<(usize, u64), String> {
    let sources = chain_sources();
    let results: Vec<Result<u64, String>> = thread::scope(|s| {
        let handles: Vec<_> = sources.iter().map(|(g, k)| s.spawn(move || per_instance(g, *k))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err("panicked".into()))).collect()
    });
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok((sources.len(), total))
}

fn cut_path_duality() -> Verdict {
    let (instances, sets) = over_chain_sources(|g, k| {
        let p = planarize_bcfip(&is_to_bcfip(g, k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let d = bcfip_to_dspeip(&p).map_err(|e| e.to_string())?;
        let mut bad = None;
        let n = for_each_feasible(&p.instance.graph, p.instance.budget, FreeEdges::Enumerate, CAP, |set| {
            let c = d.check(set)?;
            if !c.holds() && bad.is_none() {
                bad = Some(format!("k {k} set {set:?}: {c:?}"));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
        bad.map_or(Ok(n), Err)
    })?;
    ensure(instances >= 20, || format!("only {instances} instances"))?;
    Ok(format!("{instances} instances, {sets} affordable sets, path length equals flow on all"))
}

fn matching_gadget_equality() -> Verdict {
    let (instances, sets) = over_chain_sources(|g, k| {
        let p = planarize_bcfip(&is_to_bcfip(g, k).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let d = bcfip_to_dspeip(&p).map_err(|e| e.to_string())?;
        let m = dspeip_to_mpmeip(&d.instance).map_err(|e| e.to_string())?;
        let g3 = &m.instance.graph;
        ensure(check_euler(g3).is_ok() && is_bipartite(g3), || format!("k {k}: matching graph not planar bipartite"))?;
        let mut bad = None;
        let n = for_each_feasible(&p.instance.graph, p.instance.budget, FreeEdges::Enumerate, CAP, |set| {
            let c = m.check(&d.forward(set))?;
            if (!c.holds() || c.mu == Distance::Unreachable) && bad.is_none() {
                bad = Some(format!("k {k} set {set:?}: {c:?}"));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
        bad.map_or(Ok(n), Err)
    })?;
    ensure(instances >= 20, || format!("only {instances} instances"))?;
    Ok(format!("{instances} instances, {sets} affordable sets, matching weight equals path length on all"))
}

/// Largest budget up to `budget` at which every affordable deletion leaves a perfect matching.
fn safe_budget(g: &WeightedGraph, mut budget: i64) -> Option<i64> {
    min_weight_perfect_matching(g).ok()?;
    loop {
        let mut ok = true;
        for_each_feasible(g, budget, FreeEdges::Enumerate, CAP, |set| {
            if min_weight_perfect_matching(&g.delete_edges(set)).is_err() {
                ok = false;
            }
            Ok(())
        })
        .ok()?;
        if ok {
            return Some(budget);
        }
        budget -= 1;
    }
}

fn weight_shift_identities() -> Verdict {
    let mut instances = Vec::new();
    let mut single = WeightedGraph::with_vertices(false, 2);
    single.add_edge(0, 1, 3, 1).unwrap();
    instances.push(Instance::new(single, 0, ProblemKind::Mpmeip));
    let mut cycle = WeightedGraph::with_vertices(false, 4);
    for (i, w) in [1, 2, 1, 2].into_iter().enumerate() {
        cycle.add_edge(i, (i + 1) % 4, w, 1).unwrap();
    }
    instances.push(Instance::new(cycle, 1, ProblemKind::Mpmeip));
    let mut rng = ChaCha8Rng::seed_from_u64(39);
    while instances.len() < 60 {
        let n = 2 * rng.gen_range(1..=3);
        let m = rng.gen_range(n / 2..=n * (n - 1) / 2);
        let mut g = random_graph(&mut rng, n, m, 6, 2);
        for id in g.edges().iter().map(|e| e.id).collect::<Vec<_>>() {
            g.edge_mut(id).unwrap().c += 1;
        }
        let wanted = rng.gen_range(0..=3);
        if let Some(b) = safe_budget(&g, wanted) {
            instances.push(Instance::new(g, b, ProblemKind::Mpmeip));
        }
    }
    let mut sets = 0;
    for (i, inst) in instances.iter().enumerate() {
        let x = mpmeip_to_mmeip(inst).map_err(|e| e.to_string())?;
        let mut bad = None;
        sets += for_each_feasible(&inst.graph, inst.budget, FreeEdges::Enumerate, CAP, |set| {
            let c = x.check(set)?;
            let related = c.mu.finite().map(|m| x.objective_from_mu(m)) == Some(c.nu);
            if !(c.holds() && related) && bad.is_none() {
                bad = Some(format!("instance {i} set {set:?}: {c:?}"));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
        if let Some(b) = bad {
            return Err(b);
        }
    }
    Ok(format!("{} instances, {sets} affordable sets, both identities exact", instances.len()))
}

fn end_to_end_chain() -> Verdict {
    let opts = ChainOptions::default();
    let yes = verify_chain(&triangle_with_tail(), 2, &opts).map_err(|e| e.to_string())?;
    ensure(yes.passed() && yes.stages.iter().all(|s| s.verdict), || format!("positive: {:?}", yes.failures()))?;
    let recovered = yes.recovered.clone().unwrap_or_default();
    ensure(recovered.len() >= 2, || format!("recovered {recovered:?}"))?;
    let no = verify_chain(&complete4(), 2, &opts).map_err(|e| e.to_string())?;
    ensure(no.passed() && no.stages.iter().all(|s| !s.verdict), || format!("negative: {:?}", no.failures()))?;
    Ok(format!("positive at all {} stages (recovered {recovered:?}), negative at all {}", yes.stages.len(), no.stages.len()))
}

fn bench_determinism() -> Verdict {
    let cfg = TableConfig { seed: 5, instances: 25, timing: false, ..TableConfig::default() };
    let a = to_csv(&run_table(&cfg).map_err(|e| e.to_string())?);
    let b = to_csv(&run_table(&cfg).map_err(|e| e.to_string())?);
    ensure(a == b, || "tables differ".into())?;
    Ok(format!("{} bytes identical across runs", a.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("approximation guarantee", approximation_guarantee),
        ("path instance", path_instance),
        ("budget table exactness", budget_table_exactness),
        ("slice matching bounds", slice_matching_bounds),
        ("independent set equivalence", independent_set_equivalence),
        ("flow cost bounds", flow_cost_bounds_sweep),
        ("cut and path duality", cut_path_duality),
        ("matching gadget equality", matching_gadget_equality),
        ("weight shift identities", weight_shift_identities),
        ("end to end chain", end_to_end_chain),
        ("bench determinism", bench_determinism),
    ];
    let verdicts: Vec<Verdict> = thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| s.spawn(move || catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()))))
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), v)) in criteria.iter().zip(&verdicts).enumerate() {
        match v {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
