//! `interdict`: solve, reduce, verify and benchmark matching interdiction instances.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use interdiction_core::instance::{graph_from_json, instance_to_json, GraphJson};
use interdiction_core::ptas::{ptas_mmeip, PtasConfig};
use interdiction_core::reduction::{
    bcfip_to_dspeip, dspeip_to_mpmeip, dual_split, is_to_bcfip, mpmeip_to_mmeip, planarize_bcfip, verify_chain,
    ArtifactSummary, ChainOptions, Reduction, Stage,
};
use interdiction_core::solvers::{max_weight_matching, oracle_interdict, DEFAULT_MAX_SUBSETS};
use interdiction_core::table::{run_table, to_csv, TableConfig};
use interdiction_core::treewidth::build_tree_decomposition;
use interdiction_core::tw_interdict::solve_tw_mmeip;
use interdiction_core::{Error, Instance, ProblemKind, WeightedGraph};

const EXIT_VERIFY: u8 = 2;
const EXIT_REJECTED: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(name = "interdict", version, about = "Matching interdiction on planar graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a matching interdiction instance.
    Solve(SolveArgs),
    /// Build the reduction chain from an independent set question, or continue it from an instance.
    Reduce(ReduceArgs),
    /// Build the reduction chain and check every stage.
    Verify(VerifyArgs),
    /// Compare the approximation scheme with the exhaustive optimum on seeded grid instances.
    Bench(BenchArgs),
    /// Exhaustive optimum of any supported instance.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Ptas,
    Tw,
    Oracle,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ptas")]
    method: Method,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Overrides the budget stored in the instance.
    #[arg(long)]
    budget: Option<i64>,
    /// Fail when a band decomposition is wider than the scheme's bound.
    #[arg(long)]
    strict_width: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    oracle_cap: u64,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    input: PathBuf,
    /// Directory for the stage instances and their map sidecars.
    #[arg(long, default_value = ".")]
    output: PathBuf,
    /// Independent set size, when the input is a plain graph.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "mmeip")]
    to: Stage,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    oracle_cap: u64,
    /// Random edge sets per stage for the identity checks.
    #[arg(long, default_value_t = 4)]
    samples: usize,
    /// Shift the cost of one crossing arc on the certificate flow.
    #[arg(long, hide = true, allow_hyphen_values = true)]
    corrupt_crossing: Option<i64>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// Accuracies to run, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0])]
    eps: Vec<f64>,
    /// Largest budget drawn.
    #[arg(long, default_value_t = 5)]
    budget: i64,
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    oracle_cap: u64,
    #[arg(long)]
    strict_width: bool,
    /// Leave the wall time column empty so repeated runs are identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    budget: Option<i64>,
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    oracle_cap: u64,
}

/// Failure of a command, carrying its exit code.
enum Failure {
    Core(Error),
    Io(String),
    Verify(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome<()> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Outcome<()> {
    match output {
        Some(p) => write(p, text),
        None => {
            say(text);
            Ok(())
        }
    }
}

/// Prints to stdout; a closed pipe is not an error worth reporting.
fn say(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialise")
}

fn load_instance(path: &Path, budget: Option<i64>, kind: Option<ProblemKind>) -> Outcome<Instance> {
    let text = read(path)?;
    let j: GraphJson = serde_json::from_str(&text).map_err(Error::from)?;
    Ok(j.to_instance(budget.or(j.budget).or(Some(0)), kind)?)
}

fn solve(a: &SolveArgs) -> Outcome<()> {
    let inst = load_instance(&a.input, a.budget, Some(ProblemKind::Mmeip))?;
    let g = &inst.graph;
    let (objective, set, diagnostics) = match a.method {
        Method::Ptas => {
            let mut cfg = PtasConfig::new(a.eps);
            cfg.strict_width = a.strict_width;
            let run = ptas_mmeip(g, inst.budget, &cfg)?;
            let diag = serde_json::to_value(&run).map_err(Error::from)?;
            (run.value, run.interdiction, diag)
        }
        Method::Tw => {
            let td = build_tree_decomposition(g, None)?;
            let (value, set) = solve_tw_mmeip(g, &td, inst.budget)?;
            (value, set, json!({ "width": td.width, "bags": td.node_count() }))
        }
        Method::Oracle => {
            let r = oracle_interdict(&inst, a.oracle_cap)?;
            let value = r.value.finite().expect("matching weights are finite");
            (value, r.interdiction, json!({ "evaluated": r.evaluated }))
        }
    };
    // the stored objective is recomputed from the returned set
    debug_assert_eq!(max_weight_matching(&g.delete_edges(&set)).weight, objective);
    let method = match a.method {
        Method::Ptas => "ptas",
        Method::Tw => "tw",
        Method::Oracle => "oracle",
    };
    let out = json!({
        "objective": objective,
        "interdiction": set,
        "budget_spent": g.total_cost(&set),
        "budget": inst.budget,
        "method": method,
        "diagnostics": diagnostics,
    });
    emit(&a.output, &pretty(&out))
}

fn oracle(a: &OracleArgs) -> Outcome<()> {
    let inst = load_instance(&a.input, a.budget, None)?;
    let r = oracle_interdict(&inst, a.oracle_cap)?;
    let out = json!({
        "kind": inst.kind.to_string(),
        "objective": r.value,
        "interdiction": r.interdiction,
        "budget_spent": r.cost,
        "budget": inst.budget,
        "evaluated": r.evaluated,
    });
    emit(&a.output, &pretty(&out))
}

struct Written {
    files: Vec<String>,
    dir: PathBuf,
}

impl Written {
    fn stage(&mut self, inst: &Instance, summary: &ArtifactSummary) -> Outcome<()> {
        let name = summary.stage.to_string();
        let inst_path = self.dir.join(format!("{name}.json"));
        let map_path = self.dir.join(format!("{name}.map.json"));
        write(&inst_path, &instance_to_json(inst))?;
        write(&map_path, &pretty(&serde_json::to_value(summary).map_err(Error::from)?))?;
        self.files.push(inst_path.display().to_string());
        self.files.push(map_path.display().to_string());
        Ok(())
    }
}

fn reduce(a: &ReduceArgs) -> Outcome<()> {
    let text = read(&a.input)?;
    let j: GraphJson = serde_json::from_str(&text).map_err(Error::from)?;
    fs::create_dir_all(&a.output).map_err(|e| Failure::Io(format!("{}: {e}", a.output.display())))?;
    let mut out = Written { files: Vec::new(), dir: a.output.clone() };
    let order = [Stage::Bcfip, Stage::PlanarBcfip, Stage::Dspeip, Stage::Mpmeip, Stage::Mmeip];
    let until = order.iter().position(|&s| s == a.to).expect("every stage is listed");
    let wants = |s: Stage| order.iter().position(|&x| x == s).expect("every stage is listed") <= until;

    // where the chain starts depends on what the file holds
    let mut current: Option<Instance> = None;
    let mut from = 0;
    match j.kind {
        None => {
            let g = j.to_graph()?;
            let k = a.k.ok_or_else(|| Error::InvalidInput("--k is required for a plain graph".into()))?;
            let b = is_to_bcfip(&g, k)?;
            out.stage(&b.instance, &b.summary())?;
            if wants(Stage::PlanarBcfip) {
                let p = planarize_bcfip(&b)?;
                out.stage(&p.instance, &p.summary())?;
                if wants(Stage::Dspeip) {
                    let d = bcfip_to_dspeip(&p)?;
                    out.stage(&d.instance, &d.summary())?;
                    current = Some(d.instance);
                    from = 3;
                }
            }
        }
        Some(kind) => {
            let inst = j.to_instance(None, None)?;
            match kind {
                ProblemKind::Bcfip => {
                    if wants(Stage::Dspeip) {
                        let d = dual_split(&inst, None)?;
                        out.stage(&d.instance, &d.summary())?;
                        current = Some(d.instance);
                        from = 3;
                    }
                }
                ProblemKind::Dspeip => {
                    current = Some(inst);
                    from = 3;
                }
                ProblemKind::Mpmeip => {
                    current = Some(inst);
                    from = 4;
                }
                ProblemKind::Mmeip => {
                    return Err(Error::InvalidInput("a matching interdiction instance is the end of the chain".into()).into())
                }
            }
        }
    }
    if let Some(mut inst) = current {
        if from == 3 && wants(Stage::Mpmeip) {
            let m = dspeip_to_mpmeip(&inst)?;
            out.stage(&m.instance, &m.summary())?;
            inst = m.instance;
            from = 4;
        }
        if from == 4 && wants(Stage::Mmeip) {
            let x = mpmeip_to_mmeip(&inst)?;
            out.stage(&x.instance, &x.summary())?;
        }
    }
    say(&pretty(&json!({ "written": out.files })));
    Ok(())
}

fn verify(a: &VerifyArgs) -> Outcome<()> {
    let g: WeightedGraph = graph_from_json(&read(&a.input)?)?;
    if g.vertex_count() == 0 {
        let out = json!({ "passed": true, "k": a.k, "stages": [], "note": "empty graph" });
        return emit(&a.output, &pretty(&out));
    }
    let opts = ChainOptions {
        oracle_cap: a.oracle_cap,
        samples: a.samples,
        seed: a.seed,
        corrupt_crossing: a.corrupt_crossing,
    };
    let report = verify_chain(&g, a.k, &opts)?;
    let mut out = serde_json::to_value(&report).map_err(Error::from)?;
    out["passed"] = json!(report.passed());
    let failures: Vec<Value> = report
        .failures()
        .iter()
        .map(|(stage, c)| json!({ "stage": stage, "check": c.name, "detail": c.detail }))
        .collect();
    out["failures"] = json!(failures);
    emit(&a.output, &pretty(&out))?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify(json!(failures)))
    }
}

fn bench(a: &BenchArgs) -> Outcome<()> {
    let mut cfg = TableConfig {
        seed: a.seed,
        instances: a.instances,
        eps: a.eps.clone(),
        oracle_cap: a.oracle_cap,
        timing: !a.no_timing,
        strict_width: a.strict_width,
        ..TableConfig::default()
    };
    cfg.grid.max_budget = a.budget;
    let rows = run_table(&cfg)?;
    let csv = to_csv(&rows);
    match &a.output {
        Some(p) => write(p, &csv),
        None => {
            let _ = std::io::stdout().lock().write_all(csv.as_bytes());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Reduce(a) => reduce(a),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle(a),
    };
    let (code, body) = match result {
        Ok(()) => return ExitCode::SUCCESS,
        Err(Failure::Verify(failures)) => {
            (EXIT_VERIFY, json!({ "error": "verification_failed", "failures": failures }))
        }
        Err(Failure::Io(msg)) => (1, json!({ "error": "io", "message": msg })),
        Err(Failure::Core(e)) => {
            let code = if e.is_resource_cap() { EXIT_CAP } else { EXIT_REJECTED };
            (code, json!({ "error": e.kind(), "message": e.to_string() }))
        }
    };
    eprintln!("{}", pretty(&json!({ "exit_code": code, "detail": body })));
    ExitCode::from(code)
}
