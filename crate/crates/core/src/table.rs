//! Approximation quality table: the scheme against the exhaustive optimum on seeded
//! grid instances, one row per instance and accuracy.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{grid_instance, GridConfig};
use crate::ptas::{ptas_mmeip, PtasConfig};
use crate::solvers::{oracle_interdict, DEFAULT_MAX_SUBSETS};

#[derive(Clone, Debug)]
pub struct TableConfig {
    pub seed: u64,
    pub instances: usize,
    pub eps: Vec<f64>,
    pub grid: GridConfig,
    pub oracle_cap: u64,
    /// Record wall time per row. Off makes the table a pure function of the seed.
    pub timing: bool,
    pub strict_width: bool,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            seed: 0,
            instances: 20,
            eps: vec![0.5, 1.0],
            grid: GridConfig::default(),
            oracle_cap: DEFAULT_MAX_SUBSETS,
            timing: true,
            strict_width: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub instance: usize,
    pub n: usize,
    pub m: usize,
    pub eps: f64,
    #[serde(rename = "B")]
    pub budget: i64,
    pub ptas: i64,
    pub ptas_cost: i64,
    pub oracle: Option<i64>,
    pub ratio: Option<f64>,
    pub wall_ms: Option<f64>,
}

impl Row {
    /// Whether the row meets the guarantee; rows without an optimum count as met.
    pub fn within_guarantee(&self) -> bool {
        self.ptas_cost <= self.budget
            && self.oracle.is_none_or(|opt| self.ptas as f64 <= (1.0 + self.eps) * opt as f64)
    }
}

pub fn run_table(cfg: &TableConfig) -> Result<Vec<Row>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    for index in 0..cfg.instances {
        let inst = grid_instance(&mut rng, &cfg.grid);
        let g = &inst.graph;
        let oracle = match oracle_interdict(&inst, cfg.oracle_cap) {
            Ok(r) => r.value.finite(),
            Err(Error::TooLargeForOracle(_)) => None,
            Err(e) => return Err(e),
        };
        for &eps in &cfg.eps {
            let mut pc = PtasConfig::new(eps);
            pc.strict_width = cfg.strict_width;
            let start = Instant::now();
            let run = ptas_mmeip(g, inst.budget, &pc)?;
            let wall = start.elapsed().as_secs_f64() * 1e3;
            let ratio = oracle.map(|opt| match (run.value, opt) {
                (0, 0) => 1.0,
                (_, 0) => f64::INFINITY,
                (v, o) => v as f64 / o as f64,
            });
            rows.push(Row {
                instance: index,
                n: g.vertex_count(),
                m: g.edge_count(),
                eps,
                budget: inst.budget,
                ptas: run.value,
                ptas_cost: run.cost,
                oracle,
                ratio,
                wall_ms: cfg.timing.then_some(wall),
            });
        }
    }
    Ok(rows)
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("rows serialise");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}
