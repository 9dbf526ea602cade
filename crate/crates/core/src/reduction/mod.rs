//! Constructive reductions from independent set down to matching interdiction.
//!
//! Each stage keeps its output instance together with the maps needed to carry a
//! solution across in both directions.

mod bcfip;
mod chain;
mod dspeip;
mod mmeip;
mod mpmeip;
mod planarize;

pub use bcfip::{is_to_bcfip, EdgeClass, IsToBcfip};
pub use chain::{require, verify_chain, ChainOptions, EXHAUSTIVE_ARCS, ChainReport, Check, StageReport};
pub use mmeip::{mpmeip_to_mmeip, MpmeipToMmeip, ShiftCheck};
pub use mpmeip::{dspeip_to_mpmeip, DspeipToMpmeip, Gadget, MatchingCheck};
pub use dspeip::{bcfip_to_dspeip, dual_split, BcfipToDspeip, DualCheck};
pub use planarize::{
    flow_cost_bounds, flow_through, planarize_bcfip, potential_certificate, threshold_flow_search, Crossing, FlowCostReport,
    PlanarBcfip, PotentialReport,
};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{EdgeId, VertexId};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Bcfip,
    PlanarBcfip,
    Dspeip,
    Mpmeip,
    Mmeip,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Bcfip => "bcfip",
            Stage::PlanarBcfip => "planar-bcfip",
            Stage::Dspeip => "dspeip",
            Stage::Mpmeip => "mpmeip",
            Stage::Mmeip => "mmeip",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Stage {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "bcfip" => Ok(Stage::Bcfip),
            "planar-bcfip" => Ok(Stage::PlanarBcfip),
            "dspeip" => Ok(Stage::Dspeip),
            "mpmeip" => Ok(Stage::Mpmeip),
            "mmeip" => Ok(Stage::Mmeip),
            other => Err(crate::Error::InvalidInput(format!("unknown stage {other}"))),
        }
    }
}

/// Serialisable correspondence data of one stage.
#[derive(Clone, Debug, Serialize)]
pub struct ArtifactSummary {
    pub stage: Stage,
    pub vertices: usize,
    pub edges: usize,
    pub budget: i64,
    /// Decision threshold on the target objective.
    pub threshold: i64,
    pub params: BTreeMap<String, i64>,
    /// Source edge (or source vertex for the first stage) to target edges.
    pub edge_map: BTreeMap<usize, Vec<EdgeId>>,
    /// Source vertex to target vertices, where the stage keeps such a correspondence.
    pub vertex_map: BTreeMap<VertexId, Vec<VertexId>>,
}

/// A stage whose source and target solutions are both edge sets.
pub trait Reduction {
    fn target(&self) -> &Instance;
    /// Source interdiction set to target interdiction set.
    fn forward(&self, set: &[EdgeId]) -> Vec<EdgeId>;
    /// Target interdiction set to source interdiction set.
    fn backward(&self, set: &[EdgeId]) -> Vec<EdgeId>;
    fn summary(&self) -> ArtifactSummary;
}
