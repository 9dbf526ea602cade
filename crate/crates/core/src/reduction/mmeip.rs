//! Minimum perfect matching interdiction to maximum matching interdiction.
//!
//! Two weight shifts on the same graph. Flipping every weight against the largest one,
//! `w' = W - w`, turns minimum perfect matchings into maximum perfect ones. Adding
//! `2 nu_{w'}(G) + 2` to every edge then makes each maximum matching perfect whenever a
//! perfect matching survives, so the leader who minimises the maximum matching is the
//! leader who maximises the minimum perfect matching.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ArtifactSummary, Reduction, Stage};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, WeightedGraph};
use crate::instance::{Instance, ProblemKind};
use crate::solvers::{max_weight_matching, max_weight_perfect_matching, min_weight_perfect_matching, Distance};

#[derive(Clone, Debug)]
pub struct MpmeipToMmeip {
    pub source: Instance,
    pub instance: Instance,
    /// Largest source weight.
    pub max_weight: i64,
    /// Source graph with flipped weights `W - w`.
    pub flipped: WeightedGraph,
    /// Maximum matching weight of the flipped graph.
    pub flipped_nu: i64,
    /// Amount added to every flipped weight.
    pub lift: i64,
    pub threshold: i64,
}

/// Both weight-shift identities for one deletion set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftCheck {
    /// Minimum perfect matching weight under the source weights.
    pub mu: Distance,
    /// Maximum perfect matching weight under the flipped weights.
    pub flipped_gamma: Option<i64>,
    /// Maximum matching weight under the final weights.
    pub nu: i64,
    /// `flipped_gamma = W |V| / 2 - mu`.
    pub flip_holds: bool,
    /// `flipped_gamma + |V| nu_{w'}(G) + |V| = nu`.
    pub lift_holds: bool,
}

impl ShiftCheck {
    pub fn holds(&self) -> bool {
        self.flip_holds && self.lift_holds
    }
}

pub fn mpmeip_to_mmeip(inst: &Instance) -> Result<MpmeipToMmeip> {
    let g = &inst.graph;
    if g.is_directed() {
        return Err(Error::DirectedInput);
    }
    let n = g.vertex_count();
    if n % 2 == 1 {
        return Err(Error::OddVertexCount(n));
    }
    min_weight_perfect_matching(g)?;
    let max_weight = g.edges().iter().map(|e| e.w).max().unwrap_or(0);
    let mut flipped = g.clone();
    for e in g.edges() {
        flipped.edge_mut(e.id).unwrap().w = max_weight - e.w;
    }
    let flipped_nu = max_weight_matching(&flipped).weight;
    let lift = 2 * flipped_nu + 2;
    let mut h = flipped.clone();
    for e in g.edges() {
        h.edge_mut(e.id).unwrap().w += lift;
    }
    let instance = Instance::new(h, inst.budget, ProblemKind::Mmeip);
    Ok(MpmeipToMmeip { source: inst.clone(), instance, max_weight, flipped, flipped_nu, lift, threshold: 0 })
}

impl MpmeipToMmeip {
    fn half(&self) -> i64 {
        self.max_weight * self.source.graph.vertex_count() as i64 / 2
    }

    /// Maximum matching weight under the final weights that corresponds to a minimum
    /// perfect matching weight `mu` under the source weights.
    pub fn objective_from_mu(&self, mu: i64) -> i64 {
        let n = self.source.graph.vertex_count() as i64;
        self.half() - mu + n * self.flipped_nu + n
    }

    pub fn check(&self, set: &[EdgeId]) -> Result<ShiftCheck> {
        let n = self.source.graph.vertex_count() as i64;
        let mu = match min_weight_perfect_matching(&self.source.graph.delete_edges(set)) {
            Ok(m) => Distance::Finite(m.weight),
            Err(Error::NoPerfectMatching) => Distance::Unreachable,
            Err(e) => return Err(e),
        };
        let flipped_gamma = match max_weight_perfect_matching(&self.flipped.delete_edges(set)) {
            Ok(m) => Some(m.weight),
            Err(Error::NoPerfectMatching) => None,
            Err(e) => return Err(e),
        };
        let nu = max_weight_matching(&self.instance.graph.delete_edges(set)).weight;
        let flip_holds = match (mu, flipped_gamma) {
            (Distance::Finite(m), Some(g)) => g == self.half() - m,
            _ => false,
        };
        let lift_holds = flipped_gamma.is_some_and(|g| g + n * self.flipped_nu + n == nu);
        Ok(ShiftCheck { mu, flipped_gamma, nu, flip_holds, lift_holds })
    }
}

impl Reduction for MpmeipToMmeip {
    fn target(&self) -> &Instance {
        &self.instance
    }

    fn forward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        set.to_vec()
    }

    fn backward(&self, set: &[EdgeId]) -> Vec<EdgeId> {
        set.to_vec()
    }

    fn summary(&self) -> ArtifactSummary {
        let mut params = BTreeMap::new();
        params.insert("max_weight".into(), self.max_weight);
        params.insert("flipped_nu".into(), self.flipped_nu);
        params.insert("lift".into(), self.lift);
        ArtifactSummary {
            stage: Stage::Mmeip,
            vertices: self.instance.graph.vertex_count(),
            edges: self.instance.graph.edge_count(),
            budget: self.instance.budget,
            threshold: self.threshold,
            params,
            edge_map: self.source.graph.edges().iter().map(|e| (e.id, vec![e.id])).collect(),
            vertex_map: self.source.graph.vertices().iter().map(|&v| (v, vec![v])).collect(),
        }
    }
}
