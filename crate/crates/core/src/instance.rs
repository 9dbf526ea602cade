//! Interdiction instances and their JSON form.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dart, Edge, Rotation, VertexId, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    /// Minimise the maximum matching weight after deletion.
    Mmeip,
    /// Maximise the minimum perfect matching weight after deletion.
    Mpmeip,
    /// Maximise the shortest path length after deletion.
    Dspeip,
    /// Maximise the flow value routed through the chosen edges.
    Bcfip,
}

impl ProblemKind {
    pub fn needs_terminals(self) -> bool {
        matches!(self, ProblemKind::Dspeip | ProblemKind::Bcfip)
    }

    pub fn is_directed(self) -> bool {
        self.needs_terminals()
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProblemKind::Mmeip => "mmeip",
            ProblemKind::Mpmeip => "mpmeip",
            ProblemKind::Dspeip => "dspeip",
            ProblemKind::Bcfip => "bcfip",
        };
        f.write_str(s)
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mmeip" => Ok(ProblemKind::Mmeip),
            "mpmeip" => Ok(ProblemKind::Mpmeip),
            "dspeip" => Ok(ProblemKind::Dspeip),
            "bcfip" => Ok(ProblemKind::Bcfip),
            other => Err(Error::InvalidInput(format!("unknown problem kind {other}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub budget: i64,
    pub kind: ProblemKind,
    pub terminals: Option<(VertexId, VertexId)>,
}

impl Instance {
    pub fn new(graph: WeightedGraph, budget: i64, kind: ProblemKind) -> Self {
        Instance { graph, budget, kind, terminals: None }
    }

    pub fn with_terminals(mut self, s: VertexId, t: VertexId) -> Self {
        self.terminals = Some((s, t));
        self
    }

    /// Checks budget sign, terminal presence and directedness for the problem kind.
    pub fn validate(&self) -> Result<()> {
        if self.budget < 0 {
            return Err(Error::InvalidInput(format!("negative budget {}", self.budget)));
        }
        if self.kind.needs_terminals() {
            let (s, t) = self
                .terminals
                .ok_or_else(|| Error::InvalidInput(format!("{} needs terminals", self.kind)))?;
            for v in [s, t] {
                if !self.graph.has_vertex(v) {
                    return Err(Error::TerminalMissing(v));
                }
            }
            if s == t {
                return Err(Error::InvalidInput("terminals coincide".into()));
            }
            if !self.graph.is_directed() {
                return Err(Error::UndirectedInput);
            }
        } else if self.graph.is_directed() {
            return Err(Error::DirectedInput);
        }
        Ok(())
    }

    pub fn terminals(&self) -> Result<(VertexId, VertexId)> {
        self.terminals
            .ok_or_else(|| Error::InvalidInput(format!("{} needs terminals", self.kind)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminals {
    pub s: VertexId,
    pub t: VertexId,
}

/// Serialised graph, optionally carrying an embedding, terminals, a budget and a problem kind.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub directed: bool,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<BTreeMap<VertexId, Vec<Dart>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminals: Option<Terminals>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ProblemKind>,
}

impl GraphJson {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        GraphJson {
            directed: g.is_directed(),
            vertices: g.vertices().to_vec(),
            edges: g.edges().to_vec(),
            rotation: g.rotation().map(|r| r.order.clone()),
            terminals: None,
            budget: None,
            kind: None,
        }
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let mut j = Self::from_graph(&inst.graph);
        j.terminals = inst.terminals.map(|(s, t)| Terminals { s, t });
        j.budget = Some(inst.budget);
        j.kind = Some(inst.kind);
        j
    }

    pub fn to_graph(&self) -> Result<WeightedGraph> {
        let mut g = WeightedGraph::new(self.directed);
        for &v in &self.vertices {
            g.insert_vertex(v)?;
        }
        for e in &self.edges {
            g.insert_edge(e.clone())?;
        }
        if let Some(order) = &self.rotation {
            let mut rot = Rotation::new();
            for (&v, darts) in order {
                rot.set(v, darts.clone());
            }
            // vertices without darts may be omitted from the listing
            for &v in &self.vertices {
                rot.order.entry(v).or_default();
            }
            g.set_rotation(rot)?;
        }
        Ok(g)
    }

    /// Builds an instance, falling back to the given budget and kind when the file has none.
    pub fn to_instance(&self, budget: Option<i64>, kind: Option<ProblemKind>) -> Result<Instance> {
        let graph = self.to_graph()?;
        let budget = budget
            .or(self.budget)
            .ok_or_else(|| Error::InvalidInput("no budget given".into()))?;
        let kind = kind.or(self.kind).unwrap_or(if self.directed {
            ProblemKind::Dspeip
        } else {
            ProblemKind::Mmeip
        });
        let inst = Instance {
            graph,
            budget,
            kind,
            terminals: self.terminals.map(|t| (t.s, t.t)),
        };
        inst.validate()?;
        Ok(inst)
    }
}

pub fn graph_from_json(text: &str) -> Result<WeightedGraph> {
    serde_json::from_str::<GraphJson>(text)?.to_graph()
}

pub fn graph_to_json(g: &WeightedGraph) -> String {
    serde_json::to_string_pretty(&GraphJson::from_graph(g)).expect("graph serialises")
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    serde_json::from_str::<GraphJson>(text)?.to_instance(None, None)
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&GraphJson::from_instance(inst)).expect("instance serialises")
}
