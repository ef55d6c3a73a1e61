//! Rays, tail containment, separation verdicts under the three end notions,
//! end approximants and the classification of escaping sequences.

mod approx;
mod ray;
mod separate;
mod tail;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::cuts::{Carrier, CutKind, CutOracle};
use crate::error::{Error, Result};
use crate::graph::{explore, BudgetSchedule, LazyGraph, VertexId, Window};

pub use approx::{
    classify_sequence, end_approximant, ChainLink, Descent, EndApproximant, SeqElement,
    SequenceCase, SequenceClassification,
};
pub use ray::{EscapeFn, Generator, Metricity, Ray};
pub use separate::{
    coarsen, count_ends_at_depth, separation_verdict, EndCount, EndCountReport, EndCountStatus,
    Outcome, Verdict,
};
pub use tail::{tail_in, tail_side, TailSide, TailVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Notion {
    VertexEnd,
    EdgeEnd,
    MetricEnd,
}

impl Notion {
    pub const ALL: [Notion; 3] = [Notion::VertexEnd, Notion::EdgeEnd, Notion::MetricEnd];

    pub fn kind(self) -> CutKind {
        match self {
            Notion::VertexEnd => CutKind::Vertex,
            Notion::EdgeEnd => CutKind::Edge,
            Notion::MetricEnd => CutKind::Metric,
        }
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Notion::VertexEnd => "vertex",
            Notion::EdgeEnd => "edge",
            Notion::MetricEnd => "metric",
        })
    }
}

impl FromStr for Notion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(Notion::VertexEnd),
            "edge" => Ok(Notion::EdgeEnd),
            "metric" => Ok(Notion::MetricEnd),
            _ => Err(Error::Parse {
                kind: "notion",
                input: s.to_string(),
            }),
        }
    }
}

/// Closed-form knowledge about the ends of one graph.
///
/// Ray arguments are ray names; an oracle only answers for rays it knows.
pub trait EndOracle: CutOracle {
    /// Short identifier used in certificates.
    fn tag(&self) -> String;

    /// The side of `carrier` holding the tail of the named ray.
    fn tail_side(&self, _ray: &str, _carrier: &Carrier) -> Option<TailSide> {
        None
    }

    /// Whether two named rays are equivalent under `notion`.
    fn equivalent(&self, _a: &str, _b: &str, _notion: Notion) -> Option<bool> {
        None
    }

    /// Closed-form cuts worth trying first when separating rays at `depth`.
    fn canonical_cuts(&self, _depth: u32) -> Vec<Carrier> {
        Vec::new()
    }

    /// A global name for the component of `K(root, radius)*` containing `v`.
    fn ball_component_key(&self, _radius: u32, _v: &VertexId) -> Option<String> {
        None
    }
}

/// A graph together with its oracle and exploration policy.
#[derive(Clone)]
pub struct Env {
    pub graph: Arc<dyn LazyGraph>,
    pub oracle: Option<Arc<dyn EndOracle>>,
    pub budget: BudgetSchedule,
    /// Windows are never explored beyond this radius.
    pub max_radius: u32,
    windows: Arc<Mutex<BTreeMap<u32, Arc<Window>>>>,
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Env")
            .field("graph", &self.graph.name())
            .field("oracle", &self.oracle.as_ref().map(|o| o.tag()))
            .field("budget", &self.budget)
            .field("max_radius", &self.max_radius)
            .finish()
    }
}

impl Env {
    pub fn new(graph: Arc<dyn LazyGraph>, budget: BudgetSchedule, max_radius: u32) -> Self {
        Env {
            graph,
            oracle: None,
            budget,
            max_radius,
            windows: Arc::default(),
        }
    }

    pub fn with_oracle(mut self, oracle: Arc<dyn EndOracle>) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn oracle(&self) -> Option<&dyn EndOracle> {
        self.oracle.as_deref()
    }

    pub fn cut_oracle(&self) -> Option<&dyn CutOracle> {
        self.oracle.as_deref().map(|o| o as &dyn CutOracle)
    }

    /// The window around the root at `min(depth, max_radius)`, cached.
    pub fn window(&self, depth: u32) -> Result<Arc<Window>> {
        let radius = depth.min(self.max_radius);
        if let Some(w) = self.windows.lock().expect("window cache").get(&radius) {
            return Ok(Arc::clone(w));
        }
        let w = Arc::new(explore(Arc::clone(&self.graph), radius, self.budget)?);
        self.windows
            .lock()
            .expect("window cache")
            .insert(radius, Arc::clone(&w));
        Ok(w)
    }

    /// Exact distance from the root, when the graph provides a metric.
    pub(crate) fn root_distance(&self, v: &VertexId) -> Option<u64> {
        self.graph.exact_metric(&self.graph.root(), v)
    }

    /// Global name of the component of `K(root, radius)*` holding `v`: the
    /// oracle's key if it has one, else the window fingerprint.
    pub(crate) fn component_key(&self, window: &Window, radius: u32, v: &VertexId) -> Option<String> {
        if let Some(k) = self.oracle().and_then(|o| o.ball_component_key(radius, v)) {
            return Some(k);
        }
        let idx = window.index_of(v)?;
        let root = window.index_of(&self.graph.root())?;
        let labeling = window.ball_complement(root, radius);
        labeling
            .component_of(idx)
            .map(|c| c.fingerprint.to_string())
    }
}
