//! Lazily defined graphs and the finite windows explored from them.

mod finite;
mod unionfind;
mod window;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use finite::FiniteGraph;
pub use unionfind::UnionFind;
pub use window::{
    explore, explore_from, Certainty, Component, ComponentLabeling, DiameterEstimate, Enumeration,
    Openness, Window,
};

/// Canonical printable token naming one vertex of a graph family.
///
/// Tokens are compared lexicographically; that order is what makes component
/// fingerprints deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(token: impl Into<String>) -> Self {
        VertexId(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeHint {
    Finite(usize),
    Infinite,
    Unknown,
}

/// A connected simple graph given by ordered neighbor streams.
///
/// Implementations must be pure: the same vertex always yields the same
/// stream, `u` appears in the stream of `v` iff `v` appears in the stream of
/// `u`, and no vertex is its own neighbor.
pub trait LazyGraph: Send + Sync {
    /// Short human-readable name, used in reports.
    fn name(&self) -> String;

    fn root(&self) -> VertexId;

    /// Whether `v` is a well-formed token of this graph.
    fn contains(&self, v: &VertexId) -> bool;

    /// The first `limit` entries of the neighbor stream of `v` (fewer when the
    /// stream is exhausted).
    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId>;

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool;

    fn degree_hint(&self, v: &VertexId) -> DegreeHint;

    /// Closed-form graph distance, when one is known.
    fn exact_metric(&self, _u: &VertexId, _v: &VertexId) -> Option<u64> {
        None
    }
}

/// Per-vertex neighbor enumeration budget as a function of exploration depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BudgetSchedule {
    Constant(usize),
    Linear { base: usize, per_depth: usize },
    Unlimited,
}

impl Default for BudgetSchedule {
    fn default() -> Self {
        BudgetSchedule::Linear {
            base: 1,
            per_depth: 1,
        }
    }
}

impl BudgetSchedule {
    pub fn at(&self, depth: u32) -> usize {
        match *self {
            BudgetSchedule::Constant(n) => n,
            BudgetSchedule::Linear { base, per_depth } => {
                base.saturating_add(per_depth.saturating_mul(depth as usize))
            }
            BudgetSchedule::Unlimited => usize::MAX,
        }
    }

    /// Rejects schedules that would never enumerate anything.
    pub fn validate(&self) -> Result<()> {
        match *self {
            BudgetSchedule::Constant(0) => Err(Error::InvalidConfig(
                "budget schedule must be positive".into(),
            )),
            BudgetSchedule::Linear { base: 0, .. } => Err(Error::InvalidConfig(
                "linear budget schedule needs a positive base".into(),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BudgetSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetSchedule::Constant(n) => write!(f, "{n}"),
            BudgetSchedule::Linear { base, per_depth } => write!(f, "linear:{base},{per_depth}"),
            BudgetSchedule::Unlimited => f.write_str("unlimited"),
        }
    }
}

impl FromStr for BudgetSchedule {
    type Err = Error;

    /// Accepts `<n>`, `linear:<base>,<per_depth>` or `unlimited`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            kind: "budget schedule",
            input: s.to_string(),
        };
        let s = s.trim();
        let schedule = if s == "unlimited" {
            BudgetSchedule::Unlimited
        } else if let Some(rest) = s.strip_prefix("linear:") {
            let (base, step) = rest.split_once(',').ok_or_else(bad)?;
            BudgetSchedule::Linear {
                base: base.trim().parse().map_err(|_| bad())?,
                per_depth: step.trim().parse().map_err(|_| bad())?,
            }
        } else {
            BudgetSchedule::Constant(s.parse().map_err(|_| bad())?)
        };
        schedule.validate()?;
        Ok(schedule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_parsing() {
        assert_eq!("7".parse::<BudgetSchedule>().unwrap(), BudgetSchedule::Constant(7));
        assert_eq!(
            "linear:2,3".parse::<BudgetSchedule>().unwrap(),
            BudgetSchedule::Linear { base: 2, per_depth: 3 }
        );
        assert_eq!("unlimited".parse::<BudgetSchedule>().unwrap(), BudgetSchedule::Unlimited);
        assert!("0".parse::<BudgetSchedule>().is_err());
        assert!("linear:0,4".parse::<BudgetSchedule>().is_err());
        assert!("lots".parse::<BudgetSchedule>().is_err());
    }

    #[test]
    fn budget_is_non_decreasing() {
        let b = BudgetSchedule::default();
        for d in 0..50 {
            assert!(b.at(d) <= b.at(d + 1));
        }
        assert_eq!(BudgetSchedule::Unlimited.at(3), usize::MAX);
    }
}
