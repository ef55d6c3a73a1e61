//! Example graphs with exact metrics, named rays and sequences, ground truth
//! and oracles built from their closed-form structure.

mod free;
mod hubs;
mod ladder;
mod levels;
mod line;
mod star;
mod tree;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::ends::{
    count_ends_at_depth, separation_verdict, EndCount, EndCountReport, EndOracle, Env, Notion, Ray,
    SeqElement, Verdict,
};
use crate::error::{Error, Result};
use crate::graph::{BudgetSchedule, LazyGraph, VertexId};

pub use free::FreeGroupOracle;
pub use hubs::{HubGraph, HubSet};
pub use ladder::{Ladder, LadderSide};
pub use levels::{LevelHalf, LevelChain};
pub use line::{HalfLine, IntegerLine};
pub use star::StarOfPaths;
pub use tree::{component_prefix_len, Address, BallPiece, Cone, FattenedTree, TreeOracle};
pub use crate::walk::Generators;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Branching {
    Finite(usize),
    /// Every vertex has children `0, 1, 2, …`, revealed by the budget.
    Infinite,
}

impl fmt::Display for Branching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branching::Finite(b) => write!(f, "{b}"),
            Branching::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Branching {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" => Ok(Branching::Infinite),
            _ => s.parse().map(Branching::Finite).map_err(|_| Error::Parse {
                kind: "branching",
                input: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum KnVariant {
    A,
    B,
    C,
    D,
}

impl fmt::Display for KnVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnVariant::A => "5a",
            KnVariant::B => "5b",
            KnVariant::C => "5c",
            KnVariant::D => "5d",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum GalleryTag {
    Ladder,
    StarOfPaths,
    X1,
    X2,
    TreePlus2(Branching),
    KnChain(KnVariant),
    FreeGroup { generators: Generators, r: u32 },
    /// The tree underlying `TreePlus2`.
    Tree(Branching),
    /// The integer line, a quasi-isometric image of the ladder.
    Line,
}

impl fmt::Display for GalleryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalleryTag::Ladder => f.write_str("ladder"),
            GalleryTag::StarOfPaths => f.write_str("star-paths"),
            GalleryTag::X1 => f.write_str("x1"),
            GalleryTag::X2 => f.write_str("x2"),
            GalleryTag::TreePlus2(b) => write!(f, "treeplus2:b={b}"),
            GalleryTag::KnChain(v) => write!(f, "kn-chain:variant={v}"),
            GalleryTag::FreeGroup { generators, r } => write!(f, "free:r={r},m={generators}"),
            GalleryTag::Tree(b) => write!(f, "tree:b={b}"),
            GalleryTag::Line => f.write_str("line"),
        }
    }
}

impl FromStr for GalleryTag {
    type Err = Error;

    /// `ladder | star-paths | x1 | x2 | treeplus2:b=<int|inf> |
    /// kn-chain:variant=<5a|5b|5c|5d> | free:r=<int>[,m=<int|inf>] |
    /// tree:b=<int|inf> | line`
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            kind: "graph",
            input: s.to_string(),
        };
        let (head, params) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = BTreeMap::new();
        for p in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = p.split_once('=').ok_or_else(bad)?;
            if kv.insert(k, v).is_some() {
                return Err(bad());
            }
        }
        let take = |allowed: &[&str]| -> Result<()> {
            if kv.keys().all(|k| allowed.contains(k)) {
                Ok(())
            } else {
                Err(bad())
            }
        };
        let tag = match head {
            "ladder" => GalleryTag::Ladder,
            "star-paths" => GalleryTag::StarOfPaths,
            "x1" => GalleryTag::X1,
            "x2" => GalleryTag::X2,
            "line" => GalleryTag::Line,
            "treeplus2" | "tree" => {
                take(&["b"])?;
                let b = kv.get("b").ok_or_else(bad)?.parse()?;
                if head == "tree" {
                    GalleryTag::Tree(b)
                } else {
                    GalleryTag::TreePlus2(b)
                }
            }
            "kn-chain" => {
                take(&["variant"])?;
                GalleryTag::KnChain(match *kv.get("variant").ok_or_else(bad)? {
                    "5a" => KnVariant::A,
                    "5b" => KnVariant::B,
                    "5c" => KnVariant::C,
                    "5d" => KnVariant::D,
                    _ => return Err(bad()),
                })
            }
            "free" => {
                take(&["r", "m"])?;
                let r = kv.get("r").ok_or_else(bad)?.parse().map_err(|_| bad())?;
                let generators = match kv.get("m").copied().unwrap_or("2") {
                    "inf" => Generators::Countable,
                    m => Generators::Finite(m.parse().map_err(|_| bad())?),
                };
                GalleryTag::FreeGroup { generators, r }
            }
            _ => return Err(bad()),
        };
        if head != "treeplus2" && head != "tree" && head != "kn-chain" && head != "free" {
            take(&[])?;
        }
        Ok(tag)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExpectedOutcome {
    Separated,
    Equivalent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedVerdict {
    pub rays: [String; 2],
    pub notion: Notion,
    pub outcome: ExpectedOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarBallExample {
    pub center: VertexId,
    pub radius: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundTruth {
    pub end_counts: BTreeMap<Notion, EndCount>,
    pub expected_verdicts: Vec<ExpectedVerdict>,
    pub star_ball_examples: Vec<StarBallExample>,
    /// Depth at which every expected verdict is reproduced.
    pub stabilization_depth: u32,
}

impl GroundTruth {
    pub(crate) fn new(counts: [Option<EndCount>; 3], stabilization_depth: u32) -> Self {
        GroundTruth {
            end_counts: Notion::ALL
                .into_iter()
                .zip(counts)
                .filter_map(|(n, c)| Some((n, c?)))
                .collect(),
            expected_verdicts: Vec::new(),
            star_ball_examples: Vec::new(),
            stabilization_depth,
        }
    }

    pub(crate) fn expect(mut self, a: &str, b: &str, notions: &[Notion], outcome: ExpectedOutcome) -> Self {
        for &notion in notions {
            self.expected_verdicts.push(ExpectedVerdict {
                rays: [a.to_string(), b.to_string()],
                notion,
                outcome,
            });
        }
        self
    }
}

pub type Sequence = Arc<dyn Fn(u64) -> SeqElement + Send + Sync>;

/// A named sequence with the convergence case it is known to have.
#[derive(Clone)]
pub struct NamedSequence {
    pub name: String,
    pub expected_case: &'static str,
    pub seq: Sequence,
}

pub(crate) fn vertex_sequence(
    name: &str,
    expected_case: &'static str,
    f: impl Fn(u64) -> VertexId + Send + Sync + 'static,
) -> NamedSequence {
    NamedSequence {
        name: name.to_string(),
        expected_case,
        seq: Arc::new(move |i| SeqElement::Vertex(f(i))),
    }
}

/// One example graph with everything known about it in closed form.
#[derive(Clone)]
pub struct GalleryGraph {
    pub tag: GalleryTag,
    pub graph: Arc<dyn LazyGraph>,
    pub oracle: Arc<dyn EndOracle>,
    pub truth: GroundTruth,
    pub rays: Vec<Ray>,
    pub sequences: Vec<NamedSequence>,
    /// Exploration policy used for windows of this graph.
    pub budget: BudgetSchedule,
    pub max_radius: u32,
    env: Env,
}

impl fmt::Debug for GalleryGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GalleryGraph")
            .field("tag", &self.tag)
            .field("rays", &self.rays.iter().map(Ray::name).collect::<Vec<_>>())
            .field("truth", &self.truth)
            .finish()
    }
}

impl GalleryGraph {
    pub(crate) fn assemble(
        tag: GalleryTag,
        graph: Arc<dyn LazyGraph>,
        oracle: Arc<dyn EndOracle>,
        truth: GroundTruth,
        rays: Vec<Ray>,
        sequences: Vec<NamedSequence>,
        budget: BudgetSchedule,
        max_radius: u32,
    ) -> Self {
        let env = Env::new(Arc::clone(&graph), budget, max_radius).with_oracle(Arc::clone(&oracle));
        GalleryGraph {
            tag,
            graph,
            oracle,
            truth,
            rays,
            sequences,
            budget,
            max_radius,
            env,
        }
    }

    /// Shared environment; windows explored through it are cached.
    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn ray(&self, name: &str) -> Result<&Ray> {
        self.rays
            .iter()
            .find(|r| r.name() == name)
            .ok_or_else(|| Error::InvalidConfig(format!("{} has no ray named {name:?}", self.tag)))
    }

    pub fn sequence(&self, name: &str) -> Result<&NamedSequence> {
        self.sequences
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::InvalidConfig(format!("{} has no sequence named {name:?}", self.tag)))
    }

    pub fn separate(&self, a: &str, b: &str, notion: Notion, depth: u32) -> Result<Verdict> {
        separation_verdict(&self.env, self.ray(a)?, self.ray(b)?, notion, depth)
    }

    pub fn count_ends(&self, notion: Notion, depth: u32) -> Result<EndCountReport> {
        count_ends_at_depth(
            &self.env,
            &self.rays,
            notion,
            depth,
            self.truth.end_counts.get(&notion).copied(),
        )
    }
}

/// Builds a gallery graph.
pub fn make(tag: GalleryTag) -> Result<GalleryGraph> {
    match tag {
        GalleryTag::Ladder => Ok(ladder::build()),
        GalleryTag::StarOfPaths => Ok(star::build()),
        GalleryTag::X1 => Ok(hubs::build_x1()),
        GalleryTag::X2 => Ok(hubs::build_x2()),
        GalleryTag::KnChain(KnVariant::A) => Ok(hubs::build_5a()),
        GalleryTag::KnChain(KnVariant::B) => Ok(hubs::build_5b()),
        GalleryTag::KnChain(KnVariant::C) => Ok(hubs::build_5c()),
        GalleryTag::KnChain(KnVariant::D) => Ok(levels::build()),
        GalleryTag::TreePlus2(b) => tree::build(tag, b, 2),
        GalleryTag::Tree(b) => tree::build(tag, b, 1),
        GalleryTag::FreeGroup { generators, r } => free::build(generators, r),
        GalleryTag::Line => Ok(line::build()),
    }
}

/// The registry entry for `tag`.
pub fn ground_truth(tag: GalleryTag) -> Result<GroundTruth> {
    make(tag).map(|g| g.truth)
}

/// Every primary gallery tag with the parameters used for tests.
pub fn catalog() -> Vec<GalleryTag> {
    vec![
        GalleryTag::Ladder,
        GalleryTag::StarOfPaths,
        GalleryTag::X1,
        GalleryTag::X2,
        GalleryTag::TreePlus2(Branching::Infinite),
        GalleryTag::TreePlus2(Branching::Finite(3)),
        GalleryTag::KnChain(KnVariant::A),
        GalleryTag::KnChain(KnVariant::B),
        GalleryTag::KnChain(KnVariant::C),
        GalleryTag::KnChain(KnVariant::D),
        GalleryTag::FreeGroup {
            generators: Generators::Finite(2),
            r: 1,
        },
        GalleryTag::FreeGroup {
            generators: Generators::Finite(2),
            r: 2,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for tag in catalog().into_iter().chain([GalleryTag::Line, GalleryTag::Tree(Branching::Infinite)]) {
            assert_eq!(tag.to_string().parse::<GalleryTag>().unwrap(), tag);
        }
        assert_eq!(
            "free:r=2".parse::<GalleryTag>().unwrap(),
            GalleryTag::FreeGroup {
                generators: Generators::Finite(2),
                r: 2
            }
        );
        for bad in ["", "ladder:b=2", "treeplus2", "kn-chain:variant=5e", "free:r=x", "moebius"] {
            assert!(bad.parse::<GalleryTag>().is_err(), "{bad}");
        }
    }
}
