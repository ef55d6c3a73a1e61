use std::sync::Arc;

use super::{vertex_sequence, ExpectedOutcome, GalleryGraph, GalleryTag, GroundTruth, KnVariant};
use crate::cuts::{Carrier, CutOracle, KindTruth, Region};
use crate::ends::{EndCount, EndOracle, Notion, Ray};
use crate::graph::{BudgetSchedule, DegreeHint, LazyGraph, VertexId};

/// Copies `K_ℕ⁽ˡ⁾`, `l ∈ ℤ`, with every vertex of level `l` joined to every
/// vertex of level `l + 1`. Tokens are `"k{l}.{i}"`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LevelChain;

fn id(l: i64, i: u64) -> VertexId {
    VertexId::new(format!("k{l}.{i}"))
}

fn parse(v: &VertexId) -> Option<(i64, u64)> {
    let (l, i) = v.as_str().strip_prefix('k')?.split_once('.')?;
    let p = (l.parse().ok()?, i.parse().ok()?);
    (id(p.0, p.1) == *v).then_some(p)
}

fn dist((l, i): (i64, u64), (m, j): (i64, u64)) -> u64 {
    if l == m {
        u64::from(i != j)
    } else {
        l.abs_diff(m)
    }
}

impl LazyGraph for LevelChain {
    fn name(&self) -> String {
        "kn-5d".into()
    }

    fn root(&self) -> VertexId {
        id(0, 0)
    }

    fn contains(&self, v: &VertexId) -> bool {
        parse(v).is_some()
    }

    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        let Some((l, i)) = parse(v) else { return Vec::new() };
        let mut out = Vec::new();
        for n in 0.. {
            for cand in [(l, n), (l + 1, n), (l - 1, n)] {
                if out.len() >= limit {
                    return out;
                }
                if cand != (l, i) {
                    out.push(id(cand.0, cand.1));
                }
            }
        }
        out
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        matches!((parse(u), parse(v)), (Some(a), Some(b)) if dist(a, b) == 1)
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        if self.contains(v) {
            DegreeHint::Infinite
        } else {
            DegreeHint::Unknown
        }
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(dist(parse(u)?, parse(v)?))
    }
}

/// All levels `≥ from` (`up`) or `≤ from`. Its boundary is a whole level:
/// infinite, of diameter one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelHalf {
    pub up: bool,
    pub from: i64,
}

impl LevelHalf {
    pub fn carrier(self) -> Carrier {
        Carrier::Shape(Arc::new(self))
    }
}

impl Region for LevelHalf {
    fn label(&self) -> String {
        format!("kn-5d:levels{}{}", if self.up { ">=" } else { "<=" }, self.from)
    }

    fn contains(&self, v: &VertexId) -> bool {
        parse(v).is_some_and(|(l, _)| if self.up { l >= self.from } else { l <= self.from })
    }

    fn boundary_radius(&self) -> Option<u32> {
        let level = if self.up { self.from - 1 } else { self.from + 1 };
        // Level 0 minus the root is at distance one.
        u32::try_from(level.unsigned_abs().max(1)).ok()
    }
}

#[derive(Debug, Default)]
pub struct LevelOracle;

impl LevelOracle {
    fn half(&self, carrier: &Carrier) -> Option<LevelHalf> {
        match carrier {
            Carrier::Shape(_) => carrier.shape::<LevelHalf>().copied(),
            Carrier::BallComplementComponent {
                center,
                radius,
                fingerprint,
            } if *center == id(0, 0) && *radius >= 1 => {
                let (l, _) = parse(fingerprint)?;
                let r = i64::from(*radius);
                Some(if l > 0 {
                    LevelHalf { up: true, from: r + 1 }
                } else {
                    LevelHalf { up: false, from: -r - 1 }
                })
            }
            _ => None,
        }
    }

    /// `K(root, 0)*`: everything but the root.
    fn punctured(&self, carrier: &Carrier) -> bool {
        matches!(carrier, Carrier::BallComplementComponent { center, radius: 0, .. } if *center == id(0, 0))
    }
}

impl CutOracle for LevelOracle {
    fn certify(&self, carrier: &Carrier) -> Option<KindTruth> {
        if self.punctured(carrier) {
            return Some(KindTruth {
                vertex: true,
                edge: false,
                metric: true,
            });
        }
        self.half(carrier).map(|_| KindTruth {
            vertex: false,
            edge: false,
            metric: true,
        })
    }

    fn contains(&self, carrier: &Carrier, v: &VertexId) -> Option<bool> {
        if self.punctured(carrier) {
            return Some(parse(v).is_some() && *v != id(0, 0));
        }
        self.half(carrier).map(|h| h.contains(v))
    }

    fn resolve(&self, carrier: &Carrier) -> Option<Carrier> {
        self.half(carrier).map(LevelHalf::carrier)
    }
}

fn direction(ray: &str) -> Option<bool> {
    match ray {
        "up" | "up-diagonal" => Some(true),
        "down" => Some(false),
        _ => None,
    }
}

impl EndOracle for LevelOracle {
    fn tag(&self) -> String {
        "oracle:kn-5d".into()
    }

    fn equivalent(&self, a: &str, b: &str, notion: Notion) -> Option<bool> {
        let (da, db) = (direction(a)?, direction(b)?);
        // A finite boundary misses cofinitely many vertices of every level,
        // so vertex- and edge-cuts never split the chain.
        Some(notion != Notion::MetricEnd || da == db)
    }

    fn canonical_cuts(&self, depth: u32) -> Vec<Carrier> {
        let mut out = Vec::new();
        for k in 0..=i64::from(depth.max(1)) {
            out.push(LevelHalf { up: false, from: -k }.carrier());
            out.push(LevelHalf { up: true, from: k + 1 }.carrier());
        }
        out
    }

    fn ball_component_key(&self, radius: u32, v: &VertexId) -> Option<String> {
        let p = parse(v)?;
        if dist((0, 0), p) <= u64::from(radius) {
            return None;
        }
        Some(match (radius, p.0) {
            (0, _) => "punctured".into(),
            (_, l) if l > 0 => "up".into(),
            _ => "down".into(),
        })
    }
}

pub(super) fn build() -> GalleryGraph {
    let rays = vec![
        Ray::new("up", |i| id(i as i64, 0)).with_escape(|k| u64::from(k) + 1),
        Ray::new("down", |i| id(-(i as i64), 0)).with_escape(|k| u64::from(k) + 1),
        Ray::new("up-diagonal", |i| id(i as i64, i)).with_escape(|k| u64::from(k) + 1),
    ];
    let truth = GroundTruth::new(
        [
            Some(EndCount::Finite(1)),
            Some(EndCount::Finite(1)),
            Some(EndCount::Finite(2)),
        ],
        8,
    )
    .expect("up", "down", &[Notion::MetricEnd], ExpectedOutcome::Separated)
    .expect("up", "down", &[Notion::VertexEnd, Notion::EdgeEnd], ExpectedOutcome::Equivalent)
    .expect("up", "up-diagonal", &Notion::ALL, ExpectedOutcome::Equivalent);
    let sequences = vec![
        vertex_sequence("level-zero", "LocalEnd", |i| id(0, i)),
        vertex_sequence("up", "ProperMetricEnd", |i| id(i as i64, 0)),
    ];
    GalleryGraph::assemble(
        GalleryTag::KnChain(KnVariant::D),
        Arc::new(LevelChain),
        Arc::new(LevelOracle),
        truth,
        rays,
        sequences,
        BudgetSchedule::default(),
        32,
    )
}
