use std::sync::Arc;

use super::{ExpectedOutcome, GalleryGraph, GalleryTag, GroundTruth};
use crate::cuts::{Carrier, CutOracle, KindTruth, Region};
use crate::ends::{EndCount, EndOracle, Notion, Ray};
use crate::graph::{BudgetSchedule, DegreeHint, LazyGraph, VertexId};

/// The integers with `n ~ n + 1`. Tokens are the decimal integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegerLine;

pub(crate) fn id(n: i64) -> VertexId {
    VertexId::new(n.to_string())
}

pub(crate) fn parse(v: &VertexId) -> Option<i64> {
    let n: i64 = v.as_str().parse().ok()?;
    (id(n) == *v).then_some(n)
}

impl LazyGraph for IntegerLine {
    fn name(&self) -> String {
        "line".into()
    }

    fn root(&self) -> VertexId {
        id(0)
    }

    fn contains(&self, v: &VertexId) -> bool {
        parse(v).is_some()
    }

    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        let Some(n) = parse(v) else { return Vec::new() };
        [id(n - 1), id(n + 1)].into_iter().take(limit).collect()
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        matches!((parse(u), parse(v)), (Some(a), Some(b)) if a.abs_diff(b) == 1)
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        if self.contains(v) {
            DegreeHint::Finite(2)
        } else {
            DegreeHint::Unknown
        }
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(parse(u)?.abs_diff(parse(v)?))
    }
}

/// `{n ≥ from}` or `{n ≤ from}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfLine {
    pub right: bool,
    pub from: i64,
}

impl HalfLine {
    pub fn carrier(self) -> Carrier {
        Carrier::Shape(Arc::new(self))
    }
}

impl Region for HalfLine {
    fn label(&self) -> String {
        format!("line:n{}{}", if self.right { ">=" } else { "<=" }, self.from)
    }

    fn contains(&self, v: &VertexId) -> bool {
        parse(v).is_some_and(|n| if self.right { n >= self.from } else { n <= self.from })
    }

    fn boundary_radius(&self) -> Option<u32> {
        let b = if self.right { self.from - 1 } else { self.from + 1 };
        u32::try_from(b.unsigned_abs()).ok()
    }
}

#[derive(Debug, Default)]
pub struct LineOracle;

impl LineOracle {
    fn half(&self, carrier: &Carrier) -> Option<HalfLine> {
        match carrier {
            Carrier::Shape(_) => carrier.shape::<HalfLine>().copied(),
            Carrier::BallComplementComponent {
                center,
                radius,
                fingerprint,
            } if *center == id(0) => {
                let n = parse(fingerprint)?;
                let r = i64::from(*radius);
                Some(if n > 0 {
                    HalfLine { right: true, from: r + 1 }
                } else {
                    HalfLine { right: false, from: -r - 1 }
                })
            }
            _ => None,
        }
    }
}

impl CutOracle for LineOracle {
    fn certify(&self, carrier: &Carrier) -> Option<KindTruth> {
        self.half(carrier).map(|_| KindTruth {
            vertex: true,
            edge: true,
            metric: true,
        })
    }

    fn contains(&self, carrier: &Carrier, v: &VertexId) -> Option<bool> {
        self.half(carrier).map(|h| h.contains(v))
    }

    fn resolve(&self, carrier: &Carrier) -> Option<Carrier> {
        self.half(carrier).map(HalfLine::carrier)
    }
}

impl EndOracle for LineOracle {
    fn tag(&self) -> String {
        "oracle:line".into()
    }

    fn equivalent(&self, a: &str, b: &str, _notion: Notion) -> Option<bool> {
        let side = |r: &str| match r {
            "right" => Some(true),
            "left" => Some(false),
            _ => None,
        };
        Some(side(a)? == side(b)?)
    }

    fn canonical_cuts(&self, _depth: u32) -> Vec<Carrier> {
        vec![
            HalfLine { right: true, from: 1 }.carrier(),
            HalfLine { right: false, from: 0 }.carrier(),
        ]
    }

    fn ball_component_key(&self, radius: u32, v: &VertexId) -> Option<String> {
        let n = parse(v)?;
        (n.unsigned_abs() > u64::from(radius)).then(|| if n > 0 { "right" } else { "left" }.into())
    }
}

pub(super) fn build() -> GalleryGraph {
    let rays = vec![
        Ray::new("right", |i| id(i as i64)).with_escape(|k| u64::from(k) + 1),
        Ray::new("left", |i| id(-(i as i64))).with_escape(|k| u64::from(k) + 1),
    ];
    let truth = GroundTruth::new([Some(EndCount::Finite(2)); 3], 4).expect(
        "right",
        "left",
        &Notion::ALL,
        ExpectedOutcome::Separated,
    );
    GalleryGraph::assemble(
        GalleryTag::Line,
        Arc::new(IntegerLine),
        Arc::new(LineOracle),
        truth,
        rays,
        Vec::new(),
        BudgetSchedule::Unlimited,
        64,
    )
}
