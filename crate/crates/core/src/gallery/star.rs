use std::sync::Arc;

use super::{vertex_sequence, GalleryGraph, GalleryTag, GroundTruth, StarBallExample};
use crate::cuts::{Carrier, CutOracle, KindTruth};
use crate::ends::{EndCount, EndOracle};
use crate::graph::{BudgetSchedule, DegreeHint, LazyGraph, VertexId};

/// Paths `P₁, P₂, …` with `Pₙ` of length `n`, joined at their initial
/// vertices into a hub `x`. Tokens are `"x"` and `"p{n}.{i}"` for the `i`-th
/// vertex of `Pₙ`, `1 ≤ i ≤ n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StarOfPaths;

fn hub() -> VertexId {
    VertexId::new("x")
}

fn id(n: u64, i: u64) -> VertexId {
    VertexId::new(format!("p{n}.{i}"))
}

/// `None` for the hub.
fn parse(v: &VertexId) -> Option<Option<(u64, u64)>> {
    if v.as_str() == "x" {
        return Some(None);
    }
    let (n, i) = v.as_str().strip_prefix('p')?.split_once('.')?;
    let (n, i): (u64, u64) = (n.parse().ok()?, i.parse().ok()?);
    (1 <= i && i <= n && id(n, i) == *v).then_some(Some((n, i)))
}

fn dist(a: Option<(u64, u64)>, b: Option<(u64, u64)>) -> u64 {
    match (a, b) {
        (None, None) => 0,
        (None, Some((_, i))) | (Some((_, i)), None) => i,
        (Some((n, i)), Some((m, j))) if n == m => i.abs_diff(j),
        (Some((_, i)), Some((_, j))) => i + j,
    }
}

impl LazyGraph for StarOfPaths {
    fn name(&self) -> String {
        "star-paths".into()
    }

    fn root(&self) -> VertexId {
        hub()
    }

    fn contains(&self, v: &VertexId) -> bool {
        parse(v).is_some()
    }

    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        match parse(v) {
            None => Vec::new(),
            Some(None) => (1..).map(|n| id(n, 1)).take(limit).collect(),
            Some(Some((n, i))) => {
                let prev = if i == 1 { hub() } else { id(n, i - 1) };
                let next = (i < n).then(|| id(n, i + 1));
                std::iter::once(prev).chain(next).take(limit).collect()
            }
        }
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        match (parse(u), parse(v)) {
            (Some(a), Some(b)) => {
                let same_path = match (a, b) {
                    (Some((n, _)), Some((m, _))) => n == m,
                    _ => true,
                };
                same_path && dist(a, b) == 1
            }
            _ => false,
        }
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        match parse(v) {
            Some(None) => DegreeHint::Infinite,
            Some(Some((n, i))) => DegreeHint::Finite(if i < n { 2 } else { 1 }),
            None => DegreeHint::Unknown,
        }
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(dist(parse(u)?, parse(v)?))
    }
}

/// Components of `K(x, r)*` are the path tails `{(n, i): i > r}`, finite
/// with a one-vertex boundary.
#[derive(Debug, Default)]
pub struct StarOracle;

impl StarOracle {
    fn tail_path(&self, carrier: &Carrier) -> Option<(u64, u32)> {
        match carrier {
            Carrier::BallComplementComponent {
                center,
                radius,
                fingerprint,
            } if *center == hub() => {
                let (n, i) = parse(fingerprint)??;
                (i > u64::from(*radius)).then_some((n, *radius))
            }
            _ => None,
        }
    }
}

impl CutOracle for StarOracle {
    fn certify(&self, carrier: &Carrier) -> Option<KindTruth> {
        self.tail_path(carrier).map(|_| KindTruth {
            vertex: true,
            edge: true,
            metric: true,
        })
    }

    fn contains(&self, carrier: &Carrier, v: &VertexId) -> Option<bool> {
        let (n, r) = self.tail_path(carrier)?;
        Some(matches!(parse(v)?, Some((m, i)) if m == n && i > u64::from(r)))
    }
}

impl EndOracle for StarOracle {
    fn tag(&self) -> String {
        "oracle:star-paths".into()
    }

    fn ball_component_key(&self, radius: u32, v: &VertexId) -> Option<String> {
        let (n, i) = parse(v)??;
        (i > u64::from(radius)).then(|| format!("p{n}"))
    }
}

pub(super) fn build() -> GalleryGraph {
    let mut truth = GroundTruth::new([Some(EndCount::Finite(0)); 3], 8);
    truth.star_ball_examples = (1..=4)
        .map(|radius| StarBallExample { center: hub(), radius })
        .collect();
    let sequences = vec![
        vertex_sequence("endpoints", "StarEnd", |i| id(i + 1, i + 1)),
        vertex_sequence("constant", "VertexLimit", |_| hub()),
    ];
    GalleryGraph::assemble(
        GalleryTag::StarOfPaths,
        Arc::new(StarOfPaths),
        Arc::new(StarOracle),
        truth,
        Vec::new(),
        sequences,
        BudgetSchedule::default(),
        64,
    )
}
