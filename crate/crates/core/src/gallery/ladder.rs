use std::collections::BTreeSet;
use std::sync::Arc;

use super::{vertex_sequence, ExpectedOutcome, GalleryGraph, GalleryTag, GroundTruth};
use crate::cuts::{Carrier, CutOracle, KindTruth, Region};
use crate::ends::{EndCount, EndOracle, Notion, Ray};
use crate::graph::{BudgetSchedule, DegreeHint, LazyGraph, VertexId};

/// The two-sided infinite ladder: rails `(n, t)` and `(n, b)` for `n ∈ ℤ`
/// with a rung at every `n`. Tokens are `"{n}t"` and `"{n}b"`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ladder;

pub(crate) fn id(n: i64, top: bool) -> VertexId {
    VertexId::new(format!("{n}{}", if top { 't' } else { 'b' }))
}

pub(crate) fn parse(v: &VertexId) -> Option<(i64, bool)> {
    let s = v.as_str();
    let top = match s.as_bytes().last()? {
        b't' => true,
        b'b' => false,
        _ => return None,
    };
    let n: i64 = s[..s.len() - 1].parse().ok()?;
    (id(n, top) == *v).then_some((n, top))
}

fn dist((n, s): (i64, bool), (m, t): (i64, bool)) -> u64 {
    n.abs_diff(m) + u64::from(s != t)
}

impl LazyGraph for Ladder {
    fn name(&self) -> String {
        "ladder".into()
    }

    fn root(&self) -> VertexId {
        id(0, true)
    }

    fn contains(&self, v: &VertexId) -> bool {
        parse(v).is_some()
    }

    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        let Some((n, s)) = parse(v) else { return Vec::new() };
        [id(n - 1, s), id(n + 1, s), id(n, !s)]
            .into_iter()
            .take(limit)
            .collect()
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        matches!((parse(u), parse(v)), (Some(a), Some(b)) if dist(a, b) == 1)
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        if self.contains(v) {
            DegreeHint::Finite(3)
        } else {
            DegreeHint::Unknown
        }
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(dist(parse(u)?, parse(v)?))
    }
}

/// `{(n,t): n ≥ top} ∪ {(n,b): n ≥ bottom}` (or `≤` for the left side) with
/// `|top − bottom| ≤ 1`, so that `θ` is one vertex per rail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderSide {
    pub right: bool,
    pub top: i64,
    pub bottom: i64,
}

impl LadderSide {
    pub fn new(right: bool, top: i64, bottom: i64) -> Option<Self> {
        (top.abs_diff(bottom) <= 1).then_some(LadderSide { right, top, bottom })
    }

    pub fn carrier(self) -> Carrier {
        Carrier::Shape(Arc::new(self))
    }

    fn theta(&self) -> [(i64, bool); 2] {
        let step = if self.right { -1 } else { 1 };
        [(self.top + step, true), (self.bottom + step, false)]
    }
}

impl Region for LadderSide {
    fn label(&self) -> String {
        let op = if self.right { ">=" } else { "<=" };
        format!("ladder:{}(t{op}{},b{op}{})", if self.right { "right" } else { "left" }, self.top, self.bottom)
    }

    fn contains(&self, v: &VertexId) -> bool {
        let Some((n, top)) = parse(v) else { return false };
        let bound = if top { self.top } else { self.bottom };
        if self.right {
            n >= bound
        } else {
            n <= bound
        }
    }

    fn boundary_radius(&self) -> Option<u32> {
        self.theta()
            .into_iter()
            .map(|p| dist((0, true), p))
            .max()
            .and_then(|d| u32::try_from(d).ok())
    }
}

/// Column cuts and ball cuts of the ladder.
#[derive(Debug, Default)]
pub struct LadderOracle;

impl LadderOracle {
    /// The exact side, if `carrier` is one of the ladder's recognized sets.
    fn side(&self, carrier: &Carrier) -> Option<LadderSide> {
        match carrier {
            Carrier::Shape(_) => carrier.shape::<LadderSide>().copied(),
            Carrier::BallComplementComponent {
                center,
                radius,
                fingerprint,
            } if *center == id(0, true) && *radius >= 1 => {
                let (n, _) = parse(fingerprint)?;
                let r = i64::from(*radius);
                // K((0,t), r) covers |n| ≤ r on top and |n| ≤ r − 1 below.
                Some(if n > 0 {
                    LadderSide::new(true, r + 1, r)?
                } else {
                    LadderSide::new(false, -r - 1, -r)?
                })
            }
            Carrier::SeparatorSide {
                vertices,
                edges,
                anchor,
            } => {
                let (a, a_top) = parse(anchor)?;
                let (k, m) = if edges.is_empty() {
                    // Vertex separator: one vertex on each rail.
                    let ps: Vec<(i64, bool)> = vertices.iter().map(parse).collect::<Option<_>>()?;
                    let t = ps.iter().find(|p| p.1)?.0;
                    let b = ps.iter().find(|p| !p.1)?.0;
                    if ps.len() != 2 || t.abs_diff(b) > 1 {
                        return None;
                    }
                    let right = if a_top { a > t } else { a > b };
                    return if right {
                        LadderSide::new(true, t + 1, b + 1)
                    } else {
                        LadderSide::new(false, t - 1, b - 1)
                    };
                } else if vertices.is_empty() && edges.len() == 2 {
                    // Edge separator: one rail edge on each rail at the same column.
                    let mut cols = BTreeSet::new();
                    for (u, v) in edges {
                        let (p, q) = (parse(u)?, parse(v)?);
                        if p.1 != q.1 || p.0.abs_diff(q.0) != 1 {
                            return None;
                        }
                        cols.insert((p.1, p.0.min(q.0)));
                    }
                    let t = cols.iter().find(|c| c.0)?.1;
                    let b = cols.iter().find(|c| !c.0)?.1;
                    (t, b)
                } else {
                    return None;
                };
                if k != m {
                    return None;
                }
                if a > k {
                    LadderSide::new(true, k + 1, k + 1)
                } else {
                    LadderSide::new(false, k, k)
                }
            }
            _ => None,
        }
    }
}

impl CutOracle for LadderOracle {
    fn certify(&self, carrier: &Carrier) -> Option<KindTruth> {
        self.side(carrier).map(|_| KindTruth {
            vertex: true,
            edge: true,
            metric: true,
        })
    }

    fn contains(&self, carrier: &Carrier, v: &VertexId) -> Option<bool> {
        self.side(carrier).map(|s| s.contains(v))
    }

    fn resolve(&self, carrier: &Carrier) -> Option<Carrier> {
        self.side(carrier).map(LadderSide::carrier)
    }
}

fn direction(ray: &str) -> Option<bool> {
    match ray {
        "right-top" | "right-bottom" => Some(true),
        "left-top" | "left-bottom" => Some(false),
        _ => None,
    }
}

impl EndOracle for LadderOracle {
    fn tag(&self) -> String {
        "oracle:ladder".into()
    }

    fn equivalent(&self, a: &str, b: &str, _notion: Notion) -> Option<bool> {
        Some(direction(a)? == direction(b)?)
    }

    fn canonical_cuts(&self, depth: u32) -> Vec<Carrier> {
        let mut out = Vec::new();
        for k in 0..=i64::from(depth.max(1)) {
            out.extend(LadderSide::new(true, k + 1, k + 1).map(LadderSide::carrier));
            out.extend(LadderSide::new(false, -k, -k).map(LadderSide::carrier));
        }
        out
    }

    fn ball_component_key(&self, radius: u32, v: &VertexId) -> Option<String> {
        let p = parse(v)?;
        if dist((0, true), p) <= u64::from(radius) {
            return None;
        }
        Some(match (radius, p.0) {
            (0, _) => "all".into(),
            (_, n) if n > 0 => "right".into(),
            _ => "left".into(),
        })
    }
}

pub(super) fn build() -> GalleryGraph {
    let rays = vec![
        Ray::new("right-top", |i| id(i as i64, true)).with_escape(|k| u64::from(k) + 1),
        Ray::new("right-bottom", |i| id(i as i64, false)).with_escape(u64::from),
        Ray::new("left-top", |i| id(-(i as i64), true)).with_escape(|k| u64::from(k) + 1),
        Ray::new("left-bottom", |i| id(-(i as i64), false)).with_escape(u64::from),
    ];
    let all = Notion::ALL;
    let truth = GroundTruth::new([Some(EndCount::Finite(2)); 3], 8)
        .expect("right-top", "left-top", &all, ExpectedOutcome::Separated)
        .expect("left-bottom", "right-bottom", &all, ExpectedOutcome::Separated)
        .expect("right-top", "right-bottom", &all, ExpectedOutcome::Equivalent)
        .expect("left-top", "left-bottom", &all, ExpectedOutcome::Equivalent);
    let sequences = vec![
        vertex_sequence("rail", "ProperMetricEnd", |i| id(i as i64, true)),
        vertex_sequence("constant", "VertexLimit", |_| id(0, true)),
    ];
    GalleryGraph::assemble(
        GalleryTag::Ladder,
        Arc::new(Ladder),
        Arc::new(LadderOracle),
        truth,
        rays,
        sequences,
        BudgetSchedule::Unlimited,
        64,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_are_canonical() {
        assert_eq!(parse(&VertexId::new("-3b")), Some((-3, false)));
        assert_eq!(parse(&VertexId::new("+3b")), None);
        assert_eq!(parse(&VertexId::new("03t")), None);
        assert_eq!(parse(&VertexId::new("3x")), None);
    }

    #[test]
    fn side_boundary_radius() {
        assert_eq!(LadderSide::new(true, 1, 1).unwrap().boundary_radius(), Some(1));
        assert_eq!(LadderSide::new(false, 0, 0).unwrap().boundary_radius(), Some(2));
        assert!(LadderSide::new(true, 1, 3).is_none());
    }
}
