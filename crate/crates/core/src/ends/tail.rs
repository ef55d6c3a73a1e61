use serde::Serialize;

use super::{EndOracle, Ray};
use crate::cuts::{membership, Carrier};
use crate::error::Result;
use crate::graph::{LazyGraph, VertexId, Window};

/// Certified position of a ray's tail relative to a carrier `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailSide {
    /// Every index from `from` on lies in `e`.
    Inside { from: u64 },
    /// Every index from `from` on lies in `e*`.
    Outside { from: u64 },
}

impl TailSide {
    pub fn is_inside(&self) -> bool {
        matches!(self, TailSide::Inside { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TailVerdict {
    /// `certified` is false when only the inspected prefix supports the answer.
    Yes { from: u64, certified: bool },
    No { certified: bool },
    UnknownAtDepth(u32),
}

/// Membership that holds globally, not just in a window.
pub(crate) fn exact_member(carrier: &Carrier, v: &VertexId, oracle: Option<&dyn EndOracle>) -> Option<bool> {
    match carrier {
        Carrier::ExplicitFinite(s) => Some(s.contains(v)),
        Carrier::ComplementOfFinite(s) => Some(!s.contains(v)),
        Carrier::Shape(region) => Some(region.contains(v)),
        _ => oracle.and_then(|o| o.contains(carrier, v)),
    }
}

/// A radius `k` with `θe ⊆ K(root, k)`.
fn boundary_radius(graph: &dyn LazyGraph, carrier: &Carrier) -> Option<u32> {
    let root = graph.root();
    let dist = |v: &VertexId| graph.exact_metric(&root, v);
    match carrier {
        Carrier::BallComplementComponent { center, radius, .. } => {
            Some(radius + u32::try_from(dist(center)?).ok()?)
        }
        Carrier::Shape(region) => region.boundary_radius(),
        Carrier::SeparatorSide { vertices, edges, .. } => {
            let mut k = 0;
            for v in vertices.iter().chain(edges.iter().flat_map(|(a, b)| [a, b])) {
                k = k.max(dist(v)?);
            }
            u32::try_from(k).ok()
        }
        Carrier::ExplicitFinite(_) | Carrier::ComplementOfFinite(_) => None,
    }
}

/// Walks back from a certified index while membership stays the same.
fn extend_back(ray: &Ray, from: u64, inside: bool, member: impl Fn(&VertexId) -> Option<bool>) -> u64 {
    let mut n = from;
    while n > 0 {
        match ray.at(n - 1).and_then(|v| member(&v)) {
            Some(m) if m == inside => n -= 1,
            _ => break,
        }
    }
    n
}

/// The certified side of `carrier` holding the ray's tail, if a finite
/// argument settles it.
///
/// A ray is injective, so it leaves every finite set and eventually stays in
/// every cofinite one. A metric ray past `escape(k)` avoids `K(root, k)`; if
/// `θe` lies in that ball the tail cannot cross between `e` and `e*`, so one
/// vertex decides the side.
pub fn tail_side(
    graph: &dyn LazyGraph,
    ray: &Ray,
    carrier: &Carrier,
    oracle: Option<&dyn EndOracle>,
) -> Option<TailSide> {
    if let Some(side) = oracle.and_then(|o| o.tail_side(ray.name(), carrier)) {
        return Some(side);
    }
    let last_hit = |s: &std::collections::BTreeSet<VertexId>| {
        (0..ray.verified_prefix())
            .filter(|&i| ray.at(i).is_some_and(|v| s.contains(&v)))
            .max()
            .map_or(0, |i| i + 1)
    };
    match carrier {
        Carrier::ExplicitFinite(s) => return Some(TailSide::Outside { from: last_hit(s) }),
        Carrier::ComplementOfFinite(s) => return Some(TailSide::Inside { from: last_hit(s) }),
        _ => {}
    }
    let k = boundary_radius(graph, carrier)?;
    let n = ray.escape_index(k)?;
    let member = |v: &VertexId| exact_member(carrier, v, oracle);
    let inside = member(&ray.at(n)?)?;
    let from = extend_back(ray, n, inside, member);
    Some(if inside {
        TailSide::Inside { from }
    } else {
        TailSide::Outside { from }
    })
}

/// Whether all but finitely many ray vertices lie in `carrier`.
///
/// Certified answers come from [`tail_side`]. Otherwise the inspected prefix
/// is read through the window: a second half entirely on one side gives an
/// uncertified answer.
pub fn tail_in(
    ray: &Ray,
    carrier: &Carrier,
    window: &Window,
    oracle: Option<&dyn EndOracle>,
) -> Result<TailVerdict> {
    let graph = window.graph().as_ref();
    let ray = ray.verified(graph, u64::from(window.radius()) + 1)?;
    if let Some(side) = tail_side(graph, &ray, carrier, oracle) {
        return Ok(match side {
            TailSide::Inside { from } => TailVerdict::Yes {
                from,
                certified: true,
            },
            TailSide::Outside { .. } => TailVerdict::No { certified: true },
        });
    }
    let mask = membership(window, carrier).ok();
    let mut seen = Vec::new();
    for i in 0..ray.verified_prefix() {
        let Some(v) = ray.at(i) else { break };
        let m = exact_member(carrier, &v, oracle).or_else(|| {
            let idx = window.index_of(&v)?;
            mask.as_ref().map(|m| m.mask[idx])
        });
        match m {
            Some(b) => seen.push(b),
            None => break,
        }
    }
    let depth = window.radius();
    if seen.len() < 2 {
        return Ok(TailVerdict::UnknownAtDepth(depth));
    }
    let half = &seen[seen.len() / 2..];
    Ok(if half.iter().all(|&b| b) {
        let from = seen.iter().rposition(|&b| !b).map_or(0, |i| i + 1) as u64;
        TailVerdict::Yes {
            from,
            certified: false,
        }
    } else if half.iter().all(|&b| !b) {
        TailVerdict::No { certified: false }
    } else {
        TailVerdict::UnknownAtDepth(depth)
    })
}
