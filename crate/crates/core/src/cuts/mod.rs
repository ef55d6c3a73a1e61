//! Boundaries of vertex sets and their classification as vertex-, edge- and
//! metric cuts.
//!
//! For a vertex set `e` with complement `e*`:
//!
//! * the vertex-boundary `θe` is the set of vertices of `e*` adjacent to `e`,
//! * the inner vertex-boundary `Iθe` is `θ(e*)`,
//! * the edge-boundary `δe` is the set of edges between `e` and `e*`.
//!
//! `e` is a vertex-cut, edge-cut or metric cut when `θe` is finite, `δe` is
//! finite, or `θe` has finite diameter. A window only sees part of these sets,
//! so each kind is reported as certified yes, certified no, or unknown at the
//! window's depth.

mod mincut;
mod star;

use std::any::Any;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{DegreeHint, DiameterEstimate, Openness, UnionFind, VertexId, Window};

pub use mincut::{min_edge_cut, min_vertex_cut};
pub use star::{
    infinite_diameter_witness, star_ball_score, DiameterWitness, StarReport, StarVerdict,
};

/// A vertex set with exact, closed-form membership.
pub trait Region: Any + Send + Sync + fmt::Debug {
    fn label(&self) -> String;

    fn contains(&self, v: &VertexId) -> bool;

    /// A radius `k` with `θe ⊆ K(root, k)`, when one is known.
    fn boundary_radius(&self) -> Option<u32> {
        None
    }
}

/// How a candidate set `e` is described.
#[derive(Clone, Debug)]
pub enum Carrier {
    ExplicitFinite(BTreeSet<VertexId>),
    ComplementOfFinite(BTreeSet<VertexId>),
    /// The component of `K(center, radius)*` whose window fingerprint is
    /// `fingerprint`.
    BallComplementComponent {
        center: VertexId,
        radius: u32,
        fingerprint: VertexId,
    },
    Shape(Arc<dyn Region>),
    /// The component containing `anchor` once finitely many vertices and edges
    /// are removed from the graph.
    SeparatorSide {
        vertices: BTreeSet<VertexId>,
        edges: BTreeSet<(VertexId, VertexId)>,
        anchor: VertexId,
    },
}

impl Carrier {
    /// The region behind a `Shape` carrier, if it has type `T`.
    pub fn shape<T: Region>(&self) -> Option<&T> {
        match self {
            Carrier::Shape(r) => (r.as_ref() as &dyn Any).downcast_ref(),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        fn list<'a>(it: impl Iterator<Item = &'a VertexId>) -> String {
            it.map(VertexId::as_str).collect::<Vec<_>>().join(",")
        }
        match self {
            Carrier::ExplicitFinite(s) => format!("{{{}}}", list(s.iter())),
            Carrier::ComplementOfFinite(s) => format!("V\\{{{}}}", list(s.iter())),
            Carrier::BallComplementComponent {
                center,
                radius,
                fingerprint,
            } => format!("component[{fingerprint}] of K({center},{radius})*"),
            Carrier::Shape(r) => r.label(),
            Carrier::SeparatorSide {
                vertices,
                edges,
                anchor,
            } => {
                let edges = edges
                    .iter()
                    .map(|(a, b)| format!("{a}-{b}"))
                    .collect::<Vec<_>>()
                    .join(",");
                format!(
                    "side of {anchor} after removing {{{}}} and edges {{{edges}}}",
                    list(vertices.iter())
                )
            }
        }
    }
}

impl Serialize for Carrier {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        let kind = match self {
            Carrier::ExplicitFinite(_) => "explicit_finite",
            Carrier::ComplementOfFinite(_) => "complement_of_finite",
            Carrier::BallComplementComponent { .. } => "ball_complement_component",
            Carrier::Shape(_) => "shape",
            Carrier::SeparatorSide { .. } => "separator_side",
        };
        map.serialize_entry("kind", kind)?;
        map.serialize_entry("set", &self.describe())?;
        map.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CutKind {
    Vertex,
    Edge,
    Metric,
}

impl CutKind {
    pub const ALL: [CutKind; 3] = [CutKind::Vertex, CutKind::Edge, CutKind::Metric];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KindStatus {
    YesCertified,
    NoCertified,
    UnknownAtDepth(u32),
}

impl KindStatus {
    pub fn is_yes(&self) -> bool {
        *self == KindStatus::YesCertified
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, KindStatus::UnknownAtDepth(_))
    }

    fn from_bool(b: bool) -> Self {
        if b {
            KindStatus::YesCertified
        } else {
            KindStatus::NoCertified
        }
    }
}

/// Ground truth about a carrier supplied by an oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KindTruth {
    pub vertex: bool,
    pub edge: bool,
    pub metric: bool,
}

/// Closed-form knowledge about cuts of one particular graph.
pub trait CutOracle: Send + Sync {
    /// The exact cut kinds of `carrier`, if the oracle recognizes it.
    fn certify(&self, carrier: &Carrier) -> Option<KindTruth>;

    /// Exact membership of `v` in `carrier`, if known.
    fn contains(&self, carrier: &Carrier, v: &VertexId) -> Option<bool>;

    /// An exact shape equal to a window-derived carrier, if recognized.
    fn resolve(&self, _carrier: &Carrier) -> Option<Carrier> {
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Boundaries {
    pub theta: BTreeSet<VertexId>,
    pub inner_theta: BTreeSet<VertexId>,
    /// Pairs `(inside, outside)`.
    pub delta: BTreeSet<(VertexId, VertexId)>,
    /// True when unexplored adjacency could still add boundary edges.
    pub delta_growing: bool,
}

impl Boundaries {
    /// Whether the window boundaries are the true boundaries.
    pub fn is_complete(&self) -> bool {
        !self.delta_growing
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CutCandidate {
    pub carrier: Carrier,
    pub theta: BTreeSet<VertexId>,
    pub inner_theta: BTreeSet<VertexId>,
    pub delta: BTreeSet<(VertexId, VertexId)>,
    pub delta_growing: bool,
    pub theta_diameter: DiameterEstimate,
    pub kinds: BTreeMap<CutKind, KindStatus>,
    pub depth: u32,
}

impl CutCandidate {
    pub fn kind(&self, kind: CutKind) -> KindStatus {
        self.kinds[&kind]
    }
}

/// Window membership mask of a carrier, and whether the carrier (or its
/// complement) is known to lie entirely inside the window.
pub(crate) struct Membership {
    pub mask: Vec<bool>,
    pub finite_inside: bool,
    pub cofinite_inside: bool,
}

pub(crate) fn membership(window: &Window, carrier: &Carrier) -> Result<Membership> {
    let n = window.len();
    match carrier {
        Carrier::ExplicitFinite(s) => {
            let mut mask = vec![false; n];
            for v in s {
                mask[window.require(v)?] = true;
            }
            Ok(Membership {
                mask,
                finite_inside: true,
                cofinite_inside: false,
            })
        }
        Carrier::ComplementOfFinite(s) => {
            let mut mask = vec![true; n];
            for v in s {
                mask[window.require(v)?] = false;
            }
            Ok(Membership {
                mask,
                finite_inside: false,
                cofinite_inside: true,
            })
        }
        Carrier::BallComplementComponent {
            center,
            radius,
            fingerprint,
        } => {
            let c = window.require(center)?;
            let labeling = window.ball_complement(c, *radius);
            let comp = labeling
                .by_fingerprint(fingerprint)
                .ok_or_else(|| Error::NotExplored(fingerprint.clone()))?;
            let mut mask = vec![false; n];
            for &m in &comp.members {
                mask[m] = true;
            }
            Ok(Membership {
                mask,
                finite_inside: comp.openness == Openness::Closed,
                cofinite_inside: false,
            })
        }
        Carrier::Shape(region) => Ok(Membership {
            mask: window.ids().iter().map(|v| region.contains(v)).collect(),
            finite_inside: false,
            cofinite_inside: false,
        }),
        Carrier::SeparatorSide {
            vertices,
            edges,
            anchor,
        } => {
            let a = window.require(anchor)?;
            let mut removed = vec![false; n];
            for v in vertices {
                removed[window.require(v)?] = true;
            }
            let mut cut_edges = BTreeSet::new();
            for (u, v) in edges {
                let (i, j) = (window.require(u)?, window.require(v)?);
                cut_edges.insert((i.min(j), i.max(j)));
            }
            let mut uf = UnionFind::new(n);
            for i in 0..n {
                if removed[i] {
                    continue;
                }
                for &j in window.neighbors(i) {
                    if !removed[j] && !cut_edges.contains(&(i.min(j), i.max(j))) {
                        uf.union(i, j);
                    }
                }
            }
            let root = uf.find(a);
            let mask: Vec<bool> = (0..n).map(|i| !removed[i] && uf.find(i) == root).collect();
            let finite_inside = !removed[a]
                && (0..n).filter(|&i| mask[i]).all(|i| !window.is_frontier(i));
            Ok(Membership {
                mask,
                finite_inside,
                cofinite_inside: false,
            })
        }
    }
}

/// `θe`, `Iθe` and `δe` restricted to the explored adjacency.
pub fn boundaries(window: &Window, carrier: &Carrier) -> Result<Boundaries> {
    let m = membership(window, carrier)?;
    Ok(boundaries_of_mask(window, &m))
}

pub(crate) fn boundaries_of_mask(window: &Window, m: &Membership) -> Boundaries {
    let mask = &m.mask;
    let mut theta = BTreeSet::new();
    let mut inner_theta = BTreeSet::new();
    let mut delta = BTreeSet::new();
    for i in 0..window.len() {
        if !mask[i] {
            continue;
        }
        for &j in window.neighbors(i) {
            if !mask[j] {
                theta.insert(window.id(j).clone());
                inner_theta.insert(window.id(i).clone());
                delta.insert((window.id(i).clone(), window.id(j).clone()));
            }
        }
    }
    let complete = (m.finite_inside
        && (0..window.len())
            .filter(|&i| mask[i])
            .all(|i| !window.is_frontier(i)))
        || (m.cofinite_inside
            && (0..window.len())
                .filter(|&i| !mask[i])
                .all(|i| !window.is_frontier(i)));
    Boundaries {
        theta,
        inner_theta,
        delta,
        delta_growing: !complete,
    }
}

fn has_infinite_degree(window: &Window, set: &BTreeSet<VertexId>) -> bool {
    set.iter()
        .any(|v| window.graph().degree_hint(v) == DegreeHint::Infinite)
}

/// Three-valued classification of a carrier as vertex-, edge- and metric cut.
///
/// Without an oracle, negative answers are only given where a finite argument
/// settles them: a finite set containing a vertex of infinite degree has an
/// infinite boundary.
pub fn classify_cut(
    window: &Window,
    carrier: &Carrier,
    oracle: Option<&dyn CutOracle>,
) -> Result<CutCandidate> {
    let m = membership(window, carrier)?;
    let b = boundaries_of_mask(window, &m);
    let depth = window.radius();
    let unknown = KindStatus::UnknownAtDepth(depth);
    let theta_idx: Vec<usize> = b
        .theta
        .iter()
        .filter_map(|v| window.index_of(v))
        .collect();
    let theta_diameter = window.set_diameter_idx(&theta_idx);

    let (vertex, edge, metric) = if let Some(truth) = oracle.and_then(|o| o.certify(carrier)) {
        (
            KindStatus::from_bool(truth.vertex),
            KindStatus::from_bool(truth.edge),
            KindStatus::from_bool(truth.metric),
        )
    } else if b.is_complete() {
        use KindStatus::YesCertified as Y;
        (Y, Y, Y)
    } else {
        match carrier {
            Carrier::ExplicitFinite(s) => {
                // θe lies within distance one of the finite set e.
                let metric = KindStatus::YesCertified;
                if has_infinite_degree(window, s) {
                    (KindStatus::NoCertified, KindStatus::NoCertified, metric)
                } else {
                    (unknown, unknown, metric)
                }
            }
            Carrier::ComplementOfFinite(s) => {
                let edge = if has_infinite_degree(window, s) {
                    KindStatus::NoCertified
                } else {
                    unknown
                };
                (KindStatus::YesCertified, edge, KindStatus::YesCertified)
            }
            Carrier::BallComplementComponent { .. } => (unknown, unknown, KindStatus::YesCertified),
            Carrier::Shape(region) => {
                let metric = if region.boundary_radius().is_some() {
                    KindStatus::YesCertified
                } else {
                    unknown
                };
                (unknown, unknown, metric)
            }
            Carrier::SeparatorSide { vertices, .. } => {
                // θe lies in the removed vertices and the endpoints of the
                // removed edges; δe in the removed edges plus the edges at the
                // removed vertices.
                let settled = vertices
                    .iter()
                    .filter_map(|v| window.index_of(v))
                    .all(|i| !window.is_frontier(i));
                let edge = if settled { KindStatus::YesCertified } else { unknown };
                (KindStatus::YesCertified, edge, KindStatus::YesCertified)
            }
        }
    };
    let kinds = BTreeMap::from([
        (CutKind::Vertex, vertex),
        (CutKind::Edge, edge),
        (CutKind::Metric, metric),
    ]);
    Ok(CutCandidate {
        carrier: carrier.clone(),
        theta: b.theta,
        inner_theta: b.inner_theta,
        delta: b.delta,
        delta_growing: b.delta_growing,
        theta_diameter,
        kinds,
        depth,
    })
}
