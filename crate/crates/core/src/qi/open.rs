use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use super::{QiConstants, QuasiIsometry, VertexMap};
use crate::cuts::{boundaries, classify_cut, membership, Carrier, CutKind, KindStatus, Region};
use crate::error::{Error, Result};
use crate::graph::{VertexId, Window};

/// `A + r` inside a window.
#[derive(Debug, Clone, Serialize)]
pub struct Fattened {
    pub members: BTreeSet<VertexId>,
    /// End tags carried by `A`, passed through unchanged.
    pub ends: Vec<String>,
    pub radius: u32,
    /// False when a vertex closer than `r` to `A` still has unexplored
    /// neighbors, so the set may be missing members.
    pub exact: bool,
}

/// `{x : d(x, A) ≤ r}` by breadth-first search from `A` in the window.
pub fn fatten(window: &Window, a: &BTreeSet<VertexId>, ends: &[String], r: u32) -> Result<Fattened> {
    let sources: Vec<usize> = a.iter().map(|v| window.require(v)).collect::<Result<_>>()?;
    let dist = window.bfs_multi(&sources);
    let mut members = BTreeSet::new();
    let mut exact = true;
    for (i, &d) in dist.iter().enumerate() {
        if d <= r {
            members.insert(window.id(i).clone());
            if d < r && window.is_frontier(i) {
                exact = false;
            }
        }
    }
    Ok(Fattened {
        members,
        ends: ends.to_vec(),
        radius: r,
        exact,
    })
}

/// `φ⁻¹(f)` for a region `f` of `Y`.
#[derive(Clone)]
pub struct QiPreimage {
    phi: VertexMap,
    target: Arc<dyn Region>,
    bound: Option<u32>,
}

impl std::fmt::Debug for QiPreimage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QiPreimage({})", self.target.label())
    }
}

impl Region for QiPreimage {
    fn label(&self) -> String {
        format!("φ⁻¹({})", self.target.label())
    }

    fn contains(&self, v: &VertexId) -> bool {
        (self.phi)(v).is_some_and(|y| self.target.contains(&y))
    }

    fn boundary_radius(&self) -> Option<u32> {
        self.bound
    }
}

impl QuasiIsometry {
    fn resolve_y(&self, f: &Carrier) -> Option<Arc<dyn Region>> {
        let resolved = self.y.oracle.resolve(f).unwrap_or_else(|| f.clone());
        match resolved {
            Carrier::Shape(r) => Some(r),
            _ => None,
        }
    }

    /// `θ(φ⁻¹f) ⊆ K(root, c + b·(k + a) + d(ψ(root_Y), root_X))` when
    /// `θf ⊆ K(root_Y, k)`.
    pub fn preimage(&self, f: &Carrier) -> Result<QiPreimage> {
        let target = self
            .resolve_y(f)
            .ok_or_else(|| Error::InvalidConfig(format!("{} has no closed form in {}", f.describe(), self.y.tag)))?;
        let (rx, ry) = (self.x.graph.root(), self.y.graph.root());
        let offset = self.psi(&ry).and_then(|p| self.dx(&p, &rx));
        let bound = target.boundary_radius().zip(offset).and_then(|(k, o)| {
            let QiConstants { a, b, c, .. } = self.constants;
            u32::try_from(c + b * (u64::from(k) + a) + o).ok()
        });
        Ok(QiPreimage {
            phi: Arc::clone(&self.phi),
            target,
            bound,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PreimageReport {
    pub cut: String,
    pub depth: u32,
    /// Metric status of `f` in `Y`.
    pub target_metric: KindStatus,
    /// Metric status of `φ⁻¹(f)` in `X`.
    pub preimage_metric: KindStatus,
    pub bound_radius: Option<u32>,
    pub theta_seen: usize,
    /// Largest root distance among the `θ(φ⁻¹f)` vertices seen.
    pub theta_reach: Option<u64>,
    pub within_bound: bool,
}

impl PreimageReport {
    pub fn holds(&self) -> bool {
        self.target_metric != KindStatus::YesCertified
            || (self.preimage_metric == KindStatus::YesCertified && self.within_bound)
    }
}

/// The preimage of a metric cut of `Y` is a metric cut of `X`; the
/// boundary seen in the window has to respect the derived radius.
pub fn preimage_check(qi: &QuasiIsometry, f: &Carrier, depth: u32) -> Result<PreimageReport> {
    let wx = qi.x.env().window(depth)?;
    let wy = qi.y.env().window(depth)?;
    let target = classify_cut(&wy, f, qi.y.env().cut_oracle())?;
    let pre = Carrier::Shape(Arc::new(qi.preimage(f)?));
    let cand = classify_cut(&wx, &pre, None)?;
    let root = qi.x.graph.root();
    let reach = cand.theta.iter().map(|v| qi.dx(&root, v)).collect::<Option<Vec<u64>>>();
    let bound = match &pre {
        Carrier::Shape(r) => r.boundary_radius(),
        _ => None,
    };
    let theta_reach = reach.as_ref().and_then(|r| r.iter().max().copied());
    let within_bound = match (reach, bound) {
        (Some(r), Some(b)) => r.iter().all(|&d| d <= u64::from(b)),
        _ => false,
    };
    Ok(PreimageReport {
        cut: f.describe(),
        depth: wx.radius(),
        target_metric: target.kind(CutKind::Metric),
        preimage_metric: cand.kind(CutKind::Metric),
        bound_radius: bound,
        theta_seen: cand.theta.len(),
        theta_reach,
        within_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OpenOutcome {
    OpenEvidence,
    Unknown { required_depth: u32 },
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenEvidence {
    pub cut: String,
    pub depth: u32,
    /// `d + 1`.
    pub fattened_by: u64,
    /// Vertices of `θ(φ(e) + d + 1)` whose status the windows settle.
    pub theta: Vec<VertexId>,
    pub theta_diameter: Option<u64>,
    pub theta_e_diameter: Option<u64>,
    /// `b·(d + 2) + c − 1`: every `ψ(y)`, `y` in the boundary above, lies in
    /// `e*` within this distance of `θe`.
    pub containment_bound: u64,
    pub containment_violations: Vec<VertexId>,
    pub outcome: OpenOutcome,
}

fn set_diameter(set: &[VertexId], d: impl Fn(&VertexId, &VertexId) -> Option<u64>) -> Option<u64> {
    super::diameter(set, d)
}

/// Evidence that `φ(e) + d + 1` is a metric cut of `Y` for a metric cut `e`
/// of `X`, together with the containment
/// `ψ(θ(φ(e) + d + 1)) ⊆ θe + b·(d + 2) + c − 1`.
pub fn quasi_open_check(qi: &QuasiIsometry, e: &Carrier, depth: u32) -> Result<OpenEvidence> {
    let QiConstants { b, c, d, .. } = qi.constants;
    let wx = qi.x.env().window(depth)?;
    let wy = qi.y.env().window(depth)?;
    let cand = classify_cut(&wx, e, qi.x.env().cut_oracle())?;
    if cand.kind(CutKind::Metric) != KindStatus::YesCertified {
        return Err(Error::InvalidConfig(format!(
            "{} is not a certified metric cut at depth {}",
            e.describe(),
            wx.radius()
        )));
    }
    let inside = membership(&wx, e)?.mask;
    let image: BTreeSet<VertexId> = (0..wx.len())
        .filter(|&i| inside[i])
        .filter_map(|i| qi.phi(wx.id(i)))
        .collect();
    let image: Vec<VertexId> = image.into_iter().collect();
    let reach = d + 1;
    let in_f: Vec<bool> = wy
        .ids()
        .iter()
        .map(|y| image.iter().any(|p| qi.dy(y, p).is_some_and(|dist| dist <= reach)))
        .collect();
    let f_set: BTreeSet<VertexId> = (0..wy.len()).filter(|&i| in_f[i]).map(|i| wy.id(i).clone()).collect();
    let theta_f = boundaries(&wy, &Carrier::ExplicitFinite(f_set))?.theta;

    // y is settled when every x with d(φx, y) ≤ d + 2 lies in the X window:
    // such x are within b·(d + 2) + c of ψ(y).
    let margin = b * (d + 2) + c;
    let (rx, ry) = (qi.x.graph.root(), qi.y.graph.root());
    let mut theta = Vec::new();
    let mut required = u64::MAX;
    for y in &theta_f {
        let (Some(px), Some(py)) = (qi.psi(y).and_then(|p| qi.dx(&rx, &p)), qi.dy(&ry, y)) else {
            continue;
        };
        if px + margin <= u64::from(wx.radius()) && py < u64::from(wy.radius()) {
            theta.push(y.clone());
        } else {
            required = required.min((px + margin).max(py + 1));
        }
    }

    let theta_e: Vec<VertexId> = cand.theta.iter().cloned().collect();
    let bound = margin.saturating_sub(1);
    let mut violations = Vec::new();
    for y in &theta {
        let Some(p) = qi.psi(y) else {
            violations.push(y.clone());
            continue;
        };
        let outside = wx.index_of(&p).is_some_and(|i| !inside[i]);
        let near = theta_e.iter().any(|t| qi.dx(&p, t).is_some_and(|dist| dist <= bound));
        if !(outside && near) {
            violations.push(y.clone());
        }
    }
    let theta_diameter = set_diameter(&theta, |u, v| qi.dy(u, v));
    let theta_e_diameter = set_diameter(&theta_e, |u, v| qi.dx(u, v));
    let outcome = if !theta.is_empty() && theta_diameter.is_some() {
        OpenOutcome::OpenEvidence
    } else {
        let hint = if required == u64::MAX {
            depth + 1
        } else {
            u32::try_from(required).unwrap_or(u32::MAX)
        };
        OpenOutcome::Unknown { required_depth: hint }
    };
    Ok(OpenEvidence {
        cut: e.describe(),
        depth: wx.radius().min(wy.radius()),
        fattened_by: reach,
        theta,
        theta_diameter,
        theta_e_diameter,
        containment_bound: bound,
        containment_violations: violations,
        outcome,
    })
}
