//! Trees fattened to reach `ρ`: vertices at tree distance at most `ρ` are
//! adjacent, so graph distance is `⌈d_T / ρ⌉`. The plain tree is `ρ = 1`,
//! the tree with distance-two edges is `ρ = 2`, and free-group Cayley graphs
//! over `A^r` are `ρ = r` on the word tree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{ExpectedOutcome, GalleryGraph, GalleryTag, GroundTruth};
use super::Branching;
use crate::cuts::{Carrier, CutOracle, KindTruth, Region};
use crate::ends::{EndCount, EndOracle, Notion, Ray};
use crate::error::{Error, Result};
use crate::graph::{BudgetSchedule, DegreeHint, LazyGraph, VertexId};

/// Tree structure behind a fattened tree.
pub trait Address: Send + Sync + fmt::Debug + 'static {
    /// Depth in the underlying tree.
    fn depth(&self, v: &VertexId) -> Option<usize>;

    /// The ancestor of `v` at `depth` (`v` itself at its own depth).
    fn ancestor(&self, v: &VertexId, depth: usize) -> Option<VertexId>;

    fn reach(&self) -> u32;

    /// Whether every vertex has infinitely many children.
    fn infinite_branching(&self) -> bool;
}

/// Length of the prefix shared by every vertex of one component of
/// `K(root, k)*`: the lowest common ancestor of two vertices below depth
/// `ρk` joined by a step of tree length `≤ ρ` sits at depth
/// `≥ ρk + 1 − ⌊ρ/2⌋`, and vertices sharing that ancestor are joined at depth
/// `ρk + 1`.
pub fn component_prefix_len(reach: u32, k: u32) -> usize {
    let l = (reach * k) as usize;
    (l + 1).saturating_sub((reach / 2) as usize)
}

/// A tree whose vertices are integer sequences, `"t"` for the root and
/// `"t.3.0.1"` below it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FattenedTree {
    pub branching: Branching,
    pub reach: u32,
}

fn token(addr: &[u64]) -> VertexId {
    let mut s = String::from("t");
    for a in addr {
        s.push('.');
        s.push_str(&a.to_string());
    }
    VertexId::new(s)
}

impl FattenedTree {
    pub fn new(branching: Branching, reach: u32) -> Result<Self> {
        if !(1..=2).contains(&reach) {
            return Err(Error::InvalidParams(format!("tree reach must be 1 or 2, got {reach}")));
        }
        if let Branching::Finite(b) = branching {
            if b < 2 {
                return Err(Error::InvalidParams(format!("branching must be at least 2, got {b}")));
            }
        }
        Ok(FattenedTree { branching, reach })
    }

    fn fits(&self, i: u64) -> bool {
        match self.branching {
            Branching::Finite(b) => i < b as u64,
            Branching::Infinite => true,
        }
    }

    pub fn parse(&self, v: &VertexId) -> Option<Vec<u64>> {
        let mut parts = v.as_str().split('.');
        if parts.next()? != "t" {
            return None;
        }
        let addr: Vec<u64> = parts.map(|p| p.parse().ok()).collect::<Option<_>>()?;
        (addr.iter().all(|&i| self.fits(i)) && token(&addr) == *v).then_some(addr)
    }

    pub fn vertex(&self, addr: &[u64]) -> VertexId {
        token(addr)
    }

    fn tree_dist(a: &[u64], b: &[u64]) -> u64 {
        let common = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        (a.len() + b.len() - 2 * common) as u64
    }
}

impl LazyGraph for FattenedTree {
    fn name(&self) -> String {
        match self.reach {
            1 => format!("tree:b={}", self.branching),
            _ => format!("treeplus2:b={}", self.branching),
        }
    }

    fn root(&self) -> VertexId {
        token(&[])
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.parse(v).is_some()
    }

    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        let Some(a) = self.parse(v) else { return Vec::new() };
        let fat = self.reach == 2;
        let mut out: Vec<Vec<u64>> = Vec::new();
        if let Some((_, parent)) = a.split_last() {
            out.push(parent.to_vec());
            if fat && !parent.is_empty() {
                out.push(parent[..parent.len() - 1].to_vec());
            }
        }
        let last = a.last().copied();
        let child = |i: u64| {
            let mut c = a.clone();
            c.push(i);
            c
        };
        let max_s = match self.branching {
            Branching::Finite(b) => 2 * (b as u64 - 1),
            Branching::Infinite => u64::MAX,
        };
        let mut s = 0;
        while out.len() < limit && s <= max_s {
            if self.fits(s) {
                out.push(child(s));
                if fat && last.is_some() && last != Some(s) {
                    let mut sib = a.clone();
                    *sib.last_mut().expect("non-root") = s;
                    out.push(sib);
                }
            }
            if fat {
                for i in 0..=s {
                    if self.fits(i) && self.fits(s - i) {
                        let mut g = child(i);
                        g.push(s - i);
                        out.push(g);
                    }
                }
            }
            s += 1;
        }
        out.into_iter().take(limit).map(|a| token(&a)).collect()
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        match (self.parse(u), self.parse(v)) {
            (Some(a), Some(b)) => (1..=u64::from(self.reach)).contains(&Self::tree_dist(&a, &b)),
            _ => false,
        }
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        let Some(a) = self.parse(v) else { return DegreeHint::Unknown };
        let Branching::Finite(b) = self.branching else {
            return DegreeHint::Infinite;
        };
        let d = a.len();
        let up = usize::from(d >= 1);
        DegreeHint::Finite(match self.reach {
            1 => b + up,
            _ => b + b * b + up * b + usize::from(d >= 2),
        })
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        let d = Self::tree_dist(&self.parse(u)?, &self.parse(v)?);
        Some(d.div_ceil(u64::from(self.reach)))
    }
}

impl Address for FattenedTree {
    fn depth(&self, v: &VertexId) -> Option<usize> {
        self.parse(v).map(|a| a.len())
    }

    fn ancestor(&self, v: &VertexId, depth: usize) -> Option<VertexId> {
        let a = self.parse(v)?;
        (depth <= a.len()).then(|| token(&a[..depth]))
    }

    fn reach(&self) -> u32 {
        self.reach
    }

    fn infinite_branching(&self) -> bool {
        self.branching == Branching::Infinite
    }
}

/// All descendants of `apex`, including it.
#[derive(Debug, Clone)]
pub struct Cone {
    addr: Arc<dyn Address>,
    pub apex: VertexId,
    depth: usize,
}

impl Region for Cone {
    fn label(&self) -> String {
        format!("cone[{}]", self.apex)
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.addr.ancestor(v, self.depth).is_some_and(|a| a == self.apex)
    }

    fn boundary_radius(&self) -> Option<u32> {
        let r = self.addr.reach() as usize;
        u32::try_from((self.depth + r).div_ceil(r)).ok()
    }
}

/// The component of `K(root, k)*` below `prefix`.
#[derive(Debug, Clone)]
pub struct BallPiece {
    addr: Arc<dyn Address>,
    pub radius: u32,
    pub prefix: VertexId,
}

impl Region for BallPiece {
    fn label(&self) -> String {
        format!("piece[{}] of K(root,{})*", self.prefix, self.radius)
    }

    fn contains(&self, v: &VertexId) -> bool {
        let r = self.addr.reach();
        let len = component_prefix_len(r, self.radius);
        self.addr.depth(v).is_some_and(|d| d > (r * self.radius) as usize)
            && self.addr.ancestor(v, len).is_some_and(|a| a == self.prefix)
    }

    fn boundary_radius(&self) -> Option<u32> {
        Some(self.radius)
    }
}

/// Oracle for fattened trees; rays are identified with the infinite branch
/// they converge to.
#[derive(Debug)]
pub struct TreeOracle {
    pub(crate) addr: Arc<dyn Address>,
    pub(crate) name: String,
    /// Ray name to a token naming its limit branch.
    pub(crate) limits: BTreeMap<String, String>,
    pub(crate) canonical_apexes: Vec<VertexId>,
}

enum Piece {
    Cone(Cone),
    Ball(BallPiece),
}

impl TreeOracle {
    fn piece(&self, carrier: &Carrier) -> Option<Piece> {
        if let Some(c) = carrier.shape::<Cone>() {
            return Some(Piece::Cone(c.clone()));
        }
        if let Some(b) = carrier.shape::<BallPiece>() {
            return Some(Piece::Ball(b.clone()));
        }
        match carrier {
            Carrier::BallComplementComponent {
                center,
                radius,
                fingerprint,
            } if self.addr.depth(center) == Some(0) => {
                let r = self.addr.reach();
                if self.addr.depth(fingerprint)? <= (r * radius) as usize {
                    return None;
                }
                let prefix = self.addr.ancestor(fingerprint, component_prefix_len(r, *radius))?;
                Some(Piece::Ball(BallPiece {
                    addr: Arc::clone(&self.addr),
                    radius: *radius,
                    prefix,
                }))
            }
            _ => None,
        }
    }

    pub(crate) fn cone(&self, apex: VertexId) -> Option<Carrier> {
        let depth = self.addr.depth(&apex)?;
        Some(Carrier::Shape(Arc::new(Cone {
            addr: Arc::clone(&self.addr),
            apex,
            depth,
        })))
    }

    fn kinds(&self, piece: &Piece) -> KindTruth {
        let r = self.addr.reach();
        if !self.addr.infinite_branching() || r == 1 {
            return KindTruth {
                vertex: true,
                edge: true,
                metric: true,
            };
        }
        // Infinite branching with r ≥ 2: every vertex has infinitely many
        // neighbors below it, so no nonempty proper piece has finite δ.
        let vertex = match piece {
            // Siblings of the apex are at tree distance two.
            Piece::Cone(_) => false,
            // θ is the prefix vertex and its ancestors within reach, unless
            // reach three or more also catches the prefix's siblings.
            Piece::Ball(b) => r <= 2 || component_prefix_len(r, b.radius) == 0,
        };
        KindTruth {
            vertex,
            edge: false,
            metric: true,
        }
    }
}

impl CutOracle for TreeOracle {
    fn certify(&self, carrier: &Carrier) -> Option<KindTruth> {
        self.piece(carrier).map(|p| self.kinds(&p))
    }

    fn contains(&self, carrier: &Carrier, v: &VertexId) -> Option<bool> {
        Some(match self.piece(carrier)? {
            Piece::Cone(c) => c.contains(v),
            Piece::Ball(b) => b.contains(v),
        })
    }

    fn resolve(&self, carrier: &Carrier) -> Option<Carrier> {
        match self.piece(carrier)? {
            Piece::Cone(c) => Some(Carrier::Shape(Arc::new(c))),
            Piece::Ball(b) => Some(Carrier::Shape(Arc::new(b))),
        }
    }
}

impl EndOracle for TreeOracle {
    fn tag(&self) -> String {
        format!("oracle:{}", self.name)
    }

    fn equivalent(&self, a: &str, b: &str, notion: Notion) -> Option<bool> {
        let (la, lb) = (self.limits.get(a)?, self.limits.get(b)?);
        let same = la == lb;
        if !self.addr.infinite_branching() || self.addr.reach() == 1 || notion == Notion::MetricEnd {
            return Some(same);
        }
        match (notion, self.addr.reach()) {
            // A finite-δ set containing a ray tail contains every ancestor of
            // the tail and then the root, and so does its complement.
            (Notion::EdgeEnd, _) => Some(true),
            // Pieces of ball complements have finite θ at reach two.
            (Notion::VertexEnd, 2) => Some(same),
            _ => None,
        }
    }

    fn canonical_cuts(&self, _depth: u32) -> Vec<Carrier> {
        self.canonical_apexes.iter().filter_map(|a| self.cone(a.clone())).collect()
    }

    fn ball_component_key(&self, radius: u32, v: &VertexId) -> Option<String> {
        let r = self.addr.reach();
        if self.addr.depth(v)? <= (r * radius) as usize {
            return None;
        }
        self.addr
            .ancestor(v, component_prefix_len(r, radius))
            .map(|a| a.to_string())
    }
}

/// Rays along `k, 0, 0, …` plus one detour ray converging to branch 0.
fn tree_rays(tree: FattenedTree, branches: u64) -> (Vec<Ray>, BTreeMap<String, String>) {
    let rho = u64::from(tree.reach);
    let mut rays = Vec::new();
    let mut limits = BTreeMap::new();
    for k in 0..branches {
        let name = format!("branch-{k}");
        rays.push(
            Ray::new(name.clone(), move |i| {
                let mut a = vec![0; i as usize];
                if i > 0 {
                    a[0] = k;
                }
                token(&a)
            })
            .with_escape(move |j| rho * u64::from(j) + 1),
        );
        limits.insert(name, format!("{k}.0*"));
    }
    if branches >= 3 {
        // 2 → root → 0 → 0.0 → …
        rays.push(
            Ray::new("branch-0-via-2", |i| match i {
                0 => token(&[2]),
                i => token(&vec![0; i as usize - 1]),
            })
            .with_escape(move |j| rho * u64::from(j) + 2),
        );
        limits.insert("branch-0-via-2".into(), "0.0*".into());
    }
    (rays, limits)
}

pub(super) fn build(tag: GalleryTag, branching: Branching, reach: u32) -> Result<GalleryGraph> {
    let tree = FattenedTree::new(branching, reach)?;
    let branches = match branching {
        Branching::Finite(b) => (b as u64).min(4),
        Branching::Infinite => 4,
    };
    let (rays, limits) = tree_rays(tree, branches);
    let addr: Arc<dyn Address> = Arc::new(tree);
    let oracle = TreeOracle {
        addr,
        name: tree.name(),
        limits,
        canonical_apexes: (0..branches).map(|k| token(&[k])).collect(),
    };
    let inf = Some(EndCount::Infinite);
    let counts = if reach == 2 && branching == Branching::Infinite {
        [inf, Some(EndCount::Finite(1)), inf]
    } else {
        [inf; 3]
    };
    let mut truth = GroundTruth::new(counts, 4);
    let names: Vec<String> = rays.iter().map(|r| r.name().to_string()).collect();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            for notion in Notion::ALL {
                let outcome = match oracle.equivalent(a, b, notion) {
                    Some(true) => ExpectedOutcome::Equivalent,
                    _ => ExpectedOutcome::Separated,
                };
                truth = truth.expect(a, b, &[notion], outcome);
            }
        }
    }
    let (budget, max_radius) = match (branching, reach) {
        (Branching::Infinite, 2) => (BudgetSchedule::Linear { base: 8, per_depth: 1 }, 3),
        (Branching::Infinite, _) => (BudgetSchedule::Linear { base: 3, per_depth: 1 }, 4),
        (Branching::Finite(_), 2) => (BudgetSchedule::Unlimited, 3),
        (Branching::Finite(b), _) => (BudgetSchedule::Unlimited, if b <= 3 { 6 } else { 4 }),
    };
    Ok(GalleryGraph::assemble(
        tag,
        Arc::new(tree),
        Arc::new(oracle),
        truth,
        rays,
        Vec::new(),
        budget,
        max_radius,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_prefix_lengths() {
        assert_eq!(component_prefix_len(1, 2), 3);
        assert_eq!(component_prefix_len(2, 0), 0);
        assert_eq!(component_prefix_len(2, 3), 6);
        assert_eq!(component_prefix_len(3, 1), 3);
    }

    #[test]
    fn finite_stream_matches_degree() {
        let t = FattenedTree::new(Branching::Finite(3), 2).unwrap();
        for v in ["t", "t.1", "t.2.0"] {
            let v = VertexId::new(v);
            let n = t.neighbors(&v, usize::MAX).len();
            assert_eq!(DegreeHint::Finite(n), t.degree_hint(&v), "{v}");
            assert!(t.neighbors(&v, usize::MAX).iter().all(|w| t.is_adjacent(&v, w)));
        }
    }

    #[test]
    fn fattened_metric() {
        let t = FattenedTree::new(Branching::Infinite, 2).unwrap();
        let d = |a: &str, b: &str| t.exact_metric(&VertexId::new(a), &VertexId::new(b)).unwrap();
        assert_eq!(d("t", "t.5.7"), 1);
        assert_eq!(d("t.1", "t.2"), 1);
        assert_eq!(d("t.1.0", "t.2.0"), 2);
        assert_eq!(d("t", "t.0.0.0"), 2);
    }
}
