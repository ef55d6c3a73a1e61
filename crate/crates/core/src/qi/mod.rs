//! Quasi-isometries between gallery graphs: sampled checks of the four
//! axioms, transport of metric rays, and the fattening `A + r`.

mod open;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::ends::{separation_verdict, Notion, Ray};
use crate::error::{Error, Result};
use crate::gallery::{make, Branching, GalleryGraph, GalleryTag, Generators};
use crate::graph::{LazyGraph, VertexId, Window};

pub use open::{fatten, preimage_check, quasi_open_check, Fattened, OpenEvidence, OpenOutcome, PreimageReport, QiPreimage};

pub type VertexMap = Arc<dyn Fn(&VertexId) -> Option<VertexId> + Send + Sync>;

/// `(a, b, c, d)` in `d(φx, φx') ≤ a·d(x, x')`, `d(ψy, ψy') ≤ b·d(y, y')`,
/// `d(ψφx, x) ≤ c`, `d(φψy, y) ≤ d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QiConstants {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QiPreset {
    /// The tree into the tree with distance-two edges, identity on addresses.
    Tree2Identity,
    /// Ladder onto the integer line by column.
    LadderLine,
    /// Free group over `A` into the free group over `A³`, identity on words.
    FreeR1R3,
    /// `LadderLine` with `φ` collapsed to a point.
    ConstantMutant,
}

impl QiPreset {
    pub const ALL: [QiPreset; 4] = [
        QiPreset::Tree2Identity,
        QiPreset::LadderLine,
        QiPreset::FreeR1R3,
        QiPreset::ConstantMutant,
    ];
}

impl fmt::Display for QiPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QiPreset::Tree2Identity => "tree2-identity",
            QiPreset::LadderLine => "ladder-line",
            QiPreset::FreeR1R3 => "free-r1-r3",
            QiPreset::ConstantMutant => "ladder-line-constant",
        })
    }
}

impl FromStr for QiPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QiPreset::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::Parse {
                kind: "qi preset",
                input: s.to_string(),
            })
    }
}

fn ladder_column(v: &VertexId) -> Option<i64> {
    let s = v.as_str();
    let n = s.strip_suffix('t').or_else(|| s.strip_suffix('b'))?;
    let k: i64 = n.parse().ok()?;
    (k.to_string() == n).then_some(k)
}

fn line_point(v: &VertexId) -> Option<i64> {
    let k: i64 = v.as_str().parse().ok()?;
    (k.to_string() == v.as_str()).then_some(k)
}

/// A pair of maps `φ: X → Y`, `ψ: Y → X` with claimed constants.
#[derive(Clone)]
pub struct QuasiIsometry {
    pub name: String,
    pub x: GalleryGraph,
    pub y: GalleryGraph,
    phi: VertexMap,
    psi: VertexMap,
    pub constants: QiConstants,
}

impl fmt::Debug for QuasiIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("QuasiIsometry")
            .field("name", &self.name)
            .field("x", &self.x.tag)
            .field("y", &self.y.tag)
            .field("constants", &self.constants)
            .finish()
    }
}

impl QuasiIsometry {
    pub fn new(
        name: impl Into<String>,
        x: GalleryGraph,
        y: GalleryGraph,
        phi: VertexMap,
        psi: VertexMap,
        constants: QiConstants,
    ) -> Self {
        QuasiIsometry {
            name: name.into(),
            x,
            y,
            phi,
            psi,
            constants,
        }
    }

    /// The identity of a gallery graph, with constants `(1, 1, 0, 0)`.
    pub fn identity(g: GalleryGraph) -> Self {
        let id: VertexMap = Arc::new(|v: &VertexId| Some(v.clone()));
        let constants = QiConstants { a: 1, b: 1, c: 0, d: 0 };
        QuasiIsometry::new(format!("identity:{}", g.tag), g.clone(), g, Arc::clone(&id), id, constants)
    }

    pub fn preset(p: QiPreset) -> Result<Self> {
        let id: VertexMap = Arc::new(|v: &VertexId| Some(v.clone()));
        let column: VertexMap = Arc::new(|v: &VertexId| Some(VertexId::new(ladder_column(v)?.to_string())));
        let top: VertexMap = Arc::new(|v: &VertexId| Some(VertexId::new(format!("{}t", line_point(v)?))));
        Ok(match p {
            QiPreset::Tree2Identity => QuasiIsometry::new(
                p.to_string(),
                make(GalleryTag::Tree(Branching::Finite(3)))?,
                make(GalleryTag::TreePlus2(Branching::Finite(3)))?,
                Arc::clone(&id),
                id,
                QiConstants { a: 1, b: 2, c: 0, d: 0 },
            ),
            QiPreset::LadderLine => QuasiIsometry::new(
                p.to_string(),
                make(GalleryTag::Ladder)?,
                make(GalleryTag::Line)?,
                column,
                top,
                QiConstants { a: 1, b: 1, c: 1, d: 0 },
            ),
            QiPreset::FreeR1R3 => QuasiIsometry::new(
                p.to_string(),
                make(GalleryTag::FreeGroup {
                    generators: Generators::Finite(2),
                    r: 1,
                })?,
                make(GalleryTag::FreeGroup {
                    generators: Generators::Finite(2),
                    r: 3,
                })?,
                Arc::clone(&id),
                id,
                QiConstants { a: 1, b: 3, c: 0, d: 0 },
            ),
            QiPreset::ConstantMutant => QuasiIsometry::new(
                p.to_string(),
                make(GalleryTag::Ladder)?,
                make(GalleryTag::Line)?,
                Arc::new(|_: &VertexId| Some(VertexId::new("0"))),
                top,
                QiConstants { a: 1, b: 1, c: 1, d: 0 },
            ),
        })
    }

    pub fn phi(&self, v: &VertexId) -> Option<VertexId> {
        (self.phi)(v)
    }

    pub fn psi(&self, v: &VertexId) -> Option<VertexId> {
        (self.psi)(v)
    }

    fn dx(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        self.x.graph.exact_metric(u, v)
    }

    fn dy(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        self.y.graph.exact_metric(u, v)
    }

    /// Samples each axiom `samples` times on the windows of depth `depth`.
    /// Axiom `i` draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `i`.
    pub fn verify(&self, depth: u32, samples: usize, seed: u64) -> Result<QiReport> {
        let wx = self.x.env().window(depth)?;
        let wy = self.y.env().window(depth)?;
        qi_verify(self, &wx, &wy, samples, seed)
    }

    /// Lemma-11 transfer on random finite subsets: `diam φ(A) ≤ a·diam A`.
    pub fn diameter_transfer_check(&self, depth: u32, sets: usize, seed: u64) -> Result<TransferReport> {
        let wx = self.x.env().window(depth)?;
        let mut rng = stream(seed, 5);
        let mut report = TransferReport {
            sets_checked: 0,
            skipped: 0,
            violations: Vec::new(),
        };
        for _ in 0..sets {
            let size = rng.random_range(2..=6);
            let set: Vec<VertexId> = (0..size).map(|_| pick(&mut rng, &wx).clone()).collect();
            let image: Option<Vec<VertexId>> = set.iter().map(|v| self.phi(v)).collect();
            let (Some(dx), Some(dy)) = (
                diameter(&set, |u, v| self.dx(u, v)),
                image.and_then(|img| diameter(&img, |u, v| self.dy(u, v))),
            ) else {
                report.skipped += 1;
                continue;
            };
            report.sets_checked += 1;
            if dy > self.constants.a * dx {
                report.violations.push(TransferViolation {
                    set,
                    diameter: dx,
                    image_diameter: dy,
                });
            }
        }
        Ok(report)
    }

    /// Transports a metric ray: consecutive `φ`-images are joined by
    /// geodesics of length at most `a`, then loops are erased so the walk
    /// becomes a ray prefix of at least `4·depth + 8` vertices.
    pub fn map_ray(&self, ray: &Ray, depth: u32) -> Result<Ray> {
        qi_map_ray(self, ray, depth)
    }

    /// For every metric expectation between named rays of `X`: are the rays
    /// separated in `X` exactly when their images are separated in `Y`?
    pub fn end_correspondence(&self, depth: u32) -> Result<Vec<Correspondence>> {
        let mut out = Vec::new();
        for e in self.x.truth.expected_verdicts.iter().filter(|e| e.notion == Notion::MetricEnd) {
            let (a, b) = (self.x.ray(&e.rays[0])?, self.x.ray(&e.rays[1])?);
            let x_separated = separated(self.x.env(), a, b, depth)?;
            let (ia, ib) = (self.map_ray(a, depth)?, self.map_ray(b, depth)?);
            let y_separated = separated(self.y.env(), &ia, &ib, depth)?;
            out.push(Correspondence {
                rays: e.rays.clone(),
                x_separated,
                y_separated,
                agree: x_separated == y_separated,
            });
        }
        Ok(out)
    }
}

fn separated(env: &crate::ends::Env, a: &Ray, b: &Ray, depth: u32) -> Result<bool> {
    Ok(separation_verdict(env, a, b, Notion::MetricEnd, depth)?.outcome.is_separated()
        || separation_verdict(env, b, a, Notion::MetricEnd, depth)?.outcome.is_separated())
}

fn stream(seed: u64, s: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(s);
    rng
}

fn pick<'w>(rng: &mut ChaCha8Rng, w: &'w Window) -> &'w VertexId {
    w.id(rng.random_range(0..w.len()))
}

fn diameter(set: &[VertexId], d: impl Fn(&VertexId, &VertexId) -> Option<u64>) -> Option<u64> {
    let mut best = 0;
    for (i, u) in set.iter().enumerate() {
        for v in &set[i + 1..] {
            best = best.max(d(u, v)?);
        }
    }
    Some(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    Q1,
    Q2,
    Q3,
    Q4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// The sampled pair, or the point and its round-trip image.
    pub witness: [VertexId; 2],
    pub measured: u64,
    pub bound: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QiVerdict {
    /// Relative to the samples drawn; not a proof.
    NoViolationFound,
    Violated,
}

#[derive(Debug, Clone, Serialize)]
pub struct QiReport {
    pub name: String,
    pub constants: QiConstants,
    pub depth: u32,
    pub checked_pairs: usize,
    /// Samples without exact distances or outside the maps' domains.
    pub skipped: usize,
    pub violations: Vec<Violation>,
    pub verdict: QiVerdict,
}

/// Samples the four axioms on vertices of `wx` and `wy`.
pub fn qi_verify(qi: &QuasiIsometry, wx: &Window, wy: &Window, samples: usize, seed: u64) -> Result<QiReport> {
    if wx.is_empty() || wy.is_empty() {
        return Err(Error::InvalidConfig("empty window".into()));
    }
    let QiConstants { a, b, c, d } = qi.constants;
    let mut checked = 0;
    let mut skipped = 0;
    let mut violations = Vec::new();
    let mut record = |axiom, witness: [VertexId; 2], measured: Option<u64>, bound: Option<u64>| match (measured, bound) {
        (Some(m), Some(bound)) => {
            checked += 1;
            if m > bound {
                violations.push(Violation {
                    axiom,
                    witness,
                    measured: m,
                    bound,
                });
            }
        }
        _ => skipped += 1,
    };

    let mut rng = stream(seed, 1);
    for _ in 0..samples {
        let (u, v) = (pick(&mut rng, wx).clone(), pick(&mut rng, wx).clone());
        let m = qi.phi(&u).zip(qi.phi(&v)).and_then(|(p, q)| qi.dy(&p, &q));
        let bound = qi.dx(&u, &v).map(|d| a * d);
        record(Axiom::Q1, [u, v], m, bound);
    }
    let mut rng = stream(seed, 2);
    for _ in 0..samples {
        let (u, v) = (pick(&mut rng, wy).clone(), pick(&mut rng, wy).clone());
        let m = qi.psi(&u).zip(qi.psi(&v)).and_then(|(p, q)| qi.dx(&p, &q));
        let bound = qi.dy(&u, &v).map(|d| b * d);
        record(Axiom::Q2, [u, v], m, bound);
    }
    let mut rng = stream(seed, 3);
    for _ in 0..samples {
        let x = pick(&mut rng, wx).clone();
        let back = qi.phi(&x).and_then(|y| qi.psi(&y));
        let m = back.as_ref().and_then(|z| qi.dx(z, &x));
        record(Axiom::Q3, [x, back.unwrap_or_else(|| VertexId::new("?"))], m, Some(c));
    }
    let mut rng = stream(seed, 4);
    for _ in 0..samples {
        let y = pick(&mut rng, wy).clone();
        let back = qi.psi(&y).and_then(|x| qi.phi(&x));
        let m = back.as_ref().and_then(|z| qi.dy(z, &y));
        record(Axiom::Q4, [y, back.unwrap_or_else(|| VertexId::new("?"))], m, Some(d));
    }
    let verdict = if violations.is_empty() {
        QiVerdict::NoViolationFound
    } else {
        QiVerdict::Violated
    };
    Ok(QiReport {
        name: qi.name.clone(),
        constants: qi.constants,
        depth: wx.radius().min(wy.radius()),
        checked_pairs: checked,
        skipped,
        violations,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferViolation {
    pub set: Vec<VertexId>,
    pub diameter: u64,
    pub image_diameter: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferReport {
    pub sets_checked: usize,
    pub skipped: usize,
    pub violations: Vec<TransferViolation>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Correspondence {
    pub rays: [String; 2],
    pub x_separated: bool,
    pub y_separated: bool,
    pub agree: bool,
}

/// Neighbors scanned per geodesic step.
const GEODESIC_SCAN: usize = 4096;

fn geodesic(g: &dyn LazyGraph, from: &VertexId, to: &VertexId, max_len: u64) -> Result<Vec<VertexId>> {
    let fail = |reason: String| Error::Interpolation {
        from: from.clone(),
        to: to.clone(),
        reason,
    };
    let mut d = g
        .exact_metric(from, to)
        .ok_or_else(|| fail("no exact distance".into()))?;
    if d > max_len {
        return Err(fail(format!("distance {d} exceeds the Q1 constant {max_len}")));
    }
    let mut path = vec![from.clone()];
    let mut cur = from.clone();
    while d > 0 {
        let next = g
            .neighbors(&cur, GEODESIC_SCAN)
            .into_iter()
            .find(|n| g.exact_metric(n, to) == Some(d - 1))
            .ok_or_else(|| fail(format!("no geodesic step from {cur} among {GEODESIC_SCAN} neighbors")))?;
        path.push(next.clone());
        cur = next;
        d -= 1;
    }
    Ok(path)
}

/// Erases loops: on revisiting a vertex the walk is cut back to its first
/// visit.
fn erase_loops(walk: Vec<VertexId>) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::new();
    let mut pos = std::collections::HashMap::new();
    for v in walk {
        if let Some(&i) = pos.get(&v) {
            for u in out.drain(i + 1..) {
                pos.remove(&u);
            }
        } else {
            pos.insert(v.clone(), out.len());
            out.push(v);
        }
    }
    out
}

/// See [`QuasiIsometry::map_ray`].
pub fn qi_map_ray(qi: &QuasiIsometry, ray: &Ray, depth: u32) -> Result<Ray> {
    let need = 4 * u64::from(depth) + 8;
    let xg = qi.x.graph.as_ref();
    let yg = qi.y.graph.as_ref();
    let mut len = 2 * need;
    for _ in 0..6 {
        let r = ray.verified(xg, len)?;
        if !r.is_metric() {
            return Err(Error::NotMetricRay(ray.name().to_string()));
        }
        let images: Vec<VertexId> = (0..r.verified_prefix())
            .map(|i| {
                let v = r.at(i).expect("verified index");
                qi.phi(&v).ok_or_else(|| Error::InvalidConfig(format!("φ is undefined at {v}")))
            })
            .collect::<Result<_>>()?;
        let mut walk = vec![images[0].clone()];
        for pair in images.windows(2) {
            let seg = geodesic(yg, &pair[0], &pair[1], qi.constants.a)?;
            walk.extend(seg.into_iter().skip(1));
        }
        let path = erase_loops(walk);
        if path.len() as u64 >= need {
            return Ray::from_prefix(format!("φ({})", ray.name()), path).verified(yg, need);
        }
        len *= 2;
    }
    Err(Error::NoEscape(format!("φ({})", ray.name())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[&str]) -> Vec<VertexId> {
        v.iter().map(|s| VertexId::new(*s)).collect()
    }

    #[test]
    fn loop_erasure_keeps_adjacency_order() {
        let w = ids(&["0", "1", "2", "1", "2", "3", "2", "3", "4"]);
        assert_eq!(erase_loops(w), ids(&["0", "1", "2", "3", "4"]));
    }

    #[test]
    fn preset_names_round_trip() {
        for p in QiPreset::ALL {
            assert_eq!(p.to_string().parse::<QiPreset>().unwrap(), p);
        }
    }

    #[test]
    fn ladder_coordinates() {
        assert_eq!(ladder_column(&VertexId::new("-3b")), Some(-3));
        assert_eq!(ladder_column(&VertexId::new("03t")), None);
        assert_eq!(line_point(&VertexId::new("-0")), None);
    }
}
