use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use super::separate::prefix_for;
use super::{Env, Ray};
use crate::cuts::{membership, star_ball_score, Carrier, StarReport, StarVerdict};
use crate::error::{Error, Result};
use crate::graph::{Openness, VertexId, Window};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLink {
    pub radius: u32,
    /// Oracle key of the component, or its window fingerprint.
    pub component: String,
    pub openness: Option<Openness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndApproximant {
    pub chain: Vec<ChainLink>,
    /// A path through `e₁∖e₂, e₂∖e₃, …`; empty when built from a sequence.
    pub witness_path: Vec<VertexId>,
    pub depth: u32,
}

impl EndApproximant {
    pub fn same_chain(&self, other: &EndApproximant) -> bool {
        self.chain.len() == other.chain.len()
            && self
                .chain
                .iter()
                .zip(&other.chain)
                .all(|(a, b)| a.radius == b.radius && a.component == b.component)
    }
}

pub enum Descent<'a> {
    Ray(&'a Ray),
    /// Ball-complement components with strictly increasing radii.
    Cuts(&'a [Carrier]),
}

fn openness_of(env: &Env, window: &Window, radius: u32, v: &VertexId) -> Option<Openness> {
    let idx = window.index_of(v)?;
    let root = window.index_of(&env.graph.root())?;
    window
        .ball_complement(root, radius)
        .component_of(idx)
        .map(|c| c.openness)
}

fn approximant_of_ray(env: &Env, ray: &Ray, depth: u32) -> Result<EndApproximant> {
    let ray = ray.verified(env.graph.as_ref(), prefix_for(depth))?;
    let window = env.window(2 * depth)?;
    let mut chain = Vec::new();
    let mut last = 0;
    for r in 1..=depth {
        let n = ray.escape_index(r).ok_or_else(|| {
            Error::NoEscape(format!(
                "ray {} shows no escape from K(root,{r}) within {} indices",
                ray.name(),
                ray.verified_prefix()
            ))
        })?;
        let v = ray.at(n).expect("escape index lies in the verified prefix");
        let component = env.component_key(&window, r, &v).ok_or_else(|| Error::NotExplored(v.clone()))?;
        chain.push(ChainLink {
            radius: r,
            component,
            openness: openness_of(env, &window, r, &v),
        });
        last = n;
    }
    let witness_path = (0..=last).filter_map(|i| ray.at(i)).collect();
    Ok(EndApproximant {
        chain,
        witness_path,
        depth,
    })
}

/// Shortest path inside `allowed` from `start` to the first vertex of `goal`.
fn bfs_path(window: &Window, start: usize, allowed: &[bool], goal: &[bool]) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; window.len()];
    let mut queue = VecDeque::from([start]);
    prev[start] = start;
    while let Some(u) = queue.pop_front() {
        if goal[u] {
            let mut path = vec![u];
            let mut x = u;
            while prev[x] != x {
                x = prev[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in window.neighbors(u) {
            if allowed[w] && prev[w] == usize::MAX {
                prev[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

fn approximant_of_cuts(env: &Env, cuts: &[Carrier], depth: u32) -> Result<EndApproximant> {
    let bad = |msg: String| Error::InvalidDescent(msg);
    let root = env.graph.root();
    let mut radii = Vec::new();
    for c in cuts {
        match c {
            Carrier::BallComplementComponent { center, radius, .. } if *center == root => radii.push(*radius),
            _ => return Err(bad(format!("{} is not a ball-complement component at the root", c.describe()))),
        }
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("radii must strictly increase".into()));
    }
    let Some(&max_r) = radii.last() else {
        return Err(bad("empty descent".into()));
    };
    let window = env.window(max_r + depth.max(1))?;
    let masks = cuts
        .iter()
        .map(|c| membership(&window, c).map(|m| m.mask))
        .collect::<Result<Vec<_>>>()?;
    for (i, w) in masks.windows(2).enumerate() {
        if (0..window.len()).any(|v| w[1][v] && !w[0][v]) {
            return Err(bad(format!("cut {} does not contain cut {}", i, i + 1)));
        }
    }
    let mut chain = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    for (i, c) in cuts.iter().enumerate() {
        let Carrier::BallComplementComponent { radius, fingerprint, .. } = c else {
            unreachable!()
        };
        chain.push(ChainLink {
            radius: *radius,
            component: env
                .component_key(&window, *radius, fingerprint)
                .unwrap_or_else(|| fingerprint.to_string()),
            openness: openness_of(env, &window, *radius, fingerprint),
        });
        // Enter e₁ at an inner boundary vertex, then cross each eₙ∖eₙ₊₁.
        let start = match path.last() {
            Some(&v) => v,
            None => (0..window.len())
                .find(|&v| masks[0][v] && window.neighbors(v).iter().any(|&w| !masks[0][w]))
                .ok_or_else(|| bad("first cut has no inner boundary in the window".into()))?,
        };
        if path.is_empty() {
            path.push(start);
        }
        if let Some(next) = masks.get(i + 1) {
            let seg = bfs_path(&window, start, &masks[i], next)
                .ok_or_else(|| bad(format!("cut {} is not reachable inside cut {i}", i + 1)))?;
            path.extend(seg.into_iter().skip(1));
        }
    }
    Ok(EndApproximant {
        chain,
        witness_path: path.into_iter().map(|i| window.id(i).clone()).collect(),
        depth,
    })
}

/// The nested chain of ball-complement components selected by a descent,
/// with a witness path crossing each difference `eₙ∖eₙ₊₁`.
pub fn end_approximant(env: &Env, descent: Descent<'_>, depth: u32) -> Result<EndApproximant> {
    match descent {
        Descent::Ray(r) => approximant_of_ray(env, r, depth),
        Descent::Cuts(c) => approximant_of_cuts(env, c, depth),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SeqElement {
    Vertex(VertexId),
    /// An end token such as `λ` or `σ`.
    End(String),
}

#[derive(Debug, Clone, Serialize)]
pub enum SequenceCase {
    VertexLimit(VertexId),
    LocalEnd { radius: u32 },
    ProperMetricEnd(EndApproximant),
    StarEnd { radius: u32, report: StarReport },
}

impl SequenceCase {
    pub fn label(&self) -> &'static str {
        match self {
            SequenceCase::VertexLimit(_) => "VertexLimit",
            SequenceCase::LocalEnd { .. } => "LocalEnd",
            SequenceCase::ProperMetricEnd(_) => "ProperMetricEnd",
            SequenceCase::StarEnd { .. } => "StarEnd",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceClassification {
    pub case: SequenceCase,
    pub depth: u32,
    pub evidence: Vec<String>,
}

/// Sorts a sequence into one of the four convergence cases using its first
/// `4·depth` elements; the second half of that prefix plays the tail.
pub fn classify_sequence(
    env: &Env,
    seq: &dyn Fn(u64) -> SeqElement,
    depth: u32,
) -> Result<SequenceClassification> {
    let depth = depth.max(1);
    let len = 4 * u64::from(depth);
    let elems: Vec<SeqElement> = (0..len).map(seq).collect();
    let tail = &elems[elems.len() / 2..];
    let conflict = |detail: String| Error::ConflictingEvidence { depth, detail };
    let done = |case, evidence: Vec<String>| Ok(SequenceClassification { case, depth, evidence });

    if tail.iter().all(|e| e == &tail[0]) {
        let evidence = vec![format!("constant on indices {}..{len}", len / 2)];
        return match &tail[0] {
            SeqElement::Vertex(v) => done(SequenceCase::VertexLimit(v.clone()), evidence),
            SeqElement::End(t) => Err(conflict(format!("eventually the end token {t}; no vertex geometry to classify"))),
        };
    }
    let mut mult: BTreeMap<&VertexId, u64> = BTreeMap::new();
    for e in &elems {
        if let SeqElement::Vertex(v) = e {
            *mult.entry(v).or_default() += 1;
        }
    }
    if let Some((v, m)) = mult.iter().find(|(_, &m)| m > u64::from(depth)) {
        return Err(conflict(format!("{v} occurs {m} times without the sequence settling")));
    }
    let verts: Vec<&VertexId> = tail
        .iter()
        .filter_map(|e| match e {
            SeqElement::Vertex(v) => Some(v),
            SeqElement::End(_) => None,
        })
        .collect();
    if verts.is_empty() {
        return Err(conflict("no vertex elements in the inspected tail".into()));
    }
    let window = env.window(depth)?;
    let root = env.graph.root();
    let dist = |v: &VertexId| -> Option<u64> {
        env.root_distance(v).or_else(|| {
            let d = window.distance(&root, v).ok()?;
            if d.is_exact_finite() {
                d.value
            } else {
                None
            }
        })
    };
    let dists: Vec<Option<u64>> = verts.iter().map(|v| dist(v)).collect();
    let max_d = dists.iter().copied().collect::<Option<Vec<_>>>().and_then(|d| d.into_iter().max());
    if let Some(k) = max_d.filter(|&k| k <= u64::from(depth)) {
        return done(
            SequenceCase::LocalEnd { radius: k as u32 },
            vec![
                format!("{} tail elements lie in K(root,{k})", verts.len()),
                format!("largest multiplicity {}", mult.values().max().copied().unwrap_or(0)),
            ],
        );
    }
    let Some(dists) = dists.into_iter().collect::<Option<Vec<u64>>>() else {
        return Err(conflict("a tail element has no exact distance to the root".into()));
    };
    // The part of the tail after its last visit to K(root, r).
    let beyond = |r: u32| -> &[&VertexId] {
        let start = dists.iter().rposition(|&d| d <= u64::from(r)).map_or(0, |i| i + 1);
        &verts[start..]
    };
    if beyond(depth).len() * 2 < verts.len() {
        return Err(conflict("tail elements neither stay in K(root,depth) nor leave it".into()));
    }

    let comp_window = env.window(2 * depth)?;
    let mut chain = Vec::new();
    let mut groups_at = Vec::new();
    for r in 1..=depth {
        let mut groups: BTreeMap<String, u64> = BTreeMap::new();
        let far = beyond(r);
        for v in far {
            let key = env
                .component_key(&comp_window, r, v)
                .ok_or_else(|| Error::NotExplored((*v).clone()))?;
            *groups.entry(key).or_default() += 1;
        }
        if groups.len() == 1 {
            let (key, _) = groups.iter().next().expect("one group");
            chain.push(ChainLink {
                radius: r,
                component: key.clone(),
                openness: openness_of(env, &comp_window, r, far[0]),
            });
        }
        groups_at.push((r, groups));
    }
    if chain.len() as u32 == depth {
        return done(
            SequenceCase::ProperMetricEnd(EndApproximant {
                chain,
                witness_path: Vec::new(),
                depth,
            }),
            vec![format!("one component of K(root,r)* holds the tail for r = 1..={depth}")],
        );
    }
    let cap = (beyond(depth).len() as u64).div_ceil(u64::from(depth)).max(1);
    for (r, groups) in &groups_at {
        let largest = groups.values().max().copied().unwrap_or(0);
        if largest > cap {
            continue;
        }
        let report = star_ball_score(&window, &root, *r, None)?;
        if let StarVerdict::StarBallEvidence(_) = report.verdict {
            return done(
                SequenceCase::StarEnd { radius: *r, report },
                vec![format!(
                    "{} components of K(root,{r})* hold at most {largest} tail elements each",
                    groups.len()
                )],
            );
        }
    }
    Err(conflict("tail splits between components without star-ball evidence".into()))
}
