use std::collections::BTreeSet;

use serde::Serialize;

use super::tail::tail_side;
use super::{Env, Notion, Ray};
use crate::cuts::{classify_cut, min_edge_cut, min_vertex_cut, Carrier, CutCandidate, CutKind, KindStatus};
use crate::error::{Error, Result};
use crate::graph::Window;

#[derive(Debug, Clone, Serialize)]
pub enum Outcome {
    Separated(Box<CutCandidate>),
    EquivalentCertified(String),
    NotSeparatedAtDepth(u32),
    Unknown(u32),
}

impl Outcome {
    pub fn is_separated(&self) -> bool {
        matches!(self, Outcome::Separated(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Separated(_) => "Separated",
            Outcome::EquivalentCertified(_) => "EquivalentCertified",
            Outcome::NotSeparatedAtDepth(_) => "NotSeparatedAtDepth",
            Outcome::Unknown(_) => "Unknown",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub notion: Notion,
    pub rays: [String; 2],
    pub depth: u32,
    pub outcome: Outcome,
    pub note: Option<String>,
}

/// Number of ray indices checked before deciding at `depth`.
pub(crate) fn prefix_for(depth: u32) -> u64 {
    4 * u64::from(depth) + 8
}

/// The last verified ray vertex inside the inner half of the window.
fn anchor(window: &Window, ray: &Ray) -> Option<usize> {
    let limit = (window.radius() / 2).max(1);
    (0..ray.verified_prefix())
        .rev()
        .filter_map(|i| window.index_of(&ray.at(i)?))
        .find(|&idx| window.depth_of(idx) <= limit)
}

fn ball_candidates(env: &Env, window: &Window, ray: &Ray, depth: u32) -> Vec<Carrier> {
    let root_id = env.graph.root();
    let Some(root) = window.index_of(&root_id) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for r in 0..=depth.min(window.radius()) {
        let Some(v) = ray.escape_index(r).and_then(|n| ray.at(n)) else {
            continue;
        };
        let Some(idx) = window.index_of(&v) else { continue };
        let labeling = window.ball_complement(root, r);
        if let Some(c) = labeling.component_of(idx) {
            out.push(Carrier::BallComplementComponent {
                center: root_id.clone(),
                radius: r,
                fingerprint: c.fingerprint.clone(),
            });
        }
    }
    out
}

fn min_cut_candidates(env: &Env, window: &Window, a: &Ray, b: &Ray, notion: Notion, depth: u32) -> Vec<Carrier> {
    let (Some(s), Some(t)) = (anchor(window, a), anchor(window, b)) else {
        return Vec::new();
    };
    let limit = depth.max(1);
    let anchor_id = window.id(s).clone();
    let carrier = match notion {
        Notion::VertexEnd => min_vertex_cut(window, s, t, limit).map(|cut| Carrier::SeparatorSide {
            vertices: cut.into_iter().map(|i| window.id(i).clone()).collect(),
            edges: BTreeSet::new(),
            anchor: anchor_id,
        }),
        Notion::EdgeEnd => min_edge_cut(window, s, t, limit).map(|cut| Carrier::SeparatorSide {
            vertices: BTreeSet::new(),
            edges: cut
                .into_iter()
                .map(|(i, j)| (window.id(i).clone(), window.id(j).clone()))
                .collect(),
            anchor: anchor_id,
        }),
        Notion::MetricEnd => None,
    };
    carrier
        .map(|c| env.oracle().and_then(|o| o.resolve(&c)).unwrap_or(c))
        .into_iter()
        .collect()
}

/// Decides whether two rays can be separated by a cut of the notion's kind.
///
/// Candidates are tried in order: the oracle's canonical cuts, components of
/// ball complements around the root selected by the first ray's tail, and a
/// window min-cut between the two tail anchors. Within the last two families
/// smaller boundaries come first, then the carrier description.
pub fn separation_verdict(env: &Env, r1: &Ray, r2: &Ray, notion: Notion, depth: u32) -> Result<Verdict> {
    let graph = env.graph.as_ref();
    let need = prefix_for(depth);
    let a = r1.verified(graph, need)?;
    let b = r2.verified(graph, need)?;
    let verdict = |outcome| Verdict {
        notion,
        rays: [a.name().to_string(), b.name().to_string()],
        depth,
        outcome,
        note: None,
    };
    if notion == Notion::MetricEnd {
        for r in [&a, &b] {
            if !r.is_metric() {
                return Err(Error::NotMetricRay(r.name().to_string()));
            }
        }
    }
    if a.verified_prefix() <= u64::from(depth) || b.verified_prefix() <= u64::from(depth) {
        return Ok(verdict(Outcome::Unknown(depth)));
    }
    if let Some(o) = env.oracle() {
        if o.equivalent(a.name(), b.name(), notion) == Some(true) {
            return Ok(verdict(Outcome::EquivalentCertified(o.tag())));
        }
    }
    let window = env.window(depth)?;
    let families = [
        env.oracle().map(|o| o.canonical_cuts(depth)).unwrap_or_default(),
        ball_candidates(env, &window, &a, depth),
        min_cut_candidates(env, &window, &a, &b, notion, depth),
    ];
    let oracle = env.oracle();
    for (f, family) in families.into_iter().enumerate() {
        let mut cands: Vec<CutCandidate> = family
            .into_iter()
            .filter_map(|c| classify_cut(&window, &c, env.cut_oracle()).ok())
            .filter(|c| c.kind(notion.kind()) == KindStatus::YesCertified)
            .collect();
        if f > 0 {
            cands.sort_by_cached_key(|c| (c.theta.len(), c.carrier.describe()));
        }
        for cand in cands {
            let s1 = tail_side(graph, &a, &cand.carrier, oracle);
            let s2 = tail_side(graph, &b, &cand.carrier, oracle);
            if let (Some(s1), Some(s2)) = (s1, s2) {
                if s1.is_inside() && !s2.is_inside() {
                    return Ok(verdict(Outcome::Separated(Box::new(cand))));
                }
            }
        }
    }
    Ok(verdict(Outcome::NotSeparatedAtDepth(depth)))
}

/// Re-tags an edge-end separation as a vertex-end separation: a finite
/// edge-boundary has finite vertex-boundary.
pub fn coarsen(verdict: &Verdict) -> Verdict {
    let mut out = verdict.clone();
    match (&verdict.outcome, verdict.notion) {
        (Outcome::Separated(cand), Notion::EdgeEnd) if cand.kind(CutKind::Edge).is_yes() => {
            let mut cand = cand.clone();
            cand.kinds.insert(CutKind::Vertex, KindStatus::YesCertified);
            out.notion = Notion::VertexEnd;
            out.outcome = Outcome::Separated(cand);
        }
        _ => {
            out.note = Some(format!(
                "passthrough: {} under {} carries no edge-cut certificate",
                verdict.outcome.label(),
                verdict.notion
            ));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndCount {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EndCountStatus {
    StabilizedCertified,
    GrowingLowerBound,
    InfiniteCertified,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndCountReport {
    pub notion: Notion,
    pub depth: u32,
    pub lower_bound: u64,
    pub status: EndCountStatus,
    /// Names of a largest pairwise-separated family.
    pub family: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

/// Largest clique of a small graph given by an adjacency matrix.
fn max_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let mut best: Vec<usize> = Vec::new();
    fn grow(adj: &[Vec<bool>], cur: &mut Vec<usize>, start: usize, best: &mut Vec<usize>) {
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for v in start..adj.len() {
            if cur.iter().all(|&u| adj[u][v]) {
                cur.push(v);
                grow(adj, cur, v + 1, best);
                cur.pop();
            }
        }
    }
    if n > 0 {
        grow(adj, &mut Vec::new(), 0, &mut best);
    }
    best
}

/// Lower bound on the number of ends: the largest family of the given rays
/// that are pairwise separated at `depth`. Only rays with metric evidence
/// take part under the metric notion. The status is certified only against
/// a known `truth`.
pub fn count_ends_at_depth(
    env: &Env,
    rays: &[Ray],
    notion: Notion,
    depth: u32,
    truth: Option<EndCount>,
) -> Result<EndCountReport> {
    let need = prefix_for(depth);
    let mut eligible = Vec::new();
    for r in rays {
        let r = r.verified(env.graph.as_ref(), need)?;
        if notion != Notion::MetricEnd || r.is_metric() {
            eligible.push(r);
        }
    }
    let n = eligible.len();
    let mut adj = vec![vec![false; n]; n];
    let mut verdicts = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = separation_verdict(env, &eligible[i], &eligible[j], notion, depth)?;
            if !v.outcome.is_separated() {
                let w = separation_verdict(env, &eligible[j], &eligible[i], notion, depth)?;
                if w.outcome.is_separated() {
                    v = w;
                }
            }
            adj[i][j] = v.outcome.is_separated();
            adj[j][i] = adj[i][j];
            verdicts.push(v);
        }
    }
    let clique = max_clique(&adj);
    let lower_bound = clique.len() as u64;
    let status = match truth {
        Some(EndCount::Finite(t)) if t == lower_bound => EndCountStatus::StabilizedCertified,
        Some(EndCount::Infinite) => EndCountStatus::InfiniteCertified,
        _ => EndCountStatus::GrowingLowerBound,
    };
    Ok(EndCountReport {
        notion,
        depth,
        lower_bound,
        status,
        family: clique.iter().map(|&i| eligible[i].name().to_string()).collect(),
        verdicts,
    })
}

#[cfg(test)]
mod tests {
    use super::max_clique;

    #[test]
    fn clique_of_triangle_plus_pendant() {
        let e = [(0, 1), (1, 2), (0, 2), (2, 3)];
        let mut adj = vec![vec![false; 4]; 4];
        for (a, b) in e {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        assert_eq!(max_clique(&adj), vec![0, 1, 2]);
        assert!(max_clique(&[]).is_empty());
    }
}
