//! Star balls: balls whose complement has finite-diameter components of
//! unbounded diameter.

use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{explore, BudgetSchedule, LazyGraph, Openness, VertexId, Window};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StarVerdict {
    StarBallEvidence(u64),
    RefutedAtDepth(u32),
    Unknown(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub center: VertexId,
    pub radius: u32,
    /// Largest exact diameter among closed components of the ball complement.
    pub score: u64,
    pub closed_component_count: usize,
    pub open_component_count: usize,
    pub threshold: u64,
    pub window_radius: u32,
    pub verdict: StarVerdict,
}

/// Default evidence threshold: the score has to keep pace with the window.
pub fn default_star_threshold(window_radius: u32, ball_radius: u32) -> u64 {
    (window_radius as i64 - ball_radius as i64 - 2).max(1) as u64
}

/// Scores `K(center, radius)` by the largest closed complement component.
///
/// The score is a lower bound for the supremum over finite-diameter
/// components, and never decreases as the window grows.
pub fn star_ball_score(
    window: &Window,
    center: &VertexId,
    radius: u32,
    threshold: Option<u64>,
) -> Result<StarReport> {
    let c = window.require(center)?;
    let (ball, whole) = window.ball(c, radius);
    // With an exact metric every window vertex knows whether it is in the
    // ball, so closed components are components of the true complement.
    let exact = window.ids().iter().all(|v| window.graph().exact_metric(center, v).is_some());
    let labeling = window.components_excluding(&ball);
    let mut score = 0;
    let mut closed = 0;
    let mut open = 0;
    for comp in labeling.components() {
        match comp.openness {
            Openness::Open => open += 1,
            Openness::Closed => {
                closed += 1;
                let d = window.set_diameter_idx(&comp.members);
                if d.is_exact_finite() {
                    score = score.max(d.value.unwrap_or(0));
                }
            }
        }
    }
    let threshold = threshold.unwrap_or_else(|| default_star_threshold(window.radius(), radius));
    let verdict = if window.is_fully_explored() {
        StarVerdict::RefutedAtDepth(window.radius())
    } else if (whole || exact) && score >= threshold {
        StarVerdict::StarBallEvidence(score)
    } else {
        StarVerdict::Unknown(window.radius())
    };
    Ok(StarReport {
        center: center.clone(),
        radius,
        score,
        closed_component_count: closed,
        open_component_count: open,
        threshold,
        window_radius: window.radius(),
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DiameterWitness {
    /// A geodesic from the root whose distance checkpoints reach the depth.
    MetricRayPrefix(Vec<VertexId>),
    StarBallWitness(StarReport),
    BoundedCertified(u64),
    Unknown(u32),
}

/// Looks for evidence that the graph has infinite diameter: a star ball
/// around the root, or else a geodesic prefix reaching `depth`. A fully
/// explored graph yields its exact diameter instead.
pub fn infinite_diameter_witness(
    graph: Arc<dyn LazyGraph>,
    depth: u32,
    budget: BudgetSchedule,
) -> Result<DiameterWitness> {
    let depth = depth.max(1);
    let window = explore(graph, depth, budget)?;
    if window.is_fully_explored() {
        let all: Vec<usize> = (0..window.len()).collect();
        let d = window.set_diameter_idx(&all);
        return Ok(DiameterWitness::BoundedCertified(d.value.unwrap_or(0)));
    }
    let root = window.origin().clone();
    for r in 1..depth {
        let report = star_ball_score(&window, &root, r, None)?;
        if matches!(report.verdict, StarVerdict::StarBallEvidence(_)) {
            return Ok(DiameterWitness::StarBallWitness(report));
        }
    }
    let dist = window.bfs(0);
    let target = (0..window.len())
        .filter(|&i| dist[i] == depth)
        .filter(|&i| window.distance_idx(0, i).is_exact_finite())
        .filter(|&i| window.distance_idx(0, i).value == Some(depth as u64))
        .min_by(|&a, &b| window.id(a).cmp(window.id(b)));
    if let Some(t) = target {
        let mut path = vec![t];
        let mut cur = t;
        while dist[cur] > 0 {
            cur = window
                .neighbors(cur)
                .iter()
                .copied()
                .filter(|&w| dist[w] + 1 == dist[cur])
                .min_by(|&a, &b| window.id(a).cmp(window.id(b)))
                .expect("bfs parent exists");
            path.push(cur);
        }
        path.reverse();
        return Ok(DiameterWitness::MetricRayPrefix(
            path.into_iter().map(|i| window.id(i).clone()).collect(),
        ));
    }
    Ok(DiameterWitness::Unknown(depth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{explore, FiniteGraph};

    #[test]
    fn finite_path_scores_three() {
        for radius in [10, 12, 20] {
            let w = explore(Arc::new(FiniteGraph::path(10, 5)), radius, BudgetSchedule::Unlimited)
                .unwrap();
            let report = star_ball_score(&w, &"005".into(), 1, None).unwrap();
            assert_eq!(report.score, 3);
            assert_eq!(report.verdict, StarVerdict::RefutedAtDepth(radius));
        }
    }

    #[test]
    fn triangle_is_bounded() {
        let witness =
            infinite_diameter_witness(Arc::new(FiniteGraph::triangle()), 4, BudgetSchedule::Unlimited)
                .unwrap();
        assert_eq!(witness, DiameterWitness::BoundedCertified(1));
    }
}
