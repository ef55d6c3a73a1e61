use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{LazyGraph, VertexId};

pub type Generator = Arc<dyn Fn(u64) -> VertexId + Send + Sync>;

/// `escape(k)` is an index after which every ray vertex lies outside
/// `K(root, k)`.
pub type EscapeFn = Arc<dyn Fn(u32) -> u64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Metricity {
    /// Escape indices checked against exact distances for every radius up to
    /// the given one.
    MetricRayEvidence(u32),
    NotMetricCertified,
    Unknown,
}

#[derive(Clone)]
enum Source {
    Generator(Generator),
    Prefix(Arc<Vec<VertexId>>),
}

#[derive(Clone)]
enum Escape {
    None,
    Claimed(EscapeFn),
    /// Derived from the exact distances along a finite prefix.
    Table(Arc<Vec<u64>>),
}

/// A one-way infinite path given by a generator, with the prefix that has
/// been checked so far.
#[derive(Clone)]
pub struct Ray {
    name: String,
    source: Source,
    verified: u64,
    metricity: Metricity,
    escape: Escape,
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ray")
            .field("name", &self.name)
            .field("verified_prefix", &self.verified)
            .field("metricity", &self.metricity)
            .finish()
    }
}

impl Ray {
    pub fn new(name: impl Into<String>, generator: impl Fn(u64) -> VertexId + Send + Sync + 'static) -> Self {
        Ray {
            name: name.into(),
            source: Source::Generator(Arc::new(generator)),
            verified: 0,
            metricity: Metricity::Unknown,
            escape: Escape::None,
        }
    }

    /// A ray known only through a finite prefix. Indices past the prefix are
    /// unavailable; escape indices are derived from the exact metric.
    pub fn from_prefix(name: impl Into<String>, prefix: Vec<VertexId>) -> Self {
        Ray {
            name: name.into(),
            source: Source::Prefix(Arc::new(prefix)),
            verified: 0,
            metricity: Metricity::Unknown,
            escape: Escape::None,
        }
    }

    pub fn with_escape(mut self, escape: impl Fn(u32) -> u64 + Send + Sync + 'static) -> Self {
        self.escape = Escape::Claimed(Arc::new(escape));
        self
    }

    /// Marks a ray whose tails have bounded diameter.
    pub fn not_metric(mut self) -> Self {
        self.metricity = Metricity::NotMetricCertified;
        self.escape = Escape::None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at(&self, i: u64) -> Option<VertexId> {
        match &self.source {
            Source::Generator(g) => Some(g(i)),
            Source::Prefix(p) => p.get(i as usize).cloned(),
        }
    }

    /// Number of indices the source can produce, if bounded.
    pub fn available(&self) -> Option<u64> {
        match &self.source {
            Source::Generator(_) => None,
            Source::Prefix(p) => Some(p.len() as u64),
        }
    }

    pub fn verified_prefix(&self) -> u64 {
        self.verified
    }

    pub fn metricity(&self) -> Metricity {
        self.metricity
    }

    pub fn is_metric(&self) -> bool {
        matches!(self.metricity, Metricity::MetricRayEvidence(_))
    }

    /// Vertices at indices `0..verified_prefix`.
    pub fn prefix(&self) -> Vec<VertexId> {
        (0..self.verified).filter_map(|i| self.at(i)).collect()
    }

    /// A checked escape index for radius `k`: every vertex from it up to the
    /// verified prefix was seen outside `K(root, k)`.
    pub fn escape_index(&self, k: u32) -> Option<u64> {
        if !self.is_metric() {
            return None;
        }
        let n = match &self.escape {
            Escape::None => return None,
            Escape::Claimed(f) => f(k),
            Escape::Table(t) => *t.get(k as usize)?,
        };
        (n < self.verified).then_some(n)
    }

    /// Copy of the ray verified up to `upto` indices.
    pub fn verified(&self, graph: &dyn LazyGraph, upto: u64) -> Result<Ray> {
        let mut r = self.clone();
        r.verify(graph, upto)?;
        Ok(r)
    }

    /// Checks adjacency and distinctness on the first `upto` indices (capped
    /// at the available prefix) and refreshes the metric evidence.
    pub fn verify(&mut self, graph: &dyn LazyGraph, upto: u64) -> Result<()> {
        let n = self.available().map_or(upto, |a| a.min(upto));
        if n <= self.verified {
            return Ok(());
        }
        let invalid = |index: u64, reason: String| Error::InvalidRay {
            name: self.name.clone(),
            index,
            reason,
        };
        let vs: Vec<VertexId> = (0..n).filter_map(|i| self.at(i)).collect();
        let mut seen = HashSet::new();
        for (i, v) in vs.iter().enumerate() {
            if !graph.contains(v) {
                return Err(invalid(i as u64, format!("{v} is not a vertex")));
            }
            if !seen.insert(v) {
                return Err(invalid(i as u64, format!("{v} repeats")));
            }
            if i > 0 && !graph.is_adjacent(&vs[i - 1], v) {
                return Err(invalid(i as u64, format!("{} and {v} are not adjacent", vs[i - 1])));
            }
        }
        self.verified = n;
        if self.metricity != Metricity::NotMetricCertified {
            self.refresh_metricity(graph, &vs)?;
        }
        Ok(())
    }

    fn refresh_metricity(&mut self, graph: &dyn LazyGraph, vs: &[VertexId]) -> Result<()> {
        let root = graph.root();
        let Some(dist) = vs
            .iter()
            .map(|v| graph.exact_metric(&root, v))
            .collect::<Option<Vec<u64>>>()
        else {
            return Ok(());
        };
        // suffix_min[i] = min distance over indices ≥ i of the prefix.
        let mut suffix_min = vec![u64::MAX; dist.len() + 1];
        for i in (0..dist.len()).rev() {
            suffix_min[i] = suffix_min[i + 1].min(dist[i]);
        }
        let n = dist.len() as u64;
        match &self.escape {
            Escape::Claimed(f) => {
                let mut best = None;
                for k in 0u32.. {
                    let e = f(k);
                    if e >= n {
                        break;
                    }
                    if suffix_min[e as usize] <= k as u64 {
                        return Err(Error::InvalidRay {
                            name: self.name.clone(),
                            index: e,
                            reason: format!("claimed escape from K(root,{k}) fails"),
                        });
                    }
                    best = Some(k);
                }
                if let Some(k) = best {
                    self.metricity = Metricity::MetricRayEvidence(k);
                }
            }
            Escape::None | Escape::Table(_) => {
                if matches!(self.source, Source::Generator(_)) {
                    return Ok(());
                }
                // Only radii escaped within the first half of the prefix count.
                let mut table = Vec::new();
                for k in 0u64.. {
                    match (0..dist.len()).find(|&i| suffix_min[i] > k) {
                        Some(i) if (i as u64) * 2 < n => table.push(i as u64),
                        _ => break,
                    }
                }
                if let Some(last) = table.len().checked_sub(1) {
                    self.metricity = Metricity::MetricRayEvidence(last as u32);
                    self.escape = Escape::Table(Arc::new(table));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;

    fn path_vertex(i: u64) -> VertexId {
        VertexId::new(format!("{i:03}"))
    }

    #[test]
    fn prefix_ray_on_path_gets_escape_table() {
        let g = FiniteGraph::path(40, 0);
        let mut r = Ray::from_prefix("p", (0..40).map(path_vertex).collect());
        r.verify(&g, 100).unwrap();
        assert_eq!(r.verified_prefix(), 40);
        assert_eq!(r.escape_index(3), Some(4));
        assert!(r.is_metric());
    }

    #[test]
    fn non_adjacent_step_is_rejected() {
        let g = FiniteGraph::path(10, 0);
        let mut r = Ray::from_prefix("bad", vec![path_vertex(0), path_vertex(2)]);
        assert!(matches!(r.verify(&g, 2), Err(Error::InvalidRay { index: 1, .. })));
    }

    #[test]
    fn false_escape_claim_is_rejected() {
        let g = FiniteGraph::path(20, 0);
        let mut r = Ray::new("p", |i| path_vertex(i.min(20))).with_escape(|k| k as u64);
        assert!(r.verify(&g, 10).is_err());
    }
}
