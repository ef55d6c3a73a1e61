use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{DegreeHint, LazyGraph, VertexId};

/// A finite connected graph given by an explicit edge list.
///
/// Neighbor streams are sorted by token. The metric is precomputed by BFS, so
/// this is only meant for small graphs.
#[derive(Debug, Clone)]
pub struct FiniteGraph {
    name: String,
    root: VertexId,
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
    dist: BTreeMap<(VertexId, VertexId), u64>,
}

impl FiniteGraph {
    /// Panics on loops, on an edge list that leaves `root` out, or on a
    /// disconnected graph.
    pub fn new(name: &str, root: &str, edges: &[(&str, &str)]) -> Self {
        let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        adjacency.entry(VertexId::new(root)).or_default();
        for &(u, v) in edges {
            assert_ne!(u, v, "loops are not allowed");
            adjacency.entry(u.into()).or_default().insert(v.into());
            adjacency.entry(v.into()).or_default().insert(u.into());
        }
        let mut dist = BTreeMap::new();
        for s in adjacency.keys() {
            let mut seen: BTreeMap<&VertexId, u64> = BTreeMap::from([(s, 0)]);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let d = seen[v];
                for w in &adjacency[v] {
                    if !seen.contains_key(w) {
                        seen.insert(w, d + 1);
                        queue.push_back(w);
                    }
                }
            }
            assert_eq!(seen.len(), adjacency.len(), "graph must be connected");
            for (t, d) in seen {
                dist.insert((s.clone(), t.clone()), d);
            }
        }
        FiniteGraph {
            name: name.to_string(),
            root: VertexId::new(root),
            adjacency,
            dist,
        }
    }

    /// Path on vertices `0..=len`, rooted at `root`.
    pub fn path(len: usize, root: usize) -> Self {
        let names: Vec<String> = (0..=len).map(|i| format!("{i:03}")).collect();
        let edges: Vec<(&str, &str)> = names
            .windows(2)
            .map(|w| (w[0].as_str(), w[1].as_str()))
            .collect();
        FiniteGraph::new(&format!("path{len}"), &names[root], &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|i| format!("{i:03}")).collect();
        let edges: Vec<(&str, &str)> = (0..n)
            .map(|i| (names[i].as_str(), names[(i + 1) % n].as_str()))
            .collect();
        FiniteGraph::new(&format!("cycle{n}"), &names[0], &edges)
    }

    pub fn triangle() -> Self {
        FiniteGraph::new("triangle", "a", &[("a", "b"), ("b", "c"), ("a", "c")])
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }
}

impl LazyGraph for FiniteGraph {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn root(&self) -> VertexId {
        self.root.clone()
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.adjacency.contains_key(v)
    }

    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        self.adjacency
            .get(v)
            .map(|n| n.iter().take(limit).cloned().collect())
            .unwrap_or_default()
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        self.adjacency.get(u).is_some_and(|n| n.contains(v))
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        DegreeHint::Finite(self.adjacency.get(v).map_or(0, BTreeSet::len))
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        self.dist.get(&(u.clone(), v.clone())).copied()
    }
}
