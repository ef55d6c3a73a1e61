use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{BudgetSchedule, DegreeHint, LazyGraph, UnionFind, VertexId};
use crate::error::{Error, Result};

const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Enumeration {
    /// Every neighbor has been enumerated and lies in the window.
    Complete,
    /// The neighbor stream was cut off after this many entries.
    TruncatedAt(usize),
    /// The vertex sits on the outer sphere; neighbors beyond it were not added.
    Unexpanded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Certainty {
    Exact,
    LowerBound,
    UpperBound,
}

/// A distance or diameter together with how much of it is known.
///
/// `value == None` stands for an infinite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiameterEstimate {
    pub value: Option<u64>,
    pub certainty: Certainty,
}

impl DiameterEstimate {
    pub fn exact(value: u64) -> Self {
        DiameterEstimate {
            value: Some(value),
            certainty: Certainty::Exact,
        }
    }

    pub fn upper(value: u64) -> Self {
        DiameterEstimate {
            value: Some(value),
            certainty: Certainty::UpperBound,
        }
    }

    pub fn is_exact_finite(&self) -> bool {
        self.certainty == Certainty::Exact && self.value.is_some()
    }
}

impl fmt::Display for DiameterEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "{v} ({:?})", self.certainty),
            None => write!(f, "inf ({:?})", self.certainty),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Openness {
    /// No member is on the frontier: the component is a full component of the
    /// complement in the whole graph.
    Closed,
    /// Touches the frontier; it may grow or merge with others later.
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Smallest token among the members.
    pub fingerprint: VertexId,
    pub openness: Openness,
    /// Window indices, ascending.
    pub members: Vec<usize>,
}

/// Connected components of a window with some vertex set removed.
#[derive(Debug, Clone, Default)]
pub struct ComponentLabeling {
    pub labels: BTreeMap<VertexId, VertexId>,
    pub openness: BTreeMap<VertexId, Openness>,
    components: Vec<Component>,
    by_index: Vec<Option<usize>>,
}

impl ComponentLabeling {
    /// Components sorted by fingerprint.
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, idx: usize) -> Option<&Component> {
        self.by_index
            .get(idx)
            .copied()
            .flatten()
            .map(|c| &self.components[c])
    }

    pub fn by_fingerprint(&self, fingerprint: &VertexId) -> Option<&Component> {
        self.components
            .iter()
            .find(|c| &c.fingerprint == fingerprint)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Finite induced piece of a [`LazyGraph`] around an origin, built by a
/// budgeted breadth-first search.
///
/// Immutable once built.
#[derive(Clone)]
pub struct Window {
    graph: Arc<dyn LazyGraph>,
    radius: u32,
    budget: BudgetSchedule,
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    adj: Vec<Vec<usize>>,
    status: Vec<Enumeration>,
    depth: Vec<u32>,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window")
            .field("graph", &self.graph.name())
            .field("origin", &self.ids[0])
            .field("radius", &self.radius)
            .field("vertices", &self.ids.len())
            .finish()
    }
}

/// Explores the ball of the given radius around the graph's root.
pub fn explore(graph: Arc<dyn LazyGraph>, radius: u32, budget: BudgetSchedule) -> Result<Window> {
    let root = graph.root();
    explore_from(graph, root, radius, budget)
}

/// Explores the ball of the given radius around `origin`.
///
/// Each vertex enumerates at most `budget.at(radius)` neighbors, so larger
/// radii also see further into infinite neighbor streams.
pub fn explore_from(
    graph: Arc<dyn LazyGraph>,
    origin: VertexId,
    radius: u32,
    budget: BudgetSchedule,
) -> Result<Window> {
    budget.validate()?;
    if !graph.contains(&origin) {
        return Err(Error::NotExplored(origin));
    }
    let per_vertex = budget.at(radius);
    let mut ids = vec![origin.clone()];
    let mut index = HashMap::from([(origin, 0usize)]);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    let mut status = vec![Enumeration::Unexpanded];
    let mut depth = vec![0u32];
    let mut open = vec![false];

    let mut head = 0;
    while head < ids.len() {
        let v = head;
        head += 1;
        let hint = graph.degree_hint(&ids[v]);
        if per_vertex == usize::MAX && !matches!(hint, DegreeHint::Finite(_)) {
            return Err(Error::InvalidConfig(format!(
                "unlimited budget cannot enumerate vertex {} of unbounded degree",
                ids[v]
            )));
        }
        let nbrs = graph.neighbors(&ids[v], per_vertex);
        let exhausted = nbrs.len() < per_vertex
            || matches!(hint, DegreeHint::Finite(n) if n <= nbrs.len());
        open[v] = !exhausted;
        if depth[v] < radius {
            for w in nbrs {
                if w == ids[v] {
                    continue;
                }
                let j = match index.get(&w) {
                    Some(&j) => j,
                    None => {
                        let j = ids.len();
                        index.insert(w.clone(), j);
                        ids.push(w);
                        adj.push(Vec::new());
                        status.push(Enumeration::Unexpanded);
                        depth.push(depth[v] + 1);
                        open.push(false);
                        j
                    }
                };
                adj[v].push(j);
                adj[j].push(v);
            }
            status[v] = if exhausted {
                Enumeration::Complete
            } else {
                Enumeration::TruncatedAt(per_vertex)
            };
        } else {
            let mut all_inside = exhausted;
            for w in nbrs {
                match index.get(&w) {
                    Some(&j) if j != v => {
                        adj[v].push(j);
                        adj[j].push(v);
                    }
                    Some(_) => {}
                    None => all_inside = false,
                }
            }
            if all_inside {
                status[v] = Enumeration::Complete;
            }
        }
    }
    // The window is induced: edges the budget cut off from a stream are
    // recovered by adjacency tests.
    for v in (0..ids.len()).filter(|&v| open[v]) {
        for w in 0..ids.len() {
            if w != v && !(open[w] && w < v) && graph.is_adjacent(&ids[v], &ids[w]) {
                adj[v].push(w);
                adj[w].push(v);
            }
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    Ok(Window {
        graph,
        radius,
        budget,
        ids,
        index,
        adj,
        status,
        depth,
    })
}

impl Window {
    pub fn graph(&self) -> &Arc<dyn LazyGraph> {
        &self.graph
    }

    pub fn origin(&self) -> &VertexId {
        &self.ids[0]
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn budget(&self) -> BudgetSchedule {
        self.budget
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, idx: usize) -> &VertexId {
        &self.ids[idx]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    /// Index of `v`, or a not-explored error.
    pub fn require(&self, v: &VertexId) -> Result<usize> {
        self.index_of(v).ok_or_else(|| Error::NotExplored(v.clone()))
    }

    pub fn neighbors(&self, idx: usize) -> &[usize] {
        &self.adj[idx]
    }

    pub fn status(&self, idx: usize) -> Enumeration {
        self.status[idx]
    }

    pub fn is_frontier(&self, idx: usize) -> bool {
        self.status[idx] != Enumeration::Complete
    }

    /// Breadth-first depth of `idx` below the origin inside the window.
    pub fn depth_of(&self, idx: usize) -> u32 {
        self.depth[idx]
    }

    pub fn frontier(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = (0..self.len())
            .filter(|&i| self.is_frontier(i))
            .map(|i| self.ids[i].clone())
            .collect();
        out.sort();
        out
    }

    pub fn is_fully_explored(&self) -> bool {
        self.status.iter().all(|s| *s == Enumeration::Complete)
    }

    /// Explored edges as sorted token pairs.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (i, list) in self.adj.iter().enumerate() {
            for &j in list {
                if i < j {
                    let (a, b) = (&self.ids[i], &self.ids[j]);
                    out.push(if a <= b {
                        (a.clone(), b.clone())
                    } else {
                        (b.clone(), a.clone())
                    });
                }
            }
        }
        out.sort();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Window distances from `source`; `u32::MAX` marks unreachable vertices.
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        self.bfs_multi(&[source])
    }

    pub fn bfs_multi(&self, sources: &[usize]) -> Vec<u32> {
        let mut dist = vec![UNREACHED; self.len()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == UNREACHED {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Smallest window distance at which a non-complete vertex occurs.
    /// Window distances up to this value are true graph distances.
    pub(crate) fn certified_radius(&self, dist: &[u32]) -> u32 {
        (0..self.len())
            .filter(|&i| self.is_frontier(i))
            .map(|i| dist[i])
            .min()
            .unwrap_or(UNREACHED)
    }

    pub fn distance(&self, x: &VertexId, y: &VertexId) -> Result<DiameterEstimate> {
        let i = self.require(x)?;
        let j = self.require(y)?;
        Ok(self.distance_idx(i, j))
    }

    pub fn distance_idx(&self, i: usize, j: usize) -> DiameterEstimate {
        if i == j {
            return DiameterEstimate::exact(0);
        }
        if let Some(d) = self.graph.exact_metric(&self.ids[i], &self.ids[j]) {
            return DiameterEstimate::exact(d);
        }
        let dist = self.bfs(i);
        let d = dist[j];
        if d <= self.certified_radius(&dist) {
            DiameterEstimate::exact(d as u64)
        } else {
            DiameterEstimate::upper(d as u64)
        }
    }

    /// Maximum pairwise distance, with the weakest certainty of any pair.
    /// The empty set has diameter 0.
    pub fn set_diameter<'a, I>(&self, set: I) -> Result<DiameterEstimate>
    where
        I: IntoIterator<Item = &'a VertexId>,
    {
        let idx = set
            .into_iter()
            .map(|v| self.require(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.set_diameter_idx(&idx))
    }

    pub fn set_diameter_idx(&self, set: &[usize]) -> DiameterEstimate {
        let mut set = set.to_vec();
        set.sort_unstable();
        set.dedup();
        let mut best = 0u64;
        let mut certainty = Certainty::Exact;
        for (a, &s) in set.iter().enumerate() {
            let rest = &set[a + 1..];
            if rest.is_empty() {
                break;
            }
            let exact: Option<Vec<u64>> = rest
                .iter()
                .map(|&t| self.graph.exact_metric(&self.ids[s], &self.ids[t]))
                .collect();
            match exact {
                Some(ds) => best = best.max(ds.into_iter().max().unwrap_or(0)),
                None => {
                    let dist = self.bfs(s);
                    let certified = self.certified_radius(&dist);
                    for &t in rest {
                        let d = dist[t];
                        if d > certified {
                            certainty = Certainty::UpperBound;
                        }
                        best = best.max(d as u64);
                    }
                }
            }
        }
        DiameterEstimate {
            value: Some(best),
            certainty,
        }
    }

    /// Membership mask of the closed ball `K(center, r)` restricted to the
    /// window, and whether the mask is the whole ball.
    pub fn ball(&self, center: usize, r: u32) -> (Vec<bool>, bool) {
        let dist = self.bfs(center);
        let whole = self.certified_radius(&dist) >= r;
        let c = &self.ids[center];
        let mask = (0..self.len())
            .map(|i| match self.graph.exact_metric(c, &self.ids[i]) {
                Some(d) => d <= r as u64,
                None => dist[i] <= r,
            })
            .collect();
        (mask, whole)
    }

    /// Components of the window with the vertices flagged in `removed` taken
    /// out.
    pub fn components_excluding(&self, removed: &[bool]) -> ComponentLabeling {
        let n = self.len();
        let mut uf = UnionFind::new(n);
        for v in 0..n {
            if removed[v] {
                continue;
            }
            for &w in &self.adj[v] {
                if !removed[w] {
                    uf.union(v, w);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in (0..n).filter(|&v| !removed[v]) {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut components: Vec<Component> = groups
            .into_values()
            .map(|members| {
                let fingerprint = members
                    .iter()
                    .map(|&m| &self.ids[m])
                    .min()
                    .cloned()
                    .expect("components are non-empty");
                let openness = if members.iter().any(|&m| self.is_frontier(m)) {
                    Openness::Open
                } else {
                    Openness::Closed
                };
                Component {
                    fingerprint,
                    openness,
                    members,
                }
            })
            .collect();
        components.sort_by(|a, b| a.fingerprint.cmp(&b.fingerprint));
        let mut by_index = vec![None; n];
        let mut labels = BTreeMap::new();
        let mut openness = BTreeMap::new();
        for (c, comp) in components.iter().enumerate() {
            openness.insert(comp.fingerprint.clone(), comp.openness);
            for &m in &comp.members {
                by_index[m] = Some(c);
                labels.insert(self.ids[m].clone(), comp.fingerprint.clone());
            }
        }
        ComponentLabeling {
            labels,
            openness,
            components,
            by_index,
        }
    }

    pub fn components_of_complement(&self, e: &BTreeSet<VertexId>) -> Result<ComponentLabeling> {
        let mut removed = vec![false; self.len()];
        for v in e {
            removed[self.require(v)?] = true;
        }
        Ok(self.components_excluding(&removed))
    }

    /// Components of the complement of the ball `K(center, r)`.
    pub fn ball_complement(&self, center: usize, r: u32) -> ComponentLabeling {
        let (ball, _) = self.ball(center, r);
        self.components_excluding(&ball)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FiniteGraph;

    fn window_of(g: FiniteGraph, radius: u32) -> Window {
        explore(Arc::new(g), radius, BudgetSchedule::Unlimited).unwrap()
    }

    #[test]
    fn radius_zero_is_the_root() {
        let w = window_of(FiniteGraph::path(6, 3), 0);
        assert_eq!(w.len(), 1);
        assert_eq!(w.frontier(), vec![VertexId::new("003")]);
    }

    #[test]
    fn finite_graph_is_fully_explored() {
        let w = window_of(FiniteGraph::triangle(), 3);
        assert!(w.is_fully_explored());
        assert_eq!(w.edge_count(), 3);
        let all: Vec<VertexId> = w.ids().to_vec();
        assert_eq!(w.set_diameter(&all).unwrap(), DiameterEstimate::exact(1));
    }

    #[test]
    fn dead_end_on_the_sphere_is_complete() {
        // 0-1-2 rooted at 0, radius 2: vertex 2 has no outward neighbors.
        let w = window_of(FiniteGraph::path(2, 0), 2);
        assert!(w.is_fully_explored());
    }

    #[test]
    fn window_distance_certainty() {
        let g = Arc::new(FiniteGraph::cycle(10));
        let w = explore(g, 3, BudgetSchedule::Unlimited).unwrap();
        // The window only sees one side of the cycle; distances come from the
        // closed-form metric.
        let dist = w.bfs(0);
        assert!(dist.iter().all(|&d| d <= 3));
        let d = w.distance(&"003".into(), &"007".into()).unwrap();
        assert_eq!(d, DiameterEstimate::exact(4));
    }

    #[test]
    fn unknown_vertex_is_not_explored() {
        let w = window_of(FiniteGraph::path(4, 0), 1);
        assert!(matches!(
            w.distance(&"000".into(), &"004".into()),
            Err(Error::NotExplored(_))
        ));
    }

    #[test]
    fn empty_set_has_zero_diameter() {
        let w = window_of(FiniteGraph::path(4, 0), 1);
        assert_eq!(w.set_diameter_idx(&[]), DiameterEstimate::exact(0));
    }

    #[test]
    fn components_of_path_minus_middle() {
        let w = window_of(FiniteGraph::path(10, 5), 10);
        let (ball, whole) = w.ball(0, 1);
        assert!(whole);
        let labeling = w.components_excluding(&ball);
        assert_eq!(labeling.len(), 2);
        for c in labeling.components() {
            assert_eq!(c.openness, Openness::Closed);
            assert_eq!(c.members.len(), 4);
        }
        let empty = w.components_of_complement(&BTreeSet::new()).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty.components()[0].members.len(), 11);
    }
}
