//! Graphs made of finitely many hub vertices and infinite bodies (one-way
//! paths or complete graphs `K_ℕ`), each body joined to some hubs by every
//! one of its vertices. Covers `X₁`, `X₂` and the `K_ℕ` examples 5a–5c.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use super::{vertex_sequence, ExpectedOutcome, GalleryGraph, GalleryTag, GroundTruth, KnVariant};
use crate::cuts::{Carrier, CutOracle, KindTruth, Region};
use crate::ends::{EndCount, EndOracle, Notion, Ray, TailSide};
use crate::graph::{BudgetSchedule, DegreeHint, LazyGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BodyKind {
    Path,
    Complete,
}

#[derive(Debug)]
struct Body {
    /// Display name, also the name of the body's ray.
    name: &'static str,
    /// Token prefix of the body's vertices, `"{prefix}.{n}"`.
    prefix: &'static str,
    kind: BodyKind,
    hubs: Vec<usize>,
}

#[derive(Debug)]
struct Spec {
    name: &'static str,
    hubs: Vec<&'static str>,
    hub_edges: Vec<(usize, usize)>,
    bodies: Vec<Body>,
    root: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Hub(usize),
    Body(usize, u64),
}

impl Spec {
    fn parts(&self) -> usize {
        self.hubs.len() + self.bodies.len()
    }

    fn part_of(&self, n: Node) -> usize {
        match n {
            Node::Hub(h) => h,
            Node::Body(b, _) => self.hubs.len() + b,
        }
    }

    fn part_name(&self, p: usize) -> &'static str {
        match p.checked_sub(self.hubs.len()) {
            None => self.hubs[p],
            Some(b) => self.bodies[b].name,
        }
    }

    fn id(&self, n: Node) -> VertexId {
        match n {
            Node::Hub(h) => VertexId::new(self.hubs[h]),
            Node::Body(b, i) => VertexId::new(format!("{}.{i}", self.bodies[b].prefix)),
        }
    }

    fn parse(&self, v: &VertexId) -> Option<Node> {
        if let Some(h) = self.hubs.iter().position(|h| *h == v.as_str()) {
            return Some(Node::Hub(h));
        }
        let (p, i) = v.as_str().split_once('.')?;
        let b = self.bodies.iter().position(|b| b.prefix == p)?;
        let i: u64 = i.parse().ok()?;
        let n = Node::Body(b, i);
        (self.id(n) == *v).then_some(n)
    }

    fn hub_adjacent(&self, a: usize, b: usize) -> bool {
        self.hub_edges.contains(&(a.min(b), a.max(b)))
    }

    fn adjacent(&self, u: Node, v: Node) -> bool {
        match (u, v) {
            (Node::Hub(a), Node::Hub(b)) => self.hub_adjacent(a, b),
            (Node::Hub(h), Node::Body(b, _)) | (Node::Body(b, _), Node::Hub(h)) => self.bodies[b].hubs.contains(&h),
            (Node::Body(b, i), Node::Body(c, j)) => {
                b == c
                    && match self.bodies[b].kind {
                        BodyKind::Path => i.abs_diff(j) == 1,
                        BodyKind::Complete => i != j,
                    }
            }
        }
    }

    /// Adjacency between parts: hub edges and hub–body joins.
    fn part_adjacent(&self, p: usize, q: usize) -> bool {
        let h = self.hubs.len();
        match (p < h, q < h) {
            (true, true) => self.hub_adjacent(p, q),
            (true, false) => self.bodies[q - h].hubs.contains(&p),
            (false, true) => self.bodies[p - h].hubs.contains(&q),
            (false, false) => false,
        }
    }

    fn dist(&self, u: Node, v: Node) -> u64 {
        if u == v {
            return 0;
        }
        // Shortest path over the hubs plus u and v; within one body the
        // direct distance competes with detours through hubs.
        let h = self.hubs.len();
        let (iu, iv) = (h, h + 1);
        let node = |i: usize| match i {
            i if i == iu => u,
            i if i == iv => v,
            i => Node::Hub(i),
        };
        let n = h + 2;
        let mut d = vec![vec![u64::MAX / 4; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.adjacent(node(i), node(j)) {
                    d[i][j] = 1;
                }
            }
        }
        for a in 0..h {
            for b in a + 1..h {
                if self.bodies.iter().any(|body| body.hubs.contains(&a) && body.hubs.contains(&b)) {
                    d[a][b] = d[a][b].min(2);
                    d[b][a] = d[a][b];
                }
            }
        }
        if let (Node::Body(b, i), Node::Body(c, j)) = (u, v) {
            if b == c && self.bodies[b].kind == BodyKind::Path {
                d[iu][iv] = d[iu][iv].min(i.abs_diff(j));
                d[iv][iu] = d[iu][iv];
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        d[iu][iv]
    }

    /// Components of the part graph with `removed` parts and `cut` hub
    /// edges deleted; entry `p` is the component id of part `p`.
    fn part_components(&self, removed: &[bool], cut: &BTreeSet<(usize, usize)>) -> Vec<Option<usize>> {
        let n = self.parts();
        let mut comp = vec![None; n];
        let mut next = 0;
        for s in 0..n {
            if removed[s] || comp[s].is_some() {
                continue;
            }
            comp[s] = Some(next);
            let mut queue = VecDeque::from([s]);
            while let Some(p) = queue.pop_front() {
                for q in 0..n {
                    let cut_edge = p < self.hubs.len() && q < self.hubs.len() && cut.contains(&(p.min(q), p.max(q)));
                    if !removed[q] && comp[q].is_none() && self.part_adjacent(p, q) && !cut_edge {
                        comp[q] = Some(next);
                        queue.push_back(q);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    fn root_hub(&self) -> Option<usize> {
        match self.parse(&self.root)? {
            Node::Hub(h) => Some(h),
            Node::Body(..) => None,
        }
    }

    /// Parts within distance `r` of the root hub; whole bodies fall in or
    /// out together.
    fn ball_parts(&self, r: u32) -> Option<Vec<bool>> {
        let root = self.root_hub()?;
        let n = self.parts();
        let mut dist = vec![u32::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(p) = queue.pop_front() {
            for q in 0..n {
                if dist[q] == u32::MAX && self.part_adjacent(p, q) {
                    dist[q] = dist[p] + 1;
                    queue.push_back(q);
                }
            }
        }
        Some(dist.into_iter().map(|d| d <= r).collect())
    }
}

/// A union of whole parts (hubs and bodies) of a hub graph.
#[derive(Clone)]
pub struct HubSet {
    spec: Arc<Spec>,
    parts: Vec<bool>,
}

impl fmt::Debug for HubSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl HubSet {
    pub fn carrier(self) -> Carrier {
        Carrier::Shape(Arc::new(self))
    }

    /// Exact cut kinds: `θ` is infinite iff a hub inside is joined to a body
    /// outside; `δ` is infinite iff any join crosses; diameters are bounded.
    fn kinds(&self) -> KindTruth {
        let s = &self.spec;
        let h = s.hubs.len();
        let mut vertex = true;
        let mut edge = true;
        for (b, body) in s.bodies.iter().enumerate() {
            for &hub in &body.hubs {
                let (hi, bi) = (self.parts[hub], self.parts[h + b]);
                if hi != bi {
                    edge = false;
                    if hi {
                        vertex = false;
                    }
                }
            }
        }
        KindTruth {
            vertex,
            edge,
            metric: true,
        }
    }
}

impl Region for HubSet {
    fn label(&self) -> String {
        let names: Vec<&str> = (0..self.parts.len())
            .filter(|&p| self.parts[p])
            .map(|p| self.spec.part_name(p))
            .collect();
        format!("{}:{{{}}}", self.spec.name, names.join(","))
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.spec.parse(v).is_some_and(|n| self.parts[self.spec.part_of(n)])
    }

    fn boundary_radius(&self) -> Option<u32> {
        // Every vertex is within distance three of the root.
        Some(3)
    }
}

/// A hub graph as a [`LazyGraph`].
#[derive(Debug, Clone)]
pub struct HubGraph {
    spec: Arc<Spec>,
}

impl LazyGraph for HubGraph {
    fn name(&self) -> String {
        self.spec.name.into()
    }

    fn root(&self) -> VertexId {
        self.spec.root.clone()
    }

    fn contains(&self, v: &VertexId) -> bool {
        self.spec.parse(v).is_some()
    }

    fn neighbors(&self, v: &VertexId, limit: usize) -> Vec<VertexId> {
        let s = &self.spec;
        let mut out = Vec::new();
        match s.parse(v) {
            None => {}
            Some(Node::Hub(h)) => {
                out.extend((0..s.hubs.len()).filter(|&g| s.hub_adjacent(h, g)).map(Node::Hub));
                let joined: Vec<usize> = (0..s.bodies.len()).filter(|&b| s.bodies[b].hubs.contains(&h)).collect();
                if !joined.is_empty() {
                    'outer: for i in 0.. {
                        for &b in &joined {
                            if out.len() >= limit {
                                break 'outer;
                            }
                            out.push(Node::Body(b, i));
                        }
                    }
                }
            }
            Some(Node::Body(b, i)) => {
                let body = &s.bodies[b];
                out.extend(body.hubs.iter().map(|&h| Node::Hub(h)));
                match body.kind {
                    BodyKind::Path => {
                        out.extend(i.checked_sub(1).map(|j| Node::Body(b, j)));
                        out.push(Node::Body(b, i + 1));
                    }
                    BodyKind::Complete => {
                        let need = limit.saturating_sub(out.len());
                        out.extend((0..).filter(|&j| j != i).take(need).map(|j| Node::Body(b, j)));
                    }
                }
            }
        }
        out.into_iter().take(limit).map(|n| s.id(n)).collect()
    }

    fn is_adjacent(&self, u: &VertexId, v: &VertexId) -> bool {
        match (self.spec.parse(u), self.spec.parse(v)) {
            (Some(a), Some(b)) => self.spec.adjacent(a, b),
            _ => false,
        }
    }

    fn degree_hint(&self, v: &VertexId) -> DegreeHint {
        let s = &self.spec;
        match s.parse(v) {
            None => DegreeHint::Unknown,
            Some(Node::Hub(h)) => {
                if s.bodies.iter().any(|b| b.hubs.contains(&h)) {
                    DegreeHint::Infinite
                } else {
                    DegreeHint::Finite((0..s.hubs.len()).filter(|&g| s.hub_adjacent(h, g)).count())
                }
            }
            Some(Node::Body(b, i)) => match s.bodies[b].kind {
                BodyKind::Complete => DegreeHint::Infinite,
                BodyKind::Path => DegreeHint::Finite(s.bodies[b].hubs.len() + 1 + usize::from(i > 0)),
            },
        }
    }

    fn exact_metric(&self, u: &VertexId, v: &VertexId) -> Option<u64> {
        Some(self.spec.dist(self.spec.parse(u)?, self.spec.parse(v)?))
    }
}

#[derive(Debug)]
pub struct HubOracle {
    spec: Arc<Spec>,
}

impl HubOracle {
    fn set(&self, parts: Vec<bool>) -> HubSet {
        HubSet {
            spec: Arc::clone(&self.spec),
            parts,
        }
    }

    fn hub_set(&self, carrier: &Carrier) -> Option<HubSet> {
        let s = &self.spec;
        match carrier {
            Carrier::Shape(_) => carrier.shape::<HubSet>().cloned(),
            Carrier::BallComplementComponent {
                center,
                radius,
                fingerprint,
            } if *center == s.root => {
                let ball = s.ball_parts(*radius)?;
                let comp = s.part_components(&ball, &BTreeSet::new());
                let c = comp[s.part_of(s.parse(fingerprint)?)]?;
                Some(self.set(comp.iter().map(|&x| x == Some(c)).collect()))
            }
            Carrier::SeparatorSide {
                vertices,
                edges,
                anchor,
            } => {
                let mut removed = vec![false; s.parts()];
                for v in vertices {
                    match s.parse(v)? {
                        Node::Hub(h) => removed[h] = true,
                        Node::Body(..) => return None,
                    }
                }
                let mut cut = BTreeSet::new();
                for (u, v) in edges {
                    match (s.parse(u)?, s.parse(v)?) {
                        (Node::Hub(a), Node::Hub(b)) => cut.insert((a.min(b), a.max(b))),
                        _ => return None,
                    };
                }
                let a = s.part_of(s.parse(anchor)?);
                if removed[a] {
                    return None;
                }
                let comp = s.part_components(&removed, &cut);
                Some(self.set(comp.iter().map(|&x| x == comp[a]).collect()))
            }
            _ => None,
        }
    }

    /// `K(root, 0)*` when the root lies inside a complete body (example 5a).
    fn punctured_body(&self, carrier: &Carrier) -> bool {
        matches!(carrier, Carrier::BallComplementComponent { center, radius: 0, .. }
            if *center == self.spec.root && self.spec.root_hub().is_none())
    }

    fn body_named(&self, ray: &str) -> Option<usize> {
        self.spec.bodies.iter().position(|b| b.name == base(ray))
    }

    /// Whether bodies `a` and `b` lie on different sides of some partition
    /// into unions of parts with the required boundary finite.
    fn separable(&self, a: usize, b: usize, notion: Notion) -> bool {
        let s = &self.spec;
        let h = s.hubs.len();
        let n = s.parts();
        (0u32..1 << n).any(|mask| {
            let parts: Vec<bool> = (0..n).map(|p| mask >> p & 1 == 1).collect();
            if !parts[h + a] || parts[h + b] {
                return false;
            }
            let k = self.set(parts).kinds();
            match notion {
                Notion::VertexEnd => k.vertex,
                Notion::EdgeEnd => k.edge,
                Notion::MetricEnd => false,
            }
        })
    }
}

impl CutOracle for HubOracle {
    fn certify(&self, carrier: &Carrier) -> Option<KindTruth> {
        if self.punctured_body(carrier) {
            return Some(KindTruth {
                vertex: true,
                edge: false,
                metric: true,
            });
        }
        self.hub_set(carrier).map(|h| h.kinds())
    }

    fn contains(&self, carrier: &Carrier, v: &VertexId) -> Option<bool> {
        if self.punctured_body(carrier) {
            return Some(self.spec.parse(v).is_some() && *v != self.spec.root);
        }
        self.hub_set(carrier).map(|h| h.contains(v))
    }

    fn resolve(&self, carrier: &Carrier) -> Option<Carrier> {
        self.hub_set(carrier).map(HubSet::carrier)
    }
}

impl EndOracle for HubOracle {
    fn tag(&self) -> String {
        format!("oracle:{}", self.spec.name)
    }

    fn tail_side(&self, ray: &str, carrier: &Carrier) -> Option<TailSide> {
        let b = self.body_named(ray)?;
        if self.punctured_body(carrier) {
            return Some(TailSide::Inside { from: 1 });
        }
        let set = self.hub_set(carrier)?;
        Some(if set.parts[self.spec.hubs.len() + b] {
            TailSide::Inside { from: 0 }
        } else {
            TailSide::Outside { from: 0 }
        })
    }

    fn equivalent(&self, a: &str, b: &str, notion: Notion) -> Option<bool> {
        if notion == Notion::MetricEnd {
            return None;
        }
        let (ba, bb) = (self.body_named(base(a))?, self.body_named(base(b))?);
        Some(ba == bb || !self.separable(ba, bb, notion))
    }

    fn canonical_cuts(&self, _depth: u32) -> Vec<Carrier> {
        let n = self.spec.parts();
        let mut masks: Vec<u32> = (1u32..(1 << n) - 1).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        masks
            .into_iter()
            .map(|m| self.set((0..n).map(|p| m >> p & 1 == 1).collect()).carrier())
            .collect()
    }

    fn ball_component_key(&self, radius: u32, v: &VertexId) -> Option<String> {
        let s = &self.spec;
        let node = s.parse(v)?;
        if s.root_hub().is_none() {
            return (radius == 0 && *v != s.root).then(|| "punctured".into());
        }
        let ball = s.ball_parts(radius)?;
        let p = s.part_of(node);
        if ball[p] {
            return None;
        }
        let comp = s.part_components(&ball, &BTreeSet::new());
        let names: Vec<&str> = (0..s.parts()).filter(|&q| comp[q] == comp[p]).map(|q| s.part_name(q)).collect();
        Some(names.join("+"))
    }
}

/// Ray names are body names, optionally with a suffix after `'`.
fn base(ray: &str) -> &str {
    ray.split('\'').next().unwrap_or(ray)
}

fn body(name: &'static str, prefix: &'static str, kind: BodyKind, hubs: &[usize]) -> Body {
    Body {
        name,
        prefix,
        kind,
        hubs: hubs.to_vec(),
    }
}

struct Plan {
    tag: GalleryTag,
    spec: Spec,
    vertex: u64,
    edge: u64,
}

fn assemble(plan: Plan) -> GalleryGraph {
    let spec = Arc::new(plan.spec);
    let graph = HubGraph { spec: Arc::clone(&spec) };
    let oracle = HubOracle { spec: Arc::clone(&spec) };
    let mut rays = Vec::new();
    for (b, body) in spec.bodies.iter().enumerate() {
        let s = Arc::clone(&spec);
        rays.push(Ray::new(body.name, move |i| s.id(Node::Body(b, i))).not_metric());
        if body.kind == BodyKind::Complete {
            let s = Arc::clone(&spec);
            let name = format!("{}'odd", body.name);
            rays.push(Ray::new(name, move |i| s.id(Node::Body(b, 2 * i + 1))).not_metric());
        }
    }
    let mut truth = GroundTruth::new(
        [
            Some(EndCount::Finite(plan.vertex)),
            Some(EndCount::Finite(plan.edge)),
            Some(EndCount::Finite(0)),
        ],
        4,
    );
    let names: Vec<&str> = rays.iter().map(Ray::name).collect();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            for notion in [Notion::VertexEnd, Notion::EdgeEnd] {
                let eq = oracle.equivalent(a, b, notion).expect("hub rays are known");
                let outcome = if eq {
                    ExpectedOutcome::Equivalent
                } else {
                    ExpectedOutcome::Separated
                };
                truth = truth.expect(a, b, &[notion], outcome);
            }
        }
    }
    let first = &spec.bodies[0];
    let s = Arc::clone(&spec);
    let sequences = vec![vertex_sequence(
        &format!("distinct-{}", first.name),
        "LocalEnd",
        move |i| s.id(Node::Body(0, i)),
    )];
    GalleryGraph::assemble(
        plan.tag,
        Arc::new(graph),
        Arc::new(oracle),
        truth,
        rays,
        sequences,
        BudgetSchedule::default(),
        32,
    )
}

/// Two hubs `x₁ ~ x₂`; `L₁` joined to `x₁`, `L₂` joined to `x₂`.
pub(super) fn build_x1() -> GalleryGraph {
    assemble(Plan {
        tag: GalleryTag::X1,
        spec: Spec {
            name: "x1",
            hubs: vec!["x1", "x2"],
            hub_edges: vec![(0, 1)],
            bodies: vec![
                body("L1", "r1", BodyKind::Path, &[0]),
                body("L2", "r2", BodyKind::Path, &[1]),
            ],
            root: VertexId::new("x1"),
        },
        vertex: 2,
        edge: 2,
    })
}

/// One hub `x` joined to both paths.
pub(super) fn build_x2() -> GalleryGraph {
    assemble(Plan {
        tag: GalleryTag::X2,
        spec: Spec {
            name: "x2",
            hubs: vec!["x"],
            hub_edges: vec![],
            bodies: vec![
                body("L1", "r1", BodyKind::Path, &[0]),
                body("L2", "r2", BodyKind::Path, &[0]),
            ],
            root: VertexId::new("x"),
        },
        vertex: 2,
        edge: 1,
    })
}

/// A single `K_ℕ`.
pub(super) fn build_5a() -> GalleryGraph {
    assemble(Plan {
        tag: GalleryTag::KnChain(KnVariant::A),
        spec: Spec {
            name: "kn-5a",
            hubs: vec![],
            hub_edges: vec![],
            bodies: vec![body("K1", "k1", BodyKind::Complete, &[])],
            root: VertexId::new("k1.0"),
        },
        vertex: 1,
        edge: 1,
    })
}

/// Two copies of `K_ℕ` hanging off adjacent hubs, as in `X₁`.
pub(super) fn build_5b() -> GalleryGraph {
    assemble(Plan {
        tag: GalleryTag::KnChain(KnVariant::B),
        spec: Spec {
            name: "kn-5b",
            hubs: vec!["x1", "x2"],
            hub_edges: vec![(0, 1)],
            bodies: vec![
                body("K1", "k1", BodyKind::Complete, &[0]),
                body("K2", "k2", BodyKind::Complete, &[1]),
            ],
            root: VertexId::new("x1"),
        },
        vertex: 2,
        edge: 2,
    })
}

/// Two copies of `K_ℕ` sharing one hub, as in `X₂`.
pub(super) fn build_5c() -> GalleryGraph {
    assemble(Plan {
        tag: GalleryTag::KnChain(KnVariant::C),
        spec: Spec {
            name: "kn-5c",
            hubs: vec!["x"],
            hub_edges: vec![],
            bodies: vec![
                body("K1", "k1", BodyKind::Complete, &[0]),
                body("K2", "k2", BodyKind::Complete, &[0]),
            ],
            root: VertexId::new("x"),
        },
        vertex: 2,
        edge: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of classes of bodies under the oracle's equivalence.
    fn classes(g: &GalleryGraph, notion: Notion) -> u64 {
        let names: Vec<&str> = g.rays.iter().map(Ray::name).collect();
        let mut reps: Vec<&str> = Vec::new();
        for n in names {
            if !reps.iter().any(|r| g.oracle.equivalent(r, n, notion) == Some(true)) {
                reps.push(n);
            }
        }
        reps.len() as u64
    }

    #[test]
    fn registry_counts_match_part_brute_force() {
        for g in [build_x1(), build_x2(), build_5a(), build_5b(), build_5c()] {
            for notion in [Notion::VertexEnd, Notion::EdgeEnd] {
                assert_eq!(
                    g.truth.end_counts[&notion],
                    EndCount::Finite(classes(&g, notion)),
                    "{} {notion}",
                    g.tag
                );
            }
        }
    }

    #[test]
    fn x1_metric() {
        let g = build_x1();
        let d = |a: &str, b: &str| g.graph.exact_metric(&VertexId::new(a), &VertexId::new(b));
        assert_eq!(d("r1.0", "r1.5"), Some(2));
        assert_eq!(d("r1.0", "r1.1"), Some(1));
        assert_eq!(d("r1.3", "r2.3"), Some(3));
        assert_eq!(d("x2", "r1.7"), Some(2));
    }
}
