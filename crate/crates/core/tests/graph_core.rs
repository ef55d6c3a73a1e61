use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use proptest::prelude::*;

use endscope::gallery::{catalog, make, Branching, GalleryTag, Generators, Ladder, StarOfPaths};
use endscope::graph::{explore, BudgetSchedule, Certainty, Enumeration, LazyGraph, VertexId};

fn v(s: &str) -> VertexId {
    VertexId::new(s)
}

/// Plain BFS over the neighbor streams, independent of `Window`.
fn brute_ball(g: &dyn LazyGraph, radius: u32, limit: usize) -> BTreeMap<VertexId, u32> {
    let mut dist = BTreeMap::from([(g.root(), 0)]);
    let mut queue = VecDeque::from([g.root()]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d == radius {
            continue;
        }
        for w in g.neighbors(&u, limit) {
            dist.entry(w.clone()).or_insert_with(|| {
                queue.push_back(w);
                d + 1
            });
        }
    }
    dist
}

#[test]
fn radius_zero_is_the_root() {
    let w = explore(Arc::new(Ladder), 0, BudgetSchedule::Unlimited).unwrap();
    assert_eq!(w.ids(), &[v("0t")]);
    assert_eq!(w.frontier(), vec![v("0t")]);
}

#[test]
fn ladder_radius_two() {
    let w = explore(Arc::new(Ladder), 2, BudgetSchedule::Unlimited).unwrap();
    let got: BTreeSet<_> = w.ids().iter().cloned().collect();
    let want: BTreeSet<_> = ["-2t", "-1t", "0t", "1t", "2t", "-1b", "0b", "1b"].into_iter().map(v).collect();
    assert_eq!(got, want);
    assert_eq!(brute_ball(&Ladder, 2, 16).len(), 8);
}

#[test]
fn ladder_distance_and_diameter() {
    let w = explore(Arc::new(Ladder), 6, BudgetSchedule::Unlimited).unwrap();
    let d = w.distance(&v("0t"), &v("3b")).unwrap();
    assert_eq!((d.value, d.certainty), (Some(4), Certainty::Exact));
    let z = w.distance(&v("2b"), &v("2b")).unwrap();
    assert_eq!((z.value, z.certainty), (Some(0), Certainty::Exact));
    let diam = w.set_diameter([v("-2t"), v("0b"), v("3b")].iter()).unwrap();
    assert_eq!(diam.value, Some(6));
    assert!(w.distance(&v("0t"), &v("40t")).is_err());
}

#[test]
fn star_budget_truncates_the_center() {
    let w = explore(Arc::new(StarOfPaths), 1, BudgetSchedule::Constant(5)).unwrap();
    assert_eq!(w.len(), 6);
    assert_eq!(w.status(w.index_of(&v("x")).unwrap()), Enumeration::TruncatedAt(5));
    assert!(w.frontier().contains(&v("x")));
}

#[test]
fn zero_budget_is_rejected() {
    assert!(explore(Arc::new(Ladder), 2, BudgetSchedule::Constant(0)).is_err());
    assert!("0".parse::<BudgetSchedule>().is_err());
}

#[test]
fn windows_agree_with_brute_force_balls() {
    let locally_finite = [
        GalleryTag::Ladder,
        GalleryTag::Line,
        GalleryTag::Tree(Branching::Finite(2)),
        GalleryTag::FreeGroup { generators: Generators::Finite(2), r: 1 },
    ];
    for tag in locally_finite {
        let g = make(tag).unwrap();
        let w = explore(Arc::clone(&g.graph), 5, BudgetSchedule::Unlimited).unwrap();
        let brute = brute_ball(&*g.graph, 5, usize::MAX);
        let got: BTreeSet<_> = w.ids().iter().cloned().collect();
        assert_eq!(got, brute.keys().cloned().collect(), "{tag}");
        let root = w.index_of(&g.graph.root()).unwrap();
        let bfs = w.bfs(root);
        for (u, &d) in &brute {
            assert_eq!(bfs[w.index_of(u).unwrap()], d, "{tag} {u}");
        }
    }
}

#[test]
fn exact_metric_matches_window_bfs() {
    for tag in catalog() {
        let g = make(tag).unwrap();
        let w = g.env().window(g.max_radius.min(4)).unwrap();
        // Pairs whose geodesics stay inside the window: both ends within half
        // the radius of the root.
        let root = w.index_of(&g.graph.root()).unwrap();
        let near: Vec<usize> = (0..w.len()).filter(|&i| 2 * w.bfs(root)[i] <= w.radius()).collect();
        for &i in &near {
            let bfs = w.bfs(i);
            for &j in &near {
                if let Some(m) = g.graph.exact_metric(w.id(i), w.id(j)) {
                    assert_eq!(m, u64::from(bfs[j]), "{tag} {} {}", w.id(i), w.id(j));
                }
            }
        }
    }
}

#[test]
fn components_of_ball_complements_in_ladder() {
    let w = explore(Arc::new(Ladder), 6, BudgetSchedule::Unlimited).unwrap();
    let labels = w.ball_complement(w.index_of(&v("0t")).unwrap(), 1);
    let fps: Vec<_> = labels.components().iter().map(|c| c.fingerprint.clone()).collect();
    assert_eq!(fps, vec![v("-1b"), v("1b")]);
}

proptest! {
    #[test]
    fn ladder_distance_closed_form(a in -3i64..=3, b in -3i64..=3, ta: bool, tb: bool) {
        let w = explore(Arc::new(Ladder), 8, BudgetSchedule::Unlimited).unwrap();
        let name = |n: i64, t: bool| v(&format!("{n}{}", if t { 't' } else { 'b' }));
        let d = w.distance(&name(a, ta), &name(b, tb)).unwrap();
        prop_assert_eq!(d.value, Some(a.abs_diff(b) + u64::from(ta != tb)));
    }

    #[test]
    fn fingerprints_are_minimal_members(c in 0usize..16, r in 0u32..3) {
        let w = explore(Arc::new(Ladder), 4, BudgetSchedule::Unlimited).unwrap();
        let labels = w.ball_complement(c % w.len(), r);
        for comp in labels.components() {
            let min = comp.members.iter().map(|&i| w.id(i)).min().unwrap();
            prop_assert_eq!(min, &comp.fingerprint);
        }
    }
}
