use endscope::ends::{classify_sequence, EndCount, EndCountStatus, Notion, Outcome};
use endscope::gallery::{catalog, make, Branching, ExpectedOutcome, GalleryTag, Generators};

fn tags() -> Vec<GalleryTag> {
    let mut t = catalog();
    t.extend([
        GalleryTag::Line,
        GalleryTag::Tree(Branching::Finite(3)),
        GalleryTag::Tree(Branching::Infinite),
        GalleryTag::FreeGroup {
            generators: Generators::Finite(1),
            r: 1,
        },
        GalleryTag::FreeGroup {
            generators: Generators::Countable,
            r: 1,
        },
    ]);
    t
}

#[test]
fn expected_verdicts_reproduce_at_stabilization_depth() {
    for tag in tags() {
        let g = make(tag).unwrap();
        let depth = g.truth.stabilization_depth;
        for e in &g.truth.expected_verdicts {
            let v = g.separate(&e.rays[0], &e.rays[1], e.notion, depth).unwrap();
            let w = g.separate(&e.rays[1], &e.rays[0], e.notion, depth).unwrap();
            let separated = v.outcome.is_separated() || w.outcome.is_separated();
            match e.outcome {
                ExpectedOutcome::Separated => {
                    assert!(separated, "{tag} {:?} {}: {v:?}", e.rays, e.notion)
                }
                ExpectedOutcome::Equivalent => assert!(
                    matches!(v.outcome, Outcome::EquivalentCertified(_)),
                    "{tag} {:?} {}: {v:?}",
                    e.rays,
                    e.notion
                ),
            }
        }
    }
}

#[test]
fn end_counts_match_truth() {
    for tag in tags() {
        let g = make(tag).unwrap();
        let depth = g.truth.stabilization_depth;
        for (&notion, &count) in &g.truth.end_counts {
            let report = g.count_ends(notion, depth).unwrap();
            match count {
                EndCount::Finite(n) => {
                    assert_eq!(report.lower_bound, n, "{tag} {notion}: {:?}", report.family);
                    assert_eq!(report.status, EndCountStatus::StabilizedCertified);
                }
                EndCount::Infinite => {
                    assert_eq!(report.status, EndCountStatus::InfiniteCertified);
                    let eligible = g
                        .rays
                        .iter()
                        .filter(|r| notion != Notion::MetricEnd || r.metricity() != endscope::ends::Metricity::NotMetricCertified)
                        .count();
                    assert!(report.lower_bound >= 2.min(eligible as u64), "{tag} {notion}");
                }
            }
        }
    }
}

#[test]
fn sequences_land_in_their_case() {
    for tag in tags() {
        let g = make(tag).unwrap();
        for s in &g.sequences {
            let c = classify_sequence(g.env(), &*s.seq, 4).unwrap_or_else(|e| panic!("{tag} {}: {e}", s.name));
            assert_eq!(c.case.label(), s.expected_case, "{tag} {}", s.name);
        }
    }
}

#[test]
fn separation_is_depth_monotone_once_certified() {
    let g = make(GalleryTag::Ladder).unwrap();
    for depth in 2..=8 {
        let v = g.separate("right-top", "left-top", Notion::VertexEnd, depth).unwrap();
        assert!(v.outcome.is_separated(), "depth {depth}");
        assert_eq!(v.depth, depth);
    }
}

#[test]
fn x2_edge_coarsening() {
    let g = make(GalleryTag::X2).unwrap();
    let v = g.separate("L1", "L2", Notion::VertexEnd, 10).unwrap();
    assert!(v.outcome.is_separated());
    let e = g.separate("L1", "L2", Notion::EdgeEnd, 10).unwrap();
    assert!(matches!(e.outcome, Outcome::EquivalentCertified(_)));
}
