use std::collections::BTreeSet;
use std::sync::{Arc, LazyLock};

use proptest::prelude::*;

use endscope::cuts::{boundaries, classify_cut, Carrier, CutCandidate, CutKind, KindStatus};
use endscope::gallery::{catalog, make, GalleryGraph};
use endscope::graph::{VertexId, Window};

struct Fixture {
    g: GalleryGraph,
    w: Arc<Window>,
}

static FIXTURES: LazyLock<Vec<Fixture>> = LazyLock::new(|| {
    catalog()
        .into_iter()
        .map(|tag| {
            let g = make(tag).unwrap();
            let mut r = g.max_radius.min(4);
            let mut w = g.env().window(r).unwrap();
            while w.len() > 200 && r > 1 {
                r -= 1;
                w = g.env().window(r).unwrap();
            }
            Fixture { g, w }
        })
        .collect()
});

fn pick(w: &Window, bits: &[bool]) -> BTreeSet<VertexId> {
    (0..w.len()).filter(|&i| bits[i % bits.len()]).map(|i| w.id(i).clone()).collect()
}

/// A carrier drawn from the window: a finite set, a cofinite set, or a
/// component of a ball complement.
fn carrier(f: &Fixture, shape: u8, bits: &[bool], center: usize, r: u32) -> Carrier {
    let w = &f.w;
    match shape % 3 {
        0 => Carrier::ExplicitFinite(pick(w, bits)),
        1 => Carrier::ComplementOfFinite(pick(w, bits)),
        _ => {
            let c = center % w.len();
            let labels = w.ball_complement(c, r);
            match labels.components().get(center % labels.len().max(1)) {
                Some(comp) => Carrier::BallComplementComponent {
                    center: w.id(c).clone(),
                    radius: r,
                    fingerprint: comp.fingerprint.clone(),
                },
                None => Carrier::ExplicitFinite(pick(w, bits)),
            }
        }
    }
}

fn classify(f: &Fixture, c: &Carrier) -> CutCandidate {
    classify_cut(&f.w, c, f.g.env().cut_oracle()).unwrap()
}

fn window_members(w: &Window, c: &Carrier) -> BTreeSet<VertexId> {
    match c {
        Carrier::ExplicitFinite(s) => s.clone(),
        Carrier::ComplementOfFinite(s) => w.ids().iter().filter(|v| !s.contains(*v)).cloned().collect(),
        Carrier::BallComplementComponent { center, radius, fingerprint } => {
            let labels = w.ball_complement(w.index_of(center).unwrap(), *radius);
            let comp = labels.by_fingerprint(fingerprint).unwrap();
            comp.members.iter().map(|&i| w.id(i).clone()).collect()
        }
        _ => unreachable!(),
    }
}

fn implies(a: KindStatus, b: KindStatus) -> bool {
    a != KindStatus::YesCertified || b == KindStatus::YesCertified
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1200))]

    #[test]
    fn theta_is_outer_endpoints_of_delta(
        gi in 0usize..12, shape in any::<u8>(), bits in prop::collection::vec(any::<bool>(), 1..24),
        center in any::<usize>(), r in 0u32..3,
    ) {
        let f = &FIXTURES[gi % FIXTURES.len()];
        let c = carrier(f, shape, &bits, center, r);
        let b = boundaries(&f.w, &c).unwrap();
        let outer: BTreeSet<VertexId> = b.delta.iter().map(|(_, o)| o.clone()).collect();
        let inner: BTreeSet<VertexId> = b.delta.iter().map(|(i, _)| i.clone()).collect();
        prop_assert_eq!(&b.theta, &outer);
        prop_assert_eq!(&b.inner_theta, &inner);
        // Every crossing edge joins the inner boundary to the outer one, so
        // finite θe and Iθe bound δe.
        prop_assert!(b.delta.len() <= b.theta.len() * b.inner_theta.len());
        for (i, o) in &b.delta {
            prop_assert!(f.w.graph().is_adjacent(i, o));
        }
    }

    #[test]
    fn certified_kinds_are_ordered(
        gi in 0usize..12, shape in any::<u8>(), bits in prop::collection::vec(any::<bool>(), 1..24),
        center in any::<usize>(), r in 0u32..3,
    ) {
        let f = &FIXTURES[gi % FIXTURES.len()];
        let c = carrier(f, shape, &bits, center, r);
        let k = classify(f, &c);
        prop_assert!(implies(k.kind(CutKind::Edge), k.kind(CutKind::Vertex)), "{} {:?}", f.g.tag, k.kinds);
        prop_assert!(implies(k.kind(CutKind::Vertex), k.kind(CutKind::Metric)), "{} {:?}", f.g.tag, k.kinds);
    }

    #[test]
    fn intersection_boundary_and_kinds(
        gi in 0usize..12, s1 in any::<u8>(), s2 in any::<u8>(),
        b1 in prop::collection::vec(any::<bool>(), 1..24), b2 in prop::collection::vec(any::<bool>(), 1..24),
        c1 in any::<usize>(), c2 in any::<usize>(), r1 in 0u32..3, r2 in 0u32..3,
    ) {
        let f = &FIXTURES[gi % FIXTURES.len()];
        let e1 = carrier(f, s1, &b1, c1, r1);
        let e2 = carrier(f, s2, &b2, c2, r2);
        let m1 = window_members(&f.w, &e1);
        let m2 = window_members(&f.w, &e2);
        let meet: BTreeSet<VertexId> = m1.intersection(&m2).cloned().collect();
        let e12 = if matches!((&e1, &e2), (Carrier::ComplementOfFinite(_), Carrier::ComplementOfFinite(_))) {
            Carrier::ComplementOfFinite(f.w.ids().iter().filter(|v| !meet.contains(*v)).cloned().collect())
        } else {
            Carrier::ExplicitFinite(meet)
        };
        let t1 = boundaries(&f.w, &e1).unwrap().theta;
        let t2 = boundaries(&f.w, &e2).unwrap().theta;
        let t12 = boundaries(&f.w, &e12).unwrap().theta;
        for v in &t12 {
            prop_assert!(t1.contains(v) || t2.contains(v), "{} {v}", f.g.tag);
        }
        // Kind preservation is only meaningful when the intersection carrier is
        // exact, i.e. not a window truncation of an infinite set.
        let exact = matches!(e12, Carrier::ComplementOfFinite(_))
            || (matches!(e1, Carrier::ExplicitFinite(_)) && matches!(e2, Carrier::ExplicitFinite(_)));
        if exact {
            let k1 = classify(f, &e1);
            let k2 = classify(f, &e2);
            let k12 = classify(f, &e12);
            for kind in [CutKind::Vertex, CutKind::Edge] {
                if k1.kind(kind).is_yes() && k2.kind(kind).is_yes() {
                    prop_assert_ne!(k12.kind(kind), KindStatus::NoCertified, "{} {:?}", f.g.tag, kind);
                }
            }
        }
    }
}

#[test]
fn ladder_half_is_a_cut_of_every_kind() {
    use endscope::gallery::{GalleryTag, LadderSide};
    let g = make(GalleryTag::Ladder).unwrap();
    let w = g.env().window(6).unwrap();
    let side = LadderSide::new(true, 1, 1).unwrap().carrier();
    let k = classify_cut(&w, &side, g.env().cut_oracle()).unwrap();
    for kind in CutKind::ALL {
        assert!(k.kind(kind).is_yes(), "{kind:?}");
    }
    assert_eq!(k.theta.len(), 2);
    assert_eq!(k.delta.len(), 2);
}

#[test]
fn star_center_singleton_is_only_metric() {
    use endscope::gallery::GalleryTag;
    let g = make(GalleryTag::StarOfPaths).unwrap();
    let w = g.env().window(4).unwrap();
    let x = Carrier::ExplicitFinite([g.graph.root()].into());
    let k = classify_cut(&w, &x, g.env().cut_oracle()).unwrap();
    assert_eq!(k.kind(CutKind::Vertex), KindStatus::NoCertified);
    assert_eq!(k.kind(CutKind::Edge), KindStatus::NoCertified);
    assert_eq!(k.kind(CutKind::Metric), KindStatus::YesCertified);
}
