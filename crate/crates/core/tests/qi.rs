use std::collections::BTreeSet;

use endscope::cuts::Carrier;
use endscope::gallery::{make, GalleryTag, LadderSide};
use endscope::graph::VertexId;
use endscope::qi::{fatten, preimage_check, quasi_open_check, Axiom, OpenOutcome, QiPreset, QiVerdict, QuasiIsometry};

fn ids<I: IntoIterator<Item = S>, S: Into<String>>(v: I) -> BTreeSet<VertexId> {
    v.into_iter().map(VertexId::new).collect()
}

#[test]
fn presets_pass_and_mutant_fails() {
    for p in [QiPreset::Tree2Identity, QiPreset::LadderLine, QiPreset::FreeR1R3] {
        let qi = QuasiIsometry::preset(p).unwrap();
        let r = qi.verify(4, 500, 1).unwrap();
        assert_eq!(r.verdict, QiVerdict::NoViolationFound, "{p}: {:?}", r.violations.first());
        assert!(r.checked_pairs >= 2000, "{p}: {}", r.checked_pairs);
    }
    let qi = QuasiIsometry::preset(QiPreset::ConstantMutant).unwrap();
    let r = qi.verify(4, 500, 1).unwrap();
    assert_eq!(r.verdict, QiVerdict::Violated);
    assert!(r.violations.iter().any(|v| v.axiom == Axiom::Q3));
}

#[test]
fn verification_is_deterministic() {
    let qi = QuasiIsometry::preset(QiPreset::ConstantMutant).unwrap();
    let a = qi.verify(4, 100, 9).unwrap();
    let b = qi.verify(4, 100, 9).unwrap();
    assert_eq!(a.violations, b.violations);
}

#[test]
fn diameter_transfer_holds_on_presets() {
    for p in [QiPreset::Tree2Identity, QiPreset::LadderLine, QiPreset::FreeR1R3] {
        let r = QuasiIsometry::preset(p).unwrap().diameter_transfer_check(4, 200, 3).unwrap();
        assert_eq!(r.sets_checked, 200);
        assert!(r.violations.is_empty(), "{p}");
    }
}

#[test]
fn mapped_rays() {
    let qi = QuasiIsometry::preset(QiPreset::LadderLine).unwrap();
    let img = qi.map_ray(qi.x.ray("right-bottom").unwrap(), 4).unwrap();
    for i in 0..20 {
        assert_eq!(img.at(i), Some(VertexId::new(i.to_string())));
    }
    let id = QuasiIsometry::identity(make(GalleryTag::Ladder).unwrap());
    let r = id.x.ray("left-top").unwrap();
    let img = id.map_ray(r, 4).unwrap();
    for i in 0..20 {
        assert_eq!(img.at(i), r.at(i));
    }
    let free = QuasiIsometry::preset(QiPreset::FreeR1R3).unwrap();
    let img = free.map_ray(free.x.ray("g1").unwrap(), 4).unwrap();
    assert_eq!(img.at(6).unwrap().as_str(), "g1g1g1g1g1g1");
    assert!(img.is_metric());
}

#[test]
fn end_correspondence_on_presets() {
    for p in [QiPreset::Tree2Identity, QiPreset::LadderLine, QiPreset::FreeR1R3] {
        let qi = QuasiIsometry::preset(p).unwrap();
        let rows = qi.end_correspondence(3).unwrap();
        assert!(!rows.is_empty(), "{p}");
        for row in rows {
            assert!(row.agree, "{p}: {row:?}");
        }
    }
}

#[test]
fn fattening() {
    let line = make(GalleryTag::Line).unwrap();
    let w = line.env().window(10).unwrap();
    let f = fatten(&w, &ids(["0"]), &[], 3).unwrap();
    assert_eq!(f.members, ids((-3..=3).map(|n: i32| n.to_string())));
    assert!(f.exact);
    let same = fatten(&w, &ids(["2", "5"]), &["right".into()], 0).unwrap();
    assert_eq!(same.members, ids(["2", "5"]));
    assert_eq!(same.ends, vec!["right".to_string()]);

    let ladder = make(GalleryTag::Ladder).unwrap();
    let w = ladder.env().window(8).unwrap();
    let a = ids((1..=7).map(|n| format!("{n}t")));
    let f = fatten(&w, &a, &[], 1).unwrap();
    let mut expected = a.clone();
    expected.insert(VertexId::new("0t"));
    expected.insert(VertexId::new("8t"));
    expected.extend(ids((1..=7).map(|n| format!("{n}b"))));
    assert_eq!(f.members, expected);
}

#[test]
fn quasi_openness() {
    let qi = QuasiIsometry::preset(QiPreset::LadderLine).unwrap();
    let e = LadderSide::new(true, 1, 1).unwrap().carrier();
    let ev = quasi_open_check(&qi, &e, 6).unwrap();
    assert_eq!(ev.outcome, OpenOutcome::OpenEvidence, "{ev:?}");
    assert_eq!(ev.theta, vec![VertexId::new("-1")]);
    assert_eq!(ev.theta_diameter, Some(0));
    assert!(ev.containment_violations.is_empty());

    let tree = QuasiIsometry::preset(QiPreset::Tree2Identity).unwrap();
    let cone = tree.x.oracle.canonical_cuts(1)[0].clone();
    let ev = quasi_open_check(&tree, &cone, 6).unwrap();
    assert_eq!(ev.outcome, OpenOutcome::OpenEvidence, "{ev:?}");
    assert!(ev.theta_diameter.unwrap() <= 2);
    assert!(ev.containment_violations.is_empty());

    let id = QuasiIsometry::identity(make(GalleryTag::Ladder).unwrap());
    let w = id.x.env().window(8).unwrap();
    let labeling = w.ball_complement(w.index_of(&VertexId::new("0t")).unwrap(), 2);
    let comp = labeling.component_of(w.index_of(&VertexId::new("5t")).unwrap()).unwrap();
    let e = Carrier::BallComplementComponent {
        center: VertexId::new("0t"),
        radius: 2,
        fingerprint: comp.fingerprint.clone(),
    };
    let ev = quasi_open_check(&id, &e, 8).unwrap();
    assert_eq!(ev.outcome, OpenOutcome::OpenEvidence);
    assert!(ev.theta_diameter.unwrap() <= ev.theta_e_diameter.unwrap() + 2);
}

#[test]
fn preimages_of_metric_cuts_are_metric() {
    for p in [QiPreset::Tree2Identity, QiPreset::LadderLine, QiPreset::FreeR1R3] {
        let qi = QuasiIsometry::preset(p).unwrap();
        for f in qi.y.oracle.canonical_cuts(2) {
            let r = preimage_check(&qi, &f, 4).unwrap();
            assert!(r.holds(), "{p}: {r:?}");
        }
    }
}
