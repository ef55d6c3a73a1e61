use proptest::prelude::*;

use endscope::walk::{convergence_report, simulate, GroupWord, Stabilization, StepMeasure};

fn word() -> impl Strategy<Value = GroupWord> {
    prop::collection::vec(prop_oneof![1i32..=3, -3i32..=-1], 0..12).prop_map(|mut ls| {
        // Reduce by hand so the strategy does not rely on the code under test.
        let mut out: Vec<i32> = Vec::new();
        for l in ls.drain(..) {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GroupWord::new(out).unwrap()
    })
}

proptest! {
    #[test]
    fn group_laws(a in word(), b in word(), c in word()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_empty());
        prop_assert!(a.mul(&b).is_reduced());
        prop_assert_eq!(a.distance(&b), a.inverse().mul(&b).len());
        prop_assert_eq!(a.distance(&b), b.distance(&a));
    }

    #[test]
    fn token_round_trip(a in word()) {
        prop_assert_eq!(a.to_string().parse::<GroupWord>().unwrap(), a);
    }
}

#[test]
fn trajectories_replay_and_prefixes_match_brute_force() {
    let mu = StepMeasure::uniform(2).unwrap();
    let runs = simulate(&mu, 300, 40, 99).unwrap();
    for t in &runs {
        let z = t.positions(&mu);
        assert_eq!(z.len(), 301);
        assert_eq!(z.last().unwrap(), &t.final_position);
        for (n, w) in z.iter().enumerate() {
            assert!(w.is_reduced());
            assert_eq!(w.len() as u32, t.lengths[n]);
        }
        for k in 1..=4usize {
            let last = z.last().unwrap().prefix(k);
            // First index from which the length-k prefix equals the final one.
            let since = last.as_ref().map(|p| {
                let mut n = z.len();
                while n > 0 && z[n - 1].prefix(k).as_ref() == Some(p) {
                    n -= 1;
                }
                n as u64
            });
            assert_eq!(t.prefix_since[k - 1], since, "traj {} k {k}", t.index);
            let want = match since {
                Some(s) if 2 * s <= 300 => Stabilization::Stabilized(s),
                _ => Stabilization::NotStabilizedWithinRun,
            };
            assert_eq!(t.prefix_stabilization(k), want);
        }
    }
}

#[test]
fn trajectory_streams_do_not_depend_on_run_size() {
    let mu = StepMeasure::uniform(2).unwrap();
    let small = simulate(&mu, 200, 5, 7).unwrap();
    let large = simulate(&mu, 200, 50, 7).unwrap();
    for (a, b) in small.iter().zip(&large) {
        assert_eq!(a.steps, b.steps);
    }
    let again = simulate(&mu, 200, 50, 7).unwrap();
    assert_eq!(
        serde_json::to_string(&large).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
    let other = simulate(&mu, 200, 5, 8).unwrap();
    assert_ne!(small[0].steps, other[0].steps);
}

#[test]
fn uniform_walk_on_two_generators_escapes_at_speed_one_half() {
    let mu = StepMeasure::uniform(2).unwrap();
    let runs = simulate(&mu, 2000, 200, 1).unwrap();
    let rep = convergence_report(&mu, &runs, 1, 2000).unwrap();
    assert!(rep.stabilized_fraction >= 0.99, "{rep:?}");
    assert!(rep.escape_fraction >= 0.99, "{rep:?}");
    assert!((rep.mean_speed - 0.5).abs() < 0.05, "{rep:?}");
    assert!(rep.warning.is_none());
    assert_eq!(rep.prefix_distribution.values().sum::<u64>(), (rep.stabilized_fraction * 200.0).round() as u64);
}

#[test]
fn measures_outside_the_hypothesis_warn() {
    let mu = StepMeasure::from_spec("point:g1", 1).unwrap();
    let runs = simulate(&mu, 10, 2, 0).unwrap();
    assert_eq!(runs[0].final_position.to_string(), "g1g1g1g1g1g1g1g1g1g1");
    let rep = convergence_report(&mu, &runs, 3, 10).unwrap();
    assert!(rep.warning.is_some());
    assert_eq!(rep.stabilized_fraction, 1.0);
    assert!(convergence_report(&mu, &runs, 0, 10).is_err());
    assert!(StepMeasure::from_spec("point:g1g2", 1).is_err());
    assert!(StepMeasure::from_spec("uniform:0", 1).is_err());
}
