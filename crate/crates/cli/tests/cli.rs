use std::process::{Command, Output};

use serde_json::Value;

fn endscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_endscope"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = endscope(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn ladder_vertex_ends() {
    let v = json(&["ends", "--graph", "ladder", "--notion", "vertex", "--depth", "8", "--json"]);
    assert_eq!(v["schema"], "endscope/1");
    assert_eq!(v["command"], "ends");
    assert_eq!(v["depth"], 8);
    assert_eq!(v["lower_bound"], 2);
    assert_eq!(v["status"], "StabilizedCertified");
}

#[test]
fn x2_edge_separation_is_equivalent() {
    let v = json(&["separate", "--graph", "x2", "--rays", "L1,L2", "--notion", "edge", "--depth", "10", "--json"]);
    assert_eq!(v["outcome"], "EquivalentCertified");
    let v = json(&["separate", "--graph", "x2", "--rays", "L1,L2", "--notion", "vertex", "--depth", "10", "--json"]);
    assert_eq!(v["outcome"], "Separated");
}

#[test]
fn free_group_walk_stabilizes() {
    let v = json(&[
        "walk", "--graph", "free:r=1", "--mu", "uniform4", "--steps", "5000", "--traj", "500", "--seed", "7", "--prefix",
        "1", "--json",
    ]);
    assert!(v["stabilized_fraction"].as_f64().unwrap() >= 0.99, "{v}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let runs: [&[&str]; 3] = [
        &["walk", "--graph", "free:r=1", "--steps", "400", "--traj", "50", "--seed", "3", "--json"],
        &["qi", "--qi", "ladder-line", "--depth", "6", "--samples", "100", "--seed", "11", "--json"],
        &["ends", "--graph", "tree:b=2", "--notion", "edge", "--depth", "5"],
    ];
    for args in runs {
        let a = endscope(args);
        let b = endscope(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(endscope(&["ends", "--graph", "nope"]).status.code(), Some(2));
    assert_eq!(endscope(&["separate", "--graph", "ladder", "--rays", "left-top"]).status.code(), Some(2));
    assert_eq!(endscope(&["separate", "--graph", "ladder", "--rays", "left-top,missing"]).status.code(), Some(2));
    assert_eq!(endscope(&["walk", "--graph", "ladder"]).status.code(), Some(2));
    assert_eq!(endscope(&["walk", "--graph", "free:r=1", "--mu", "bogus"]).status.code(), Some(2));
    assert_eq!(endscope(&["ends", "--graph", "ladder", "--budget", "0"]).status.code(), Some(2));
    assert_eq!(endscope(&["star", "--graph", "ladder", "--center", "99t", "--depth", "2"]).status.code(), Some(3));
    assert_ne!(endscope(&["frobnicate"]).status.code(), Some(0));
    assert_eq!(endscope(&["explore", "--graph", "ladder", "--depth", "2"]).status.code(), Some(0));
}

#[test]
fn explore_ladder_radius_two() {
    let v = json(&["explore", "--graph", "ladder", "--depth", "2", "--json"]);
    assert_eq!(v["vertices"], 8);
}
