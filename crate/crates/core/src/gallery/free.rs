use std::collections::BTreeMap;
use std::sync::Arc;

use super::tree::{Address, TreeOracle};
use super::{vertex_sequence, ExpectedOutcome, GalleryGraph, GalleryTag, GroundTruth};
use crate::ends::{EndCount, EndOracle, Notion, Ray};
use crate::error::Result;
use crate::graph::{BudgetSchedule, LazyGraph, VertexId};
use crate::walk::{FreeGroupCayley, Generators, GroupWord};

/// Prefix cones of the word tree.
pub type FreeGroupOracle = TreeOracle;

impl Address for FreeGroupCayley {
    fn depth(&self, v: &VertexId) -> Option<usize> {
        self.parse(v).map(|w| w.len())
    }

    fn ancestor(&self, v: &VertexId, depth: usize) -> Option<VertexId> {
        self.parse(v)?.prefix(depth).map(|p| p.vertex())
    }

    fn reach(&self) -> u32 {
        self.r
    }

    fn infinite_branching(&self) -> bool {
        self.generators == Generators::Countable
    }
}

fn power(letter: i32, n: u64) -> VertexId {
    GroupWord::new(vec![letter; n as usize]).unwrap().vertex()
}

fn letters(generators: Generators) -> Vec<i32> {
    let m = match generators {
        Generators::Finite(m) => m.min(2) as i32,
        Generators::Countable => 2,
    };
    (1..=m).flat_map(|k| [k, -k]).collect()
}

fn letter_name(l: i32) -> String {
    GroupWord::new(vec![l]).unwrap().to_string()
}

pub(super) fn build(generators: Generators, r: u32) -> Result<GalleryGraph> {
    let group = FreeGroupCayley::new(generators, r)?;
    let rho = u64::from(r);
    let mut rays = Vec::new();
    let mut limits = BTreeMap::new();
    for l in letters(generators) {
        let name = letter_name(l);
        rays.push(Ray::new(name.clone(), move |i| power(l, i)).with_escape(move |k| rho * u64::from(k) + 1));
        limits.insert(name.clone(), format!("{name}*"));
    }
    // G1 → e → g1 → g1g1 → …
    rays.push(
        Ray::new("g1-via-G1", |i| if i == 0 { power(-1, 1) } else { power(1, i - 1) })
            .with_escape(move |k| rho * u64::from(k) + 2),
    );
    limits.insert("g1-via-G1".into(), "g1*".into());
    let oracle = TreeOracle {
        addr: Arc::new(group),
        name: group.name(),
        limits,
        canonical_apexes: letters(generators).into_iter().map(|l| power(l, 1)).collect(),
    };

    let inf = Some(EndCount::Infinite);
    let counts = match (generators, r) {
        (Generators::Finite(1), _) => [Some(EndCount::Finite(2)); 3],
        (Generators::Finite(_), _) => [inf; 3],
        (Generators::Countable, 1) => [inf; 3],
        (Generators::Countable, 2) => [inf, Some(EndCount::Finite(1)), inf],
        (Generators::Countable, _) => [None, Some(EndCount::Finite(1)), inf],
    };
    let mut truth = GroundTruth::new(counts, 4);
    let names: Vec<String> = rays.iter().map(|r| r.name().to_string()).collect();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            for notion in Notion::ALL {
                match oracle.equivalent(a, b, notion) {
                    Some(true) => truth = truth.expect(a, b, &[notion], ExpectedOutcome::Equivalent),
                    Some(false) => truth = truth.expect(a, b, &[notion], ExpectedOutcome::Separated),
                    None => {}
                }
            }
        }
    }
    let sequences = vec![vertex_sequence("g1-powers", "ProperMetricEnd", |i| power(1, i))];

    let (budget, max_radius) = match generators {
        Generators::Finite(1) => (BudgetSchedule::Unlimited, 64),
        Generators::Finite(m) => {
            // Keep windows near 5000 vertices.
            let growth = ((2 * m - 1) as f64).ln() * f64::from(r);
            (BudgetSchedule::Unlimited, ((5000f64.ln() / growth) as u32).max(1))
        }
        Generators::Countable => match r {
            1 => (BudgetSchedule::Linear { base: 3, per_depth: 1 }, 4),
            2 => (BudgetSchedule::Linear { base: 8, per_depth: 1 }, 3),
            _ => (BudgetSchedule::Linear { base: 4, per_depth: 1 }, 2),
        },
    };
    Ok(GalleryGraph::assemble(
        GalleryTag::FreeGroup { generators, r },
        Arc::new(group),
        Arc::new(oracle),
        truth,
        rays,
        sequences,
        budget,
        max_radius,
    ))
}
