//! Random walks on free groups over `A^r` and convergence to proper metric
//! ends, measured as stabilization of the length-`k` prefix.
//!
//! Randomness: each trajectory `t` draws from `ChaCha8Rng::seed_from_u64(seed)`
//! with `set_stream(t)`, so runs are reproducible and independent of the
//! thread count.

mod group;

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use group::{FreeGroupCayley, Generators, GroupWord};

pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;
/// Enumerated measures are cut off once the remaining mass is below this.
pub const TRUNCATION_THRESHOLD: f64 = 1e-12;
/// Prefix depths tracked during a run.
pub const MAX_PREFIX_DEPTH: usize = 16;

/// A finitely supported probability measure on `A^r`.
#[derive(Debug, Clone, Serialize)]
pub struct StepMeasure {
    pub r: u32,
    support: Vec<(GroupWord, f64)>,
    #[serde(skip)]
    cumulative: Vec<f64>,
}

impl StepMeasure {
    pub fn new(support: Vec<(GroupWord, f64)>, r: u32) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidMeasure("step length r must be at least 1".into()));
        }
        if support.is_empty() {
            return Err(Error::InvalidMeasure("empty support".into()));
        }
        for (w, p) in &support {
            if !(p.is_finite() && *p > 0.0) {
                return Err(Error::InvalidMeasure(format!("weight {p} of {w} is not positive")));
            }
            if w.is_empty() || w.len() > r as usize {
                return Err(Error::InvalidMeasure(format!(
                    "support word {w} has length {} outside 1..={r}",
                    w.len()
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some((w, _)) = support.iter().find(|(w, _)| !seen.insert(w.clone())) {
            return Err(Error::InvalidMeasure(format!("support word {w} listed twice")));
        }
        let cumulative: Vec<f64> = support
            .iter()
            .scan(0.0, |acc, (_, p)| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().unwrap();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::UnnormalizedMeasure(total));
        }
        Ok(StepMeasure { r, support, cumulative })
    }

    /// Takes weights from `items` until the remaining mass `1 − Σ` drops
    /// below [`TRUNCATION_THRESHOLD`].
    pub fn truncated(items: impl IntoIterator<Item = (GroupWord, f64)>, r: u32) -> Result<Self> {
        let mut support = Vec::new();
        let mut total = 0.0;
        for (w, p) in items {
            total += p;
            support.push((w, p));
            if 1.0 - total < TRUNCATION_THRESHOLD {
                break;
            }
        }
        StepMeasure::new(support, r)
    }

    /// Uniform on `{g1, G1, …, gm, Gm}`.
    pub fn uniform(m: u32) -> Result<Self> {
        let p = 1.0 / f64::from(2 * m);
        let support = (1..=m as i32)
            .flat_map(|k| [k, -k])
            .map(|l| (GroupWord::new(vec![l]).unwrap(), p))
            .collect();
        StepMeasure::new(support, 1)
    }

    pub fn point(w: GroupWord) -> Result<Self> {
        let r = w.len().max(1) as u32;
        StepMeasure::new(vec![(w, 1.0)], r)
    }

    /// `gₖ` and `gₖ⁻¹` each with weight `2⁻ᵏ⁻¹`, over countably many generators.
    pub fn geometric() -> Result<Self> {
        let items = (1..31).flat_map(|k: i32| {
            let p = 0.5f64.powi(k + 1);
            [(GroupWord::generator(k as u32), p), (GroupWord::new(vec![-k]).unwrap(), p)]
        });
        StepMeasure::truncated(items, 1)
    }

    /// Lines of `word weight`; `#` starts a comment.
    pub fn parse_lines(text: &str, r: u32) -> Result<Self> {
        let mut support = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(w), Some(p), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    kind: "measure line",
                    input: line.to_string(),
                });
            };
            let p: f64 = p.parse().map_err(|_| Error::Parse {
                kind: "measure weight",
                input: p.to_string(),
            })?;
            support.push((w.parse()?, p));
        }
        StepMeasure::new(support, r)
    }

    /// `uniform4`, `uniform:<m>`, `point:<word>`, `geometric`, or a path to a
    /// measure file.
    pub fn from_spec(spec: &str, r: u32) -> Result<Self> {
        let m = match spec {
            "uniform4" => StepMeasure::uniform(2)?,
            "geometric" => StepMeasure::geometric()?,
            _ => {
                if let Some(m) = spec.strip_prefix("uniform:") {
                    let m = m.parse().map_err(|_| Error::Parse {
                        kind: "measure",
                        input: spec.to_string(),
                    })?;
                    if m == 0 {
                        return Err(Error::InvalidMeasure("uniform measure on zero generators".into()));
                    }
                    StepMeasure::uniform(m)?
                } else if let Some(w) = spec.strip_prefix("point:") {
                    StepMeasure::point(w.parse()?)?
                } else if Path::new(spec).is_file() {
                    let text = std::fs::read_to_string(spec)
                        .map_err(|e| Error::InvalidConfig(format!("reading {spec}: {e}")))?;
                    return StepMeasure::parse_lines(&text, r);
                } else {
                    return Err(Error::Parse {
                        kind: "measure",
                        input: spec.to_string(),
                    });
                }
            }
        };
        if m.r > r {
            return Err(Error::InvalidMeasure(format!(
                "measure uses words of length {} but the graph has r = {r}",
                m.r
            )));
        }
        Ok(StepMeasure { r, ..m })
    }

    pub fn support(&self) -> &[(GroupWord, f64)] {
        &self.support
    }

    pub fn max_generator(&self) -> u32 {
        self.support.iter().map(|(w, _)| w.max_generator()).max().unwrap_or(0)
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().unwrap();
        let u = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(self.support.len() - 1)
    }

    /// Set when the support lacks four distinct elements `a₁, a₂, a₁⁻¹, a₂⁻¹`.
    pub fn hypothesis_warning(&self) -> Option<String> {
        let words: std::collections::BTreeSet<&GroupWord> = self.support.iter().map(|(w, _)| w).collect();
        let paired: Vec<&GroupWord> = words
            .iter()
            .copied()
            .filter(|w| words.contains(&w.inverse()))
            .collect();
        let ok = paired.iter().any(|a| {
            let ai = a.inverse();
            paired.iter().any(|b| {
                let bi = b.inverse();
                let four = [(*a).clone(), ai.clone(), (*b).clone(), bi];
                four.iter().collect::<std::collections::BTreeSet<_>>().len() == 4
            })
        });
        (!ok).then(|| {
            "support does not contain four distinct elements a1, a2, a1^-1, a2^-1; \
             the walk lies outside the hypothesis of the convergence theorem"
                .to_string()
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stabilization {
    /// The length-`k` prefix is defined and constant from this index on.
    Stabilized(u64),
    NotStabilizedWithinRun,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub seed: u64,
    pub index: u64,
    pub r: u32,
    /// Indices into the measure's support.
    pub steps: Vec<u32>,
    /// `|Zₙ|` for `n = 0..=steps`.
    pub lengths: Vec<u32>,
    pub final_position: GroupWord,
    /// Entry `k − 1` is the first index from which the length-`k` prefix is
    /// constant through the end of the run.
    pub prefix_since: Vec<Option<u64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `d(o, Zₙ) = ⌈|Zₙ| / r⌉`.
    pub fn escape(&self, n: usize) -> u64 {
        u64::from(self.lengths[n]).div_ceil(u64::from(self.r))
    }

    /// Stabilized only if the prefix held for at least half of the run.
    pub fn prefix_stabilization(&self, k: usize) -> Stabilization {
        match self.prefix_since.get(k.wrapping_sub(1)).copied().flatten() {
            Some(n) if 2 * n <= self.steps.len() as u64 => Stabilization::Stabilized(n),
            _ => Stabilization::NotStabilizedWithinRun,
        }
    }

    /// Rebuilds `Z₀, …, Z_N`.
    pub fn positions(&self, measure: &StepMeasure) -> Vec<GroupWord> {
        let mut z = GroupWord::identity();
        let mut out = vec![z.clone()];
        for &s in &self.steps {
            z.push_all(measure.support[s as usize].0.letters());
            out.push(z.clone());
        }
        out
    }
}

fn run_one(measure: &StepMeasure, steps: usize, seed: u64, index: u64) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut z = GroupWord::identity();
    let mut taken = Vec::with_capacity(steps);
    let mut lengths = Vec::with_capacity(steps + 1);
    lengths.push(0);
    // Prefix k is undefined at Z₀ = o, so it is "changed" at every index
    // until the word first reaches length k.
    let mut since: Vec<Option<u64>> = vec![None; MAX_PREFIX_DEPTH];
    for n in 1..=steps as u64 {
        let s = measure.sample(&mut rng);
        let kept = z.push_all(measure.support[s].0.letters());
        taken.push(s as u32);
        lengths.push(z.len() as u32);
        for (k, slot) in since.iter_mut().enumerate() {
            let k = k + 1;
            if z.len() < k {
                *slot = None;
            } else if kept < k || slot.is_none() {
                *slot = Some(n);
            }
        }
    }
    Trajectory {
        seed,
        index,
        r: measure.r,
        steps: taken,
        lengths,
        final_position: z,
        prefix_since: since,
    }
}

fn thread_cap() -> Option<usize> {
    std::env::var("ENDSCOPE_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}

pub fn simulate(measure: &StepMeasure, steps: usize, trajectories: usize, seed: u64) -> Result<Vec<Trajectory>> {
    if steps < 1 || trajectories < 1 {
        return Err(Error::InvalidConfig("steps and trajectories must be at least 1".into()));
    }
    let total = *measure.cumulative.last().unwrap();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::UnnormalizedMeasure(total));
    }
    let work = || {
        (0..trajectories as u64)
            .into_par_iter()
            .map(|t| run_one(measure, steps, seed, t))
            .collect()
    };
    match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
            .map(|pool| pool.install(work)),
        None => Ok(work()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub trajectories: usize,
    pub steps: usize,
    pub prefix_depth: usize,
    pub stabilized_fraction: f64,
    /// Fraction with `d(o, Z_N) > d(o, Z_{N − window})`.
    pub escape_fraction: f64,
    pub escape_window: usize,
    pub mean_speed: f64,
    /// Stabilized depth-one prefixes.
    pub prefix_distribution: BTreeMap<String, u64>,
    pub warning: Option<String>,
}

/// `escape_window = steps` compares against `Z₀ = o`.
pub fn convergence_report(
    measure: &StepMeasure,
    trajectories: &[Trajectory],
    prefix_depth: usize,
    escape_window: usize,
) -> Result<ConvergenceReport> {
    if !(1..=MAX_PREFIX_DEPTH).contains(&prefix_depth) {
        return Err(Error::InvalidConfig(format!(
            "prefix depth must be in 1..={MAX_PREFIX_DEPTH}"
        )));
    }
    let n = trajectories.len().max(1) as f64;
    let steps = trajectories.first().map_or(0, Trajectory::len);
    let stabilized = trajectories
        .iter()
        .filter(|t| matches!(t.prefix_stabilization(prefix_depth), Stabilization::Stabilized(_)))
        .count();
    let escaped = trajectories
        .iter()
        .filter(|t| {
            let end = t.len();
            t.escape(end) > t.escape(end.saturating_sub(escape_window))
        })
        .count();
    let mean_speed = trajectories
        .iter()
        .map(|t| f64::from(t.lengths[t.len()]) / t.len().max(1) as f64)
        .sum::<f64>()
        / n;
    let mut prefix_distribution = BTreeMap::new();
    for t in trajectories {
        if matches!(t.prefix_stabilization(1), Stabilization::Stabilized(_)) {
            let p = t.final_position.prefix(1).expect("stabilized prefix exists");
            *prefix_distribution.entry(p.to_string()).or_insert(0) += 1;
        }
    }
    Ok(ConvergenceReport {
        trajectories: trajectories.len(),
        steps,
        prefix_depth,
        stabilized_fraction: stabilized as f64 / n,
        escape_fraction: escaped as f64 / n,
        escape_window,
        mean_speed,
        prefix_distribution,
        warning: measure.hypothesis_warning(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_validation() {
        let g1 = GroupWord::generator(1);
        assert!(matches!(
            StepMeasure::new(vec![(g1.clone(), 0.5)], 1),
            Err(Error::UnnormalizedMeasure(_))
        ));
        assert!(StepMeasure::new(vec![(GroupWord::identity(), 1.0)], 1).is_err());
        assert!(StepMeasure::new(vec![("g1g2".parse().unwrap(), 1.0)], 1).is_err());
        assert!(StepMeasure::new(vec![(g1, 1.0)], 1).is_ok());
        let m = StepMeasure::parse_lines("# four\ng1 0.25\nG1 0.25\ng2 0.25\nG2 0.25\n", 1).unwrap();
        assert!(m.hypothesis_warning().is_none());
        assert!(StepMeasure::uniform(1).unwrap().hypothesis_warning().is_some());
        let geo = StepMeasure::geometric().unwrap();
        assert!(geo.support().len() < 100);
    }

    #[test]
    fn point_mass_walk() {
        let m = StepMeasure::point(GroupWord::generator(1)).unwrap();
        let t = &simulate(&m, 20, 1, 3).unwrap()[0];
        assert_eq!(t.final_position.to_string(), "g1".repeat(20));
        for k in 1..=8 {
            assert_eq!(t.prefix_stabilization(k), Stabilization::Stabilized(k as u64));
        }
        assert_eq!(t.escape(20), 20);
    }

    #[test]
    fn deterministic_and_reduced() {
        let m = StepMeasure::uniform(2).unwrap();
        let a = simulate(&m, 200, 8, 11).unwrap();
        let b = simulate(&m, 200, 8, 11).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.steps, y.steps);
            let ps = x.positions(&m);
            assert!(ps.iter().all(GroupWord::is_reduced));
            assert_eq!(ps.last().unwrap(), &x.final_position);
            assert!(ps.iter().zip(&x.lengths).all(|(p, &l)| p.len() == l as usize));
        }
        assert_ne!(a[0].steps, a[1].steps);
    }
}
