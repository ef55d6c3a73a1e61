use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use endscope::cuts::{infinite_diameter_witness, star_ball_score, DiameterWitness, StarVerdict};
use endscope::ends::{
    classify_sequence, count_ends_at_depth, separation_verdict, EndCountStatus, Env, Notion, Outcome,
};
use endscope::gallery::{make, GalleryGraph, GalleryTag};
use endscope::graph::{BudgetSchedule, VertexId};
use endscope::qi::{QiPreset, QiVerdict, QuasiIsometry};
use endscope::walk::{convergence_report, simulate, StepMeasure};
use endscope::Error;

#[derive(Parser, Debug)]
#[command(name = "endscope", version, about = "Finite-depth ends of infinite graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct Common {
    /// Gallery graph, e.g. `ladder`, `x2`, `treeplus2:b=inf`, `free:r=2`.
    #[arg(long, default_value = "ladder")]
    graph: String,
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// Neighbor budget: `unlimited`, `<n>` or `linear:<base>,<per_depth>`.
    #[arg(long)]
    budget: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit a single JSON document instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Explore a window and summarize it.
    Explore(Common),
    /// Score a ball as a star ball.
    Star {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// Center vertex; the root by default.
        #[arg(long)]
        center: Option<String>,
        #[arg(long, default_value_t = 1)]
        radius: u32,
    },
    /// Look for an infinite-diameter witness.
    Witness(Common),
    /// Lower bound on the number of ends from the graph's named rays.
    Ends {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, default_value = "vertex")]
        notion: String,
    },
    /// Separation verdict for two named rays.
    Separate {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long, default_value = "vertex")]
        notion: String,
        /// Two ray names separated by a comma.
        #[arg(long)]
        rays: String,
    },
    /// Convergence case of a named sequence.
    Classify {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        #[arg(long)]
        sequence: String,
    },
    /// Sampled quasi-isometry check for a preset.
    Qi {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// `tree2-identity`, `ladder-line`, `free-r1-r3` or `ladder-line-constant`.
        #[arg(long)]
        qi: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Random walk on a free group.
    Walk {
        #[command(flatten)]
        #[serde(flatten)]
        common: Common,
        /// `uniform4`, `uniform:<m>`, `point:<word>`, `geometric` or a file of
        /// `word weight` lines.
        #[arg(long, default_value = "uniform4")]
        mu: String,
        #[arg(long, default_value_t = 5000)]
        steps: usize,
        #[arg(long, default_value_t = 500)]
        traj: usize,
        #[arg(long, default_value_t = 1)]
        prefix: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Explore(c) | Command::Witness(c) => c,
            Command::Star { common, .. }
            | Command::Ends { common, .. }
            | Command::Separate { common, .. }
            | Command::Classify { common, .. }
            | Command::Qi { common, .. }
            | Command::Walk { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Explore(_) => "explore",
            Command::Star { .. } => "star",
            Command::Witness(_) => "witness",
            Command::Ends { .. } => "ends",
            Command::Separate { .. } => "separate",
            Command::Classify { .. } => "classify",
            Command::Qi { .. } => "qi",
            Command::Walk { .. } => "walk",
        }
    }
}

/// What a command produced: a certainty tag, fields for the JSON document
/// and lines for the text rendering.
struct Report {
    certainty: String,
    fields: Map<String, Value>,
    text: Vec<String>,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn fields(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn gallery(common: &Common) -> Result<(GalleryGraph, Env), Error> {
    let tag: GalleryTag = common.graph.parse()?;
    let g = make(tag)?;
    let env = match &common.budget {
        Some(b) => {
            let budget: BudgetSchedule = b.parse()?;
            Env::new(Arc::clone(&g.graph), budget, g.max_radius).with_oracle(Arc::clone(&g.oracle))
        }
        None => g.env().clone(),
    };
    Ok((g, env))
}

fn run(cmd: &Command) -> Result<Report, Error> {
    let common = cmd.common();
    let depth = common.depth;
    match cmd {
        Command::Explore(_) => {
            let (g, env) = gallery(common)?;
            let w = env.window(depth)?;
            let complete = w.is_fully_explored();
            Ok(Report {
                certainty: if complete { "Exact" } else { "Partial" }.into(),
                fields: fields([
                    ("root", to_value(&g.graph.root())),
                    ("window_radius", json!(w.radius())),
                    ("vertices", json!(w.len())),
                    ("edges", json!(w.edge_count())),
                    ("frontier", json!(w.frontier().len())),
                    ("fully_explored", json!(complete)),
                ]),
                text: vec![format!(
                    "{}: radius {} window with {} vertices, {} edges, {} frontier vertices{}",
                    g.tag,
                    w.radius(),
                    w.len(),
                    w.edge_count(),
                    w.frontier().len(),
                    if complete { ", fully explored" } else { "" }
                )],
            })
        }
        Command::Star { center, radius, .. } => {
            let (g, env) = gallery(common)?;
            let w = env.window(depth)?;
            let c = center.clone().map(VertexId::new).unwrap_or_else(|| g.graph.root());
            let r = star_ball_score(&w, &c, *radius, None)?;
            let certainty = match r.verdict {
                StarVerdict::StarBallEvidence(_) => "Evidence",
                StarVerdict::RefutedAtDepth(_) => "RefutedAtDepth",
                StarVerdict::Unknown(_) => "UnknownAtDepth",
            };
            Ok(Report {
                certainty: certainty.into(),
                text: vec![format!(
                    "K({}, {}) in a radius {} window: score {} (threshold {}), {} closed and {} open components: {:?}",
                    r.center,
                    r.radius,
                    r.window_radius,
                    r.score,
                    r.threshold,
                    r.closed_component_count,
                    r.open_component_count,
                    r.verdict
                )],
                fields: fields([("star", to_value(&r))]),
            })
        }
        Command::Witness(_) => {
            let (g, env) = gallery(common)?;
            let w = infinite_diameter_witness(Arc::clone(&g.graph), depth.min(g.max_radius), env.budget)?;
            let (certainty, line) = match &w {
                DiameterWitness::MetricRayPrefix(p) => ("Certified", format!("geodesic prefix of {} vertices", p.len())),
                DiameterWitness::StarBallWitness(r) => {
                    ("Evidence", format!("star ball K({}, {}) with score {}", r.center, r.radius, r.score))
                }
                DiameterWitness::BoundedCertified(d) => ("Certified", format!("finite graph of diameter {d}")),
                DiameterWitness::Unknown(d) => ("UnknownAtDepth", format!("no witness at depth {d}")),
            };
            Ok(Report {
                certainty: certainty.into(),
                fields: fields([("witness", to_value(&w))]),
                text: vec![line],
            })
        }
        Command::Ends { notion, .. } => {
            let (g, env) = gallery(common)?;
            let notion: Notion = notion.parse()?;
            let truth = g.truth.end_counts.get(&notion).copied();
            let r = count_ends_at_depth(&env, &g.rays, notion, depth, truth)?;
            let status = match r.status {
                EndCountStatus::StabilizedCertified => "StabilizedCertified",
                EndCountStatus::GrowingLowerBound => "GrowingLowerBound",
                EndCountStatus::InfiniteCertified => "InfiniteCertified",
            };
            Ok(Report {
                certainty: status.into(),
                text: vec![format!(
                    "{} {notion}-ends at depth {depth}: at least {} ({status}); family {:?}",
                    g.tag, r.lower_bound, r.family
                )],
                fields: fields([
                    ("notion", to_value(&notion)),
                    ("lower_bound", json!(r.lower_bound)),
                    ("status", json!(status)),
                    ("family", to_value(&r.family)),
                    ("verdicts", to_value(&r.verdicts)),
                ]),
            })
        }
        Command::Separate { notion, rays, .. } => {
            let (g, env) = gallery(common)?;
            let notion: Notion = notion.parse()?;
            let names: Vec<&str> = rays.split(',').map(str::trim).collect();
            let [a, b] = names[..] else {
                return Err(Error::InvalidConfig(format!("--rays needs two names, got {rays:?}")));
            };
            let v = separation_verdict(&env, g.ray(a)?, g.ray(b)?, notion, depth)?;
            let certainty = match v.outcome {
                Outcome::Separated(_) | Outcome::EquivalentCertified(_) => "Certified",
                Outcome::NotSeparatedAtDepth(_) => "NotSeparatedAtDepth",
                Outcome::Unknown(_) => "UnknownAtDepth",
            };
            let detail = match &v.outcome {
                Outcome::Separated(c) => format!(" by {} with |θ| = {}", c.carrier.describe(), c.theta.len()),
                Outcome::EquivalentCertified(by) => format!(" ({by})"),
                _ => String::new(),
            };
            Ok(Report {
                certainty: certainty.into(),
                text: vec![format!("{a} / {b} under {notion} at depth {depth}: {}{detail}", v.outcome.label())],
                fields: fields([("outcome", json!(v.outcome.label())), ("verdict", to_value(&v))]),
            })
        }
        Command::Classify { sequence, .. } => {
            let (g, env) = gallery(common)?;
            let s = g.sequence(sequence)?;
            let c = classify_sequence(&env, &*s.seq, depth)?;
            Ok(Report {
                certainty: "DepthStamped".into(),
                text: vec![format!("{sequence}: {} at depth {depth}; {}", c.case.label(), c.evidence.join("; "))],
                fields: fields([("case", json!(c.case.label())), ("classification", to_value(&c))]),
            })
        }
        Command::Qi { qi, samples, .. } => {
            let preset: QiPreset = qi.parse()?;
            let q = QuasiIsometry::preset(preset)?;
            let r = q.verify(depth, *samples, common.seed)?;
            let verdict = match r.verdict {
                QiVerdict::NoViolationFound => "NoViolationFound",
                QiVerdict::Violated => "Violated",
            };
            let mut text = vec![format!(
                "{preset}: {verdict} over {} checks ({} skipped)",
                r.checked_pairs, r.skipped
            )];
            text.extend(r.violations.iter().take(5).map(|v| {
                format!(
                    "  {:?} at ({}, {}): {} > {}",
                    v.axiom, v.witness[0], v.witness[1], v.measured, v.bound
                )
            }));
            Ok(Report {
                certainty: "SamplingRelative".into(),
                text,
                fields: fields([("verdict", json!(verdict)), ("report", to_value(&r))]),
            })
        }
        Command::Walk {
            mu,
            steps,
            traj,
            prefix,
            ..
        } => {
            let tag: GalleryTag = common.graph.parse()?;
            let GalleryTag::FreeGroup { generators, r } = tag else {
                return Err(Error::InvalidConfig(format!("walks run on free groups, not {tag}")));
            };
            let measure = StepMeasure::from_spec(mu, r)?;
            let top = measure.max_generator();
            if !generators.allows(top) {
                return Err(Error::InvalidMeasure(format!("g{top} is not a generator of {tag}")));
            }
            let t = simulate(&measure, *steps, *traj, common.seed)?;
            let rep = convergence_report(&measure, &t, *prefix, *steps)?;
            let mut text = vec![
                format!(
                    "{} trajectories x {} steps on {tag}: prefix-{} stabilized {:.4}, escaped {:.4}, mean |Z_n|/n {:.4}",
                    rep.trajectories, rep.steps, rep.prefix_depth, rep.stabilized_fraction, rep.escape_fraction, rep.mean_speed
                ),
                format!("stabilized first letters: {:?}", rep.prefix_distribution),
            ];
            if let Some(w) = &rep.warning {
                text.push(format!("warning: {w}"));
            }
            Ok(Report {
                certainty: "Sampled".into(),
                text,
                fields: fields([
                    ("stabilized_fraction", json!(rep.stabilized_fraction)),
                    ("report", to_value(&rep)),
                ]),
            })
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotExplored(_)
        | Error::NoEscape(_)
        | Error::ConflictingEvidence { .. }
        | Error::Interpolation { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = &cli.command;
    let common = cmd.common();
    let report = match run(cmd) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("endscope {}: {e}", cmd.name());
            return ExitCode::from(exit_code(&e));
        }
    };
    let out = if common.json {
        let mut doc = Map::new();
        doc.insert("schema".into(), json!("endscope/1"));
        doc.insert("command".into(), json!(cmd.name()));
        doc.insert("config".into(), to_value(cmd));
        doc.insert("graph".into(), json!(common.graph));
        doc.insert("depth".into(), json!(common.depth));
        doc.insert("certainty".into(), json!(report.certainty));
        doc.extend(report.fields);
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json");
        s.push('\n');
        s
    } else {
        let mut s = report.text.join("\n");
        s.push('\n');
        s
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
