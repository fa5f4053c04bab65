//! Experiment runner behind the `qcdp` binary: configuration, dataset
//! generation and ingestion, per-trial execution and result files.
//!
//! Exit codes: 0 every trial completed, 1 internal error or some trials
//! failed, 2 input error (configuration, arguments or data files), 3 every
//! trial stopped for lack of samples.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approximation::{m_subset_size, sup_gap, tukey_probes, ApproxSpec, DEFAULT_C_VC};
use crate::audit::{a_simple_h, clopper_pearson, counterexample_datasets, estimate_epsilon_lower_bound, in_upper_half, AuditReport, LabeledPoint, SimpleHParams};
use crate::error::{Error, Result};
use crate::interior_point::{is_interior, n_ip, private_interior_point, IntegerRange, IpSolverSpec};
use crate::linfeas::{
    cdepth_sup_gap, learn_halfspace, planted_feasible, private_linear_feasibility, threshold_examples, CdepthLevels, Constraint, ConstraintSet,
    LabeledExample, LfConfig,
};
use crate::rationals::TukeyGridConfig;
use crate::tukey::{cluster_points, private_tukey_median, PointSet, TukeyConfig, TukeyTarget};
use crate::{BoundedRational, PrivacyParams, RandomSource};

#[derive(Debug, Parser)]
#[command(name = "qcdp", version, about = "Private quasi-concave optimization experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Private Tukey median.
    Tukey(RunArgs),
    /// Private linear feasibility.
    Linfeas(RunArgs),
    /// Private halfspace learner on one-dimensional thresholds.
    LearnHalfspace(RunArgs),
    /// Interior point baseline on random multisets.
    IpBench(RunArgs),
    /// Sup gap between a dataset and a random subsample.
    ApproxCheck(RunArgs),
    /// Audit of A_SimpleH on the counterexample pair.
    AuditAcml(RunArgs),
    /// Audit of a named mechanism on a dataset pair.
    Audit(RunArgs),
    /// Write a synthetic dataset.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write `plot_data.csv` in long format.
    #[arg(long)]
    pub emit_plot_data: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Tukey,
    Linfeas,
    LearnHalfspace,
    IpBench,
    ApproxCheck,
    AuditAcml,
    Audit,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Tukey => "tukey",
            Task::Linfeas => "linfeas",
            Task::LearnHalfspace => "learn-halfspace",
            Task::IpBench => "ip-bench",
            Task::ApproxCheck => "approx-check",
            Task::AuditAcml => "audit-acml",
            Task::Audit => "audit",
        }
    }

    /// Whether smaller utility is better.
    fn lower_is_better(self) -> bool {
        matches!(self, Task::LearnHalfspace | Task::ApproxCheck)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetKind {
    ClusterPoints,
    PlantedFeasible,
    ThresholdLabeled,
    Counterexample,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: DatasetKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Coordinate bound X.
    #[arg(long = "x-bound", default_value_t = 4)]
    pub x_bound: u64,
    #[arg(long)]
    pub seed: u64,
    /// Planted point for `planted-feasible`, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub planted: Option<Vec<i64>>,
    /// Threshold for `threshold-labeled`.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub threshold: i64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Which function `approx-check` compares.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    #[default]
    Tukey,
    Linfeas,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: Option<Task>,
    /// Dimension; 2 when absent, 1 for `learn-halfspace`.
    pub d: Option<usize>,
    #[serde(rename = "X")]
    pub x_bound: u64,
    /// Dataset size; task-specific default when absent.
    pub n: Option<usize>,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub delta: f64,
    /// Block count override.
    pub t: Option<usize>,
    pub grid: TukeyGridConfig,
    pub seed: Option<u64>,
    pub trials: usize,
    /// Data file; generated per trial when absent.
    pub input: Option<PathBuf>,
    /// Second data file of an audited pair.
    pub input_prime: Option<PathBuf>,
    pub planted: Option<Vec<i64>>,
    pub threshold: i64,
    pub test_size: usize,
    /// Subsample size for `approx-check`; the VC bound when absent.
    pub m: Option<usize>,
    pub c_vc: f64,
    pub objective: Objective,
    pub gamma: f64,
    /// Kept angles in A_SimpleH.
    pub c: Option<usize>,
    /// `interior-point` or `simple-h`.
    pub mechanism: Option<String>,
    /// `le:V`, `ge:V`, `eq:V` or `upper-half`.
    pub event: Option<String>,
    pub audit_trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            task: None,
            d: None,
            x_bound: 4,
            n: None,
            alpha: 0.2,
            beta: 0.1,
            epsilon: 1.0,
            delta: 1e-6,
            t: None,
            grid: TukeyGridConfig::default(),
            seed: None,
            trials: 1,
            input: None,
            input_prime: None,
            planted: None,
            threshold: 0,
            test_size: 2000,
            m: None,
            c_vc: DEFAULT_C_VC,
            objective: Objective::Tukey,
            gamma: std::f64::consts::TAU / 256.0,
            c: None,
            mechanism: None,
            event: None,
            audit_trials: 1000,
        }
    }
}

impl ExperimentConfig {
    pub fn dim(&self) -> usize {
        self.d.unwrap_or(2)
    }

    pub fn privacy(&self) -> Result<PrivacyParams> {
        PrivacyParams::new(self.epsilon, self.delta)
    }

    pub fn validate(&self, task: Task) -> Result<()> {
        if let Some(t) = self.task {
            if t != task {
                return Err(Error::param(format!("config is for task {}, not {}", t.name(), task.name())));
            }
        }
        if self.seed.is_none() {
            return Err(Error::param("a seed is required (config field `seed` or --seed)"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0 && self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::param("alpha and beta must lie in (0,1)"));
        }
        self.privacy()?;
        if self.trials == 0 || self.audit_trials < 100 || self.x_bound == 0 || self.dim() == 0 {
            return Err(Error::param("trials, X and d must be positive and audit_trials at least 100"));
        }
        if self.n == Some(0) {
            return Err(Error::param("n must be positive"));
        }
        let max_d = match task {
            Task::Tukey | Task::Linfeas | Task::ApproxCheck => 2,
            Task::LearnHalfspace => 1,
            _ => usize::MAX,
        };
        if self.dim() > max_d {
            return Err(Error::UnsupportedDimension { dim: self.dim(), max: max_d });
        }
        Ok(())
    }
}

/// One trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub task: String,
    pub trial: usize,
    pub seed: u64,
    /// `ok`, `insufficient` or `error`.
    pub status: String,
    pub utility: Option<f64>,
    pub target: f64,
    /// Recomputed from utility and target. For audits it means a violation
    /// of the claimed epsilon was certified.
    pub success: bool,
    pub epsilon_spent: Option<f64>,
    pub delta_spent: Option<f64>,
    pub within_budget: Option<bool>,
    pub output: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub task: String,
    pub trials: usize,
    pub completed: usize,
    pub insufficient: usize,
    pub errors: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub success_ci95: (f64, f64),
    pub mean_utility: Option<f64>,
    /// Audit verdicts in trial order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<String>,
    pub exit_code: i32,
}

struct Outcome {
    utility: f64,
    target: f64,
    spent: Option<PrivacyParams>,
    output: String,
    detail: String,
    report: Option<AuditReport>,
}

fn join(point: &[BoundedRational]) -> String {
    point.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_cell(cell: &str, line: usize) -> Result<i64> {
    cell.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected an integer, got {cell:?}"),
    })
}

/// Integer rows of a CSV file with a header row; `#` starts a comment line.
pub fn read_int_rows(path: &Path, columns: usize) -> Result<Vec<Vec<i64>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header_cols = rdr
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .len();
    if header_cols != columns {
        return Err(Error::Parse {
            line: 1,
            message: format!("header has {header_cols} columns, expected {columns}"),
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != columns {
            return Err(Error::Parse {
                line,
                message: format!("{} fields, expected {columns}", rec.len()),
            });
        }
        out.push(rec.iter().map(|c| parse_cell(c, line)).collect::<Result<Vec<_>>>()?);
    }
    Ok(out)
}

fn write_rows(path: &Path, comment: &str, header: &[String], rows: &[Vec<i64>]) -> Result<()> {
    let mut buf = format!("# {comment}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(header).map_err(io)?;
        for r in rows {
            w.write_record(r.iter().map(|v| v.to_string())).map_err(io)?;
        }
        w.flush()?;
    }
    fs::write(path, buf).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn coord_header(d: usize, extra: Option<&str>) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).chain(extra.map(String::from)).collect()
}

fn default_planted(d: usize) -> Vec<i64> {
    (0..d).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect()
}

/// Writes a synthetic dataset; identical arguments give identical bytes.
pub fn generate_dataset(args: &GenerateArgs) -> Result<()> {
    let mut rng = RandomSource::new(args.seed);
    let (d, x) = (args.d, args.x_bound);
    match args.kind {
        DatasetKind::ClusterPoints => {
            let s = cluster_points(args.n, d, x, &mut rng)?;
            write_rows(&args.out, &format!("cluster-points: one point per row, integer coordinates in [-{x}, {x}]"), &coord_header(d, None), &s.points)
        }
        DatasetKind::PlantedFeasible => {
            let planted = args.planted.clone().unwrap_or_else(|| default_planted(d));
            let s = planted_feasible(args.n, d, x, &planted, &mut rng)?;
            let rows: Vec<Vec<i64>> = s.constraints.iter().map(|c| c.a.iter().copied().chain([c.w]).collect()).collect();
            let header: Vec<String> = (1..=d).map(|i| format!("a{i}")).chain(["w".to_string()]).collect();
            write_rows(&args.out, &format!("planted-feasible: constraint <a, x> >= w per row, satisfied by {planted:?}"), &header, &rows)
        }
        DatasetKind::ThresholdLabeled => {
            let ex = threshold_examples(args.n, x, args.threshold, &mut rng);
            let rows: Vec<Vec<i64>> = ex.iter().map(|e| vec![e.x[0], e.y as i64]).collect();
            write_rows(&args.out, &format!("threshold-labeled: y = +1 iff x1 >= {}", args.threshold), &coord_header(1, Some("y")), &rows)
        }
        DatasetKind::Counterexample => {
            let (s, _) = counterexample_datasets(args.n)?;
            let rows: Vec<Vec<i64>> = s.iter().map(|e| vec![e.x[0], e.x[1], e.y as i64]).collect();
            write_rows(&args.out, "counterexample: labelled planar points x1, x2, y", &coord_header(2, Some("y")), &rows)
        }
    }
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                message: format!("{}: {e}", p.display()),
            })?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = args.seed {
        cfg.seed = Some(s);
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    Ok(cfg)
}

/// Data read once before the trials.
enum Input {
    None,
    Rows(Vec<Vec<i64>>),
    Pair(Vec<Vec<i64>>, Vec<Vec<i64>>),
}

fn input_columns(task: Task, cfg: &ExperimentConfig) -> usize {
    match task {
        Task::Tukey => cfg.dim(),
        Task::Linfeas => cfg.dim() + 1,
        Task::LearnHalfspace => 2,
        Task::IpBench => 1,
        Task::ApproxCheck => match cfg.objective {
            Objective::Tukey => cfg.dim(),
            Objective::Linfeas => cfg.dim() + 1,
        },
        Task::AuditAcml | Task::Audit => match cfg.mechanism.as_deref() {
            Some("interior-point") => 1,
            _ => 3,
        },
    }
}

fn load_input(task: Task, cfg: &ExperimentConfig) -> Result<Input> {
    let cols = input_columns(task, cfg);
    let input = match &cfg.input {
        Some(p) => Input::Rows(read_int_rows(p, cols)?),
        None => Input::None,
    };
    match (task, input, &cfg.input_prime) {
        (Task::Audit, Input::Rows(a), Some(p)) => Ok(Input::Pair(a, read_int_rows(p, cols)?)),
        (Task::Audit, _, _) => Err(Error::param("audit needs both `input` and `input_prime`")),
        (_, i, _) => Ok(i),
    }
}

fn to_constraints(rows: &[Vec<i64>], d: usize) -> Vec<Constraint> {
    rows.iter()
        .map(|r| Constraint {
            a: r[..d].to_vec(),
            w: r[d],
        })
        .collect()
}

fn to_labeled(rows: &[Vec<i64>]) -> Result<Vec<LabeledPoint>> {
    rows.iter().map(|r| LabeledPoint::new([r[0], r[1]], r[2] as i8)).collect()
}

fn run_trial(task: Task, cfg: &ExperimentConfig, input: &Input, rng: &mut RandomSource) -> Result<Outcome> {
    let privacy = cfg.privacy()?;
    let (d, x) = (cfg.dim(), cfg.x_bound);
    let rows = match input {
        Input::Rows(r) => Some(r),
        _ => None,
    };
    match task {
        Task::Tukey => {
            let s = match rows {
                Some(r) => PointSet::new(d, x, r.clone())?,
                None => cluster_points(cfg.n.unwrap_or(3000), d, x, rng)?,
            };
            let tc = TukeyConfig {
                grid: cfg.grid.clone(),
                t: cfg.t,
                trace_full_values: false,
            };
            let r = private_tukey_median(&s, cfg.alpha, cfg.beta, privacy, &tc, rng)?;
            Ok(Outcome {
                utility: r.depth as f64 / r.n as f64,
                target: (1.0 - cfg.alpha) / (d as f64 + 1.0),
                spent: Some(r.composed),
                output: join(&r.point),
                detail: format!("depth={} t={} default_grids={}", r.depth, r.t, r.default_grids),
                report: None,
            })
        }
        Task::Linfeas => {
            let s = match rows {
                Some(r) => ConstraintSet::new(d, x, to_constraints(r, d))?,
                None => {
                    let planted = cfg.planted.clone().unwrap_or_else(|| default_planted(d));
                    planted_feasible(cfg.n.unwrap_or(3000), d, x, &planted, rng)?
                }
            };
            let lc = LfConfig {
                t: cfg.t,
                trace_full_values: false,
            };
            let r = private_linear_feasibility(&s, cfg.alpha, cfg.beta, privacy, &lc, rng)?;
            Ok(Outcome {
                utility: r.depth as f64 / r.n as f64,
                target: 1.0 - cfg.alpha,
                spent: Some(r.composed),
                output: join(&r.point),
                detail: format!("satisfied={} t={}", r.depth, r.t),
                report: None,
            })
        }
        Task::LearnHalfspace => {
            let (train, test) = match rows {
                Some(r) => {
                    let ex = r.iter().map(|r| LabeledExample::new(vec![r[0]], r[1] as i8)).collect::<Result<Vec<_>>>()?;
                    (ex.clone(), ex)
                }
                None => {
                    let m = match cfg.n {
                        Some(m) => m,
                        None => crate::approximation::pac_sample_size(cfg.alpha, cfg.beta, 2)?,
                    };
                    let train = threshold_examples(m, x, cfg.threshold, rng);
                    (train, threshold_examples(cfg.test_size, x, cfg.threshold, rng))
                }
            };
            let lc = LfConfig {
                t: cfg.t,
                trace_full_values: false,
            };
            let r = learn_halfspace(&train, x, cfg.alpha, cfg.beta, privacy, &lc, rng)?;
            Ok(Outcome {
                utility: r.hypothesis.error(&test),
                target: cfg.alpha,
                spent: Some(r.solver.composed),
                output: format!("{} {}", join(&r.hypothesis.weights), r.hypothesis.threshold),
                detail: format!("train_error={} m={} t={}", r.training_error, train.len(), r.solver.t),
                report: None,
            })
        }
        Task::IpBench => {
            let domain = IntegerRange::new(-(x as i64), x as i64)?;
            let spec = IpSolverSpec::baseline(privacy, cfg.beta)?;
            let values: Vec<i64> = match rows {
                Some(r) => r.iter().map(|r| r[0]).collect(),
                None => {
                    let n = cfg.n.unwrap_or_else(|| n_ip(domain_size(x), cfg.beta, cfg.epsilon, cfg.delta));
                    (0..n).map(|_| rng.gen_range(-(x as i64)..=x as i64)).collect()
                }
            };
            let p = private_interior_point(&values, &domain, &spec, rng)?;
            Ok(Outcome {
                utility: is_interior(&values, &p) as u8 as f64,
                target: 1.0,
                spent: Some(PrivacyParams::pure(privacy.epsilon)?),
                output: p.to_string(),
                detail: format!("n={}", values.len()),
                report: None,
            })
        }
        Task::ApproxCheck => approx_trial(cfg, rows, rng),
        Task::AuditAcml => {
            let (s, t) = counterexample_datasets(cfg.n.unwrap_or(40))?;
            audit_simple_h(cfg, &s, &t, rng)
        }
        Task::Audit => {
            let Input::Pair(a, b) = input else {
                return Err(Error::param("audit needs both `input` and `input_prime`"));
            };
            match cfg.mechanism.as_deref() {
                Some("interior-point") => audit_interior_point(cfg, a, b, rng),
                Some("simple-h") | None => audit_simple_h(cfg, &to_labeled(a)?, &to_labeled(b)?, rng),
                Some(other) => Err(Error::param(format!("unknown mechanism {other:?}"))),
            }
        }
    }
}

fn domain_size(x: u64) -> u128 {
    2 * x as u128 + 1
}

fn approx_trial(cfg: &ExperimentConfig, rows: Option<&Vec<Vec<i64>>>, rng: &mut RandomSource) -> Result<Outcome> {
    let (d, x) = (cfg.dim(), cfg.x_bound);
    let m = match cfg.m {
        Some(m) => m,
        None => m_subset_size(&ApproxSpec::with_constant(cfg.alpha, cfg.beta, d, cfg.c_vc)?),
    };
    let n = rows.map_or(cfg.n.unwrap_or(4 * m), |r| r.len());
    if m >= n {
        return Err(Error::InsufficientSamples {
            needed: m + 1,
            got: n,
            detail: "subsample must be smaller than the dataset".into(),
        });
    }
    let gap = match cfg.objective {
        Objective::Tukey => {
            let pts = match rows {
                Some(r) => r.clone(),
                None => cluster_points(n, d, x, rng)?.points,
            };
            let sub: Vec<Vec<i64>> = sample(rng, n, m).into_iter().map(|i| pts[i].clone()).collect();
            let q = TukeyTarget::new(d, x, cfg.grid.clone())?;
            sup_gap(&q, &pts, &sub, &tukey_probes(&pts, d)?)?
        }
        Objective::Linfeas => {
            let cs = match rows {
                Some(r) => to_constraints(r, d),
                None => {
                    let planted = cfg.planted.clone().unwrap_or_else(|| default_planted(d));
                    planted_feasible(n, d, x, &planted, rng)?.constraints
                }
            };
            let sub: Vec<Constraint> = sample(rng, n, m).into_iter().map(|i| cs[i].clone()).collect();
            cdepth_sup_gap(&CdepthLevels::new(&cs, d)?, &CdepthLevels::new(&sub, d)?)
        }
    };
    Ok(Outcome {
        utility: gap,
        target: cfg.alpha,
        spent: None,
        output: String::new(),
        detail: format!("n={n} m={m}"),
        report: None,
    })
}

fn audit_outcome(r: AuditReport) -> Outcome {
    Outcome {
        utility: r.epsilon_lower_bound.unwrap_or(0.0),
        target: r.claimed_epsilon.unwrap_or(f64::INFINITY),
        spent: None,
        output: r.verdict.clone(),
        detail: format!("{} counts={}/{}", r.event, r.count_s, r.count_s_prime),
        report: Some(r),
    }
}

fn audit_simple_h(cfg: &ExperimentConfig, s: &[LabeledPoint], t: &[LabeledPoint], rng: &mut RandomSource) -> Result<Outcome> {
    let p = SimpleHParams {
        gamma: cfg.gamma,
        c: cfg.c,
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        alpha: cfg.alpha,
        beta: cfg.beta,
    };
    match cfg.event.as_deref() {
        None | Some("upper-half") => {}
        Some(e) => return Err(Error::param(format!("simple-h supports the event `upper-half`, got {e:?}"))),
    }
    let mech = |d: &[LabeledPoint], r: &mut RandomSource| a_simple_h(d, &p, r).map(|o| o.angle);
    let seed = rng.gen();
    let r = estimate_epsilon_lower_bound(mech, s, t, |a: &f64| in_upper_half(*a), cfg.audit_trials, cfg.delta, Some(cfg.epsilon), seed)?;
    Ok(audit_outcome(r))
}

fn parse_event(spec: Option<&str>) -> Result<(String, i64)> {
    let s = spec.ok_or_else(|| Error::param("interior-point audit needs an event such as `le:0`"))?;
    let (op, v) = s.split_once(':').ok_or_else(|| Error::param(format!("bad event {s:?}")))?;
    let v: i64 = v.parse().map_err(|_| Error::param(format!("bad event value in {s:?}")))?;
    match op {
        "le" | "ge" | "eq" => Ok((op.to_string(), v)),
        _ => Err(Error::param(format!("bad event operator in {s:?}"))),
    }
}

fn audit_interior_point(cfg: &ExperimentConfig, a: &[Vec<i64>], b: &[Vec<i64>], rng: &mut RandomSource) -> Result<Outcome> {
    let x = cfg.x_bound as i64;
    let domain = IntegerRange::new(-x, x)?;
    let spec = IpSolverSpec::baseline(PrivacyParams::pure(cfg.epsilon)?, cfg.beta)?;
    let (op, v) = parse_event(cfg.event.as_deref())?;
    let event = move |o: &i64| match op.as_str() {
        "le" => *o <= v,
        "ge" => *o >= v,
        _ => *o == v,
    };
    let va: Vec<i64> = a.iter().map(|r| r[0]).collect();
    let vb: Vec<i64> = b.iter().map(|r| r[0]).collect();
    let mech = |d: &[i64], r: &mut RandomSource| private_interior_point(d, &domain, &spec, r);
    let seed = rng.gen();
    let r = estimate_epsilon_lower_bound(mech, &va, &vb, event, cfg.audit_trials, 0.0, Some(cfg.epsilon), seed)?;
    Ok(audit_outcome(r))
}

fn row_for(task: Task, trial: usize, seed: u64, cfg: &ExperimentConfig, res: &Result<Outcome>) -> ResultRow {
    let budget = cfg.privacy().ok();
    match res {
        Ok(o) => {
            let success = if task.lower_is_better() {
                o.utility <= o.target
            } else {
                o.utility >= o.target
            };
            ResultRow {
                task: task.name().into(),
                trial,
                seed,
                status: "ok".into(),
                utility: Some(o.utility),
                target: o.target,
                success,
                epsilon_spent: o.spent.map(|p| p.epsilon),
                delta_spent: o.spent.map(|p| p.delta),
                within_budget: o.spent.zip(budget).map(|(s, b)| s.within(&b)),
                output: o.output.clone(),
                detail: o.detail.clone(),
            }
        }
        Err(e) => ResultRow {
            task: task.name().into(),
            trial,
            seed,
            status: if matches!(e, Error::InsufficientSamples { .. }) { "insufficient" } else { "error" }.into(),
            utility: None,
            target: f64::NAN,
            success: false,
            epsilon_spent: None,
            delta_spent: None,
            within_budget: None,
            output: String::new(),
            detail: e.to_string(),
        },
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PlotRow<'a> {
    task: &'a str,
    trial: usize,
    metric: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct TimingRow {
    trial: usize,
    wall_time_ms: f64,
}

/// Runs the configured trials and writes `results.csv`, `summary.json`,
/// `timings.csv` (wall times, kept apart so results are reproducible) and,
/// on request, `plot_data.csv` and `audit_report.json`.
pub fn run_experiment(task: Task, args: &RunArgs) -> Result<Summary> {
    let mut cfg = load_config(args)?;
    if task == Task::LearnHalfspace {
        cfg.d.get_or_insert(1);
    }
    cfg.validate(task)?;
    let input = load_input(task, &cfg)?;
    let seed = cfg.seed.expect("validated");
    fs::create_dir_all(&args.out)?;
    let results: Vec<(Result<Outcome>, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let start = Instant::now();
            let mut rng = RandomSource::new(seed ^ i as u64);
            let r = run_trial(task, &cfg, &input, &mut rng);
            (r, start.elapsed().as_secs_f64() * 1e3)
        })
        .collect();
    let rows: Vec<ResultRow> = results
        .iter()
        .enumerate()
        .map(|(i, (r, _))| row_for(task, i, seed ^ i as u64, &cfg, r))
        .collect();
    write_csv(&args.out.join("results.csv"), &rows)?;
    let timings: Vec<TimingRow> = results
        .iter()
        .enumerate()
        .map(|(trial, (_, ms))| TimingRow { trial, wall_time_ms: *ms })
        .collect();
    write_csv(&args.out.join("timings.csv"), &timings)?;
    if args.emit_plot_data {
        let mut plot = Vec::new();
        for r in &rows {
            if let Some(u) = r.utility {
                plot.push(PlotRow { task: &r.task, trial: r.trial, metric: "utility", value: u });
                plot.push(PlotRow { task: &r.task, trial: r.trial, metric: "target", value: r.target });
                plot.push(PlotRow { task: &r.task, trial: r.trial, metric: "success", value: r.success as u8 as f64 });
            }
        }
        write_csv(&args.out.join("plot_data.csv"), &plot)?;
    }
    let reports: Vec<&AuditReport> = results.iter().filter_map(|(r, _)| r.as_ref().ok()?.report.as_ref()).collect();
    if !reports.is_empty() {
        let text = serde_json::to_string_pretty(&reports).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(args.out.join("audit_report.json"), text + "\n")?;
    }
    let completed = rows.iter().filter(|r| r.status == "ok").count();
    let insufficient = rows.iter().filter(|r| r.status == "insufficient").count();
    let successes = rows.iter().filter(|r| r.success).count();
    let utils: Vec<f64> = rows.iter().filter_map(|r| r.utility).collect();
    let exit_code = if completed == rows.len() {
        0
    } else if insufficient == rows.len() {
        3
    } else {
        1
    };
    let summary = Summary {
        task: task.name().into(),
        trials: rows.len(),
        completed,
        insufficient,
        errors: rows.len() - completed - insufficient,
        successes,
        success_rate: successes as f64 / rows.len() as f64,
        success_ci95: clopper_pearson(successes, rows.len(), 0.95)?,
        mean_utility: (!utils.is_empty()).then(|| utils.iter().sum::<f64>() / utils.len() as f64),
        verdicts: reports.iter().map(|r| r.verdict.clone()).collect(),
        exit_code,
    };
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(args.out.join("summary.json"), text + "\n")?;
    Ok(summary)
}

/// Exit code for an error that stopped the whole run.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parameter(_) | Error::Parse { .. } | Error::Io(_) | Error::UnsupportedDimension { .. } => 2,
        Error::InsufficientSamples { .. } => 3,
        _ => 1,
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (task, args) = match cli.command {
        Command::Generate(g) => {
            return match generate_dataset(&g) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            };
        }
        Command::Tukey(a) => (Task::Tukey, a),
        Command::Linfeas(a) => (Task::Linfeas, a),
        Command::LearnHalfspace(a) => (Task::LearnHalfspace, a),
        Command::IpBench(a) => (Task::IpBench, a),
        Command::ApproxCheck(a) => (Task::ApproxCheck, a),
        Command::AuditAcml(a) => (Task::AuditAcml, a),
        Command::Audit(a) => (Task::Audit, a),
    };
    match run_experiment(task, &args) {
        Ok(s) => {
            println!(
                "{}: {}/{} completed, {} successes (rate {:.3}, 95% CI [{:.3}, {:.3}])",
                s.task, s.completed, s.trials, s.successes, s.success_rate, s.success_ci95.0, s.success_ci95.1
            );
            for v in &s.verdicts {
                println!("verdict: {v}");
            }
            s.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
