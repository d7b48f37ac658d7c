//! Command-line front end.
//!
//! Commands read a TOML run config ([`RunConfig`]) and accept a few flags
//! that override file values. Exit codes: 0 on success, 1 on a runtime
//! failure, 2 on a configuration or input error. Every output lands under
//! the run's output directory; when `INTENT_RRS_OUT` is set, relative output
//! directories are resolved against it.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::checkpoint::{load_checkpoint, save_checkpoint, CheckpointError, PolicyCheckpoint};
use crate::agent::ppo::PpoConfig;
use crate::channel::{save_se_grid, save_sidecar, GridSidecar};
use crate::harness::controller::{Controller, ControllerKind, Learner};
use crate::harness::demand::{demand_analysis, is_over_demand, DemandRow};
use crate::harness::env::{episode_grid, trace_file_name, EnvConfig};
use crate::harness::eval::{aggregate, run_episode, EpisodeRun, EpisodeSummary};
use crate::harness::experiment::{ExperimentConfig, Splits};
use crate::harness::io::{write_csv, write_json};
use crate::harness::train::{train, EpisodeRef, TrainConfig, TrainOutcome};
use crate::harness::HarnessError;
use crate::scenario::{catalog_to_json, load_catalog, load_manifest, save_manifest, NetworkScenario, ScenarioBounds, ScenarioError};

/// Environment variable overriding the output root.
pub const OUT_ENV: &str = "INTENT_RRS_OUT";
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(#[from] ScenarioError),
    #[error("checkpoint error: {0}")]
    Checkpoint(#[from] CheckpointError),
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Input(_) | CliError::Checkpoint(_) => 2,
            CliError::Harness(HarnessError::Config(_)) => 2,
            _ => 1,
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

/// Where scenarios come from: a manifest file, or generated from
/// consecutive seeds starting at `first_seed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSource {
    pub manifest: Option<PathBuf>,
    pub first_seed: u64,
    /// Scenarios to generate; 0 means as many as the experiment needs.
    pub count: usize,
    pub min_slices: usize,
    pub max_slices: usize,
}

impl Default for ScenarioSource {
    fn default() -> Self {
        let b = ScenarioBounds::default();
        Self {
            manifest: None,
            first_seed: 0,
            count: 0,
            min_slices: b.min_slices,
            max_slices: b.max_slices,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub controller: ControllerKind,
    pub seed: u64,
    pub validate_every: usize,
    pub max_env_steps: Option<u64>,
    /// Initial parameters for `finetune`.
    pub base_checkpoint: Option<PathBuf>,
    pub ppo: PpoConfig,
}

impl Default for TrainSection {
    fn default() -> Self {
        let t = TrainConfig::default();
        Self {
            controller: t.controller,
            seed: t.seed,
            validate_every: t.validate_every,
            max_env_steps: t.max_env_steps,
            base_checkpoint: None,
            ppo: t.ppo,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub controllers: Vec<ControllerKind>,
    /// Checkpoint per learned controller name; missing ones are trained.
    pub checkpoints: BTreeMap<String, PathBuf>,
    /// Write the per-step, per-UE metrics file.
    pub record_ues: bool,
}

impl Default for EvalSection {
    fn default() -> Self {
        Self {
            controllers: ControllerKind::ALL.to_vec(),
            checkpoints: BTreeMap::new(),
            record_ues: false,
        }
    }
}

/// Everything a command needs; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub catalog: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[serde(default)]
    pub threads: usize,
    #[serde(default)]
    pub scenarios: ScenarioSource,
    #[serde(default)]
    pub env: EnvConfig,
    #[serde(default)]
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub eval: EvalSection,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("runs")
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            output_dir: default_output_dir(),
            catalog: None,
            threads: 0,
            scenarios: ScenarioSource::default(),
            env: EnvConfig::default(),
            experiment: ExperimentConfig::default(),
            train: TrainSection::default(),
            eval: EvalSection::default(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let c: RunConfig = toml::from_str(text).map_err(config_err)?;
        if c.version != CONFIG_VERSION {
            return Err(CliError::Config(format!(
                "config version {} is not supported (expected {CONFIG_VERSION})",
                c.version
            )));
        }
        c.env.channel.validate().map_err(config_err)?;
        c.experiment.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            controller: self.train.controller,
            ppo: self.train.ppo.clone(),
            epochs: self.experiment.epochs,
            validate_every: self.train.validate_every,
            max_env_steps: self.train.max_env_steps,
            seed: self.train.seed,
        }
    }

    /// Loads or generates the scenario list.
    pub fn scenarios(&self) -> Result<Vec<Arc<NetworkScenario>>, CliError> {
        let need = self.experiment.scenarios_needed();
        let list = if let Some(m) = &self.scenarios.manifest {
            load_manifest(m)?
        } else {
            let catalog = load_catalog(self.catalog.as_deref())?;
            let bounds = ScenarioBounds {
                min_slices: self.scenarios.min_slices,
                max_slices: self.scenarios.max_slices,
            };
            let n = if self.scenarios.count == 0 { need } else { self.scenarios.count };
            (0..n)
                .map(|i| NetworkScenario::from_seed(i as u32, self.scenarios.first_seed + i as u64, &catalog, bounds))
                .collect::<Result<Vec<_>, _>>()?
        };
        if list.len() < need {
            return Err(CliError::Config(format!(
                "experiment needs {need} scenarios, only {} available",
                list.len()
            )));
        }
        Ok(list.into_iter().map(Arc::new).collect())
    }
}

#[derive(Debug, Parser)]
#[command(name = "intent-rrs", version, about = "Intent-driven RAN slicing scheduler experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print or export the slice-type catalog.
    Catalog(CatalogArgs),
    /// Write a scenario manifest and SE-grid trace files.
    Gen(GenArgs),
    /// Train a learned controller.
    Train(RunArgs),
    /// Continue training from a base checkpoint.
    Finetune(FinetuneArgs),
    /// Evaluate one controller on the test episodes.
    Eval(EvalArgs),
    /// Evaluate every configured controller on the test episodes.
    Compare(RunArgs),
    /// RBs needed to carry each scenario's traffic.
    Demand(RunArgs),
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Catalog JSON to load instead of the built-in one.
    #[arg(long)]
    pub catalog: Option<PathBuf>,
    /// Write the catalog here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML run config; defaults apply when omitted.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Training seed (overrides `train.seed`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (overrides `threads`).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// First scenario seed (overrides `scenarios.first_seed`).
    #[arg(long)]
    pub first_seed: Option<u64>,
    /// Scenarios to generate (overrides `scenarios.count`).
    #[arg(long)]
    pub count: Option<usize>,
    /// Channel episodes per scenario.
    #[arg(long, default_value_t = 1)]
    pub episodes: u32,
}

#[derive(Debug, Args)]
pub struct FinetuneArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Base checkpoint (overrides `train.base_checkpoint`).
    #[arg(long)]
    pub base: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value = "marr")]
    pub controller: ControllerKind,
    /// Checkpoint for a learned controller.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

/// Resolved config plus output directory.
struct Run {
    cfg: RunConfig,
    out: PathBuf,
}

fn resolve(args: &RunArgs) -> Result<Run, CliError> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = args.seed {
        cfg.train.seed = s;
    }
    if let Some(t) = args.threads {
        cfg.threads = t;
    }
    if let Some(o) = &args.out {
        cfg.output_dir = o.clone();
    }
    let out = match std::env::var_os(OUT_ENV) {
        Some(root) if cfg.output_dir.is_relative() => PathBuf::from(root).join(&cfg.output_dir),
        _ => cfg.output_dir.clone(),
    };
    Ok(Run { cfg, out })
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))
}

/// One step of one evaluated episode.
#[derive(Debug, Clone, Serialize)]
struct StepRow {
    scenario_id: u32,
    episode: u32,
    controller: String,
    step: usize,
    distance_total: f64,
    distance_hp: f64,
    violations_total: f64,
    violations_hp: f64,
    reward: f64,
}

#[derive(Debug, Clone, Serialize)]
struct DemandFileRow {
    scenario_id: u32,
    episode: u32,
    step: usize,
    rbs_min_se: f64,
    rbs_avg_se: f64,
    rbs_max_se: f64,
}

#[derive(Debug, Clone, Serialize)]
struct DemandSummaryRow {
    scenario_id: u32,
    episode: u32,
    mean_rbs_min_se: f64,
    mean_rbs_avg_se: f64,
    mean_rbs_max_se: f64,
    over_demand: bool,
}

fn evaluate(
    scenarios: &[Arc<NetworkScenario>],
    eps: &[EpisodeRef],
    env: &EnvConfig,
    controller: Controller<'_>,
    record_ues: bool,
) -> Result<Vec<EpisodeRun>, CliError> {
    let runs: Result<Vec<_>, HarnessError> = eps
        .par_iter()
        .map(|e| run_episode(&scenarios[e.scenario], e.episode, env, controller, record_ues))
        .collect();
    Ok(runs?)
}

fn write_eval(out: &Path, runs: &[EpisodeRun], record_ues: bool) -> Result<(), CliError> {
    let summaries: Vec<EpisodeSummary> = runs.iter().map(|r| r.summary.clone()).collect();
    write_csv(&out.join("summary.csv"), &summaries)?;
    write_csv(&out.join("totals.csv"), &aggregate(&summaries))?;
    let steps: Vec<StepRow> = runs
        .iter()
        .flat_map(|r| {
            r.steps.iter().map(move |s| StepRow {
                scenario_id: r.summary.scenario_id,
                episode: r.summary.episode,
                controller: r.summary.controller.clone(),
                step: s.step,
                distance_total: s.distance_total,
                distance_hp: s.distance_hp,
                violations_total: s.violations_total,
                violations_hp: s.violations_hp,
                reward: s.reward,
            })
        })
        .collect();
    write_csv(&out.join("steps.csv"), &steps)?;
    if record_ues {
        let ues: Vec<_> = runs.iter().flat_map(|r| r.ue_rows.iter().copied()).collect();
        write_csv(&out.join("ue_metrics.csv"), &ues)?;
    }
    Ok(())
}

fn write_training(out: &Path, o: &TrainOutcome) -> Result<(), CliError> {
    write_csv(&out.join("curve.csv"), &o.curve)?;
    write_csv(&out.join("validation.csv"), &o.validations)?;
    save_checkpoint(&o.best.to_checkpoint(), &out.join("best.ckpt"))?;
    save_checkpoint(&o.last.to_checkpoint(), &out.join("last.ckpt"))?;
    Ok(())
}

fn load_learner(path: &Path, ppo: &PpoConfig, kind: ControllerKind) -> Result<Learner, CliError> {
    let c: PolicyCheckpoint = load_checkpoint(path)?;
    let l = Learner::from_checkpoint(&c, ppo)?;
    if l.kind != kind {
        return Err(CliError::Config(format!(
            "{} holds a {} policy, expected {kind}",
            path.display(),
            l.kind
        )));
    }
    Ok(l)
}

fn training_run(run: &Run, scenarios: &[Arc<NetworkScenario>], splits: &Splits, init: Option<Learner>, kind: ControllerKind) -> Result<TrainOutcome, CliError> {
    let mut tc = run.cfg.train_config();
    tc.controller = kind;
    let o = train(&run.cfg.env, scenarios, &splits.train, &splits.val, &tc, init)?;
    if let Some(msg) = &o.aborted {
        eprintln!("training stopped early: {msg}");
    }
    Ok(o)
}

fn cmd_catalog(a: &CatalogArgs) -> Result<(), CliError> {
    let cat = load_catalog(a.catalog.as_deref())?;
    let text = catalog_to_json(&cat);
    match &a.out {
        Some(p) => {
            if let Some(d) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(d)?;
            }
            fs::write(p, text)?;
        }
        None => {
            let mut o = std::io::stdout().lock();
            match writeln!(o, "{text}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            }
        }
    }
    Ok(())
}

fn cmd_gen(a: &GenArgs) -> Result<(), CliError> {
    let mut run = resolve(&a.run)?;
    if let Some(s) = a.first_seed {
        run.cfg.scenarios.first_seed = s;
    }
    if let Some(c) = a.count {
        run.cfg.scenarios.count = c;
    }
    if run.cfg.scenarios.manifest.is_some() {
        return Err(CliError::Config("gen writes a manifest; do not configure one".into()));
    }
    let scenarios = run.cfg.scenarios()?;
    let env = EnvConfig {
        trace_dir: None,
        ..run.cfg.env.clone()
    };
    let traces = run.out.join("traces");
    fs::create_dir_all(&traces)?;
    let list: Vec<NetworkScenario> = scenarios.iter().map(|s| (**s).clone()).collect();
    save_manifest(&run.out.join("manifest.json"), &list)?;
    let jobs: Vec<(usize, u32)> = (0..scenarios.len()).flat_map(|s| (0..a.episodes).map(move |e| (s, e))).collect();
    pool(run.cfg.threads)?.install(|| {
        jobs.par_iter().try_for_each(|&(s, e)| -> Result<(), CliError> {
            let sc = &scenarios[s];
            let g = episode_grid(sc, e, &env).map_err(HarnessError::from)?;
            let name = trace_file_name(sc.scenario_id, e);
            save_se_grid(&g, &traces.join(&name)).map_err(HarnessError::from)?;
            let meta = GridSidecar {
                scenario_id: sc.scenario_id,
                episode: e,
                seed: sc.seed,
                params: env.channel.clone(),
                mobility: env.mobility.clone(),
            };
            save_sidecar(&meta, &traces.join(format!("{name}.json"))).map_err(HarnessError::from)?;
            Ok(())
        })
    })?;
    println!("wrote {} scenarios and {} traces to {}", list.len(), jobs.len(), run.out.display());
    Ok(())
}

fn cmd_train(a: &RunArgs) -> Result<(), CliError> {
    let run = resolve(a)?;
    let kind = run.cfg.train.controller;
    if !kind.is_learned() {
        return Err(CliError::Config(format!("{kind} is not trainable")));
    }
    let scenarios = run.cfg.scenarios()?;
    let splits = run.cfg.experiment.splits()?;
    pool(run.cfg.threads)?.install(|| -> Result<(), CliError> {
        let o = training_run(&run, &scenarios, &splits, None, kind)?;
        fs::create_dir_all(&run.out)?;
        write_json(&run.out.join("run.json"), &run.cfg)?;
        write_training(&run.out, &o)?;
        let runs = evaluate(&scenarios, &splits.test, &run.cfg.env, Controller::Greedy(&o.best), false)?;
        write_eval(&run.out, &runs, false)
    })?;
    println!("wrote {}", run.out.display());
    Ok(())
}

fn cmd_finetune(a: &FinetuneArgs) -> Result<(), CliError> {
    let mut run = resolve(&a.run)?;
    if let Some(b) = &a.base {
        run.cfg.train.base_checkpoint = Some(b.clone());
    }
    let kind = run.cfg.train.controller;
    let base = run
        .cfg
        .train
        .base_checkpoint
        .clone()
        .ok_or_else(|| CliError::Config("finetune needs a base checkpoint".into()))?;
    let mut init = load_learner(&base, &run.cfg.train.ppo, kind)?;
    init.env_steps = 0;
    let scenarios = run.cfg.scenarios()?;
    let splits = run.cfg.experiment.splits()?;
    pool(run.cfg.threads)?.install(|| -> Result<(), CliError> {
        let o = training_run(&run, &scenarios, &splits, Some(init), kind)?;
        fs::create_dir_all(&run.out)?;
        write_json(&run.out.join("run.json"), &run.cfg)?;
        write_training(&run.out, &o)?;
        let runs = evaluate(&scenarios, &splits.test, &run.cfg.env, Controller::Greedy(&o.best), false)?;
        write_eval(&run.out, &runs, false)
    })?;
    println!("wrote {}", run.out.display());
    Ok(())
}

fn cmd_eval(a: &EvalArgs) -> Result<(), CliError> {
    let run = resolve(&a.run)?;
    let kind = a.controller;
    let learner = match (kind.is_learned(), &a.checkpoint) {
        (true, Some(p)) => Some(load_learner(p, &run.cfg.train.ppo, kind)?),
        (true, None) => return Err(CliError::Config(format!("{kind} needs --checkpoint"))),
        (false, Some(_)) => return Err(CliError::Config(format!("{kind} takes no checkpoint"))),
        (false, None) => None,
    };
    let scenarios = run.cfg.scenarios()?;
    let splits = run.cfg.experiment.splits()?;
    let controller = match (&learner, kind) {
        (Some(l), _) => Controller::Greedy(l),
        (None, ControllerKind::Mapf) => Controller::Mapf,
        (None, _) => Controller::Marr,
    };
    let record = run.cfg.eval.record_ues;
    pool(run.cfg.threads)?.install(|| -> Result<(), CliError> {
        let runs = evaluate(&scenarios, &splits.test, &run.cfg.env, controller, record)?;
        fs::create_dir_all(&run.out)?;
        write_eval(&run.out, &runs, record)
    })?;
    println!("wrote {}", run.out.display());
    Ok(())
}

fn cmd_compare(a: &RunArgs) -> Result<(), CliError> {
    let run = resolve(a)?;
    let ev = &run.cfg.eval;
    if ev.controllers.is_empty() {
        return Err(CliError::Config("eval.controllers is empty".into()));
    }
    for name in ev.checkpoints.keys() {
        let k: ControllerKind = name.parse().map_err(config_err)?;
        if !k.is_learned() || !ev.controllers.contains(&k) {
            return Err(CliError::Config(format!("checkpoint given for `{name}`, which is not a compared learned controller")));
        }
    }
    let mut learners: BTreeMap<ControllerKind, Learner> = BTreeMap::new();
    for (name, p) in &ev.checkpoints {
        let k: ControllerKind = name.parse().map_err(config_err)?;
        learners.insert(k, load_learner(p, &run.cfg.train.ppo, k)?);
    }
    let scenarios = run.cfg.scenarios()?;
    let splits = run.cfg.experiment.splits()?;
    pool(run.cfg.threads)?.install(|| -> Result<(), CliError> {
        fs::create_dir_all(&run.out)?;
        write_json(&run.out.join("run.json"), &run.cfg)?;
        for &k in &ev.controllers {
            if k.is_learned() && !learners.contains_key(&k) {
                let o = training_run(&run, &scenarios, &splits, None, k)?;
                write_training(&run.out.join(k.name()), &o)?;
                learners.insert(k, o.best);
            }
        }
        let mut all = Vec::new();
        for &k in &ev.controllers {
            let c = match k {
                ControllerKind::Marr => Controller::Marr,
                ControllerKind::Mapf => Controller::Mapf,
                _ => Controller::Greedy(&learners[&k]),
            };
            all.extend(evaluate(&scenarios, &splits.test, &run.cfg.env, c, false)?);
        }
        write_eval(&run.out, &all, false)
    })?;
    println!("wrote {}", run.out.display());
    Ok(())
}

fn cmd_demand(a: &RunArgs) -> Result<(), CliError> {
    let run = resolve(a)?;
    let scenarios = run.cfg.scenarios()?;
    let splits = run.cfg.experiment.splits()?;
    let mut eps: Vec<EpisodeRef> = splits.train.iter().chain(&splits.val).chain(&splits.test).copied().collect();
    eps.sort_by_key(|e| (e.scenario, e.episode));
    eps.dedup();
    let env = &run.cfg.env;
    let per: Vec<Vec<DemandRow>> = pool(run.cfg.threads)?.install(|| {
        eps.par_iter()
            .map(|e| -> Result<Vec<DemandRow>, CliError> {
                let sc = &scenarios[e.scenario];
                let g = episode_grid(sc, e.episode, env).map_err(HarnessError::from)?;
                Ok(demand_analysis(sc, &g, env.channel.bandwidth_hz()))
            })
            .collect::<Result<_, _>>()
    })?;
    let mut rows = Vec::new();
    let mut summary = Vec::new();
    for (e, d) in eps.iter().zip(&per) {
        let id = scenarios[e.scenario].scenario_id;
        let mean = |f: fn(&DemandRow) -> f64| d.iter().map(f).sum::<f64>() / d.len().max(1) as f64;
        summary.push(DemandSummaryRow {
            scenario_id: id,
            episode: e.episode,
            mean_rbs_min_se: mean(|r| r.rbs_min_se),
            mean_rbs_avg_se: mean(|r| r.rbs_avg_se),
            mean_rbs_max_se: mean(|r| r.rbs_max_se),
            over_demand: is_over_demand(d),
        });
        rows.extend(d.iter().map(|r| DemandFileRow {
            scenario_id: id,
            episode: e.episode,
            step: r.step,
            rbs_min_se: r.rbs_min_se,
            rbs_avg_se: r.rbs_avg_se,
            rbs_max_se: r.rbs_max_se,
        }));
    }
    fs::create_dir_all(&run.out)?;
    write_csv(&run.out.join("demand.csv"), &rows)?;
    write_csv(&run.out.join("demand_summary.csv"), &summary)?;
    println!("wrote {}", run.out.display());
    Ok(())
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Catalog(a) => cmd_catalog(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Train(a) => cmd_train(a),
        Command::Finetune(a) => cmd_finetune(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Demand(a) => cmd_demand(a),
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run_from<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run_from(std::env::args_os()))
}
