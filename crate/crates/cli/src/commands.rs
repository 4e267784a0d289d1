//! Subcommand implementations. Each returns the one-line JSON report printed
//! to standard output; artifacts go to the output directory.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use aqo_core::graphs::{
    census, generate_with_retries, GeneratorOptions, GeneratorParams, DEFAULT_ENUMERATION_CAP, DEFAULT_PENALTY,
};
use aqo_core::ising::build_model;
use aqo_core::perturbation::{cluster_from_members, cluster_state, predict_crossing};
use aqo_core::rng::derive_seed;
use aqo_core::sampler::SamplerConfig;
use aqo_core::spectrum::{adiabatic_time, detect_discontinuity, profile_and_tracks, Discontinuity};
use aqo_core::tuner::{self, unsolved_counts, IterationRecord, TunerConfig, TunerRun, DEFAULT_JUMP_THRESHOLD};
use aqo_core::{ProblemInstance, Schedule};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{required, AnalyzeArgs, BatchArgs, GenerateArgs, SpectrumArgs, TuneArgs, TuneOpts};
use crate::error::{CliError, CliResult};
use crate::formats::{
    histogram_csv, profile_csv, read_delta, read_instance, read_schedule, tracks_csv, AnalysisReport, ClusterReport,
    InstanceFile, PredictionReport, SampleSetFile, FORMAT_VERSION,
};
use crate::manifest::Session;

/// Default attempts per requested instance in `generate`.
pub const DEFAULT_MAX_ATTEMPTS: u32 = 5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub file: String,
    pub seed: u64,
    pub attempts: u32,
    pub mis_size: usize,
    pub mis_unique: bool,
    /// Maximal independent sets by size, for sizes `m` and `m - 1`.
    pub minima_by_size: std::collections::BTreeMap<usize, usize>,
    /// Largest 2-flip cluster at size `m - 1`.
    pub largest_cluster_below: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerationFailure {
    pub index: usize,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub version: u32,
    pub params: GeneratorParams,
    pub penalty: f64,
    pub seed: u64,
    pub requested: usize,
    pub written: usize,
    pub instances: Vec<CorpusEntry>,
    pub failures: Vec<GenerationFailure>,
}

pub fn generate(a: &GenerateArgs, s: &mut Session) -> CliResult<Value> {
    let d = GeneratorParams::DESK;
    let params = GeneratorParams {
        n: a.n.unwrap_or(d.n),
        e_initial: a.edges.unwrap_or(d.e_initial),
        m: a.mis.unwrap_or(d.m),
    };
    if params.n == 0 || params.m == 0 || params.m > params.n {
        return Err(CliError::Usage(format!(
            "need 0 < mis <= n, got n = {} and mis = {}",
            params.n, params.m
        )));
    }
    let max_edges = params.n * (params.n - 1) / 2;
    if params.e_initial > max_edges {
        return Err(CliError::Usage(format!(
            "--edges {} exceeds n(n-1)/2 = {max_edges}",
            params.e_initial
        )));
    }
    let seed = a.seed.unwrap_or(0);
    let penalty = a.penalty.unwrap_or(DEFAULT_PENALTY);
    let attempts = a.max_attempts.unwrap_or(DEFAULT_MAX_ATTEMPTS);
    let cap = a.census_cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    s.seed("root", seed);
    let opts = GeneratorOptions {
        penalty,
        should_abort: None,
    };
    let count = a.count.unwrap_or(1);
    let mut summary = CorpusSummary {
        version: FORMAT_VERSION,
        params,
        penalty,
        seed,
        requested: count,
        written: 0,
        instances: Vec::new(),
        failures: Vec::new(),
    };
    for index in 0..count {
        let inst_seed = derive_seed(seed, index as u64);
        let fail = |error: String| GenerationFailure {
            index,
            seed: inst_seed,
            error,
        };
        let (inst, used) = match generate_with_retries(params, inst_seed, attempts, &opts) {
            Ok(v) => v,
            Err(e) => {
                eprintln!("warning: instance {index} (seed {inst_seed}): {e}");
                summary.failures.push(fail(e.to_string()));
                continue;
            }
        };
        let c = census(&inst, &[params.m.saturating_sub(1).max(1), params.m], cap)?;
        if !c.mis_unique || c.mis_size != params.m {
            let msg = format!("census found MIS size {} (unique: {})", c.mis_size, c.mis_unique);
            eprintln!("warning: instance {index} (seed {inst_seed}): {msg}");
            summary.failures.push(fail(msg));
            continue;
        }
        let file = format!("instance_{index:04}.json");
        s.out.write_json(&file, &InstanceFile::from_instance(&inst))?;
        summary.instances.push(CorpusEntry {
            file,
            seed: inst.seed,
            attempts: used,
            mis_size: c.mis_size,
            mis_unique: c.mis_unique,
            largest_cluster_below: c.largest_cluster(params.m - 1),
            minima_by_size: c.by_size,
        });
    }
    summary.written = summary.instances.len();
    if summary.written < count {
        eprintln!(
            "warning: {} of {count} instances could not be generated",
            count - summary.written
        );
    }
    s.out.write_json("corpus_summary.json", &summary)?;
    Ok(json!({
        "requested": count,
        "written": summary.written,
        "failures": summary.failures.len(),
    }))
}

fn instance_and_model_inputs(
    s: &mut Session,
    instance: &Option<PathBuf>,
    schedule: &Option<PathBuf>,
    delta: &Option<PathBuf>,
) -> CliResult<(ProblemInstance, Schedule, Option<Vec<f64>>)> {
    let path = required(instance, "instance")?;
    s.input(path)?;
    let inst = read_instance(path)?;
    if let Some(p) = schedule {
        s.input(p)?;
    }
    let sch = read_schedule(schedule.as_deref())?;
    let delta = match delta {
        Some(p) => {
            s.input(p)?;
            let d = read_delta(p)?;
            if d.len() != inst.node_count() {
                return Err(CliError::read(
                    p,
                    format!("{} fields for {} qubits", d.len(), inst.node_count()),
                ));
            }
            Some(d)
        }
        None => None,
    };
    Ok((inst, sch, delta))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub version: u32,
    pub n: usize,
    pub s_star: f64,
    pub g_min: f64,
    pub t_a: f64,
    pub matrix_element: f64,
    pub degenerate_at_end: bool,
    pub discontinuity: Discontinuity,
}

pub fn spectrum(a: &SpectrumArgs, s: &mut Session) -> CliResult<Value> {
    let (inst, sch, delta) = instance_and_model_inputs(s, &a.instance, &a.schedule, &a.delta)?;
    let model = build_model(&inst, delta.as_deref())?;
    let cfg = a.profile.config()?;
    let (profile, tracks) = profile_and_tracks(&model, &sch, &cfg)?;
    let ta = adiabatic_time(&model, &sch, &profile, &cfg.solver)?;
    let report = SpectrumReport {
        version: FORMAT_VERSION,
        n: inst.node_count(),
        s_star: profile.s_star,
        g_min: profile.g_min,
        t_a: ta.t_a,
        matrix_element: ta.matrix_element,
        degenerate_at_end: profile.degenerate_at_end,
        discontinuity: detect_discontinuity(&tracks, a.jump_threshold.unwrap_or(DEFAULT_JUMP_THRESHOLD)),
    };
    s.out.write("profile.csv", &profile_csv(&profile)?)?;
    s.out.write("tracks.csv", &tracks_csv(&tracks)?)?;
    s.out.write_json("summary.json", &report)?;
    Ok(serde_json::to_value(&report)?)
}

pub fn analyze(a: &AnalyzeArgs, s: &mut Session) -> CliResult<Value> {
    let (inst, sch, delta) = instance_and_model_inputs(s, &a.instance, &a.schedule, &a.delta)?;
    let model = build_model(&inst, delta.as_deref())?;
    let cap = a.census_cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let sizes = match inst.known_mis {
        Some(m) if !a.all_sizes && m.len() >= 2 => vec![m.len() - 1, m.len()],
        _ => Vec::new(),
    };
    let c = census(&inst, &sizes, cap)?;
    let global_members = c.clusters_of_size(c.mis_size).flatten().copied().collect::<Vec<_>>();
    let global = cluster_state(&model, &cluster_from_members(&model, global_members))?;
    let mut clusters = vec![ClusterReport::new(&global)];
    let mut predictions = Vec::new();
    for members in c.clusters.iter().filter(|m| m[0].len() < c.mis_size) {
        let local = cluster_state(&model, &cluster_from_members(&model, members.clone()))?;
        clusters.push(ClusterReport::new(&local));
        // Equal-energy clusters of different size cannot cross at second order.
        if local.e0 > global.e0 {
            let p = predict_crossing(&global, &local)?;
            predictions.push(PredictionReport::new(clusters.len() - 1, &p, &sch));
        }
    }
    let earliest = predictions
        .iter()
        .enumerate()
        .filter(|(_, p)| p.lambda_star.is_some())
        .max_by(|a, b| a.1.lambda_star.partial_cmp(&b.1.lambda_star).expect("finite λ*"))
        .map(|(k, _)| k);
    let report = AnalysisReport {
        version: FORMAT_VERSION,
        clusters,
        predictions,
        earliest,
    };
    s.out.write_json("analysis.json", &report)?;
    let e = earliest.map(|k| &report.predictions[k]);
    Ok(json!({
        "clusters": report.clusters.len(),
        "crossings": report.predictions.iter().filter(|p| p.condition_met).count(),
        "lambda_star": e.and_then(|p| p.lambda_star),
        "s_star": e.and_then(|p| p.s_star),
    }))
}

/// Last line of a run log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneSummary {
    pub version: u32,
    pub n: usize,
    pub solved: bool,
    pub solved_at: Option<u32>,
    pub updates_to_solve: Option<u32>,
    pub evaluations: usize,
    pub interrupted: bool,
    pub global_min: Vec<usize>,
    pub final_delta: Vec<f64>,
    /// Detector verdict on the first and last evaluations, when tracks were
    /// recorded.
    pub first_discontinuity: Option<bool>,
    pub last_discontinuity: Option<bool>,
}

#[derive(Serialize)]
struct LogLine<'a, T: Serialize> {
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

fn log_line<T: Serialize>(kind: &'static str, body: &T) -> CliResult<String> {
    let mut s = serde_json::to_string(&LogLine { kind, body })?;
    s.push('\n');
    Ok(s)
}

fn summarize(inst: &ProblemInstance, run: &TunerRun) -> TuneSummary {
    let last = run.iterations.last();
    TuneSummary {
        version: FORMAT_VERSION,
        n: inst.node_count(),
        solved: run.solved_at.is_some(),
        solved_at: run.solved_at,
        updates_to_solve: run.updates_to_solve(),
        evaluations: run.iterations.len(),
        interrupted: run.interrupted,
        global_min: run.global_min.to_vec(),
        final_delta: last
            .map(|r| r.delta_after.clone().unwrap_or_else(|| r.delta_before.clone()))
            .unwrap_or_default(),
        first_discontinuity: run.iterations.first().and_then(|r| r.discontinuity.map(|d| d.found)),
        last_discontinuity: last.and_then(|r| r.discontinuity.map(|d| d.found)),
    }
}

/// Files of one tuner run, relative to the run's directory prefix.
struct RunArtifacts {
    files: Vec<(String, Vec<u8>)>,
    summary: TuneSummary,
}

fn tune_instance(
    inst: &ProblemInstance,
    sch: &Schedule,
    cfg: &TunerConfig,
    sampler: &SamplerConfig,
    deadline: Option<Instant>,
    log_name: &str,
    prefix: &str,
) -> CliResult<RunArtifacts> {
    let run = tuner::run_observed(inst, sch, cfg, sampler, &mut |_| {
        deadline.is_none_or(|d| Instant::now() < d)
    })?;
    let mut log = String::new();
    let mut files = Vec::new();
    for rec in &run.iterations {
        let slim = IterationRecord {
            tracks: None,
            ..rec.clone()
        };
        log.push_str(&log_line("iteration", &slim)?);
        let seed = derive_seed(sampler.seed, rec.kappa as u64);
        let set = SampleSetFile::new(&rec.samples, &SamplerConfig { r: cfg.r, ..*sampler }, seed);
        files.push((format!("{prefix}samples/iter_{:02}.json", rec.kappa), pretty(&set)?));
        if let Some(t) = &rec.tracks {
            files.push((format!("{prefix}tracks/iter_{:02}.csv", rec.kappa), tracks_csv(t)?));
        }
    }
    let summary = summarize(inst, &run);
    log.push_str(&log_line("summary", &summary)?);
    files.push((log_name.to_string(), log.into_bytes()));
    Ok(RunArtifacts { files, summary })
}

fn pretty<T: Serialize>(v: &T) -> CliResult<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn deadline(opts: &TuneOpts) -> CliResult<Option<Instant>> {
    match opts.time_budget {
        Some(b) if !(b > 0.0) || !b.is_finite() => Err(CliError::Usage("--time-budget must be positive".into())),
        Some(b) => Ok(Some(Instant::now() + Duration::from_secs_f64(b))),
        None => Ok(None),
    }
}

pub fn tune(a: &TuneArgs, s: &mut Session) -> CliResult<Value> {
    let (inst, sch, _) = instance_and_model_inputs(s, &a.instance, &a.schedule, &None)?;
    let cfg = a.tune.tuner_config()?;
    let sampler = a.tune.sampler.config(a.tune.seed())?;
    s.seed("sampler", sampler.seed);
    let art = tune_instance(&inst, &sch, &cfg, &sampler, deadline(&a.tune)?, "run.jsonl", "")?;
    for (path, bytes) in &art.files {
        s.out.write(path, bytes)?;
    }
    s.out.write_json("summary.json", &art.summary)?;
    s.interrupted = art.summary.interrupted;
    Ok(serde_json::to_value(&art.summary)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchEntry {
    pub file: String,
    pub solved_at: Option<u32>,
    pub evaluations: usize,
    pub interrupted: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchFailure {
    pub file: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stat {
    pub max: Option<u32>,
    pub mean: Option<f64>,
}

impl Stat {
    fn of(v: &[u32]) -> Self {
        Stat {
            max: v.iter().copied().max(),
            mean: (!v.is_empty()).then(|| v.iter().map(|&x| x as f64).sum::<f64>() / v.len() as f64),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchSummary {
    pub version: u32,
    pub instances: usize,
    pub completed: usize,
    pub solved: usize,
    /// Not started because the time budget ran out.
    pub skipped: Vec<String>,
    pub failures: Vec<BatchFailure>,
    /// Δ updates before the solving evaluation, over solved instances.
    pub updates_to_solve: Stat,
    /// Solving `kappa` (evaluations), over solved instances.
    pub kappa_to_solve: Stat,
    pub runs: Vec<BatchEntry>,
    /// Published 64-qubit statistics, for comparison only.
    pub reference: Value,
}

fn reference_statistics() -> Value {
    json!({
        "qubits": 64,
        "instances": 50,
        "all_solved_within_iterations": 13,
        "solved_within_2_iterations": 30,
        "mean_iterations": 3.0,
        "reproduced": false,
    })
}

fn corpus_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|e| CliError::read(dir, e))?;
    let mut files = Vec::new();
    for entry in rd {
        let p = entry.map_err(|e| CliError::read(dir, e))?.path();
        let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if p.extension().is_some_and(|e| e == "json") && name != "corpus_summary.json" && name != "manifest.json" {
            files.push(p);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::read(dir, "no instance files"));
    }
    Ok(files)
}

enum Outcome {
    Done(RunArtifacts),
    Failed(String),
    Skipped,
}

pub fn batch(a: &BatchArgs, s: &mut Session) -> CliResult<Value> {
    let dir = required(&a.corpus, "corpus")?;
    let files = corpus_files(dir)?;
    for f in &files {
        s.input(f)?;
    }
    if let Some(p) = &a.schedule {
        s.input(p)?;
    }
    let sch = read_schedule(a.schedule.as_deref())?;
    let cfg = a.tune.tuner_config()?;
    let sampler = a.tune.sampler.config(a.tune.seed())?;
    s.seed("sampler", sampler.seed);
    let deadline = deadline(&a.tune)?;
    let workers = match a.workers {
        Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
    .min(files.len());

    let stems: Vec<String> = files
        .iter()
        .map(|f| f.file_stem().and_then(|n| n.to_str()).unwrap_or("instance").to_string())
        .collect();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Outcome>>> = Mutex::new((0..files.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= files.len() {
                    break;
                }
                let outcome = if deadline.is_some_and(|d| Instant::now() >= d) {
                    Outcome::Skipped
                } else {
                    let stem = &stems[k];
                    let r = read_instance(&files[k]).and_then(|inst| {
                        tune_instance(
                            &inst,
                            &sch,
                            &cfg,
                            &sampler,
                            deadline,
                            &format!("runs/{stem}.jsonl"),
                            &format!("runs/{stem}/"),
                        )
                    });
                    match r {
                        Ok(art) => Outcome::Done(art),
                        Err(e) => {
                            eprintln!("warning: {}: {e}", files[k].display());
                            Outcome::Failed(e.to_string())
                        }
                    }
                };
                results.lock().expect("worker panicked")[k] = Some(outcome);
            });
        }
    });

    let mut summary = BatchSummary {
        version: FORMAT_VERSION,
        instances: files.len(),
        completed: 0,
        solved: 0,
        skipped: Vec::new(),
        failures: Vec::new(),
        updates_to_solve: Stat::of(&[]),
        kappa_to_solve: Stat::of(&[]),
        runs: Vec::new(),
        reference: reference_statistics(),
    };
    let mut solved_at = Vec::new();
    let results = results.into_inner().expect("worker panicked");
    for (k, outcome) in results.into_iter().enumerate() {
        let file = files[k]
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or_default()
            .to_string();
        match outcome.expect("every index visited") {
            Outcome::Done(art) => {
                for (path, bytes) in &art.files {
                    s.out.write(path, bytes)?;
                }
                s.interrupted |= art.summary.interrupted;
                solved_at.push(art.summary.solved_at);
                summary.runs.push(BatchEntry {
                    file,
                    solved_at: art.summary.solved_at,
                    evaluations: art.summary.evaluations,
                    interrupted: art.summary.interrupted,
                });
            }
            Outcome::Failed(error) => summary.failures.push(BatchFailure { file, error }),
            Outcome::Skipped => {
                s.interrupted = true;
                summary.skipped.push(file);
            }
        }
    }
    let kappas: Vec<u32> = solved_at.iter().flatten().copied().collect();
    let updates: Vec<u32> = kappas.iter().map(|k| k - 1).collect();
    summary.completed = solved_at.len();
    summary.solved = kappas.len();
    summary.updates_to_solve = Stat::of(&updates);
    summary.kappa_to_solve = Stat::of(&kappas);
    let counts = unsolved_counts(&solved_at, cfg.max_iterations);
    s.out.write("histogram.csv", &histogram_csv(&counts)?)?;
    s.out.write_json("summary.json", &summary)?;
    Ok(json!({
        "instances": summary.instances,
        "completed": summary.completed,
        "solved": summary.solved,
        "failures": summary.failures.len(),
        "skipped": summary.skipped.len(),
        "max_updates": summary.updates_to_solve.max,
        "mean_updates": summary.updates_to_solve.mean,
    }))
}
