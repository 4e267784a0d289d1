//! File formats. Every JSON document carries a `version` field.

use std::fs;
use std::path::Path;

use aqo_core::graphs::GeneratorParams;
use aqo_core::perturbation::{ClusterState, CrossingPrediction};
use aqo_core::sampler::{SampleSet, SamplerConfig};
use aqo_core::spectrum::{SpectrumProfile, TrackData};
use aqo_core::{Graph, NodeSet, ProblemInstance, Schedule};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const FORMAT_VERSION: u32 = 1;

fn check_version(path: &Path, v: u32) -> CliResult<()> {
    if v != FORMAT_VERSION {
        return Err(CliError::read(path, format!("unsupported format version {v}")));
    }
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::read(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::read(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub version: u32,
    pub n: usize,
    /// `i < j`, sorted lexicographically.
    pub edges: Vec<[usize; 2]>,
    pub c: f64,
    pub known_mis: Option<Vec<usize>>,
    pub seed: u64,
    pub generator_params: Option<GeneratorParams>,
}

impl InstanceFile {
    pub fn from_instance(inst: &ProblemInstance) -> Self {
        InstanceFile {
            version: FORMAT_VERSION,
            n: inst.node_count(),
            edges: inst.graph.edges().into_iter().map(|(i, j)| [i, j]).collect(),
            c: inst.penalty(),
            known_mis: inst.known_mis.map(NodeSet::to_vec),
            seed: inst.seed,
            generator_params: inst.generator_params,
        }
    }

    pub fn to_instance(&self) -> aqo_core::Result<ProblemInstance> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::from_edges(self.n, &edges)?;
        let mis = self.known_mis.as_deref().map(NodeSet::from_indices);
        ProblemInstance::with_metadata(g, self.c, mis, self.seed, self.generator_params)
    }
}

pub fn read_instance(path: &Path) -> CliResult<ProblemInstance> {
    let f: InstanceFile = read_json(path)?;
    check_version(path, f.version)?;
    f.to_instance().map_err(|e| CliError::read(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Linear,
    Tabulated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    pub version: u32,
    pub kind: ScheduleKind,
    #[serde(default)]
    pub table: Vec<[f64; 3]>,
    pub energy_unit: String,
}

impl ScheduleFile {
    pub fn from_schedule(s: &Schedule) -> Self {
        ScheduleFile {
            version: FORMAT_VERSION,
            kind: if s.is_linear() {
                ScheduleKind::Linear
            } else {
                ScheduleKind::Tabulated
            },
            table: s.table().map(<[_]>::to_vec).unwrap_or_default(),
            energy_unit: s.energy_unit().to_string(),
        }
    }
}

/// The linear schedule when `path` is `None`.
pub fn read_schedule(path: Option<&Path>) -> CliResult<Schedule> {
    let Some(path) = path else {
        return Ok(Schedule::linear());
    };
    let f: ScheduleFile = read_json(path)?;
    check_version(path, f.version)?;
    match f.kind {
        ScheduleKind::Linear => Ok(Schedule::linear()),
        ScheduleKind::Tabulated => Schedule::tabulated(&f.table, f.energy_unit).map_err(|e| CliError::read(path, e)),
    }
}

/// `{version, delta: [...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaFile {
    pub version: u32,
    pub delta: Vec<f64>,
}

pub fn read_delta(path: &Path) -> CliResult<Vec<f64>> {
    let f: DeltaFile = read_json(path)?;
    check_version(path, f.version)?;
    Ok(f.delta)
}

fn csv_bytes(header: Vec<String>, rows: impl Iterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Internal(format!("csv: {e}"));
    w.write_record(&header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Internal(format!("csv: {e}")))
}

/// `s, E0, .., E(L-1), gap`
pub fn profile_csv(p: &SpectrumProfile) -> CliResult<Vec<u8>> {
    let levels = p.energies.first().map_or(0, Vec::len);
    let mut header = vec!["s".to_string()];
    header.extend((0..levels).map(|k| format!("E{k}")));
    header.push("gap".into());
    let rows = p.s_grid.iter().enumerate().map(|(k, s)| {
        let mut r = vec![s.to_string()];
        r.extend(p.energies[k].iter().map(f64::to_string));
        r.push(p.gap[k].to_string());
        r
    });
    csv_bytes(header, rows)
}

/// `s, q0, .., q(n-1)` with `<σz_i>` per qubit.
pub fn tracks_csv(t: &TrackData) -> CliResult<Vec<u8>> {
    let mut header = vec!["s".to_string()];
    header.extend((0..t.z_expect.len()).map(|i| format!("q{i}")));
    let rows = t.s_grid.iter().enumerate().map(|(k, s)| {
        let mut r = vec![s.to_string()];
        r.extend(t.z_expect.iter().map(|q| q[k].to_string()));
        r
    });
    csv_bytes(header, rows)
}

/// `updates, kappa, unsolved`
pub fn histogram_csv(counts: &[usize]) -> CliResult<Vec<u8>> {
    let header = vec!["updates".into(), "kappa".into(), "unsolved".into()];
    let rows = counts
        .iter()
        .enumerate()
        .map(|(t, c)| vec![t.to_string(), (t + 1).to_string(), c.to_string()]);
    csv_bytes(header, rows)
}

pub fn hex_state(x: NodeSet) -> String {
    format!("{:#x}", x.bits())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateCount {
    pub state: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateMass {
    pub state: String,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSetFile {
    pub version: u32,
    pub s_point: f64,
    pub total: u64,
    pub seed: u64,
    pub config: SamplerConfig,
    pub raw: Vec<StateCount>,
    pub descended: Vec<StateCount>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub basin_mass: Option<Vec<StateMass>>,
}

impl SampleSetFile {
    pub fn new(set: &SampleSet, config: &SamplerConfig, seed: u64) -> Self {
        let counts = |v: &[(NodeSet, u64)]| {
            v.iter()
                .map(|&(x, count)| StateCount {
                    state: hex_state(x),
                    count,
                })
                .collect()
        };
        SampleSetFile {
            version: FORMAT_VERSION,
            s_point: set.s_point,
            total: set.total,
            seed,
            config: *config,
            raw: counts(&set.raw),
            descended: counts(&set.descended),
            basin_mass: set.basin_mass.as_ref().map(|m| {
                m.iter()
                    .map(|&(x, mass)| StateMass {
                        state: hex_state(x),
                        mass,
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub size: usize,
    /// Members, as hex bitmasks.
    pub members: Vec<String>,
    pub e0: f64,
    pub e2: f64,
    /// Number of members.
    #[serde(rename = "K")]
    pub k: usize,
    pub coefficients: Vec<f64>,
    pub degenerate_eigenspace: bool,
    pub mixed_signs: bool,
}

impl ClusterReport {
    pub fn new(c: &ClusterState) -> Self {
        ClusterReport {
            size: c.members[0].len(),
            members: c.members.iter().map(|x| hex_state(*x)).collect(),
            e0: c.e0,
            e2: c.e2,
            k: c.members.len(),
            coefficients: c.coefficients.clone(),
            degenerate_eigenspace: c.flags.degenerate_eigenspace,
            mixed_signs: c.flags.mixed_signs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    /// Index into `clusters` of the local cluster.
    pub cluster: usize,
    pub lambda_star: Option<f64>,
    /// `1/(1+λ*)` for the linear schedule, otherwise the schedule inverse.
    pub s_star: Option<f64>,
    pub condition_met: bool,
    pub outside_perturbative_regime: bool,
}

impl PredictionReport {
    pub fn new(cluster: usize, p: &CrossingPrediction, sch: &Schedule) -> Self {
        PredictionReport {
            cluster,
            lambda_star: p.lambda_star,
            s_star: p.lambda_star.and_then(|l| sch.s_at_lambda(l).ok()),
            condition_met: p.condition_met,
            outside_perturbative_regime: p.outside_perturbative_regime,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub version: u32,
    /// The global-minimum cluster is first.
    pub clusters: Vec<ClusterReport>,
    pub predictions: Vec<PredictionReport>,
    /// Index into `predictions` of the crossing met first (largest `λ*`).
    pub earliest: Option<usize>,
}
