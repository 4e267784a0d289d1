//! Command-line front end for the `aqo-core` pipeline: instance generation,
//! spectra, perturbative analysis, tuning runs and corpus batches. Every
//! command writes its artifacts plus a `manifest.json` that can replay it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod output;

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{merge_config, Command, RerunArgs};
use crate::error::{CliError, CliResult};
use crate::manifest::{RunManifest, Session};
use crate::output::{sha256_file, OutputDir};

/// Result of one command: its report line and, for artifact-producing
/// commands, the manifest.
pub struct Outcome {
    pub report: Value,
    pub manifest: Option<RunManifest>,
}

fn with_session<T: Serialize>(
    name: &'static str,
    args: &T,
    out: &Path,
    body: impl FnOnce(&T, &mut Session) -> CliResult<Value>,
) -> CliResult<Outcome> {
    let mut session = Session::new(name, serde_json::to_value(args)?, OutputDir::create(out)?);
    let report = body(args, &mut session)?;
    let manifest = session.finish()?;
    Ok(Outcome {
        report,
        manifest: Some(manifest),
    })
}

fn merged<T: Serialize + DeserializeOwned>(a: &T, config: &Option<std::path::PathBuf>) -> CliResult<T> {
    merge_config(a, config.as_deref())
}

fn out_of(out: &Option<std::path::PathBuf>) -> CliResult<std::path::PathBuf> {
    args::required(out, "out").cloned()
}

pub fn execute(cmd: &Command) -> CliResult<Outcome> {
    match cmd {
        Command::Generate(a) => {
            let a = merged(a, &a.config)?;
            with_session("generate", &a, &out_of(&a.out)?, commands::generate)
        }
        Command::Spectrum(a) => {
            let a = merged(a, &a.config)?;
            with_session("spectrum", &a, &out_of(&a.out)?, commands::spectrum)
        }
        Command::Analyze(a) => {
            let a = merged(a, &a.config)?;
            with_session("analyze", &a, &out_of(&a.out)?, commands::analyze)
        }
        Command::Tune(a) => {
            let a = merged(a, &a.config)?;
            with_session("tune", &a, &out_of(&a.out)?, commands::tune)
        }
        Command::Batch(a) => {
            let a = merged(a, &a.config)?;
            with_session("batch", &a, &out_of(&a.out)?, commands::batch)
        }
        Command::Rerun(a) => rerun(a),
    }
}

fn replay<T: DeserializeOwned>(m: &RunManifest, out: &Path) -> CliResult<T> {
    let mut config = m.config.clone();
    config["out"] = json!(out);
    serde_json::from_value(config).map_err(|e| CliError::Input(format!("manifest config: {e}")))
}

/// Re-executes the command recorded in a manifest into a fresh directory
/// and compares output digests.
pub fn rerun(a: &RerunArgs) -> CliResult<Outcome> {
    let m = RunManifest::read(&a.manifest)?;
    for input in &m.inputs {
        let path = Path::new(&input.path);
        if sha256_file(path)? != input.sha256 {
            return Err(CliError::read(path, "input changed since the recorded run"));
        }
    }
    let cmd = match m.command.as_str() {
        "generate" => Command::Generate(replay(&m, &a.out)?),
        "spectrum" => Command::Spectrum(replay(&m, &a.out)?),
        "analyze" => Command::Analyze(replay(&m, &a.out)?),
        "tune" => Command::Tune(replay(&m, &a.out)?),
        "batch" => Command::Batch(replay(&m, &a.out)?),
        other => return Err(CliError::Input(format!("cannot replay command `{other}`"))),
    };
    let fresh = execute(&cmd)?.manifest.expect("artifact command");
    let differing: Vec<&str> = m
        .outputs
        .iter()
        .filter(|e| !fresh.outputs.contains(e))
        .chain(fresh.outputs.iter().filter(|e| !m.outputs.contains(e)))
        .map(|e| e.path.as_str())
        .collect();
    let identical = fresh.digest == m.digest;
    let report = json!({
        "identical": identical,
        "digest": fresh.digest,
        "recorded_digest": m.digest,
        "differing": differing,
    });
    if !identical {
        println!("{report}");
        return Err(CliError::Internal(format!(
            "{} output(s) differ from the manifest",
            differing.len()
        )));
    }
    Ok(Outcome { report, manifest: None })
}
