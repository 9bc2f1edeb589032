//! CSV output. Numbers use Rust's shortest round-trip formatting, so equal
//! results give byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use adscale_core::simulator::RNG_IDENTITY;

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::experiment::ExperimentResult;

pub const RUNS_HEADER: &str = "preset,policy,run,round,cum_reward,cum_pseudo_regret";
pub const AGGREGATE_HEADER: &str = "preset,policy,round,mean_regret,stderr,runs";
pub const RUNS_FILE: &str = "runs.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";

pub fn metadata_line(config: &ExperimentConfig) -> String {
    format!("# master_seed={} rng={} version={}", config.master_seed, RNG_IDENTITY, env!("CARGO_PKG_VERSION"))
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| LabError::Io { path: parent.to_path_buf(), source })?;
    }
    File::create(path).map(BufWriter::new).map_err(|source| LabError::Io { path: path.to_path_buf(), source })
}

/// Writes `runs.csv` and `aggregate.csv` into `dir`, policies in configured
/// order. Returns the two paths.
pub fn emit_csv(config: &ExperimentConfig, result: &ExperimentResult, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    if result.policies.is_empty() {
        return Err(LabError::Invalid("no curves to write".into()));
    }
    let runs_path = dir.join(RUNS_FILE);
    let agg_path = dir.join(AGGREGATE_FILE);
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| LabError::Io { path, source }
    };

    let mut w = create(&runs_path)?;
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{}", metadata_line(config))?;
        writeln!(w, "{RUNS_HEADER}")?;
        for policy in &config.policies {
            let Some(res) = result.policies.get(policy) else { continue };
            for (run, trace) in res.traces.iter().enumerate() {
                for cp in trace.checkpoints() {
                    writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        config.name, policy, run, cp.round, cp.cum_reward, cp.cum_pseudo_regret
                    )?;
                }
            }
        }
        w.flush()
    };
    body().map_err(io(&runs_path))?;

    let mut w = create(&agg_path)?;
    let mut body = || -> std::io::Result<()> {
        writeln!(w, "{}", metadata_line(config))?;
        writeln!(w, "{AGGREGATE_HEADER}")?;
        for curve in result.curves_in(&config.policies) {
            for i in 0..curve.rounds.len() {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    config.name, curve.policy, curve.rounds[i], curve.mean[i], curve.stderr[i], curve.runs
                )?;
            }
        }
        w.flush()
    };
    body().map_err(io(&agg_path))?;
    Ok((runs_path, agg_path))
}
