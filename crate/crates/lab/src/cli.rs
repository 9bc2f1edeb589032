//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use adscale_core::{AggregateCurve, PolicyKind};
use clap::{Args, Parser, Subcommand};

use crate::config::{describe, parse_config, preset, ExperimentConfig};
use crate::error::{LabError, Result};
use crate::experiment::run_experiment;
use crate::output::emit_csv;
use crate::svg::emit_svg;

pub const SVG_FILE: &str = "regret.svg";

#[derive(Debug, Parser)]
#[command(name = "adscale", version, about = "Bandits under adversarial scaling: reproduce regret experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a preset or a config file and write CSV + SVG output.
    Run(RunArgs),
    /// Print the full expansion of a preset, marking defaults.
    Describe {
        #[arg(long)]
        preset: String,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// fig1, fig2, fig3 or fig4.
    #[arg(long, conflicts_with = "config", required_unless_present = "config")]
    pub preset: Option<String>,
    /// Key-value experiment file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Episodes per policy.
    #[arg(long)]
    pub runs: Option<usize>,
    /// Total rounds per episode.
    #[arg(long)]
    pub horizon: Option<u64>,
    /// Comma-separated policy ids.
    #[arg(long, value_delimiter = ',')]
    pub policies: Option<Vec<String>>,
    /// Output directory for runs.csv, aggregate.csv and regret.svg.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Log-scaled round axis in the SVG.
    #[arg(long)]
    pub log_x: bool,
    /// Cold-start length (cold_start schedules only).
    #[arg(long)]
    pub t0: Option<u64>,
    /// Rounds between checkpoints.
    #[arg(long)]
    pub stride: Option<u64>,
    /// Worker threads; 0 picks the number of CPUs.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match (&self.preset, &self.config) {
            (Some(name), _) => preset(name)?.config,
            (None, Some(path)) => parse_config(path)?,
            (None, None) => return Err(LabError::Invalid("pass --preset or --config".into())),
        };
        if let Some(t0) = self.t0 {
            config.set_t0(t0)?;
        }
        if let Some(h) = self.horizon {
            config.horizon = h;
            config.window = None;
        }
        if let Some(s) = self.seed {
            config.master_seed = s;
        }
        if let Some(r) = self.runs {
            config.runs = r;
        }
        if let Some(ps) = &self.policies {
            config.policies = ps.iter().map(|p| p.trim().parse::<PolicyKind>()).collect::<Result<_, _>>()?;
        }
        if let Some(o) = &self.out {
            config.out_dir = o.clone();
        }
        if let Some(s) = self.stride {
            config.checkpoint_stride = s;
        }
        config.log_x |= self.log_x;
        config.validate()?;
        Ok(config)
    }
}

/// Drops checkpoints inside the cold-start window, where regret is zero.
fn plotted(curve: &AggregateCurve, t0: Option<u64>) -> AggregateCurve {
    let Some(t0) = t0 else { return curve.clone() };
    let keep: Vec<usize> = (0..curve.rounds.len()).filter(|&i| curve.rounds[i] > t0).collect();
    if keep.is_empty() {
        return curve.clone();
    }
    AggregateCurve {
        policy: curve.policy,
        rounds: keep.iter().map(|&i| curve.rounds[i]).collect(),
        mean: keep.iter().map(|&i| curve.mean[i]).collect(),
        stderr: keep.iter().map(|&i| curve.stderr[i]).collect(),
        runs: curve.runs,
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let io = |source| LabError::Io { path: PathBuf::from("<stdout>"), source };
    match &cli.command {
        Command::Describe { preset: name } => {
            let p = preset(name)?;
            write!(out, "{}", describe(&p.config, Some(p.stated))).map_err(io)?;
        }
        Command::Run(args) => {
            let config = args.resolve()?;
            let result = run_experiment(&config, args.workers)?;
            let (runs_csv, agg_csv) = emit_csv(&config, &result, &config.out_dir)?;
            let curves: Vec<AggregateCurve> =
                result.curves_in(&config.policies).map(|c| plotted(c, config.t0())).collect();
            let refs: Vec<&AggregateCurve> = curves.iter().collect();
            let svg_path = config.out_dir.join(SVG_FILE);
            let title = format!("{}: mean cumulative pseudo-regret over {} runs", config.name, config.runs);
            emit_svg(&refs, config.log_x, &title, &svg_path)?;

            writeln!(out, "{:<10} {:>16} {:>12}", "policy", "regret@T", "stderr").map_err(io)?;
            for c in result.curves_in(&config.policies) {
                writeln!(out, "{:<10} {:>16.3} {:>12.3}", c.policy.id(), c.final_mean(), c.final_stderr())
                    .map_err(io)?;
            }
            writeln!(out, "wrote {}, {}, {}", runs_csv.display(), agg_csv.display(), svg_path.display()).map_err(io)?;
        }
    }
    Ok(())
}
