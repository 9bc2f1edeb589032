//! Experiment configuration: figure presets and the flat key-value file
//! format.
//!
//! ```text
//! # comments start with '#'
//! preset = fig1                 # optional; other keys override it
//! theta = [0.5, 0.8]            # raw arm means in [0, 1]
//! schedule = cold_start(25, 1)  # constant(q) | cold_start(t0, q) |
//!                               # targeted_zero(threshold, q) | custom([q1, q2, ...])
//! policies = [aaeas, thompson]
//! horizon = 30000
//! window = 100000               # cold_start only: horizon = t0 + window
//! runs = 100
//! seed = 7
//! checkpoint_stride = 100
//! out = results/fig4
//! log_x = false
//! aaeas.delta = 1e-4            # per-policy overrides
//! aae.delta = 1e-4
//! broad.eta0 = 0.5
//! exp3pp.eta_scale = 0.5
//! exp3pp.explore_scale = 0.5
//! exp3pp.gap_const = 18
//! tsallis.rate = 4
//! tsallis.exponent = 0.5
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use adscale_core::{normalize_instance, PolicyKind, PolicyParams, QualitySchedule};

use crate::error::{LabError, Result};

pub const DEFAULT_STRIDE: u64 = 100;
pub const DEFAULT_RUNS: usize = 100;
pub const DEFAULT_SEED: u64 = 0;
/// Scaled-down fig3 cold-start length; the published value is 10^7.
pub const FIG3_DEFAULT_T0: u64 = 100_000;
pub const FIG3_PUBLISHED_T0: u64 = 10_000_000;
pub const FIG3_WINDOW: u64 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Preset name, or `custom`; written to the CSV `preset` column.
    pub name: String,
    pub raw_means: Vec<f64>,
    pub schedule: QualitySchedule,
    pub policies: Vec<PolicyKind>,
    pub params: PolicyParams,
    pub horizon: u64,
    /// For cold-start schedules: rounds to run after `t0`. When set, the
    /// horizon is `t0 + window`.
    pub window: Option<u64>,
    pub runs: usize,
    pub master_seed: u64,
    pub checkpoint_stride: u64,
    pub out_dir: PathBuf,
    pub log_x: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "custom".into(),
            raw_means: Vec::new(),
            schedule: QualitySchedule::Constant { q0: 1.0 },
            policies: PolicyKind::ALL.to_vec(),
            params: PolicyParams::default(),
            horizon: 0,
            window: None,
            runs: DEFAULT_RUNS,
            master_seed: DEFAULT_SEED,
            checkpoint_stride: DEFAULT_STRIDE,
            out_dir: PathBuf::from("results"),
            log_x: false,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        normalize_instance(&self.raw_means)?;
        if self.horizon < 1 {
            return Err(LabError::Invalid("horizon must be at least 1".into()));
        }
        if self.runs < 1 {
            return Err(LabError::Invalid("runs must be at least 1".into()));
        }
        if self.checkpoint_stride < 1 {
            return Err(LabError::Invalid("checkpoint_stride must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(LabError::Invalid("no policies selected".into()));
        }
        let unique: BTreeSet<_> = self.policies.iter().collect();
        if unique.len() != self.policies.len() {
            return Err(LabError::Invalid("policy listed twice".into()));
        }
        Ok(())
    }

    /// Cold-start length, if the schedule has one.
    pub fn t0(&self) -> Option<u64> {
        match self.schedule {
            QualitySchedule::ColdStart { t0, .. } => Some(t0),
            _ => None,
        }
    }

    /// Changes the cold-start length, keeping `horizon = t0 + window` when a
    /// window is set.
    pub fn set_t0(&mut self, new_t0: u64) -> Result<()> {
        match &mut self.schedule {
            QualitySchedule::ColdStart { t0, .. } => *t0 = new_t0,
            _ => return Err(LabError::Invalid("--t0 needs a cold_start schedule".into())),
        }
        self.sync_window();
        Ok(())
    }

    fn sync_window(&mut self) {
        if let (Some(w), Some(t0)) = (self.window, self.t0()) {
            self.horizon = t0 + w;
        }
    }
}

/// Which preset fields restate published parameters; everything else is a
/// default chosen for desk-scale runs.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub config: ExperimentConfig,
    pub stated: &'static [&'static str],
}

pub const PRESET_NAMES: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

pub fn preset(name: &str) -> Result<Preset> {
    let base = ExperimentConfig { name: name.to_string(), ..ExperimentConfig::default() };
    let p = match name {
        "fig1" => Preset {
            config: ExperimentConfig {
                raw_means: vec![0.5, 0.8],
                horizon: 100_000,
                out_dir: "results/fig1".into(),
                ..base
            },
            stated: &["theta", "schedule", "runs", "policies"],
        },
        "fig2" => Preset {
            config: ExperimentConfig {
                raw_means: vec![0.005, 0.001],
                horizon: 1_000_000,
                out_dir: "results/fig2".into(),
                ..base
            },
            stated: &["theta", "schedule", "runs", "policies"],
        },
        "fig3" => Preset {
            config: ExperimentConfig {
                raw_means: vec![0.5, 0.8],
                schedule: QualitySchedule::ColdStart { t0: FIG3_DEFAULT_T0, q_after: 1.0 },
                window: Some(FIG3_WINDOW),
                horizon: FIG3_DEFAULT_T0 + FIG3_WINDOW,
                out_dir: "results/fig3".into(),
                ..base
            },
            stated: &["theta", "policies"],
        },
        "fig4" => Preset {
            config: ExperimentConfig {
                raw_means: vec![0.5, 0.8],
                schedule: QualitySchedule::ColdStart { t0: 25, q_after: 1.0 },
                policies: vec![PolicyKind::Thompson, PolicyKind::Aaeas],
                horizon: 30_000,
                out_dir: "results/fig4".into(),
                ..base
            },
            stated: &["theta", "schedule", "horizon", "runs", "policies"],
        },
        other => return Err(LabError::UnknownPreset(other.to_string())),
    };
    Ok(p)
}

pub fn format_schedule(s: &QualitySchedule) -> String {
    match s {
        QualitySchedule::Constant { q0 } => format!("constant({q0})"),
        QualitySchedule::ColdStart { t0, q_after } => format!("cold_start({t0}, {q_after})"),
        QualitySchedule::TargetedZero { threshold, q_otherwise } => {
            format!("targeted_zero({threshold}, {q_otherwise})")
        }
        QualitySchedule::Custom(v) => format!("custom({})", format_list(v)),
    }
}

fn format_list<T: std::fmt::Display>(v: &[T]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// Human-readable expansion of a config, marking each value as published or
/// default when `stated` is given.
pub fn describe(config: &ExperimentConfig, stated: Option<&[&str]>) -> String {
    let mark = |key: &str| match stated {
        Some(s) if s.contains(&key) => "  (published)",
        Some(_) => "  (default)",
        None => "",
    };
    let mut out = String::new();
    let policies: Vec<&str> = config.policies.iter().map(|p| p.id()).collect();
    let _ = writeln!(out, "preset = {}", config.name);
    let _ = writeln!(out, "theta = {}{}", format_list(&config.raw_means), mark("theta"));
    let _ = writeln!(out, "schedule = {}{}", format_schedule(&config.schedule), mark("schedule"));
    if config.name == "fig3" && stated.is_some() {
        let _ = writeln!(
            out,
            "# published cold start is t0 = {FIG3_PUBLISHED_T0}; pass --t0 {FIG3_PUBLISHED_T0} to use it"
        );
    }
    if let Some(w) = config.window {
        let _ = writeln!(out, "window = {}{}", w, mark("window"));
    }
    let _ = writeln!(out, "horizon = {}{}", config.horizon, mark("horizon"));
    let _ = writeln!(out, "runs = {}{}", config.runs, mark("runs"));
    let _ = writeln!(out, "policies = [{}]{}", policies.join(", "), mark("policies"));
    let _ = writeln!(out, "seed = {}{}", config.master_seed, mark("seed"));
    let _ = writeln!(out, "checkpoint_stride = {}{}", config.checkpoint_stride, mark("checkpoint_stride"));
    let _ = writeln!(out, "out = {}{}", config.out_dir.display(), mark("out"));
    let p = &config.params;
    let delta = |d: Option<f64>| d.map_or("1/T".to_string(), |d| d.to_string());
    let _ = writeln!(out, "aaeas.delta = {}{}", delta(p.aaeas_delta), mark("aaeas.delta"));
    let _ = writeln!(out, "aae.delta = {}{}", delta(p.aae_delta), mark("aae.delta"));
    let _ = writeln!(out, "broad.eta0 = {}{}", p.broad_eta0, mark("broad.eta0"));
    let _ = writeln!(out, "exp3pp.eta_scale = {}{}", p.exp3pp.eta_scale, mark("exp3pp"));
    let _ = writeln!(out, "exp3pp.explore_scale = {}{}", p.exp3pp.explore_scale, mark("exp3pp"));
    let _ = writeln!(out, "exp3pp.gap_const = {}{}", p.exp3pp.gap_const, mark("exp3pp"));
    let _ = writeln!(out, "tsallis.rate = {}{}", p.tsallis_rate, mark("tsallis.rate"));
    let _ = writeln!(out, "tsallis.exponent = {}{}", p.tsallis_exponent, mark("tsallis.exponent"));
    out
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| LabError::Io { path: path.to_path_buf(), source })?;
    parse_config_str(&text, &path.display().to_string())
}

/// Parses the key-value format; `origin` labels error messages.
pub fn parse_config_str(text: &str, origin: &str) -> Result<ExperimentConfig> {
    let err = |line: usize, message: String| LabError::Config { path: origin.to_string(), line, message };

    let mut entries: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| err(line_no, format!("expected `key = value`, found `{line}`")))?;
        let key = key.trim().to_string();
        if entries.iter().any(|(_, k, _)| *k == key) {
            return Err(err(line_no, format!("duplicate key `{key}`")));
        }
        entries.push((line_no, key, value.trim().to_string()));
    }

    let mut config = match entries.iter().find(|(_, k, _)| k == "preset") {
        Some((line, _, v)) => preset(v).map_err(|e| err(*line, e.to_string()))?.config,
        None => ExperimentConfig::default(),
    };
    let mut horizon_set = false;

    for (line, key, value) in &entries {
        let line = *line;
        let bad = |m: String| err(line, m);
        match key.as_str() {
            "preset" => {}
            "theta" => {
                let means = parse_float_list(value).map_err(&bad)?;
                if let Some((i, v)) = means.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
                    return Err(bad(format!("theta[{i}] = {v} is outside [0, 1]")));
                }
                normalize_instance(&means).map_err(|e| bad(e.to_string()))?;
                config.raw_means = means;
            }
            "schedule" => config.schedule = parse_schedule(value).map_err(&bad)?,
            "policies" => {
                config.policies = parse_list_items(value)
                    .map_err(&bad)?
                    .iter()
                    .map(|s| s.parse::<PolicyKind>().map_err(|e| bad(e.to_string())))
                    .collect::<Result<_>>()?;
            }
            "horizon" => {
                config.horizon = parse_u64(value).map_err(&bad)?;
                horizon_set = true;
            }
            "window" => config.window = Some(parse_u64(value).map_err(&bad)?),
            "runs" => {
                let runs = parse_u64(value).map_err(&bad)?;
                if runs < 1 {
                    return Err(bad("runs must be at least 1".into()));
                }
                config.runs = runs as usize;
            }
            "seed" => config.master_seed = parse_u64(value).map_err(&bad)?,
            "checkpoint_stride" => {
                config.checkpoint_stride = parse_u64(value).map_err(&bad)?;
                if config.checkpoint_stride < 1 {
                    return Err(bad("checkpoint_stride must be at least 1".into()));
                }
            }
            "out" => config.out_dir = PathBuf::from(value),
            "log_x" => config.log_x = parse_bool(value).map_err(&bad)?,
            "aaeas.delta" => config.params.aaeas_delta = Some(parse_probability(value).map_err(&bad)?),
            "aae.delta" => config.params.aae_delta = Some(parse_probability(value).map_err(&bad)?),
            "broad.eta0" => {
                let v = parse_f64(value).map_err(&bad)?;
                if !(v > 0.0 && v <= 0.5) {
                    return Err(bad(format!("broad.eta0 = {v} must lie in (0, 0.5]")));
                }
                config.params.broad_eta0 = v;
            }
            "exp3pp.eta_scale" => config.params.exp3pp.eta_scale = parse_non_negative(value).map_err(&bad)?,
            "exp3pp.explore_scale" => config.params.exp3pp.explore_scale = parse_non_negative(value).map_err(&bad)?,
            "exp3pp.gap_const" => config.params.exp3pp.gap_const = parse_non_negative(value).map_err(&bad)?,
            "tsallis.rate" => {
                let v = parse_f64(value).map_err(&bad)?;
                if !(v > 0.0) {
                    return Err(bad(format!("tsallis.rate = {v} must be positive")));
                }
                config.params.tsallis_rate = v;
            }
            "tsallis.exponent" => {
                let v = parse_f64(value).map_err(&bad)?;
                if !v.is_finite() {
                    return Err(bad(format!("tsallis.exponent = {v} must be finite")));
                }
                config.params.tsallis_exponent = v;
            }
            other => return Err(bad(format!("unknown key `{other}`"))),
        }
    }
    if !horizon_set {
        config.sync_window();
    } else if config.window.is_some() && config.t0().is_some() {
        // An explicit horizon wins over the derived one.
        config.window = None;
    }
    if config.raw_means.is_empty() {
        return Err(LabError::Invalid(format!("{origin}: no `theta` or `preset` given")));
    }
    config.validate()?;
    Ok(config)
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be non-negative"))
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} must lie in (0, 1]"))
    }
}

/// Accepts plain integers and integral float notation such as `1e5`.
pub(crate) fn parse_u64(s: &str) -> Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("`{other}` is not a boolean")),
    }
}

fn parse_list_items(s: &str) -> Result<Vec<String>, String> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| format!("expected a bracketed list, found `{s}`"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    Ok(inner.split(',').map(|x| x.trim().to_string()).collect())
}

fn parse_float_list(s: &str) -> Result<Vec<f64>, String> {
    parse_list_items(s)?.iter().map(|x| parse_f64(x)).collect()
}

fn parse_schedule(s: &str) -> Result<QualitySchedule, String> {
    let s = s.trim();
    let (kind, args) = s
        .split_once('(')
        .and_then(|(k, rest)| rest.strip_suffix(')').map(|a| (k.trim(), a.trim())))
        .ok_or_else(|| format!("expected `kind(args)`, found `{s}`"))?;
    let scalars = || -> Result<Vec<f64>, String> {
        if args.is_empty() {
            Ok(Vec::new())
        } else {
            args.split(',').map(parse_f64).collect()
        }
    };
    let arity = |v: &[f64], n: usize| {
        if v.len() == n {
            Ok(())
        } else {
            Err(format!("{kind} takes {n} argument(s), got {}", v.len()))
        }
    };
    let schedule = match kind {
        "constant" => {
            let v = scalars()?;
            arity(&v, 1)?;
            QualitySchedule::constant(v[0])
        }
        "cold_start" => {
            let mut parts = args.splitn(2, ',');
            let t0 = parse_u64(parts.next().unwrap_or(""))?;
            let q = match parts.next() {
                Some(q) => parse_f64(q)?,
                None => 1.0,
            };
            QualitySchedule::cold_start(t0, q)
        }
        "targeted_zero" => {
            let v = scalars()?;
            match v.len() {
                1 => QualitySchedule::targeted_zero(1.0, v[0]),
                _ => {
                    arity(&v, 2)?;
                    QualitySchedule::targeted_zero(v[0], v[1])
                }
            }
        }
        "custom" => QualitySchedule::custom(parse_float_list(args)?),
        other => return Err(format!("unknown schedule kind `{other}`")),
    };
    schedule.map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_values() {
        let f4 = preset("fig4").unwrap().config;
        assert_eq!(f4.t0(), Some(25));
        assert_eq!(f4.horizon, 30_000);
        assert_eq!(f4.runs, 100);
        assert_eq!(f4.policies, vec![PolicyKind::Thompson, PolicyKind::Aaeas]);
        assert_eq!(preset("fig2").unwrap().config.raw_means, vec![0.005, 0.001]);
        let f1 = preset("fig1").unwrap().config;
        assert_eq!(f1.runs, 100);
        assert_eq!(f1.horizon, 100_000);
        assert_eq!(f1.policies.len(), 7);
        let f3 = preset("fig3").unwrap().config;
        assert_eq!(f3.t0(), Some(100_000));
        assert_eq!(f3.horizon, 200_000);
        assert!(matches!(preset("fig5"), Err(LabError::UnknownPreset(_))));
    }

    #[test]
    fn t0_override_moves_horizon() {
        let mut f3 = preset("fig3").unwrap().config;
        f3.set_t0(FIG3_PUBLISHED_T0).unwrap();
        assert_eq!(f3.horizon, FIG3_PUBLISHED_T0 + FIG3_WINDOW);
        let mut f1 = preset("fig1").unwrap().config;
        assert!(f1.set_t0(5).is_err());
    }

    #[test]
    fn preset_only_file() {
        let c = parse_config_str("preset = fig1\n", "t").unwrap();
        assert_eq!(c, preset("fig1").unwrap().config);
    }

    #[test]
    fn custom_file_matches_fig1_core() {
        let c = parse_config_str("theta = [0.5, 0.8]\nschedule = constant(1.0)\nhorizon = 1e5\n", "t").unwrap();
        let f1 = preset("fig1").unwrap().config;
        assert_eq!(c.raw_means, f1.raw_means);
        assert_eq!(c.schedule, f1.schedule);
        assert_eq!(c.horizon, f1.horizon);
        assert_eq!(c.policies, f1.policies);
        assert_eq!(c.name, "custom");
    }

    #[test]
    fn range_and_syntax_errors_carry_lines() {
        let e = parse_config_str("horizon = 10\ntheta = [1.5]\n", "cfg").unwrap_err();
        assert!(matches!(e, LabError::Config { line: 2, .. }), "{e}");
        assert!(e.to_string().contains("outside [0, 1]"), "{e}");
        let e = parse_config_str("theta = [0.5]\nhorizon = 10\nruns = 0\n", "cfg").unwrap_err();
        assert!(matches!(e, LabError::Config { line: 3, .. }), "{e}");
        let e = parse_config_str("preset = fig1\nfoo = 1\n", "cfg").unwrap_err();
        assert!(e.to_string().contains("unknown key `foo`"), "{e}");
        let e = parse_config_str("preset = fig1\nseed = 1\nseed = 2\n", "cfg").unwrap_err();
        assert!(e.to_string().contains("duplicate"), "{e}");
        assert!(parse_config_str("preset = fig1\nschedule = wobble(3)\n", "cfg").is_err());
        assert!(parse_config_str("preset = fig1\npolicies = [ucb, exp4]\n", "cfg").is_err());
        assert!(parse_config_str("theta = [0.5]\n", "cfg").is_err());
    }

    #[test]
    fn full_file() {
        let text = "\
# fig4-like
theta = [0.5, 0.8]
schedule = cold_start(25, 1)   # short cold start
policies = [thompson, aaeas]
horizon = 30_000
runs = 3
seed = 7
checkpoint_stride = 1000
out = /tmp/x
log_x = true
aaeas.delta = 1e-3
broad.eta0 = 0.25
exp3pp.gap_const = 9
tsallis.rate = 2
";
        let c = parse_config_str(text, "t").unwrap();
        assert_eq!(c.schedule, QualitySchedule::ColdStart { t0: 25, q_after: 1.0 });
        assert_eq!(c.horizon, 30_000);
        assert_eq!(c.runs, 3);
        assert_eq!(c.master_seed, 7);
        assert!(c.log_x);
        assert_eq!(c.params.aaeas_delta, Some(1e-3));
        assert_eq!(c.params.broad_eta0, 0.25);
        assert_eq!(c.params.exp3pp.gap_const, 9.0);
        assert_eq!(c.params.tsallis_rate, 2.0);
    }

    #[test]
    fn schedule_syntax() {
        assert_eq!(parse_schedule("targeted_zero(1.0)").unwrap(), QualitySchedule::targeted_zero(1.0, 1.0).unwrap());
        assert_eq!(
            parse_schedule("targeted_zero(0.99, 0.5)").unwrap(),
            QualitySchedule::targeted_zero(0.99, 0.5).unwrap()
        );
        assert_eq!(parse_schedule("custom([0.1, 0.2])").unwrap(), QualitySchedule::custom(vec![0.1, 0.2]).unwrap());
        assert_eq!(parse_schedule("cold_start(1e7)").unwrap(), QualitySchedule::cold_start(10_000_000, 1.0).unwrap());
        assert!(parse_schedule("constant(2)").is_err());
    }

    #[test]
    fn describe_marks_defaults() {
        let p = preset("fig4").unwrap();
        let text = describe(&p.config, Some(p.stated));
        assert!(text.contains("horizon = 30000  (published)"), "{text}");
        assert!(text.contains("seed = 0  (default)"), "{text}");
        let p3 = preset("fig3").unwrap();
        let text3 = describe(&p3.config, Some(p3.stated));
        assert!(text3.contains("schedule = cold_start(100000, 1)  (default)"), "{text3}");
        assert!(text3.contains("--t0 10000000"), "{text3}");
    }
}
