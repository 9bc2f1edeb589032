//! Multi-run experiments: one episode per `(policy, run)` pair, executed on a
//! rayon pool and reduced in a fixed order so results do not depend on the
//! number of workers.

use std::collections::BTreeMap;

use adscale_core::aggregate::regret_moments;
use adscale_core::{
    build_policy, episode_seed, normalize_instance, run_episode, AggregateCurve, EpisodeTrace, PolicyKind,
};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};

#[derive(Debug, Clone)]
pub struct PolicyResult {
    pub curve: AggregateCurve,
    /// Traces in run-index order.
    pub traces: Vec<EpisodeTrace>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub policies: BTreeMap<PolicyKind, PolicyResult>,
}

impl ExperimentResult {
    pub fn curve(&self, policy: PolicyKind) -> Option<&AggregateCurve> {
        self.policies.get(&policy).map(|r| &r.curve)
    }

    /// Curves in the configured policy order.
    pub fn curves_in<'a>(&'a self, order: &'a [PolicyKind]) -> impl Iterator<Item = &'a AggregateCurve> + 'a {
        order.iter().filter_map(|p| self.curve(*p))
    }
}

/// Runs every `(policy, run)` episode of `config` on `workers` threads
/// (`0` lets rayon decide).
pub fn run_experiment(config: &ExperimentConfig, workers: usize) -> Result<ExperimentResult> {
    config.validate()?;
    let instance = normalize_instance(&config.raw_means)?;
    let jobs: Vec<(PolicyKind, usize)> =
        config.policies.iter().flat_map(|&p| (0..config.runs).map(move |r| (p, r))).collect();

    let run_one = |&(policy, run): &(PolicyKind, usize)| -> Result<EpisodeTrace> {
        let wrap = |source| LabError::Episode { policy, run, source };
        let seed = episode_seed(config.master_seed, policy.id(), run as u64);
        let mut state = build_policy(policy, instance.k(), config.horizon, &config.params).map_err(wrap)?;
        run_episode(&instance, &config.schedule, state.as_mut(), seed, config.horizon, config.checkpoint_stride)
            .map_err(wrap)
    };

    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    let traces: Vec<EpisodeTrace> = pool.install(|| jobs.par_iter().map(run_one).collect::<Result<Vec<_>>>())?;

    let mut policies = BTreeMap::new();
    for (i, &policy) in config.policies.iter().enumerate() {
        let chunk = traces[i * config.runs..(i + 1) * config.runs].to_vec();
        let moments = regret_moments(&chunk)?;
        let rounds = chunk[0].checkpoints().iter().map(|c| c.round).collect();
        let curve = AggregateCurve::from_moments(policy, rounds, &moments);
        policies.insert(policy, PolicyResult { curve, traces: chunk });
    }
    Ok(ExperimentResult { policies })
}
