//! Mean and standard-error curves over many episodes.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::model::EpisodeTrace;
use crate::policy::PolicyKind;

/// Running count, mean and sum of squared deviations (Welford), mergeable
/// with Chan's pairwise update.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&self, other: &Moments) -> Moments {
        if self.n == 0 {
            return *other;
        }
        if other.n == 0 {
            return *self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb, nf) = (self.n as f64, other.n as f64, n as f64);
        Moments { n, mean: self.mean + delta * nb / nf, m2: self.m2 + other.m2 + delta * delta * na * nb / nf }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two samples.
    pub fn sample_variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// Sample standard deviation over `√n`.
    pub fn stderr(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            sqrt(self.sample_variance() / self.n as f64)
        }
    }
}

/// Per-policy regret curve averaged over `runs` episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub policy: PolicyKind,
    pub rounds: Vec<u64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub runs: usize,
}

impl AggregateCurve {
    /// Aggregates cumulative pseudo-regret checkpoint by checkpoint, in
    /// slice order.
    pub fn from_traces(policy: PolicyKind, traces: &[EpisodeTrace]) -> Result<Self> {
        let moments = regret_moments(traces)?;
        let rounds = traces[0].checkpoints().iter().map(|c| c.round).collect();
        Ok(Self::from_moments(policy, rounds, &moments))
    }

    pub fn from_moments(policy: PolicyKind, rounds: Vec<u64>, moments: &[Moments]) -> Self {
        Self {
            policy,
            rounds,
            mean: moments.iter().map(Moments::mean).collect(),
            stderr: moments.iter().map(Moments::stderr).collect(),
            runs: moments.first().map_or(0, |m| m.count() as usize),
        }
    }

    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }

    pub fn final_stderr(&self) -> f64 {
        self.stderr.last().copied().unwrap_or(0.0)
    }

    /// Mean and standard error at the last checkpoint with `round ≤ t`.
    pub fn at(&self, t: u64) -> (f64, f64) {
        let idx = self.rounds.partition_point(|&r| r <= t);
        if idx == 0 {
            (0.0, 0.0)
        } else {
            (self.mean[idx - 1], self.stderr[idx - 1])
        }
    }
}

/// Checkpoint-wise moments of cumulative pseudo-regret. All traces must share
/// the same checkpoint rounds.
pub fn regret_moments(traces: &[EpisodeTrace]) -> Result<Vec<Moments>> {
    let first = traces.first().ok_or(Error::NoRuns)?;
    let len = first.checkpoints().len();
    let mut moments = alloc::vec![Moments::default(); len];
    for trace in traces {
        let cps = trace.checkpoints();
        if cps.len() != len || cps.iter().zip(first.checkpoints()).any(|(a, b)| a.round != b.round) {
            return Err(Error::MismatchedTraces);
        }
        for (m, cp) in moments.iter_mut().zip(cps) {
            m.push(cp.cum_pseudo_regret);
        }
    }
    Ok(moments)
}
