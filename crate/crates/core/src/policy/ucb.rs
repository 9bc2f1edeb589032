use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::{check_feedback, Policy, PolicyDecision, PolicyKind};
use crate::error::Result;
use crate::math::{ln, sqrt};

/// Deterministic UCB choice: unpulled arms first in index order, then the
/// argmax of `r(a)/n(a) + √(ln t / n(a))` with ties to the lowest index.
pub fn ucb_select(counts: &[u64], sums: &[f64], t: u64) -> usize {
    if let Some(a) = counts.iter().position(|&n| n == 0) {
        return a;
    }
    let log_t = ln(t.max(1) as f64);
    let mut best = 0;
    let mut best_index = f64::NEG_INFINITY;
    for (a, (&n, &r)) in counts.iter().zip(sums).enumerate() {
        let n = n as f64;
        let index = r / n + sqrt(log_t / n);
        if index > best_index {
            best_index = index;
            best = a;
        }
    }
    best
}

#[derive(Debug, Clone)]
pub struct Ucb {
    counts: Vec<u64>,
    sums: Vec<f64>,
    round: u64,
    dist: Vec<f64>,
    chosen: usize,
}

impl Ucb {
    pub fn new(k: usize) -> Self {
        let mut dist = vec![0.0; k];
        dist[0] = 1.0;
        Self { counts: vec![0; k], sums: vec![0.0; k], round: 1, dist, chosen: 0 }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Current round `t`, one more than the number of observations.
    pub fn round(&self) -> u64 {
        self.round
    }
}

impl Policy for Ucb {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Ucb
    }

    fn arms(&self) -> usize {
        self.counts.len()
    }

    fn announce(&mut self, _rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>> {
        let arm = ucb_select(&self.counts, &self.sums, self.round);
        self.dist[self.chosen] = 0.0;
        self.dist[arm] = 1.0;
        self.chosen = arm;
        Ok(PolicyDecision::new(&self.dist))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        check_feedback(arm, self.counts.len(), reward)?;
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        self.round += 1;
        Ok(())
    }
}
