//! Bernoulli Thompson sampling with `Beta(1, 1)` priors.
//!
//! Posteriors are stored as `(α, β) = (1 + successes, 1 + failures)`. The
//! announced decision is the point mass on the sampled argmax; the marginal
//! selection probability is never computed.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use rand_distr::{Beta, Distribution};

use super::{check_feedback, Policy, PolicyDecision, PolicyKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Thompson {
    successes: Vec<u64>,
    failures: Vec<u64>,
    dist: Vec<f64>,
    chosen: usize,
}

impl Thompson {
    pub fn new(k: usize) -> Self {
        let mut dist = vec![0.0; k];
        dist[0] = 1.0;
        Self { successes: vec![0; k], failures: vec![0; k], dist, chosen: 0 }
    }

    /// Beta parameters `(α, β)` of arm `arm`.
    pub fn posterior(&self, arm: usize) -> (f64, f64) {
        (1.0 + self.successes[arm] as f64, 1.0 + self.failures[arm] as f64)
    }

    pub fn posterior_mean(&self, arm: usize) -> f64 {
        let (a, b) = self.posterior(arm);
        a / (a + b)
    }

    /// Samples every posterior once and returns the argmax, lowest index on
    /// ties.
    pub fn sample_arm(&self, rng: &mut dyn RngCore) -> usize {
        let mut best = 0;
        let mut best_draw = f64::NEG_INFINITY;
        for a in 0..self.successes.len() {
            let (alpha, beta) = self.posterior(a);
            // Both parameters are ≥ 1, so construction cannot fail.
            let draw = Beta::new(alpha, beta).map_or(0.0, |d| d.sample(rng));
            if draw > best_draw {
                best_draw = draw;
                best = a;
            }
        }
        best
    }
}

impl Policy for Thompson {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Thompson
    }

    fn arms(&self) -> usize {
        self.successes.len()
    }

    fn announce(&mut self, rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>> {
        let arm = self.sample_arm(rng);
        self.dist[self.chosen] = 0.0;
        self.dist[arm] = 1.0;
        self.chosen = arm;
        Ok(PolicyDecision::new(&self.dist))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        check_feedback(arm, self.successes.len(), reward)?;
        if reward == 1.0 {
            self.successes[arm] += 1;
        } else if reward == 0.0 {
            self.failures[arm] += 1;
        } else {
            return Err(Error::NonBinaryReward(reward));
        }
        Ok(())
    }
}
