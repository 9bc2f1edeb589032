//! Active arm elimination with adversarial scaling.
//!
//! Arms are played uniformly among the active set. Instead of per-arm pull
//! counts, which an adversary can inflate with zero-quality rounds, a single
//! confidence width `CB(S)` is driven by the algorithm's own total reward `S`.
//! Arm `a'` is dropped once `R(a') + CB(S) < max_a R(a)`.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::{check_feedback, failure_budget, fill_uniform_over, Policy, PolicyDecision, PolicyKind};
use crate::error::{Error, Result};
use crate::math::{ln, sqrt};

/// `CB(S) = 2·√max(4·S·ln(2/δ'), 16·k·ln²(2/δ'))`.
pub fn confidence_bound(total_reward: f64, k: usize, delta_prime: f64) -> f64 {
    bound_from_log(total_reward, k, ln(2.0 / delta_prime))
}

#[inline]
fn bound_from_log(total_reward: f64, k: usize, log_term: f64) -> f64 {
    let reward_branch = 4.0 * total_reward * log_term;
    let floor_branch = 16.0 * k as f64 * log_term * log_term;
    2.0 * sqrt(reward_branch.max(floor_branch))
}

#[derive(Debug, Clone)]
pub struct Aaeas {
    active: Vec<bool>,
    active_count: usize,
    rewards: Vec<f64>,
    total: f64,
    delta_prime: f64,
    log_term: f64,
    round: u64,
    eliminated_at: Vec<Option<u64>>,
    dist: Vec<f64>,
}

impl Aaeas {
    /// `delta` defaults to `1/T`.
    pub fn new(k: usize, horizon: u64, delta: Option<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoArms);
        }
        let delta_prime = failure_budget("aaeas.delta", k, horizon, delta)?;
        Ok(Self {
            active: vec![true; k],
            active_count: k,
            rewards: vec![0.0; k],
            total: 0.0,
            delta_prime,
            log_term: ln(2.0 / delta_prime),
            round: 0,
            eliminated_at: vec![None; k],
            dist: vec![1.0 / k as f64; k],
        })
    }

    pub fn delta_prime(&self) -> f64 {
        self.delta_prime
    }

    pub fn is_active(&self, arm: usize) -> bool {
        self.active[arm]
    }

    pub fn active_arms(&self) -> impl Iterator<Item = usize> + '_ {
        self.active.iter().enumerate().filter(|(_, &on)| on).map(|(a, _)| a)
    }

    /// `R(a)`.
    pub fn arm_rewards(&self) -> &[f64] {
        &self.rewards
    }

    /// `S`.
    pub fn total_reward(&self) -> f64 {
        self.total
    }

    pub fn current_bound(&self) -> f64 {
        bound_from_log(self.total, self.active.len(), self.log_term)
    }

    /// Round (1-based) at which each arm left the active set.
    pub fn eliminated_at(&self) -> &[Option<u64>] {
        &self.eliminated_at
    }

    fn eliminate(&mut self) {
        let cb = self.current_bound();
        let best = self
            .rewards
            .iter()
            .zip(&self.active)
            .filter(|(_, &on)| on)
            .map(|(&r, _)| r)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut changed = false;
        for a in 0..self.active.len() {
            if self.active[a] && self.rewards[a] + cb < best {
                self.active[a] = false;
                self.active_count -= 1;
                self.eliminated_at[a] = Some(self.round);
                changed = true;
            }
        }
        if changed {
            fill_uniform_over(&mut self.dist, &self.active, self.active_count);
        }
    }
}

impl Policy for Aaeas {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Aaeas
    }

    fn arms(&self) -> usize {
        self.active.len()
    }

    fn announce(&mut self, _rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>> {
        Ok(PolicyDecision::new(&self.dist))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        check_feedback(arm, self.active.len(), reward)?;
        if !self.active[arm] {
            return Err(Error::InactiveArm(arm));
        }
        self.round += 1;
        self.total += reward;
        self.rewards[arm] += reward;
        if reward > 0.0 {
            self.eliminate();
        }
        Ok(())
    }
}
