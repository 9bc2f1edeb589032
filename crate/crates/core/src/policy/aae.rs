//! Classic active arm elimination with per-arm Hoeffding radii, randomized
//! uniformly over the active set.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::{check_feedback, failure_budget, fill_uniform_over, Policy, PolicyDecision, PolicyKind};
use crate::error::{Error, Result};
use crate::math::{ln, sqrt};

/// `√(2·ln(2/δ') / n)`; infinite for an unpulled arm.
pub fn radius(log_term: f64, pulls: u64) -> f64 {
    if pulls == 0 {
        f64::INFINITY
    } else {
        sqrt(2.0 * log_term / pulls as f64)
    }
}

#[derive(Debug, Clone)]
pub struct AaeClassic {
    counts: Vec<u64>,
    sums: Vec<f64>,
    active: Vec<bool>,
    active_count: usize,
    delta_prime: f64,
    log_term: f64,
    round: u64,
    eliminated_at: Vec<Option<u64>>,
    dist: Vec<f64>,
}

impl AaeClassic {
    pub fn new(k: usize, horizon: u64, delta: Option<f64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoArms);
        }
        let delta_prime = failure_budget("aae.delta", k, horizon, delta)?;
        Ok(Self {
            counts: vec![0; k],
            sums: vec![0.0; k],
            active: vec![true; k],
            active_count: k,
            delta_prime,
            log_term: ln(2.0 / delta_prime),
            round: 0,
            eliminated_at: vec![None; k],
            dist: vec![1.0 / k as f64; k],
        })
    }

    /// Overrides `δ'` directly, bypassing the `δ/((k+1)T)` budget.
    pub fn with_delta_prime(mut self, delta_prime: f64) -> Result<Self> {
        if !(delta_prime > 0.0 && delta_prime < 1.0) {
            return Err(Error::InvalidParameter { name: "aae.delta_prime", value: delta_prime });
        }
        self.delta_prime = delta_prime;
        self.log_term = ln(2.0 / delta_prime);
        Ok(self)
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

    pub fn eliminated_at(&self) -> &[Option<u64>] {
        &self.eliminated_at
    }

    fn eliminate(&mut self) {
        let best_lower = (0..self.counts.len())
            .filter(|&a| self.active[a] && self.counts[a] > 0)
            .map(|a| self.sums[a] / self.counts[a] as f64 - radius(self.log_term, self.counts[a]))
            .fold(f64::NEG_INFINITY, f64::max);
        let mut changed = false;
        for a in 0..self.counts.len() {
            if !self.active[a] || self.counts[a] == 0 {
                continue;
            }
            let upper = self.sums[a] / self.counts[a] as f64 + radius(self.log_term, self.counts[a]);
            if upper < best_lower {
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

impl Policy for AaeClassic {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Aae
    }

    fn arms(&self) -> usize {
        self.counts.len()
    }

    fn announce(&mut self, _rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>> {
        Ok(PolicyDecision::new(&self.dist))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        check_feedback(arm, self.counts.len(), reward)?;
        if !self.active[arm] {
            return Err(Error::InactiveArm(arm));
        }
        self.round += 1;
        self.counts[arm] += 1;
        self.sums[arm] += reward;
        if self.active_count > 1 {
            self.eliminate();
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unpulled_arm_is_never_tested() {
        let mut p = AaeClassic::new(3, 100, None).unwrap().with_delta_prime(0.5).unwrap();
        for _ in 0..500 {
            p.observe(0, 1.0).unwrap();
            if p.is_active(1) {
                p.observe(1, 0.0).unwrap();
            }
        }
        assert!(!p.is_active(1));
        assert!(p.is_active(2));
        assert!(p.is_active(0));
    }

    #[test]
    fn symmetric_histories_keep_everything() {
        let mut p = AaeClassic::new(2, 100, None).unwrap();
        for t in 0..10_000 {
            p.observe(t % 2, ((t / 2) % 2) as f64).unwrap();
        }
        assert_eq!(p.active_arms().count(), 2);
    }

    #[test]
    fn first_separating_pull_count_matches_direct_inequality() {
        // Independent evaluation of mean(0) − rad > mean(1) + rad at δ' = 1e-8
        // with means 1 and 0.
        let l = (2.0f64 / 1e-8).ln();
        let rad = |n: u64| (2.0 * l / n as f64).sqrt();
        assert!((rad(100) - 0.618).abs() < 1e-3);
        assert!(1.0 - rad(100) <= rad(100));
        let symmetric_n = (1..).find(|&n| 1.0 - rad(n) > rad(n)).unwrap();
        assert!((150..=160).contains(&symmetric_n), "{symmetric_n}");

        // Arms are fed alternately, 0 first; observation i leaves
        // ceil(i/2) pulls on arm 0 and floor(i/2) on arm 1.
        let first_step = (1u64..)
            .find(|&i| {
                let (n0, n1) = (i.div_ceil(2), i / 2);
                n1 > 0 && rad(n1) < 1.0 - rad(n0)
            })
            .unwrap();

        let mut p = AaeClassic::new(2, 100, None).unwrap().with_delta_prime(1e-8).unwrap();
        let mut step = 0;
        while p.is_active(1) {
            step += 1;
            if step % 2 == 1 {
                p.observe(0, 1.0).unwrap();
            } else {
                p.observe(1, 0.0).unwrap();
            }
        }
        assert_eq!(step, first_step);
        assert_eq!(p.eliminated_at()[1], Some(first_step));
        assert!(first_step >= 2 * (symmetric_n - 1));
    }
}
