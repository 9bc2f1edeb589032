//! EXP3++: exponential weights on importance-weighted losses mixed with a
//! per-arm exploration rate that shrinks as the arm's empirical gap grows.
//!
//! Losses are `1 − reward`.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::{check_feedback, Policy, PolicyDecision, PolicyKind};
use crate::error::{Error, Result};
use crate::math::{exp, ln, sqrt};

#[derive(Debug, Clone, PartialEq)]
pub struct Exp3ppParams {
    /// `η_t = eta_scale·√(ln k / (t·k))`.
    pub eta_scale: f64,
    /// Second exploration cap `explore_scale·√(ln k / (t·k))`.
    pub explore_scale: f64,
    /// Gap-driven exploration `gap_const·ln t / (t·Δ̂²)`.
    pub gap_const: f64,
}

impl Default for Exp3ppParams {
    fn default() -> Self {
        Self { eta_scale: 0.5, explore_scale: 0.5, gap_const: 18.0 }
    }
}

/// Writes the EXP3++ distribution for round `t` into `out`.
///
/// `p(a) = (1 − Σε)·softmax(−η_t·L̂)(a) + ε_t(a)` where
/// `ε_t(a) = min(1/(2k), explore_scale·√(ln k/(tk)), gap_const·ln t/(t·Δ̂(a)²))`
/// and `Δ̂(a) = min(1, (L̂(a) − min L̂)/t)`. An arm with `Δ̂ = 0` only gets the
/// first two caps.
pub fn exp3pp_distribution(cum_loss: &[f64], t: u64, params: &Exp3ppParams, out: &mut [f64]) {
    let k = cum_loss.len();
    let t = t.max(1) as f64;
    let kf = k as f64;
    let base = sqrt(ln(kf) / (t * kf));
    let eta = params.eta_scale * base;
    let min_loss = cum_loss.iter().copied().fold(f64::INFINITY, f64::min);

    let mut weight_sum = 0.0;
    for (o, &l) in out.iter_mut().zip(cum_loss) {
        *o = exp(-eta * (l - min_loss));
        weight_sum += *o;
    }
    let cap = (0.5 / kf).min(params.explore_scale * base);
    let log_t = ln(t);
    let mut eps_sum = 0.0;
    // Stash ε in a second pass so the mixture weight is known first.
    let eps = |l: f64| -> f64 {
        let gap = ((l - min_loss) / t).min(1.0);
        if gap > 0.0 {
            cap.min(params.gap_const * log_t / (t * gap * gap))
        } else {
            cap
        }
    };
    for &l in cum_loss {
        eps_sum += eps(l);
    }
    let mix = 1.0 - eps_sum;
    for (o, &l) in out.iter_mut().zip(cum_loss) {
        *o = mix * (*o / weight_sum) + eps(l);
    }
}

#[derive(Debug, Clone)]
pub struct Exp3pp {
    cum_loss: Vec<f64>,
    round: u64,
    params: Exp3ppParams,
    dist: Vec<f64>,
}

impl Exp3pp {
    pub fn new(k: usize, params: Exp3ppParams) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoArms);
        }
        for (name, v) in [
            ("exp3pp.eta_scale", params.eta_scale),
            ("exp3pp.explore_scale", params.explore_scale),
            ("exp3pp.gap_const", params.gap_const),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, value: v });
            }
        }
        Ok(Self { cum_loss: vec![0.0; k], round: 1, params, dist: vec![1.0 / k as f64; k] })
    }

    pub fn cumulative_losses(&self) -> &[f64] {
        &self.cum_loss
    }
}

impl Policy for Exp3pp {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Exp3pp
    }

    fn arms(&self) -> usize {
        self.cum_loss.len()
    }

    fn announce(&mut self, _rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>> {
        exp3pp_distribution(&self.cum_loss, self.round, &self.params, &mut self.dist);
        Ok(PolicyDecision::new(&self.dist))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        check_feedback(arm, self.cum_loss.len(), reward)?;
        let p = self.dist[arm];
        if !(p > 0.0) {
            return Err(Error::NegativeProbability { index: arm, value: p });
        }
        self.cum_loss[arm] += (1.0 - reward) / p;
        self.round += 1;
        Ok(())
    }
}
