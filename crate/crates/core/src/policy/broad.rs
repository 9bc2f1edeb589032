//! Log-barrier online mirror descent with a restart-based doubling trick
//! on the learning rate (BROAD).
//!
//! After playing arm `c` with reward `r` the distribution moves to
//!
//! ```text
//! p'(c) = p(c) / (1 − η·r + γ·p(c)),    p'(a) = p(a) / (1 + γ·p(a))  (a ≠ c)
//! ```
//!
//! with `γ ≥ 0` the unique value making `p'` sum to one. A second-order
//! statistic is accumulated since the last restart; once it reaches
//! `k·ln T / (3η²)` the learning rate halves and `p` resets to uniform.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::{check_feedback, Policy, PolicyDecision, PolicyKind};
use crate::error::{Error, Result};
use crate::math::ln;

/// Absolute tolerance on `Σ p' − 1` for the γ solve.
pub const GAMMA_TOLERANCE: f64 = 1e-12;
const MAX_ITERATIONS: usize = 200;

#[inline]
fn denominators(p: &[f64], chosen: usize, reward: f64, eta: f64, gamma: f64, a: usize) -> f64 {
    let base = if a == chosen { 1.0 - eta * reward } else { 1.0 };
    base + gamma * p[a]
}

fn check_inputs(p: &[f64], chosen: usize, reward: f64, eta: f64) -> Result<()> {
    check_feedback(chosen, p.len(), reward)?;
    if !(eta > 0.0) || 1.0 - eta * reward <= 0.0 {
        return Err(Error::NonPositiveDenominator { eta, reward });
    }
    for (index, &value) in p.iter().enumerate() {
        if !(value > 0.0) {
            return Err(Error::NegativeProbability { index, value });
        }
    }
    Ok(())
}

/// Finds the normalizing `γ` by Newton iteration from `γ = 0`, safeguarded by
/// bisection on `[0, η·r / min p]`.
///
/// The residual `Σ p'(γ) − 1` is convex and decreasing in `γ` and
/// non-negative at zero, so Newton steps from the left never overshoot.
pub fn solve_gamma(p: &[f64], chosen: usize, reward: f64, eta: f64) -> Result<f64> {
    check_inputs(p, chosen, reward, eta)?;
    if reward == 0.0 {
        return Ok(0.0);
    }
    if p.len() == 1 {
        return Ok(eta * reward);
    }
    let min_p = p.iter().copied().fold(f64::INFINITY, f64::min);
    let mut lo = 0.0;
    let mut hi = eta * reward / min_p;
    let residual = |g: f64| -> (f64, f64) {
        let mut sum = 0.0;
        let mut slope = 0.0;
        for a in 0..p.len() {
            let q = p[a] / denominators(p, chosen, reward, eta, g, a);
            sum += q;
            slope -= q * q;
        }
        (sum - 1.0, slope)
    };
    if residual(hi).0 > 0.0 {
        return Err(Error::SolverBracket("broad.gamma"));
    }
    let mut g = 0.0;
    for _ in 0..MAX_ITERATIONS {
        let (f, slope) = residual(g);
        if f.abs() <= GAMMA_TOLERANCE {
            return Ok(g);
        }
        if f > 0.0 {
            lo = g;
        } else {
            hi = g;
        }
        let newton = g - f / slope;
        g = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi {
            return Ok(g);
        }
    }
    Ok(g)
}

/// Evaluates the closed-form update for a given `γ`.
pub fn apply_gamma(p: &[f64], chosen: usize, reward: f64, eta: f64, gamma: f64, out: &mut [f64]) {
    for a in 0..p.len() {
        out[a] = p[a] / denominators(p, chosen, reward, eta, gamma, a);
    }
}

/// One log-barrier step. The result is renormalized after the solve, which
/// moves entries by at most a few ulps relative to the closed form.
pub fn broad_update(p: &[f64], chosen: usize, reward: f64, eta: f64) -> Result<Vec<f64>> {
    let mut out = vec![0.0; p.len()];
    update_into(p, chosen, reward, eta, &mut out)?;
    Ok(out)
}

fn update_into(p: &[f64], chosen: usize, reward: f64, eta: f64, out: &mut [f64]) -> Result<f64> {
    let gamma = solve_gamma(p, chosen, reward, eta)?;
    apply_gamma(p, chosen, reward, eta, gamma, out);
    let sum: f64 = out.iter().sum();
    for x in out.iter_mut() {
        *x /= sum;
    }
    Ok(gamma)
}

/// `Σ_a p(a)²·(r̂(a) − r)²` with the importance-weighted estimate
/// `r̂(a) = r/p(a)·1[a = chosen]`.
pub fn accumulator_increment(p: &[f64], chosen: usize, reward: f64) -> f64 {
    if reward == 0.0 {
        return 0.0;
    }
    p.iter()
        .enumerate()
        .map(|(a, &pa)| {
            let est = if a == chosen { reward / pa } else { 0.0 };
            let d = est - reward;
            pa * pa * d * d
        })
        .sum()
}

/// `k·ln T / (3η²)`.
pub fn restart_threshold(k: usize, horizon: u64, eta: f64) -> f64 {
    k as f64 * ln(horizon.max(1) as f64) / (3.0 * eta * eta)
}

pub fn restart_check(accumulator: f64, k: usize, horizon: u64, eta: f64) -> bool {
    accumulator >= restart_threshold(k, horizon, eta)
}

#[derive(Debug, Clone)]
pub struct Broad {
    p: Vec<f64>,
    scratch: Vec<f64>,
    eta0: f64,
    eta: f64,
    epoch: u32,
    accumulator: f64,
    threshold: f64,
    horizon: u64,
}

impl Broad {
    pub fn new(k: usize, horizon: u64, eta0: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoArms);
        }
        // η ≤ 1/2 keeps every denominator at least 1/2.
        if !(eta0 > 0.0 && eta0 <= 0.5) {
            return Err(Error::InvalidParameter { name: "broad.eta0", value: eta0 });
        }
        Ok(Self {
            p: vec![1.0 / k as f64; k],
            scratch: vec![0.0; k],
            eta0,
            eta: eta0,
            epoch: 0,
            accumulator: 0.0,
            threshold: restart_threshold(k, horizon, eta0),
            horizon,
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn eta0(&self) -> f64 {
        self.eta0
    }

    pub fn epoch(&self) -> u32 {
        self.epoch
    }

    pub fn accumulator(&self) -> f64 {
        self.accumulator
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    fn restart(&mut self) {
        self.epoch += 1;
        self.eta = self.eta0 * libm::exp2(-f64::from(self.epoch));
        let k = self.p.len();
        self.p.fill(1.0 / k as f64);
        self.accumulator = 0.0;
        self.threshold = restart_threshold(k, self.horizon, self.eta);
    }
}

impl Policy for Broad {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Broad
    }

    fn arms(&self) -> usize {
        self.p.len()
    }

    fn announce(&mut self, _rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>> {
        Ok(PolicyDecision::new(&self.p))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        check_feedback(arm, self.p.len(), reward)?;
        if reward == 0.0 {
            // Identity update; the accumulator also gains nothing. The
            // restart rule is still evaluated since the threshold can be 0.
            if self.accumulator >= self.threshold {
                self.restart();
            }
            return Ok(());
        }
        self.accumulator += accumulator_increment(&self.p, arm, reward);
        update_into(&self.p, arm, reward, self.eta, &mut self.scratch)?;
        core::mem::swap(&mut self.p, &mut self.scratch);
        if self.accumulator >= self.threshold {
            self.restart();
        }
        Ok(())
    }
}
