//! Mirror descent with the 1/2-Tsallis entropy on importance-weighted
//! cumulative reward estimates.
//!
//! Round `t` plays the maximizer over the simplex of
//! `Σ r̃(a)p(a) + η_t·Σ(√p(a) − p(a)/2)` with regularizer weight
//! `η_t = rate·t^exponent`. Stationarity gives
//! `p(a) = (η / (2(x − r̃(a)) + η))²` for a scalar `x`, found by a
//! safeguarded Newton solve on the normalization residual.
//!
//! The default exponent is `+1/2`, the Tsallis-INF schedule. With `−1/2`
//! the weight shrinks while `r̃` grows linearly, the policy turns greedy
//! within a few dozen rounds and can lock onto a suboptimal arm for good.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use super::{check_feedback, Policy, PolicyDecision, PolicyKind};
use crate::error::{Error, Result};
use crate::math::sqrt;

/// Absolute tolerance on `Σ p − 1` before renormalization.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-13;
const MAX_ITERATIONS: usize = 200;

/// Regularizer weight `rate·t^exponent`.
pub fn regularizer_weight(t: u64, rate: f64, exponent: f64) -> f64 {
    rate * libm::pow(t.max(1) as f64, exponent)
}

/// Writes the maximizer for regularizer weight `eta` into `out` and returns
/// the multiplier `x`.
///
/// The solve works in the shifted variable `y = x − max r̃`, with per-arm
/// gaps `g(a) = max r̃ − r̃(a) ≥ 0`, so huge estimates do not cancel. The
/// residual is convex and decreasing on `y > −η/2`, non-negative at `y = 0`
/// and non-positive at `y = η(√k − 1)/2`; Newton from `y = 0` approaches the
/// root from the left.
pub fn tsallis_distribution(r_tilde: &[f64], eta: f64, out: &mut [f64]) -> Result<f64> {
    let k = r_tilde.len();
    if k == 0 {
        return Err(Error::NoArms);
    }
    let top = r_tilde.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() || !(eta > 0.0) {
        return Err(Error::SolverBracket("tsallis.x"));
    }
    let residual = |y: f64, out: &mut [f64]| -> (f64, f64) {
        let mut sum = 0.0;
        let mut slope = 0.0;
        for (o, &r) in out.iter_mut().zip(r_tilde) {
            let den = 2.0 * (y + (top - r)) + eta;
            let root = eta / den;
            *o = root * root;
            sum += *o;
            slope -= 4.0 * root * root / den;
        }
        (sum - 1.0, slope)
    };

    let mut lo = 0.0;
    let mut hi = 0.5 * eta * (sqrt(k as f64) - 1.0);
    if residual(hi, out).0 > 1e-12 || residual(lo, out).0 < -1e-12 {
        return Err(Error::SolverBracket("tsallis.x"));
    }
    let mut y = 0.0;
    for _ in 0..MAX_ITERATIONS {
        let (f, slope) = residual(y, out);
        if f.abs() <= NORMALIZATION_TOLERANCE {
            break;
        }
        if f > 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        if hi - lo <= f64::EPSILON * hi.abs().max(eta) {
            break;
        }
        let newton = y - f / slope;
        y = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    let sum: f64 = out.iter().sum();
    for o in out.iter_mut() {
        *o /= sum;
    }
    Ok(top + y)
}

#[derive(Debug, Clone)]
pub struct Tsallis {
    estimates: Vec<f64>,
    round: u64,
    rate: f64,
    exponent: f64,
    dist: Vec<f64>,
}

impl Tsallis {
    pub fn new(k: usize, rate: f64, exponent: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::NoArms);
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter { name: "tsallis.rate", value: rate });
        }
        if !exponent.is_finite() {
            return Err(Error::InvalidParameter { name: "tsallis.exponent", value: exponent });
        }
        Ok(Self { estimates: vec![0.0; k], round: 1, rate, exponent, dist: vec![1.0 / k as f64; k] })
    }

    /// Cumulative importance-weighted reward estimates `r̃(a)`.
    pub fn estimates(&self) -> &[f64] {
        &self.estimates
    }
}

impl Policy for Tsallis {
    fn kind(&self) -> PolicyKind {
        PolicyKind::Tsallis
    }

    fn arms(&self) -> usize {
        self.estimates.len()
    }

    fn announce(&mut self, _rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>> {
        let eta = regularizer_weight(self.round, self.rate, self.exponent);
        tsallis_distribution(&self.estimates, eta, &mut self.dist)?;
        Ok(PolicyDecision::new(&self.dist))
    }

    fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        check_feedback(arm, self.estimates.len(), reward)?;
        let p = self.dist[arm];
        if !(p > 0.0) {
            return Err(Error::NegativeProbability { index: arm, value: p });
        }
        self.estimates[arm] += reward / p;
        self.round += 1;
        Ok(())
    }
}
