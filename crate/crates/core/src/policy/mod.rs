//! Bandit policies behind a shared announce/observe contract.
//!
//! Every round the simulator calls [`Policy::announce`] to obtain the
//! distribution `p^t`, shows it to the adversary, draws the arm from it and
//! finally hands the arm and its reward to [`Policy::observe`]. Policies that
//! pick internally (UCB, Thompson sampling) announce a point mass.

use alloc::boxed::Box;
use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

use rand::RngCore;

use crate::error::{Error, Result};

pub mod aae;
pub mod aaeas;
pub mod broad;
pub mod exp3pp;
pub mod thompson;
pub mod tsallis;
pub mod ucb;

pub use aae::AaeClassic;
pub use aaeas::Aaeas;
pub use broad::Broad;
pub use exp3pp::{Exp3pp, Exp3ppParams};
pub use thompson::Thompson;
pub use tsallis::Tsallis;
pub use ucb::Ucb;

/// Allowed slack on `Σ p = 1`.
pub const SUM_TOLERANCE: f64 = 1e-9;
/// An entry within this distance of 1 makes a decision a point mass.
pub const POINT_MASS_EPS: f64 = 1e-12;

/// Rejects vectors with negative or non-finite entries or a sum off by more
/// than [`SUM_TOLERANCE`].
pub fn check_distribution(p: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (index, &value) in p.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeProbability { index, value });
        }
        sum += value;
    }
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::DistributionSum(sum));
    }
    Ok(())
}

/// The distribution `p^t` a policy commits to before the adversary moves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyDecision<'a> {
    distribution: &'a [f64],
    point_mass: Option<usize>,
}

impl<'a> PolicyDecision<'a> {
    pub fn new(distribution: &'a [f64]) -> Self {
        let point_mass = distribution.iter().position(|&p| (p - 1.0).abs() <= POINT_MASS_EPS);
        Self { distribution, point_mass }
    }

    pub fn distribution(&self) -> &'a [f64] {
        self.distribution
    }

    pub fn is_point_mass(&self) -> bool {
        self.point_mass.is_some()
    }

    /// The arm carrying all the mass, if any.
    pub fn point_mass_arm(&self) -> Option<usize> {
        self.point_mass
    }
}

pub trait Policy {
    fn kind(&self) -> PolicyKind;

    fn arms(&self) -> usize;

    /// Commits to the distribution for the coming round. Randomized internal
    /// selection (Thompson sampling) draws from `rng` here.
    fn announce(&mut self, rng: &mut dyn RngCore) -> Result<PolicyDecision<'_>>;

    /// Feeds back the realized arm and its reward for the round just
    /// announced.
    fn observe(&mut self, arm: usize, reward: f64) -> Result<()>;
}

pub(crate) fn check_feedback(arm: usize, k: usize, reward: f64) -> Result<()> {
    if arm >= k {
        return Err(Error::ArmOutOfRange { arm, k });
    }
    if !(0.0..=1.0).contains(&reward) {
        return Err(Error::RewardOutOfRange(reward));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    Aaeas,
    Broad,
    Ucb,
    Aae,
    Thompson,
    Exp3pp,
    Tsallis,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 7] = [
        PolicyKind::Aaeas,
        PolicyKind::Broad,
        PolicyKind::Ucb,
        PolicyKind::Aae,
        PolicyKind::Thompson,
        PolicyKind::Exp3pp,
        PolicyKind::Tsallis,
    ];

    pub const fn id(self) -> &'static str {
        match self {
            PolicyKind::Aaeas => "aaeas",
            PolicyKind::Broad => "broad",
            PolicyKind::Ucb => "ucb",
            PolicyKind::Aae => "aae",
            PolicyKind::Thompson => "thompson",
            PolicyKind::Exp3pp => "exp3pp",
            PolicyKind::Tsallis => "tsallis",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolicyKind::ALL.into_iter().find(|k| k.id() == s).ok_or_else(|| Error::UnknownPolicy(s.to_string()))
    }
}

/// Per-policy tuning knobs. Defaults reproduce the reference settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyParams {
    /// AAEAS failure probability; `None` means `1/T`.
    pub aaeas_delta: Option<f64>,
    /// Classic AAE failure probability; `None` means `1/T`.
    pub aae_delta: Option<f64>,
    /// BROAD initial learning rate.
    pub broad_eta0: f64,
    pub exp3pp: Exp3ppParams,
    /// Tsallis regularizer weight at round `t` is
    /// `tsallis_rate · t^tsallis_exponent`.
    pub tsallis_rate: f64,
    pub tsallis_exponent: f64,
}

impl Default for PolicyParams {
    fn default() -> Self {
        Self {
            aaeas_delta: None,
            aae_delta: None,
            broad_eta0: 0.5,
            exp3pp: Exp3ppParams::default(),
            tsallis_rate: 4.0,
            tsallis_exponent: 0.5,
        }
    }
}

/// Constructs a fresh policy state for `k` arms and horizon `horizon`.
pub fn build_policy(kind: PolicyKind, k: usize, horizon: u64, params: &PolicyParams) -> Result<Box<dyn Policy + Send>> {
    if k == 0 {
        return Err(Error::NoArms);
    }
    Ok(match kind {
        PolicyKind::Aaeas => Box::new(Aaeas::new(k, horizon, params.aaeas_delta)?),
        PolicyKind::Broad => Box::new(Broad::new(k, horizon, params.broad_eta0)?),
        PolicyKind::Ucb => Box::new(Ucb::new(k)),
        PolicyKind::Aae => Box::new(AaeClassic::new(k, horizon, params.aae_delta)?),
        PolicyKind::Thompson => Box::new(Thompson::new(k)),
        PolicyKind::Exp3pp => Box::new(Exp3pp::new(k, params.exp3pp.clone())?),
        PolicyKind::Tsallis => Box::new(Tsallis::new(k, params.tsallis_rate, params.tsallis_exponent)?),
    })
}

/// `δ' = δ / ((k + 1)·T)` with `δ` defaulting to `1/T`. A zero horizon is
/// treated as one round.
pub(crate) fn failure_budget(name: &'static str, k: usize, horizon: u64, delta: Option<f64>) -> Result<f64> {
    let t = horizon.max(1) as f64;
    let delta = delta.unwrap_or(1.0 / t);
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter { name, value: delta });
    }
    Ok(delta / ((k as f64 + 1.0) * t))
}

pub(crate) fn fill_uniform_over(dist: &mut [f64], active: &[bool], count: usize) {
    let w = 1.0 / count as f64;
    for (p, &on) in dist.iter_mut().zip(active) {
        *p = if on { w } else { 0.0 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for kind in PolicyKind::ALL {
            assert_eq!(kind.id().parse::<PolicyKind>().unwrap(), kind);
        }
        assert!(matches!("exp3".parse::<PolicyKind>(), Err(Error::UnknownPolicy(_))));
    }

    #[test]
    fn point_mass_flag() {
        assert!(PolicyDecision::new(&[0.0, 1.0, 0.0]).is_point_mass());
        assert_eq!(PolicyDecision::new(&[0.0, 1.0, 0.0]).point_mass_arm(), Some(1));
        assert!(!PolicyDecision::new(&[0.5, 0.5]).is_point_mass());
        assert!(PolicyDecision::new(&[1.0]).is_point_mass());
    }

    #[test]
    fn distribution_validation() {
        assert!(check_distribution(&[0.25, 0.75]).is_ok());
        assert!(check_distribution(&[0.25, 0.75 + 1e-10]).is_ok());
        assert!(check_distribution(&[0.25, 0.76]).is_err());
        assert!(check_distribution(&[f64::NAN, 1.0]).is_err());
    }
}
