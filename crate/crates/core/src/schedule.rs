//! Adversarial quality schedules.
//!
//! A schedule is queried once per round, after the policy has announced its
//! distribution `p^t` and before the arm is realized. It never sees the
//! realized arm: [`QualitySource::quality`] has no parameter that could carry
//! it.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::policy::check_distribution;

/// Point-mass detection slack for [`QualitySchedule::TargetedZero`].
pub const POINT_MASS_TOLERANCE: f64 = 1e-12;

/// Anything that can act as the adversary's quality rule.
pub trait QualitySource {
    fn quality(&self, round: u64, announced: &[f64], optimal_arm: usize) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum QualitySchedule {
    Constant {
        q0: f64,
    },
    /// `q = 0` for `t ≤ t0`, `q_after` from `t0 + 1` on.
    ColdStart {
        t0: u64,
        q_after: f64,
    },
    /// Zeroes the quality whenever the announced mass on the optimal arm
    /// reaches `threshold`. The default threshold of 1 only fires on exact
    /// point masses (deterministic policies); lower thresholds probe
    /// near-deterministic ones.
    TargetedZero {
        threshold: f64,
        q_otherwise: f64,
    },
    /// Explicit qualities for rounds `1..=len`; the last value repeats.
    Custom(Vec<f64>),
}

fn check_quality(q: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&q) {
        Ok(q)
    } else {
        Err(Error::QualityOutOfRange(q))
    }
}

impl QualitySchedule {
    pub fn constant(q0: f64) -> Result<Self> {
        Ok(Self::Constant { q0: check_quality(q0)? })
    }

    pub fn cold_start(t0: u64, q_after: f64) -> Result<Self> {
        Ok(Self::ColdStart { t0, q_after: check_quality(q_after)? })
    }

    pub fn targeted_zero(threshold: f64, q_otherwise: f64) -> Result<Self> {
        if !(threshold > 0.5 && threshold <= 1.0) {
            return Err(Error::InvalidParameter { name: "threshold", value: threshold });
        }
        Ok(Self::TargetedZero { threshold, q_otherwise: check_quality(q_otherwise)? })
    }

    pub fn custom(qualities: Vec<f64>) -> Result<Self> {
        if qualities.is_empty() {
            return Err(Error::InvalidParameter { name: "custom_sequence length", value: 0.0 });
        }
        for &q in &qualities {
            check_quality(q)?;
        }
        Ok(Self::Custom(qualities))
    }

    /// Output depends on the round only.
    pub fn is_oblivious(&self) -> bool {
        !matches!(self, Self::TargetedZero { .. })
    }

    pub fn next_quality(&self, round: u64, announced: &[f64], optimal_arm: usize) -> Result<f64> {
        check_distribution(announced)?;
        if optimal_arm >= announced.len() {
            return Err(Error::ArmOutOfRange { arm: optimal_arm, k: announced.len() });
        }
        Ok(match self {
            Self::Constant { q0 } => *q0,
            Self::ColdStart { t0, q_after } => {
                if round <= *t0 {
                    0.0
                } else {
                    *q_after
                }
            }
            Self::TargetedZero { threshold, q_otherwise } => {
                if announced[optimal_arm] >= threshold - POINT_MASS_TOLERANCE {
                    0.0
                } else {
                    *q_otherwise
                }
            }
            Self::Custom(seq) => {
                let idx = (round.max(1) - 1) as usize;
                seq[idx.min(seq.len() - 1)]
            }
        })
    }
}

impl QualitySource for QualitySchedule {
    fn quality(&self, round: u64, announced: &[f64], optimal_arm: usize) -> Result<f64> {
        self.next_quality(round, announced, optimal_arm)
    }
}
