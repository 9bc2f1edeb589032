//! The environment side of the adversarial-scaling model.

use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};

/// Stochastic half of the environment: arm count and normalized intrinsic
/// means.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    theta: Vec<f64>,
    optimal_arm: usize,
    scale: f64,
}

impl Instance {
    pub fn k(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn optimal_arm(&self) -> usize {
        self.optimal_arm
    }

    /// The largest raw mean; every schedule quality is multiplied by it.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Intrinsic gap `Δ(a) = 1 − θ(a)`.
    pub fn gap(&self, arm: usize) -> f64 {
        1.0 - self.theta[arm]
    }

    /// Raw means `scale · θ(a)`.
    pub fn raw_means(&self) -> Vec<f64> {
        self.theta.iter().map(|t| t * self.scale).collect()
    }
}

/// Rescales raw means so the best arm has intrinsic mean exactly 1.
///
/// The first arm attaining the maximum becomes `optimal_arm`.
pub fn normalize_instance(theta_raw: &[f64]) -> Result<Instance> {
    if theta_raw.is_empty() {
        return Err(Error::NoArms);
    }
    for (arm, &value) in theta_raw.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::MeanOutOfRange { arm, value });
        }
    }
    let (optimal_arm, scale) =
        theta_raw
            .iter()
            .copied()
            .enumerate()
            .fold((0, theta_raw[0]), |best, (a, v)| if v > best.1 { (a, v) } else { best });
    if scale <= 0.0 {
        return Err(Error::AllZeroMeans);
    }
    let theta = theta_raw.iter().map(|&v| v / scale).collect();
    Ok(Instance { theta, optimal_arm, scale })
}

/// One Bernoulli draw with mean `quality · theta_a`. Consumes exactly one
/// uniform from `rng`.
#[inline]
pub fn draw_reward<R: RngCore + ?Sized>(rng: &mut R, quality: f64, theta_a: f64) -> f64 {
    let u: f64 = rng.random();
    if u < quality * theta_a {
        1.0
    } else {
        0.0
    }
}

/// Pseudo-regret of one round: `quality · Δ(chosen)`.
#[inline]
pub fn regret_increment(instance: &Instance, quality: f64, chosen: usize) -> f64 {
    if chosen == instance.optimal_arm {
        0.0
    } else {
        quality * instance.gap(chosen)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundOutcome {
    pub round: u64,
    pub quality: f64,
    pub chosen_arm: usize,
    pub reward: f64,
    pub regret_increment: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Checkpoint {
    pub round: u64,
    pub cum_reward: f64,
    pub cum_pseudo_regret: f64,
    /// `Q = Σ q^t`, in the normalized quality units used for regret.
    pub cum_quality: f64,
}

/// Checkpointed cumulative statistics of one seeded episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeTrace {
    pub seed: u64,
    pub horizon: u64,
    checkpoints: Vec<Checkpoint>,
}

impl EpisodeTrace {
    pub fn new(seed: u64, horizon: u64) -> Self {
        Self { seed, horizon, checkpoints: Vec::new() }
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    /// Appends a checkpoint, rejecting anything that would break
    /// monotonicity or the `regret ≤ Q` bound.
    pub fn push(&mut self, cp: Checkpoint) {
        if let Some(last) = self.checkpoints.last() {
            assert!(cp.round > last.round, "checkpoint rounds must increase");
            assert!(
                cp.cum_reward >= last.cum_reward
                    && cp.cum_pseudo_regret >= last.cum_pseudo_regret
                    && cp.cum_quality >= last.cum_quality,
                "cumulative quantities must be non-decreasing"
            );
        }
        assert!(cp.round <= self.horizon, "checkpoint beyond horizon");
        assert!(
            cp.cum_pseudo_regret <= cp.cum_quality * (1.0 + 1e-12) + 1e-12,
            "pseudo-regret exceeds cumulative quality"
        );
        self.checkpoints.push(cp);
    }

    pub fn last(&self) -> Option<&Checkpoint> {
        self.checkpoints.last()
    }

    pub fn final_regret(&self) -> f64 {
        self.last().map_or(0.0, |c| c.cum_pseudo_regret)
    }

    /// Cumulative regret at the last checkpoint with `round ≤ t`.
    pub fn regret_at(&self, t: u64) -> f64 {
        let idx = self.checkpoints.partition_point(|c| c.round <= t);
        if idx == 0 {
            0.0
        } else {
            self.checkpoints[idx - 1].cum_pseudo_regret
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn normalizes_two_arms() {
        let inst = normalize_instance(&[0.5, 0.8]).unwrap();
        assert_relative_eq!(inst.theta()[0], 0.625);
        assert_eq!(inst.theta()[1], 1.0);
        assert_eq!(inst.scale(), 0.8);
        assert_eq!(inst.optimal_arm(), 1);
    }

    #[test]
    fn normalizes_small_means() {
        let inst = normalize_instance(&[0.005, 0.001]).unwrap();
        assert_eq!(inst.theta()[0], 1.0);
        assert_relative_eq!(inst.theta()[1], 0.2, max_relative = 1e-15);
        assert_eq!(inst.scale(), 0.005);
        assert_eq!(inst.optimal_arm(), 0);
    }

    #[test]
    fn single_arm_is_identity() {
        let inst = normalize_instance(&[1.0]).unwrap();
        assert_eq!(inst.theta(), &[1.0]);
        assert_eq!(inst.scale(), 1.0);
    }

    #[test]
    fn rejects_bad_means() {
        assert_eq!(normalize_instance(&[0.0, 0.0]), Err(Error::AllZeroMeans));
        assert_eq!(normalize_instance(&[]), Err(Error::NoArms));
        assert!(matches!(normalize_instance(&[0.2, 1.5]), Err(Error::MeanOutOfRange { arm: 1, .. })));
        assert!(matches!(normalize_instance(&[f64::NAN]), Err(Error::MeanOutOfRange { .. })));
    }

    #[test]
    fn regret_increment_cases() {
        let inst = normalize_instance(&[0.5, 0.8]).unwrap();
        assert_relative_eq!(regret_increment(&inst, 1.0, 0), 0.375);
        assert_eq!(regret_increment(&inst, 0.0, 0), 0.0);
        assert_eq!(regret_increment(&inst, 0.7, 1), 0.0);
    }

    #[test]
    fn reward_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert_eq!(draw_reward(&mut rng, 0.0, 0.9), 0.0);
            assert_eq!(draw_reward(&mut rng, 1.0, 1.0), 1.0);
        }
    }

    #[test]
    fn reward_mean_within_three_standard_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        let hits: f64 = (0..n).map(|_| draw_reward(&mut rng, 0.5, 0.8)).sum();
        let mean = hits / n as f64;
        let se = (0.4f64 * 0.6 / n as f64).sqrt();
        assert!((mean - 0.4).abs() <= 3.0 * se, "mean {mean}");
    }

    #[test]
    fn trace_lookup() {
        let mut trace = EpisodeTrace::new(0, 300);
        for (r, reg) in [(100, 1.0), (200, 2.0), (300, 2.5)] {
            trace.push(Checkpoint { round: r, cum_reward: 0.0, cum_pseudo_regret: reg, cum_quality: r as f64 });
        }
        assert_eq!(trace.regret_at(50), 0.0);
        assert_eq!(trace.regret_at(250), 2.0);
        assert_eq!(trace.final_regret(), 2.5);
    }

    #[test]
    #[should_panic(expected = "must increase")]
    fn trace_rejects_non_increasing_rounds() {
        let mut trace = EpisodeTrace::new(0, 10);
        let cp = Checkpoint { round: 5, cum_reward: 0.0, cum_pseudo_regret: 0.0, cum_quality: 0.0 };
        trace.push(cp);
        trace.push(cp);
    }

    proptest! {
        #[test]
        fn normalization_preserves_argmax_set(raw in proptest::collection::vec(0.0f64..=1.0, 1..8)) {
            prop_assume!(raw.iter().any(|&v| v > 0.0));
            let inst = normalize_instance(&raw).unwrap();
            let max_raw = raw.iter().cloned().fold(f64::MIN, f64::max);
            for (a, &v) in raw.iter().enumerate() {
                prop_assert_eq!(v == max_raw, inst.theta()[a] == 1.0);
                prop_assert!((0.0..=1.0).contains(&inst.theta()[a]));
            }
            prop_assert_eq!(raw[inst.optimal_arm()], max_raw);
        }

        #[test]
        fn scaled_draws_are_bit_identical(seed in any::<u64>(), c in 0.0f64..=1.0, theta in 0.0f64..=1.0) {
            let mut a = ChaCha8Rng::seed_from_u64(seed);
            let mut b = a.clone();
            for _ in 0..64 {
                prop_assert_eq!(
                    draw_reward(&mut a, 1.0, c * theta).to_bits(),
                    draw_reward(&mut b, c, theta).to_bits()
                );
            }
        }
    }
}
