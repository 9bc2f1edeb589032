//! The per-round protocol loop and seed derivation.
//!
//! Each round, in order:
//!
//! 1. the policy announces `p^t` (drawing from the *policy* stream if it
//!    randomizes internally),
//! 2. the schedule maps `(t, p^t)` to a quality, which the environment
//!    multiplies by the instance scale,
//! 3. the arm is drawn from `p^t` with one uniform from the *arm* stream,
//! 4. one Bernoulli reward for that arm only is drawn from the *reward*
//!    stream and fed back to the policy.
//!
//! The three streams are ChaCha8 (`rand_chacha`) seeded with the episode seed
//! on stream ids 0, 1 and 2.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::CompensatedSum;
use crate::model::{draw_reward, regret_increment, Checkpoint, EpisodeTrace, Instance, RoundOutcome};
use crate::policy::Policy;
use crate::schedule::QualitySource;

/// Identity of the generator used for every stream, for output metadata.
pub const RNG_IDENTITY: &str = "ChaCha8Rng (rand_chacha 0.9), streams policy=0 arm=1 reward=2";

/// SplitMix64 finalizer.
pub const fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub const fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut i = 0;
    while i < bytes.len() {
        h ^= bytes[i] as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
        i += 1;
    }
    h
}

/// `splitmix64(splitmix64(splitmix64(master) ^ fnv1a64(policy_id)) ^ run)`.
pub fn episode_seed(master_seed: u64, policy_id: &str, run: u64) -> u64 {
    let s = splitmix64(master_seed);
    let s = splitmix64(s ^ fnv1a64(policy_id.as_bytes()));
    splitmix64(s ^ run)
}

/// Independent random streams of one episode.
#[derive(Debug, Clone)]
pub struct EpisodeStreams<R> {
    pub policy: R,
    pub arm: R,
    pub reward: R,
}

impl EpisodeStreams<ChaCha8Rng> {
    pub fn from_seed(seed: u64) -> Self {
        let stream = |id| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(id);
            rng
        };
        Self { policy: stream(0), arm: stream(1), reward: stream(2) }
    }
}

/// Inverse-CDF draw from `dist` with a uniform `u ∈ [0, 1)`. Rounding slack
/// at the top end goes to the last arm with positive mass.
pub fn sample_arm(dist: &[f64], u: f64) -> usize {
    let mut cum = 0.0;
    let mut last_positive = 0;
    for (a, &p) in dist.iter().enumerate() {
        if p > 0.0 {
            cum += p;
            last_positive = a;
            if u < cum {
                return a;
            }
        }
    }
    last_positive
}

/// Runs one seeded episode with the default ChaCha8 streams.
pub fn run_episode<S, P>(
    instance: &Instance,
    schedule: &S,
    policy: &mut P,
    seed: u64,
    horizon: u64,
    checkpoint_stride: u64,
) -> Result<EpisodeTrace>
where
    S: QualitySource + ?Sized,
    P: Policy + ?Sized,
{
    let mut streams = EpisodeStreams::from_seed(seed);
    run_episode_with_streams(instance, schedule, policy, &mut streams, seed, horizon, checkpoint_stride, |_| {})
}

/// Runs one episode on caller-provided streams, reporting every round to
/// `on_round`. `seed` is only recorded in the trace.
#[allow(clippy::too_many_arguments)]
pub fn run_episode_with_streams<S, P, R, F>(
    instance: &Instance,
    schedule: &S,
    policy: &mut P,
    streams: &mut EpisodeStreams<R>,
    seed: u64,
    horizon: u64,
    checkpoint_stride: u64,
    mut on_round: F,
) -> Result<EpisodeTrace>
where
    S: QualitySource + ?Sized,
    P: Policy + ?Sized,
    R: RngCore,
    F: FnMut(&RoundOutcome),
{
    if checkpoint_stride == 0 {
        return Err(Error::ZeroStride);
    }
    let k = instance.k();
    if policy.arms() != k {
        return Err(Error::DistributionLength { got: policy.arms(), k });
    }
    let optimal = instance.optimal_arm();
    let scale = instance.scale();
    let mut trace = EpisodeTrace::new(seed, horizon);
    let mut regret = CompensatedSum::new();
    let mut quality_sum = CompensatedSum::new();
    let mut reward_sum = 0.0;

    for t in 1..=horizon {
        let (arm, quality) = {
            let decision = policy.announce(&mut streams.policy)?;
            let dist = decision.distribution();
            if dist.len() != k {
                return Err(Error::DistributionLength { got: dist.len(), k });
            }
            let q = schedule.quality(t, dist, optimal)?;
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::QualityOutOfRange(q));
            }
            let u: f64 = streams.arm.random();
            (sample_arm(dist, u), q * scale)
        };
        let reward = draw_reward(&mut streams.reward, quality, instance.theta()[arm]);
        policy.observe(arm, reward)?;

        let inc = regret_increment(instance, quality, arm);
        regret.add(inc);
        quality_sum.add(quality);
        reward_sum += reward;
        on_round(&RoundOutcome { round: t, quality, chosen_arm: arm, reward, regret_increment: inc });

        if t % checkpoint_stride == 0 || t == horizon {
            trace.push(Checkpoint {
                round: t,
                cum_reward: reward_sum,
                cum_pseudo_regret: regret.value(),
                cum_quality: quality_sum.value(),
            });
        }
    }
    Ok(trace)
}
