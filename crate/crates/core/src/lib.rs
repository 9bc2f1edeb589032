//! Bandit algorithms and simulation primitives for the adversarial-scaling
//! reward model.
//!
//! Each round an adversary picks a quality `q^t` in `[0, 1]` that multiplies
//! the intrinsic mean `θ(a)` of every arm, so arm `a` pays Bernoulli
//! `q^t·θ(a)`. The adversary sees the learner's announced distribution but
//! never the realized arm. Pseudo-regret is `Σ_t q^t·(1 − θ(a^t))` with `θ`
//! normalized so the best arm has mean 1.
//!
//! The crate is `no_std` (it needs `alloc`) and contains:
//!
//! - [`model`]: instances, Bernoulli reward draws, regret accounting, traces.
//! - [`schedule`]: adversarial quality schedules (constant, cold start,
//!   targeted zeroing of point masses, explicit sequences).
//! - [`policy`]: seven policies behind the [`Policy`] announce/observe
//!   contract: AAEAS, BROAD, UCB, classic AAE, Thompson sampling, EXP3++ and
//!   Tsallis-entropy mirror descent.
//! - [`simulator`]: the per-round protocol loop and seed derivation.
//! - [`aggregate`]: mean and standard-error curves over many runs.
//!
//! Parallel experiment orchestration, file formats and the CLI live in the
//! `adscale-lab` crate.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod aggregate;
mod error;
pub mod math;
pub mod model;
pub mod policy;
pub mod schedule;
pub mod simulator;

pub use aggregate::{AggregateCurve, Moments};
pub use error::{Error, Result};
pub use model::{draw_reward, normalize_instance, regret_increment, Checkpoint, EpisodeTrace, Instance, RoundOutcome};
pub use policy::{build_policy, Policy, PolicyDecision, PolicyKind, PolicyParams};
pub use schedule::{QualitySchedule, QualitySource};
pub use simulator::{episode_seed, run_episode, run_episode_with_streams, EpisodeStreams};
