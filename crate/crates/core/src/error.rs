use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("instance needs at least one arm")]
    NoArms,
    #[error("all intrinsic means are zero; there is no best arm to normalize against")]
    AllZeroMeans,
    #[error("mean of arm {arm} is {value}, expected a value in [0, 1]")]
    MeanOutOfRange { arm: usize, value: f64 },
    #[error("quality {0} is outside [0, 1]")]
    QualityOutOfRange(f64),
    #[error("arm {arm} out of range for {k} arms")]
    ArmOutOfRange { arm: usize, k: usize },
    #[error("arm {0} has already been eliminated")]
    InactiveArm(usize),
    #[error("unknown policy `{0}` (expected one of aaeas, broad, ucb, aae, thompson, exp3pp, tsallis)")]
    UnknownPolicy(alloc::string::String),
    #[error("announced distribution has {got} entries, expected {k}")]
    DistributionLength { got: usize, k: usize },
    #[error("announced distribution is invalid: entry {index} is {value}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("announced distribution sums to {0}, expected 1")]
    DistributionSum(f64),
    #[error("reward {0} is outside [0, 1]")]
    RewardOutOfRange(f64),
    #[error("reward {0} is not binary; this policy only accepts rewards in {{0, 1}}")]
    NonBinaryReward(f64),
    #[error("log-barrier update denominator is non-positive (eta = {eta}, reward = {reward})")]
    NonPositiveDenominator { eta: f64, reward: f64 },
    #[error("parameter `{name}` = {value} is out of range")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("checkpoint stride must be at least 1")]
    ZeroStride,
    #[error("traces have different checkpoint rounds and cannot be aggregated")]
    MismatchedTraces,
    #[error("cannot aggregate zero runs")]
    NoRuns,
    #[error("root solve for `{0}` failed to bracket a solution")]
    SolverBracket(&'static str),
}
