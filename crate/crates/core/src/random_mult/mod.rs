//! Random completely multiplicative functions `f(n) = prod_p X_p^{v_p(n)}`
//! with independent fair signs `X_p`.
//!
//! Every seeded operation derives sample `i` from stream `i` of the
//! counter-based generator in [`rng`], so results do not depend on how the
//! work is split across threads. Floating reductions run in sample order.

pub mod mc;
pub mod moments;
pub mod rng;
pub mod sample;
pub mod subgaussian;
pub mod tail;
pub mod zeta;

pub use mc::{mc_m, wilson_interval, MCEstimate};
pub use moments::{
    second_moment_bruteforce, second_moment_formula, second_moment_mc, MomentRecord,
    BRUTE_FORCE_CAP,
};
pub use sample::{sample_assignment, FactorPlan, RMFSample, StepEvaluator};
pub use subgaussian::{subgaussian_check, variance_proxy, SubGaussianCheck};
pub use tail::{integrate_walk, tail_integral, SigmaRule, TailEstimate};
pub use zeta::{zeta_truncated, ZetaEval};
