//! Rate-distortion learning targets for Bayesian multi-armed bandits.
//!
//! The numerical core ([`info`], [`rd`], [`estimation`], [`agents::ids`]) is
//! generic over [`Scalar`] (`f32` or `f64`); the bandit simulation, agents and
//! experiment harness work in `f64`.
//!
//! - [`info`]: entropy, KL divergence and mutual information in bits.
//! - [`rd`]: discrete Blahut-Arimoto, the `J` functional and curve tracing.
//! - [`estimation`]: plug-in estimator bounds (action gap, deviation bound, sample size).
//! - [`bandit`]: Bernoulli and Gaussian bandits with conjugate posteriors.
//! - [`agents`]: Thompson sampling, STS, BLASTS, variance-IDS and variance-BLAIDS.
//! - [`harness`]: seeded regret experiments, target comparison, CSV and config I/O.

// Negated comparisons are used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod agents;
pub mod bandit;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod info;
pub mod matrix;
pub mod rd;
pub mod scalar;
pub mod streams;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::Scalar;

pub type Distribution64 = info::Distribution<f64>;
pub type Distribution32 = info::Distribution<f32>;
pub type JointDistribution64 = info::JointDistribution<f64>;
pub type JointDistribution32 = info::JointDistribution<f32>;
pub type DistortionMatrix64 = rd::DistortionMatrix<f64>;
pub type DistortionMatrix32 = rd::DistortionMatrix<f32>;
pub type BaConfig64 = rd::BaConfig<f64>;
pub type BaConfig32 = rd::BaConfig<f32>;
pub type BaSolution64 = rd::BaSolution<f64>;
pub type BaSolution32 = rd::BaSolution<f32>;
