//! Independent Bernoulli and Gaussian bandits with exact conjugate posteriors.

use rand::Rng;
use rand_distr::{Beta, Distribution as _, Normal, StandardNormal};

use crate::error::{Error, Result};
use crate::info::Distribution;
use crate::matrix::Matrix;
use crate::rd::DistortionMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPrior {
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalPrior {
    pub mean: f64,
    pub var: f64,
}

/// Bandit family with one prior per arm.
#[derive(Debug, Clone, PartialEq)]
pub enum BanditSpec {
    Bernoulli { priors: Vec<BetaPrior> },
    /// Rewards are `Normal(mean, noise_var)` with known `noise_var`.
    Gaussian { priors: Vec<NormalPrior>, noise_var: f64 },
}

impl BanditSpec {
    pub fn bernoulli(n_arms: usize, a: f64, b: f64) -> Result<Self> {
        let spec = BanditSpec::Bernoulli { priors: vec![BetaPrior { a, b }; n_arms] };
        spec.validate()?;
        Ok(spec)
    }

    pub fn gaussian(n_arms: usize, prior_mean: f64, prior_var: f64, noise_var: f64) -> Result<Self> {
        let spec = BanditSpec::Gaussian { priors: vec![NormalPrior { mean: prior_mean, var: prior_var }; n_arms], noise_var };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n_arms(&self) -> usize {
        match self {
            BanditSpec::Bernoulli { priors } => priors.len(),
            BanditSpec::Gaussian { priors, .. } => priors.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_arms() == 0 {
            return Err(Error::param("n_arms", "must be >= 1"));
        }
        match self {
            BanditSpec::Bernoulli { priors } => {
                if let Some(p) = priors.iter().find(|p| !(p.a > 0.0 && p.b > 0.0 && p.a.is_finite() && p.b.is_finite())) {
                    return Err(Error::param("prior", format!("Beta parameters must be positive and finite, got ({}, {})", p.a, p.b)));
                }
            }
            BanditSpec::Gaussian { priors, noise_var } => {
                if let Some(p) = priors.iter().find(|p| !(p.var > 0.0 && p.var.is_finite() && p.mean.is_finite())) {
                    return Err(Error::param("prior", format!("Normal prior needs finite mean and positive variance, got ({}, {})", p.mean, p.var)));
                }
                if !(*noise_var > 0.0 && noise_var.is_finite()) {
                    return Err(Error::param("noise_var", format!("must be positive and finite, got {noise_var}")));
                }
            }
        }
        Ok(())
    }
}

/// One draw of every arm's mean reward.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentRealization {
    pub mean_rewards: Vec<f64>,
}

impl EnvironmentRealization {
    pub fn new(mean_rewards: Vec<f64>) -> Self {
        Self { mean_rewards }
    }

    /// Optimal arm, lowest index on ties.
    pub fn best_arm(&self) -> usize {
        argmax(&self.mean_rewards)
    }

    pub fn best_mean(&self) -> f64 {
        self.mean_rewards.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn n_arms(&self) -> usize {
        self.mean_rewards.len()
    }
}

/// First index of the maximum.
pub(crate) fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

fn beta_draw<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> f64 {
    Beta::new(a, b).expect("validated Beta parameters").sample(rng)
}

fn normal_draw<R: Rng + ?Sized>(mean: f64, var: f64, rng: &mut R) -> f64 {
    Normal::new(mean, var.sqrt()).expect("validated Normal parameters").sample(rng)
}

pub fn sample_environment<R: Rng + ?Sized>(spec: &BanditSpec, rng: &mut R) -> Result<EnvironmentRealization> {
    spec.validate()?;
    let means = match spec {
        BanditSpec::Bernoulli { priors } => priors.iter().map(|p| beta_draw(p.a, p.b, rng)).collect(),
        BanditSpec::Gaussian { priors, .. } => priors.iter().map(|p| normal_draw(p.mean, p.var, rng)).collect(),
    };
    Ok(EnvironmentRealization::new(means))
}

/// Draws a reward for `arm`: Bernoulli(mean) or Normal(mean, noise_var).
pub fn sample_reward<R: Rng + ?Sized>(
    env: &EnvironmentRealization,
    arm: usize,
    spec: &BanditSpec,
    rng: &mut R,
) -> Result<f64> {
    let mean = *env
        .mean_rewards
        .get(arm)
        .ok_or_else(|| Error::param("arm", format!("index {arm} out of range for {} arms", env.n_arms())))?;
    match spec {
        BanditSpec::Bernoulli { .. } => {
            let u: f64 = rng.random();
            Ok(if u < mean { 1.0 } else { 0.0 })
        }
        BanditSpec::Gaussian { noise_var, .. } => {
            if !(*noise_var > 0.0) {
                return Err(Error::param("noise_var", "must be positive"));
            }
            let z: f64 = StandardNormal.sample(rng);
            Ok(mean + noise_var.sqrt() * z)
        }
    }
}

/// Per-arm conjugate belief.
///
/// Gaussian arms are stored in natural parameters (precision and
/// precision-weighted mean) so repeated updates accumulate exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum PosteriorState {
    Beta { alpha: Vec<f64>, beta: Vec<f64> },
    Normal { precision: Vec<f64>, weighted_mean: Vec<f64>, noise_var: f64 },
}

impl PosteriorState {
    pub fn prior(spec: &BanditSpec) -> Result<Self> {
        spec.validate()?;
        Ok(match spec {
            BanditSpec::Bernoulli { priors } => PosteriorState::Beta {
                alpha: priors.iter().map(|p| p.a).collect(),
                beta: priors.iter().map(|p| p.b).collect(),
            },
            BanditSpec::Gaussian { priors, noise_var } => PosteriorState::Normal {
                precision: priors.iter().map(|p| 1.0 / p.var).collect(),
                weighted_mean: priors.iter().map(|p| p.mean / p.var).collect(),
                noise_var: *noise_var,
            },
        })
    }

    pub fn n_arms(&self) -> usize {
        match self {
            PosteriorState::Beta { alpha, .. } => alpha.len(),
            PosteriorState::Normal { precision, .. } => precision.len(),
        }
    }

    /// Posterior mean of each arm's mean reward.
    pub fn means(&self) -> Vec<f64> {
        match self {
            PosteriorState::Beta { alpha, beta } => alpha.iter().zip(beta).map(|(a, b)| a / (a + b)).collect(),
            PosteriorState::Normal { precision, weighted_mean, .. } => {
                weighted_mean.iter().zip(precision).map(|(m, p)| m / p).collect()
            }
        }
    }

    /// Posterior variance of each arm's mean reward.
    pub fn variances(&self) -> Vec<f64> {
        match self {
            PosteriorState::Beta { alpha, beta } => alpha
                .iter()
                .zip(beta)
                .map(|(a, b)| a * b / ((a + b) * (a + b) * (a + b + 1.0)))
                .collect(),
            PosteriorState::Normal { precision, .. } => precision.iter().map(|p| 1.0 / p).collect(),
        }
    }

    /// Conditions on one `(arm, reward)` observation in place.
    pub fn observe(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.n_arms() {
            return Err(Error::param("arm", format!("index {arm} out of range for {} arms", self.n_arms())));
        }
        match self {
            PosteriorState::Beta { alpha, beta } => {
                if reward != 0.0 && reward != 1.0 {
                    return Err(Error::param("reward", format!("Bernoulli reward must be 0 or 1, got {reward}")));
                }
                alpha[arm] += reward;
                beta[arm] += 1.0 - reward;
            }
            PosteriorState::Normal { precision, weighted_mean, noise_var } => {
                if !reward.is_finite() {
                    return Err(Error::param("reward", format!("Gaussian reward must be finite, got {reward}")));
                }
                let noise_precision = 1.0 / *noise_var;
                precision[arm] += noise_precision;
                weighted_mean[arm] += noise_precision * reward;
            }
        }
        Ok(())
    }
}

/// Returns the posterior after observing `reward` from `arm`.
pub fn update_posterior(state: &PosteriorState, arm: usize, reward: f64, spec: &BanditSpec) -> Result<PosteriorState> {
    let compatible = matches!(
        (state, spec),
        (PosteriorState::Beta { .. }, BanditSpec::Bernoulli { .. }) | (PosteriorState::Normal { .. }, BanditSpec::Gaussian { .. })
    );
    if !compatible || state.n_arms() != spec.n_arms() {
        return Err(Error::param("state", "posterior family or arm count does not match the bandit spec"));
    }
    let mut next = state.clone();
    next.observe(arm, reward)?;
    Ok(next)
}

/// Draws one joint realization of all arm means from the posterior.
pub fn sample_posterior<R: Rng + ?Sized>(state: &PosteriorState, rng: &mut R) -> EnvironmentRealization {
    let means = match state {
        PosteriorState::Beta { alpha, beta } => alpha.iter().zip(beta).map(|(&a, &b)| beta_draw(a, b, rng)).collect(),
        PosteriorState::Normal { precision, weighted_mean, .. } => weighted_mean
            .iter()
            .zip(precision)
            .map(|(&m, &p)| normal_draw(m / p, 1.0 / p, rng))
            .collect(),
    };
    EnvironmentRealization::new(means)
}

/// `z` i.i.d. posterior draws; together they form the plug-in source.
pub fn sample_posterior_means<R: Rng + ?Sized>(
    state: &PosteriorState,
    z: usize,
    rng: &mut R,
) -> Result<Vec<EnvironmentRealization>> {
    if z == 0 {
        return Err(Error::param("z", "must be >= 1"));
    }
    Ok((0..z).map(|_| sample_posterior(state, rng)).collect())
}

/// Uniform source over `z` samples, labeled to match [`squared_regret_distortion`] rows.
pub fn empirical_source(z: usize) -> Result<Distribution<f64>> {
    Distribution::uniform(z)
}

/// `d(e, ã) = (max_a mean_e(a) − mean_e(ã))²` for each sample `e` and action `ã`.
pub fn squared_regret_distortion(samples: &[EnvironmentRealization], actions: &[usize]) -> Result<DistortionMatrix<f64>> {
    if samples.is_empty() {
        return Err(Error::Empty("posterior samples"));
    }
    if actions.is_empty() {
        return Err(Error::Empty("actions"));
    }
    let mut d = Matrix::filled(samples.len(), actions.len(), 0.0);
    for (i, s) in samples.iter().enumerate() {
        let best = s.best_mean();
        for (j, &a) in actions.iter().enumerate() {
            let mean = *s
                .mean_rewards
                .get(a)
                .ok_or_else(|| Error::param("actions", format!("arm {a} out of range for sample {i}")))?;
            let gap = best - mean;
            d.set(i, j, gap * gap);
        }
    }
    let rows = (0..samples.len()).map(|i| i.to_string()).collect();
    let cols = actions.iter().map(|a| a.to_string()).collect();
    DistortionMatrix::new(rows, cols, d)
}
