//! Action-selection rules over a conjugate posterior.
//!
//! Every agent is a pure function of `(posterior, config, rng)`:
//!
//! - `ts`: Thompson sampling.
//! - `sts:<eps>`: satisficing TS, first arm within `eps` of the sampled optimum.
//! - `blasts:<beta>`: probability matching against a Blahut-Arimoto target.
//! - `vids`: variance-IDS with the optimal action as target.
//! - `vblaids:<beta|adaptive>`: variance-IDS against a Blahut-Arimoto target.

pub mod ids;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::bandit::{argmax, sample_posterior, sample_posterior_means, squared_regret_distortion, EnvironmentRealization, PosteriorState};
use crate::error::{Error, Result};
use crate::rd::{blahut_arimoto, BaConfig, BaSolution};

pub use ids::{
    expected_regret_vector, minimize_information_ratio, optimal_action_solution, raw_shortfall, variance_info_gain,
    ActionDistribution, IdsSolution,
};

/// Information gains below this are treated as exactly zero.
///
/// A multiplier of zero makes every channel row equal the marginal; after the
/// log-domain normalization the rows agree only to rounding, leaving `v` of
/// order 1e-32 instead of 0.
pub const INFO_GAIN_FLOOR: f64 = 1e-20;

/// Ratios at or below this count as zero when choosing an adaptive multiplier.
pub const RATIO_FLOOR: f64 = 1e-12;

impl AsRef<[f64]> for EnvironmentRealization {
    fn as_ref(&self) -> &[f64] {
        &self.mean_rewards
    }
}

/// Multiplier used by a Blahut-Arimoto agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaChoice {
    Fixed(f64),
    /// Reciprocal of the minimized optimal-action information ratio, recomputed each period.
    Adaptive,
}

/// Shared agent parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    /// Posterior samples per period.
    pub z: usize,
    pub beta: BetaChoice,
    pub ba: BaConfig<f64>,
    /// STS tolerance.
    pub epsilon: f64,
    /// Cap on the adaptive multiplier.
    pub beta_max: f64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self { z: 16, beta: BetaChoice::Adaptive, ba: BaConfig::default(), epsilon: 0.0, beta_max: 1e6 }
    }
}

impl AgentConfig {
    fn check(&self, min_z: usize) -> Result<()> {
        if self.z < min_z {
            return Err(Error::param("z", format!("must be >= {min_z}, got {}", self.z)));
        }
        if let BetaChoice::Fixed(b) = self.beta {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(Error::param("beta", format!("must be finite and >= 0, got {b}")));
            }
        }
        if !(self.beta_max > 0.0) {
            return Err(Error::param("beta_max", "must be > 0"));
        }
        self.ba.validate()
    }
}

pub fn thompson_action<R: Rng + ?Sized>(state: &PosteriorState, rng: &mut R) -> usize {
    sample_posterior(state, rng).best_arm()
}

/// First arm whose sampled mean is within `epsilon` of the sampled maximum.
pub fn sts_action<R: Rng + ?Sized>(state: &PosteriorState, epsilon: f64, rng: &mut R) -> Result<usize> {
    if !(epsilon >= 0.0) {
        return Err(Error::param("epsilon", format!("must be >= 0, got {epsilon}")));
    }
    Ok(satisficing_arm(&sample_posterior(state, rng), epsilon))
}

pub(crate) fn satisficing_arm(env: &EnvironmentRealization, epsilon: f64) -> usize {
    let threshold = env.best_mean() - epsilon;
    env.mean_rewards.iter().position(|&m| m >= threshold).unwrap_or(0)
}

/// Blahut-Arimoto target over the plug-in source of `samples`.
pub fn target_channel(samples: &[EnvironmentRealization], beta: f64, ba: &BaConfig<f64>) -> Result<BaSolution<f64>> {
    let n_arms = samples.first().map_or(0, EnvironmentRealization::n_arms);
    let actions: Vec<usize> = (0..n_arms).collect();
    let d = squared_regret_distortion(samples, &actions)?;
    let source = crate::bandit::empirical_source(samples.len())?;
    blahut_arimoto(&source, &d, beta, ba)
}

/// Draws `z` samples, solves for the target at the fixed multiplier, picks a
/// sample uniformly and plays a target action drawn from its channel row.
pub fn blasts_action<R: Rng + ?Sized>(state: &PosteriorState, cfg: &AgentConfig, rng: &mut R) -> Result<usize> {
    cfg.check(1)?;
    let samples = sample_posterior_means(state, cfg.z, rng)?;
    let beta = match cfg.beta {
        BetaChoice::Fixed(b) => b,
        BetaChoice::Adaptive => adaptive_beta(&samples, cfg.beta_max)?,
    };
    sample_target_action(&target_channel(&samples, beta, &cfg.ba)?, rng)
}

/// Picks a sample uniformly, then an action from that sample's channel row.
/// Over many calls the action frequencies match the target marginal.
pub fn sample_target_action<R: Rng + ?Sized>(sol: &BaSolution<f64>, rng: &mut R) -> Result<usize> {
    let i = rng.random_range(0..sol.channel.rows());
    Ok(ActionDistribution::new(sol.channel.row(i).to_vec())?.sample(rng))
}

fn ratio_policy(samples: &[EnvironmentRealization], sol: &BaSolution<f64>) -> Result<IdsSolution<f64>> {
    let raw = raw_shortfall(samples, sol)?;
    let delta: Vec<f64> = raw.iter().map(|x| x.max(0.0)).collect();
    let v: Vec<f64> = variance_info_gain(samples, sol)?
        .into_iter()
        .map(|x| if x < INFO_GAIN_FLOOR { 0.0 } else { x })
        .collect();
    if v.iter().all(|&x| x == 0.0) {
        // Nothing to learn this period: act greedily on the unclamped shortfall.
        let greedy = argmax(&raw.iter().map(|x| -x).collect::<Vec<_>>());
        return Ok(IdsSolution { distribution: ActionDistribution::point_mass(raw.len(), greedy), ratio: 0.0 });
    }
    minimize_information_ratio(&delta, &v)
}

/// Variance-IDS policy with the optimal action as target.
pub fn vids_distribution(samples: &[EnvironmentRealization]) -> Result<IdsSolution<f64>> {
    ratio_policy(samples, &optimal_action_solution(samples)?)
}

/// Variance-BLAIDS policy at multiplier `beta`.
pub fn vblaids_distribution(samples: &[EnvironmentRealization], beta: f64, ba: &BaConfig<f64>) -> Result<IdsSolution<f64>> {
    ratio_policy(samples, &target_channel(samples, beta, ba)?)
}

pub fn vids_action<R: Rng + ?Sized>(state: &PosteriorState, cfg: &AgentConfig, rng: &mut R) -> Result<usize> {
    cfg.check(2)?;
    let samples = sample_posterior_means(state, cfg.z, rng)?;
    Ok(vids_distribution(&samples)?.distribution.sample(rng))
}

pub fn vblaids_action<R: Rng + ?Sized>(state: &PosteriorState, cfg: &AgentConfig, rng: &mut R) -> Result<usize> {
    cfg.check(2)?;
    let samples = sample_posterior_means(state, cfg.z, rng)?;
    let beta = match cfg.beta {
        BetaChoice::Fixed(b) => b,
        BetaChoice::Adaptive => adaptive_beta(&samples, cfg.beta_max)?,
    };
    Ok(vblaids_distribution(&samples, beta, &cfg.ba)?.distribution.sample(rng))
}

/// `1 / ratio`, capped at `beta_max` (and equal to it for ratios at or below [`RATIO_FLOOR`]).
pub fn beta_from_ratio(ratio: f64, beta_max: f64) -> f64 {
    if ratio <= RATIO_FLOOR {
        beta_max
    } else {
        (1.0 / ratio).min(beta_max)
    }
}

/// Multiplier set to the reciprocal of the minimized variance-IDS ratio for the optimal action.
pub fn adaptive_beta(samples: &[EnvironmentRealization], beta_max: f64) -> Result<f64> {
    Ok(beta_from_ratio(vids_distribution(samples)?.ratio, beta_max))
}

/// Agent vocabulary used in configs and on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AgentKind {
    Ts,
    Sts { epsilon: f64 },
    Blasts { beta: f64 },
    Vids,
    Vblaids { beta: BetaChoice },
}

impl AgentKind {
    pub fn name(&self) -> &'static str {
        match self {
            AgentKind::Ts => "ts",
            AgentKind::Sts { .. } => "sts",
            AgentKind::Blasts { .. } => "blasts",
            AgentKind::Vids => "vids",
            AgentKind::Vblaids { .. } => "vblaids",
        }
    }

    /// Parameter tag written next to the name in records (empty when none).
    pub fn param(&self) -> String {
        match self {
            AgentKind::Ts | AgentKind::Vids => String::new(),
            AgentKind::Sts { epsilon } => epsilon.to_string(),
            AgentKind::Blasts { beta } => beta.to_string(),
            AgentKind::Vblaids { beta: BetaChoice::Fixed(b) } => b.to_string(),
            AgentKind::Vblaids { beta: BetaChoice::Adaptive } => "adaptive".to_string(),
        }
    }

    pub fn act<R: Rng + ?Sized>(&self, state: &PosteriorState, base: &AgentConfig, rng: &mut R) -> Result<usize> {
        match *self {
            AgentKind::Ts => Ok(thompson_action(state, rng)),
            AgentKind::Sts { epsilon } => sts_action(state, epsilon, rng),
            AgentKind::Blasts { beta } => blasts_action(state, &AgentConfig { beta: BetaChoice::Fixed(beta), ..base.clone() }, rng),
            AgentKind::Vids => vids_action(state, base, rng),
            AgentKind::Vblaids { beta } => vblaids_action(state, &AgentConfig { beta, ..base.clone() }, rng),
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.param();
        if p.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}:{}", self.name(), p)
        }
    }
}

fn parse_nonneg(s: &str, whole: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(x) if x >= 0.0 && x.is_finite() => Ok(x),
        _ => Err(Error::UnknownAgent(whole.to_string())),
    }
}

impl FromStr for AgentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s, None),
        };
        match (name, arg) {
            ("ts", None) => Ok(AgentKind::Ts),
            ("vids", None) => Ok(AgentKind::Vids),
            ("sts", Some(a)) => Ok(AgentKind::Sts { epsilon: parse_nonneg(a, s)? }),
            ("blasts", Some(a)) => Ok(AgentKind::Blasts { beta: parse_nonneg(a, s)? }),
            ("vblaids", Some("adaptive")) => Ok(AgentKind::Vblaids { beta: BetaChoice::Adaptive }),
            ("vblaids", Some(a)) => Ok(AgentKind::Vblaids { beta: BetaChoice::Fixed(parse_nonneg(a, s)?) }),
            _ => Err(Error::UnknownAgent(s.to_string())),
        }
    }
}
