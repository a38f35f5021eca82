//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # 10-arm Bernoulli, desk scale
//! kind     = bernoulli
//! arms     = 10
//! horizon  = 2000
//! trials   = 20
//! seed     = 7
//! agents   = ts, vids, blasts:100, vblaids:100, vblaids:adaptive
//! ```
//!
//! Required keys: `kind`, `arms`, `horizon`, `trials`, `agents`.
//! Optional keys and defaults:
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `seed` | 0 | master seed |
//! | `prior_a`, `prior_b` | 1, 1 | Beta prior (Bernoulli); one value or one per arm |
//! | `prior_mean`, `prior_var` | 0, 1 | Normal prior (Gaussian); one value or one per arm |
//! | `noise_var` | 0.1 | Gaussian reward noise variance |
//! | `z` | 16 | posterior samples per period |
//! | `beta_max` | 1e6 | cap on the adaptive multiplier |
//! | `ba_max_iters` | 10000 | Blahut-Arimoto iteration budget |
//! | `ba_tol` | 1e-9 | Blahut-Arimoto stopping tolerance (bits) |
//! | `output` | none | CSV path for `run` |

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::agents::{AgentConfig, AgentKind, BetaChoice};
use crate::bandit::{BanditSpec, BetaPrior, NormalPrior};
use crate::error::{Error, Result};
use crate::rd::BaConfig;

const KNOWN_KEYS: &[&str] = &[
    "kind", "arms", "horizon", "trials", "agents", "seed", "prior_a", "prior_b", "prior_mean", "prior_var", "noise_var",
    "z", "beta_max", "ba_max_iters", "ba_tol", "output",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub spec: BanditSpec,
    pub horizon: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub agents: Vec<AgentKind>,
    /// Parameters shared by all agents (`z`, Blahut-Arimoto budget, adaptive cap).
    pub agent: AgentConfig,
    pub output_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be >= 1".into()));
        }
        if self.agents.is_empty() {
            return Err(Error::Config("at least one agent is required".into()));
        }
        let needs_two = self.agents.iter().any(|a| matches!(a, AgentKind::Vids | AgentKind::Vblaids { .. }));
        if needs_two && self.agent.z < 2 {
            return Err(Error::Config(format!("variance agents need z >= 2, got {}", self.agent.z)));
        }
        if self.agent.z == 0 {
            return Err(Error::Config("z must be >= 1".into()));
        }
        self.agent.ba.validate()
    }
}

struct Entries<'a> {
    map: HashMap<&'a str, (usize, &'a str)>,
}

impl<'a> Entries<'a> {
    fn parse(text: &'a str) -> Result<Self> {
        let mut map = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::ConfigSyntax { line, msg: format!("expected `key = value`, got `{content}`") })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Error::ConfigSyntax { line, msg: format!("unknown key `{key}`") });
            }
            if map.insert(key, (line, value.trim())).is_some() {
                return Err(Error::ConfigSyntax { line, msg: format!("duplicate key `{key}`") });
            }
        }
        Ok(Self { map })
    }

    fn required(&self, key: &'static str) -> Result<(usize, &'a str)> {
        self.map.get(key).copied().ok_or(Error::MissingKey(key))
    }

    fn value<T: FromStr>(&self, key: &'static str, default: Option<T>) -> Result<T> {
        match self.map.get(key) {
            Some(&(line, v)) => v.parse().map_err(|_| Error::ConfigSyntax { line, msg: format!("invalid value `{v}` for `{key}`") }),
            None => default.ok_or(Error::MissingKey(key)),
        }
    }

    /// One value broadcast to every arm, or exactly one per arm.
    fn per_arm(&self, key: &'static str, default: f64, n: usize) -> Result<Vec<f64>> {
        let Some(&(line, v)) = self.map.get(key) else {
            return Ok(vec![default; n]);
        };
        let parsed: Vec<f64> = v
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::ConfigSyntax { line, msg: format!("invalid number list `{v}` for `{key}`") })?;
        match parsed.len() {
            1 => Ok(vec![parsed[0]; n]),
            k if k == n => Ok(parsed),
            k => Err(Error::ConfigSyntax { line, msg: format!("`{key}` has {k} values for {n} arms") }),
        }
    }
}

/// Parses configuration text; `base_dir` resolves a relative `output` path.
pub fn parse_config(text: &str, base_dir: Option<&Path>) -> Result<ExperimentConfig> {
    let e = Entries::parse(text)?;

    let (kind_line, kind) = e.required("kind")?;
    let arms: usize = e.value("arms", None)?;
    let horizon: usize = e.value("horizon", None)?;
    let trials: usize = e.value("trials", None)?;
    let (agents_line, agents_text) = e.required("agents")?;
    let master_seed: u64 = e.value("seed", Some(0))?;

    let spec = match kind.to_ascii_lowercase().as_str() {
        "bernoulli" => {
            let a = e.per_arm("prior_a", 1.0, arms)?;
            let b = e.per_arm("prior_b", 1.0, arms)?;
            BanditSpec::Bernoulli { priors: a.into_iter().zip(b).map(|(a, b)| BetaPrior { a, b }).collect() }
        }
        "gaussian" => {
            let mean = e.per_arm("prior_mean", 0.0, arms)?;
            let var = e.per_arm("prior_var", 1.0, arms)?;
            let noise_var: f64 = e.value("noise_var", Some(0.1))?;
            BanditSpec::Gaussian { priors: mean.into_iter().zip(var).map(|(mean, var)| NormalPrior { mean, var }).collect(), noise_var }
        }
        other => {
            return Err(Error::ConfigSyntax { line: kind_line, msg: format!("kind must be bernoulli or gaussian, got `{other}`") })
        }
    };

    let agents = agents_text
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse::<AgentKind>)
        .collect::<Result<Vec<_>>>()
        .map_err(|err| match err {
            Error::UnknownAgent(name) => Error::ConfigSyntax { line: agents_line, msg: Error::UnknownAgent(name).to_string() },
            other => other,
        })?;

    let agent = AgentConfig {
        z: e.value("z", Some(16))?,
        beta: BetaChoice::Adaptive,
        ba: BaConfig { max_iters: e.value("ba_max_iters", Some(10_000))?, tol: e.value("ba_tol", Some(1e-9))?, init_marginal: None },
        epsilon: 0.0,
        beta_max: e.value("beta_max", Some(1e6))?,
    };

    let output_path = e.map.get("output").map(|&(_, v)| {
        let p = PathBuf::from(v);
        match base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p,
        }
    });

    let cfg = ExperimentConfig { spec, horizon, trials, master_seed, agents, agent, output_path };
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|err| Error::io(path, err))?;
    parse_config(&text, path.parent())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "kind = bernoulli\narms = 3\nhorizon = 50\ntrials = 2\nagents = ts, vids\n";

    #[test]
    fn parses_minimal_config() {
        let cfg = parse_config(BASE, None).unwrap();
        assert_eq!(cfg.spec.n_arms(), 3);
        assert_eq!(cfg.horizon, 50);
        assert_eq!(cfg.master_seed, 0);
        assert_eq!(cfg.agents, vec![AgentKind::Ts, AgentKind::Vids]);
        assert_eq!(cfg.agent.z, 16);
        assert_eq!(cfg.agent.ba.max_iters, 10_000);
    }

    #[test]
    fn missing_horizon_names_key() {
        let text = BASE.replace("horizon = 50\n", "");
        let err = parse_config(&text, None).unwrap_err();
        assert!(matches!(err, Error::MissingKey("horizon")));
        assert!(err.to_string().contains("horizon"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = format!("{BASE}z = many\n");
        match parse_config(&text, None).unwrap_err() {
            Error::ConfigSyntax { line, .. } => assert_eq!(line, 6),
            e => panic!("unexpected {e}"),
        }
        let text = BASE.replace("ts, vids", "ts, ucb");
        match parse_config(&text, None).unwrap_err() {
            Error::ConfigSyntax { line, msg } => {
                assert_eq!(line, 5);
                assert!(msg.contains("ucb"));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(parse_config("kind bernoulli", None), Err(Error::ConfigSyntax { line: 1, .. })));
        assert!(matches!(parse_config(&format!("{BASE}colour = red"), None), Err(Error::ConfigSyntax { line: 6, .. })));
        assert!(matches!(parse_config(&format!("{BASE}arms = 4"), None), Err(Error::ConfigSyntax { line: 6, .. })));
    }

    #[test]
    fn per_arm_priors_and_gaussian() {
        let text = BASE.to_string() + "prior_a = 1e9, 1, 2\nprior_b = 1\n";
        let cfg = parse_config(&text, None).unwrap();
        match cfg.spec {
            BanditSpec::Bernoulli { priors } => {
                assert_eq!(priors[0], BetaPrior { a: 1e9, b: 1.0 });
                assert_eq!(priors[2], BetaPrior { a: 2.0, b: 1.0 });
            }
            _ => panic!(),
        }
        let bad = BASE.to_string() + "prior_a = 1, 2\n";
        assert!(parse_config(&bad, None).is_err());

        let g = BASE.replace("bernoulli", "gaussian") + "noise_var = 0.1\nprior_var = 1.0\n";
        let cfg = parse_config(&g, None).unwrap();
        assert!(matches!(cfg.spec, BanditSpec::Gaussian { noise_var, .. } if noise_var == 0.1));
    }

    #[test]
    fn relative_output_resolves_against_config_dir() {
        let text = format!("{BASE}output = out/run.csv\n");
        let cfg = parse_config(&text, Some(Path::new("/tmp/exp"))).unwrap();
        assert_eq!(cfg.output_path.unwrap(), PathBuf::from("/tmp/exp/out/run.csv"));
    }
}
