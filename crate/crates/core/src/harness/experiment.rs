use rayon::prelude::*;

use crate::agents::AgentKind;
use crate::bandit::{sample_environment, sample_reward, EnvironmentRealization, PosteriorState};
use crate::error::Result;
use crate::harness::config::ExperimentConfig;
use crate::harness::records::TrialRecord;
use crate::streams::{stream, Purpose, StreamRng};

/// Runs every configured agent over `cfg.trials` independent trials.
///
/// Within a trial all agents face the same true environment, and the `k`-th
/// pull of arm `a` returns the same reward noise for every agent. Trials run
/// in parallel; records come back ordered by (agent, trial, period).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let per_trial: Vec<Vec<Vec<TrialRecord>>> = (0..cfg.trials as u32)
        .into_par_iter()
        .map(|trial| run_trial(cfg, trial))
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(cfg.trials * cfg.horizon * cfg.agents.len());
    for agent in 0..cfg.agents.len() {
        for trial in &per_trial {
            records.extend_from_slice(&trial[agent]);
        }
    }
    Ok(records)
}

/// One trial: returns one record stream per agent, in config order.
pub fn run_trial(cfg: &ExperimentConfig, trial: u32) -> Result<Vec<Vec<TrialRecord>>> {
    let env = sample_environment(&cfg.spec, &mut stream(cfg.master_seed, trial, Purpose::Environment))?;
    cfg.agents
        .iter()
        .enumerate()
        .map(|(index, agent)| run_agent(cfg, trial, index as u32, agent, &env))
        .collect()
}

fn run_agent(
    cfg: &ExperimentConfig,
    trial: u32,
    index: u32,
    agent: &AgentKind,
    env: &EnvironmentRealization,
) -> Result<Vec<TrialRecord>> {
    let mut posterior = PosteriorState::prior(&cfg.spec)?;
    let mut agent_rng = stream(cfg.master_seed, trial, Purpose::Agent { index });
    let mut reward_rngs: Vec<StreamRng> =
        (0..env.n_arms() as u32).map(|arm| stream(cfg.master_seed, trial, Purpose::Reward { arm })).collect();
    let best = env.best_mean();
    let (name, param) = (agent.name().to_string(), agent.param());

    let mut out = Vec::with_capacity(cfg.horizon);
    let mut cum = 0.0;
    for period in 1..=cfg.horizon as u32 {
        let arm = agent.act(&posterior, &cfg.agent, &mut agent_rng)?;
        let reward = sample_reward(env, arm, &cfg.spec, &mut reward_rngs[arm])?;
        posterior.observe(arm, reward)?;
        let regret = best - env.mean_rewards[arm];
        cum += regret;
        out.push(TrialRecord { agent: name.clone(), param: param.clone(), trial, period, regret, cum_regret: cum });
    }
    Ok(out)
}
