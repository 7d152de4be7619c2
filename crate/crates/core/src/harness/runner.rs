use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ExperimentConfig, HarnessError, RunLabel, Summary};
use crate::agents::{Agent, AgentError, DqnAgent, TabularAgent};
use crate::envs::TabularMdp;
use crate::harness::AgentKind;
use crate::replay::{AnyReplayMemory, ReplayMemory, ReplayStats, Transition};

/// Independent RNG streams derived from one trial seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    EnvDynamics = 0,
    AgentInit = 1,
    Exploration = 2,
    ReplaySampling = 3,
    Evaluation = 4,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub env_step: usize,
    pub eval_return: f64,
}

/// Learning curve of one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub label: RunLabel,
    pub seed: u64,
    pub points: Vec<CurvePoint>,
}

/// All trials of one configuration plus their aggregate.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub trials: Vec<TrialResult>,
    /// Replay statistics at the end of each trial, in seed order.
    pub replay_stats: Vec<(u64, ReplayStats)>,
    pub summary: Summary,
}

enum AnyAgent {
    Tabular(TabularAgent),
    Dqn(Box<DqnAgent>),
}

impl Agent for AnyAgent {
    fn q_values(&self, state: usize) -> Vec<f64> {
        match self {
            AnyAgent::Tabular(a) => a.q_values(state),
            AnyAgent::Dqn(a) => a.q_values(state),
        }
    }

    fn train_step<M, R>(&mut self, memory: &M, rng: &mut R) -> Result<Option<f64>, AgentError>
    where
        M: ReplayMemory,
        R: Rng + ?Sized,
    {
        match self {
            AnyAgent::Tabular(a) => a.train_step(memory, rng),
            AnyAgent::Dqn(a) => a.train_step(memory, rng),
        }
    }
}

/// Mean undiscounted return of `episodes` episodes where `policy` picks each
/// action.
fn mean_return<R, P>(env: &TabularMdp, episodes: usize, rng: &mut R, mut policy: P) -> Result<f64, HarnessError>
where
    R: Rng + ?Sized,
    P: FnMut(usize, &mut R) -> usize,
{
    let mut total = 0.0;
    for _ in 0..episodes {
        let mut ep = env.reset(rng);
        while !ep.is_finished() {
            let a = policy(ep.state(), rng);
            total += env.step(&mut ep, a, rng)?.reward;
        }
    }
    Ok(total / episodes as f64)
}

fn evaluate_greedy<A: Agent, R: Rng + ?Sized>(
    env: &TabularMdp,
    agent: &A,
    episodes: usize,
    rng: &mut R,
) -> Result<f64, HarnessError> {
    // The policy is frozen during evaluation, so tabulate it once.
    let greedy: Vec<usize> = (0..env.num_states()).map(|s| agent.greedy_action(s)).collect();
    mean_return(env, episodes, rng, |s, _| greedy[s])
}

/// Mean return of the uniform-random-action policy under the evaluation
/// protocol; the "random" reference of [`super::relative_score`].
pub fn random_policy_return(env: &TabularMdp, episodes: usize, seed: u64) -> Result<f64, HarnessError> {
    if episodes == 0 {
        return Err(HarnessError::Config("episodes must be positive".into()));
    }
    let mut rng = stream_rng(seed, Stream::Evaluation);
    let n = env.num_actions();
    mean_return(env, episodes, &mut rng, |_, r| r.gen_range(0..n))
}

/// One seeded trial returning its curve and the final replay statistics.
pub fn run_trial_with_stats(
    config: &ExperimentConfig,
    seed: u64,
) -> Result<(TrialResult, ReplayStats), HarnessError> {
    config.validate()?;
    let env = config.build_env()?;
    let mut env_rng = stream_rng(seed, Stream::EnvDynamics);
    let mut init_rng = stream_rng(seed, Stream::AgentInit);
    let mut explore_rng = stream_rng(seed, Stream::Exploration);
    let mut replay_rng = stream_rng(seed, Stream::ReplaySampling);
    let mut eval_rng = stream_rng(seed, Stream::Evaluation);

    let mut memory = AnyReplayMemory::new(config.sampler, config.effective_capacity())?;
    let mut agent = match config.agent {
        AgentKind::Tabular => AnyAgent::Tabular(TabularAgent::new(
            env.num_states(),
            env.num_actions(),
            config.tabular(),
        )?),
        AgentKind::Dqn => AnyAgent::Dqn(Box::new(DqnAgent::new(
            env.num_states(),
            env.num_actions(),
            config.dqn.clone(),
            &mut init_rng,
        )?)),
    };
    let schedule = config.epsilon_schedule()?;

    let mut points = Vec::with_capacity(config.total_env_steps / config.eval_every + 1);
    points.push(CurvePoint {
        env_step: 0,
        eval_return: evaluate_greedy(&env, &agent, config.eval_episodes, &mut eval_rng)?,
    });
    let mut episode = env.reset(&mut env_rng);
    for step in 1..=config.total_env_steps {
        let s = episode.state();
        let a = agent.act(s, schedule.value(step - 1), &mut explore_rng)?;
        let out = env.step(&mut episode, a, &mut env_rng)?;
        memory.insert(Transition::new(
            s as u32,
            a as u32,
            out.reward,
            out.next_state as u32,
            out.terminal,
        ));
        agent.train_step(&memory, &mut replay_rng)?;
        if episode.is_finished() {
            episode = env.reset(&mut env_rng);
        }
        if step % config.eval_every == 0 {
            points.push(CurvePoint {
                env_step: step,
                eval_return: evaluate_greedy(&env, &agent, config.eval_episodes, &mut eval_rng)?,
            });
        }
    }
    let result = TrialResult {
        label: RunLabel::of(config),
        seed,
        points,
    };
    Ok((result, memory.stats()))
}

/// Fully deterministic given `(config, seed)`.
pub fn run_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialResult, HarnessError> {
    run_trial_with_stats(config, seed).map(|(r, _)| r)
}

/// Runs seeds `0..num_seeds`, in parallel on `jobs` threads when given.
/// Output is identical to serial execution.
pub fn run_experiment(config: &ExperimentConfig, jobs: Option<usize>) -> Result<ExperimentResult, HarnessError> {
    config.validate()?;
    let run = || -> Result<Vec<(TrialResult, ReplayStats)>, HarnessError> {
        (0..config.num_seeds as u64)
            .into_par_iter()
            .map(|seed| {
                run_trial_with_stats(config, seed).map_err(|e| HarnessError::Trial {
                    seed,
                    source: Box::new(e),
                })
            })
            .collect()
    };
    let outputs = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let replay_stats = outputs.iter().map(|(t, s)| (t.seed, *s)).collect();
    let trials: Vec<TrialResult> = outputs.into_iter().map(|(t, _)| t).collect();
    let summary = Summary::from_trials(&trials)?;
    Ok(ExperimentResult {
        trials,
        replay_stats,
        summary,
    })
}
