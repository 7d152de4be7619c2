use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::HarnessError;
use crate::agents::{DqnConfig, EpsilonSchedule, TabularConfig};
use crate::envs::{make_frozenlake, make_random_mdp, make_taxi, TabularMdp};
use crate::replay::SamplerKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnvName {
    Taxi,
    FrozenLake,
    Random,
}

impl EnvName {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnvName::Taxi => "taxi",
            EnvName::FrozenLake => "frozenlake",
            EnvName::Random => "random",
        }
    }
}

impl fmt::Display for EnvName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EnvName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "taxi" => Ok(EnvName::Taxi),
            "frozenlake" => Ok(EnvName::FrozenLake),
            "random" => Ok(EnvName::Random),
            other => Err(format!("unknown env `{other}` (expected taxi|frozenlake|random)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AgentKind {
    Tabular,
    Dqn,
}

impl AgentKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AgentKind::Tabular => "tabular",
            AgentKind::Dqn => "dqn",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tabular" => Ok(AgentKind::Tabular),
            "dqn" => Ok(AgentKind::Dqn),
            other => Err(format!("unknown agent `{other}` (expected tabular|dqn)")),
        }
    }
}

/// Shape of the seeded random MDP used by `env = random`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomMdpSpec {
    pub num_states: usize,
    pub num_actions: usize,
    pub branching: usize,
    pub seed: u64,
}

impl Default for RandomMdpSpec {
    fn default() -> Self {
        Self {
            num_states: 5,
            num_actions: 2,
            branching: 2,
            seed: 0,
        }
    }
}

/// Everything that determines a run. Together with a seed it fixes every
/// output byte.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub env: EnvName,
    pub random_mdp: RandomMdpSpec,
    pub sampler: SamplerKind,
    pub agent: AgentKind,
    pub num_seeds: usize,
    pub total_env_steps: usize,
    pub eval_every: usize,
    pub eval_episodes: usize,
    /// Replay capacity; `None` means `total_env_steps` (never evicts).
    pub capacity: Option<usize>,
    pub dqn: DqnConfig,
    pub tabular_alpha: f64,
    pub eps_start: f64,
    pub eps_end: f64,
    /// Fraction of `total_env_steps` over which ε decays linearly.
    pub eps_decay_fraction: f64,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            env: EnvName::FrozenLake,
            random_mdp: RandomMdpSpec::default(),
            sampler: SamplerKind::Stratified,
            agent: AgentKind::Dqn,
            num_seeds: 1,
            total_env_steps: 20_000,
            eval_every: 1_000,
            eval_episodes: 20,
            capacity: None,
            dqn: DqnConfig::default(),
            tabular_alpha: 0.1,
            eps_start: 1.0,
            eps_end: 0.05,
            eps_decay_fraction: 0.1,
            out_dir: PathBuf::from("runs/latest"),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value
        .trim()
        .parse()
        .map_err(|_| HarnessError::Config(format!("bad value `{value}` for `{key}`")))
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let positive = [
            ("seeds", self.num_seeds),
            ("eval_every", self.eval_every),
            ("eval_episodes", self.eval_episodes),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(HarnessError::Config(format!("`{name}` must be positive")));
            }
        }
        if self.total_env_steps > 0 && self.eval_every > self.total_env_steps {
            return Err(HarnessError::Config(format!(
                "eval_every {} exceeds steps {}",
                self.eval_every, self.total_env_steps
            )));
        }
        if self.capacity == Some(0) {
            return Err(HarnessError::Config("capacity must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.eps_decay_fraction) {
            return Err(HarnessError::Config("eps_decay_fraction must lie in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.tabular_alpha) {
            return Err(HarnessError::Config("tabular_alpha must lie in [0, 1]".into()));
        }
        self.epsilon_schedule()?;
        self.dqn.validate()?;
        Ok(())
    }

    pub fn effective_capacity(&self) -> usize {
        self.capacity.unwrap_or(self.total_env_steps).max(1)
    }

    pub fn epsilon_schedule(&self) -> Result<EpsilonSchedule, HarnessError> {
        let decay = (self.total_env_steps as f64 * self.eps_decay_fraction).round() as usize;
        Ok(EpsilonSchedule::new(self.eps_start, self.eps_end, decay)?)
    }

    pub fn tabular(&self) -> TabularConfig {
        TabularConfig {
            alpha: self.tabular_alpha,
            gamma: self.dqn.gamma,
            batch_size: self.dqn.batch_size,
            warmup: self.dqn.warmup,
            train_frequency: self.dqn.train_frequency,
        }
    }

    pub fn build_env(&self) -> Result<TabularMdp, HarnessError> {
        Ok(match self.env {
            EnvName::Taxi => make_taxi(),
            EnvName::FrozenLake => make_frozenlake(),
            EnvName::Random => {
                let spec = self.random_mdp;
                let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                make_random_mdp(&mut rng, spec.num_states, spec.num_actions, spec.branching)?
            }
        })
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let v = value.trim();
        match key.trim() {
            "env" => self.env = v.parse().map_err(HarnessError::Config)?,
            "sampler" => self.sampler = v.parse().map_err(HarnessError::Config)?,
            "agent" => self.agent = v.parse().map_err(HarnessError::Config)?,
            "seeds" => self.num_seeds = parse(key, v)?,
            "steps" => self.total_env_steps = parse(key, v)?,
            "eval_every" => self.eval_every = parse(key, v)?,
            "eval_episodes" => self.eval_episodes = parse(key, v)?,
            "capacity" => {
                self.capacity = if v == "auto" { None } else { Some(parse(key, v)?) }
            }
            "hidden1" => self.dqn.hidden[0] = parse(key, v)?,
            "hidden2" => self.dqn.hidden[1] = parse(key, v)?,
            "lr" => self.dqn.lr = parse(key, v)?,
            "batch_size" => self.dqn.batch_size = parse(key, v)?,
            "gamma" => self.dqn.gamma = parse(key, v)?,
            "warmup" => self.dqn.warmup = parse(key, v)?,
            "train_frequency" => self.dqn.train_frequency = parse(key, v)?,
            "sync_period" => self.dqn.sync_period = parse(key, v)?,
            "adam_beta1" => self.dqn.adam_beta1 = parse(key, v)?,
            "adam_beta2" => self.dqn.adam_beta2 = parse(key, v)?,
            "adam_eps" => self.dqn.adam_eps = parse(key, v)?,
            "tabular_alpha" => self.tabular_alpha = parse(key, v)?,
            "eps_start" => self.eps_start = parse(key, v)?,
            "eps_end" => self.eps_end = parse(key, v)?,
            "eps_decay_fraction" => self.eps_decay_fraction = parse(key, v)?,
            "random_states" => self.random_mdp.num_states = parse(key, v)?,
            "random_actions" => self.random_mdp.num_actions = parse(key, v)?,
            "random_branching" => self.random_mdp.branching = parse(key, v)?,
            "random_mdp_seed" => self.random_mdp.seed = parse(key, v)?,
            "out" => self.out_dir = PathBuf::from(v),
            other => return Err(HarnessError::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Parses flat `key = value` text. Blank lines and `#` comments are
    /// ignored; later keys override earlier ones.
    pub fn apply_text(&mut self, text: &str) -> Result<(), HarnessError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected key=value, got `{line}`", n + 1))
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self, HarnessError> {
        let mut config = Self::default();
        config.apply_text(text)?;
        Ok(config)
    }

    /// Resolved configuration in the same `key=value` format `apply_text`
    /// reads.
    pub fn to_text(&self) -> String {
        let capacity = self
            .capacity
            .map_or_else(|| "auto".to_string(), |c| c.to_string());
        let rows: Vec<(&str, String)> = vec![
            ("env", self.env.to_string()),
            ("sampler", self.sampler.to_string()),
            ("agent", self.agent.to_string()),
            ("seeds", self.num_seeds.to_string()),
            ("steps", self.total_env_steps.to_string()),
            ("eval_every", self.eval_every.to_string()),
            ("eval_episodes", self.eval_episodes.to_string()),
            ("capacity", capacity),
            ("hidden1", self.dqn.hidden[0].to_string()),
            ("hidden2", self.dqn.hidden[1].to_string()),
            ("lr", self.dqn.lr.to_string()),
            ("batch_size", self.dqn.batch_size.to_string()),
            ("gamma", self.dqn.gamma.to_string()),
            ("warmup", self.dqn.warmup.to_string()),
            ("train_frequency", self.dqn.train_frequency.to_string()),
            ("sync_period", self.dqn.sync_period.to_string()),
            ("adam_beta1", self.dqn.adam_beta1.to_string()),
            ("adam_beta2", self.dqn.adam_beta2.to_string()),
            ("adam_eps", self.dqn.adam_eps.to_string()),
            ("tabular_alpha", self.tabular_alpha.to_string()),
            ("eps_start", self.eps_start.to_string()),
            ("eps_end", self.eps_end.to_string()),
            ("eps_decay_fraction", self.eps_decay_fraction.to_string()),
            ("random_states", self.random_mdp.num_states.to_string()),
            ("random_actions", self.random_mdp.num_actions.to_string()),
            ("random_branching", self.random_mdp.branching.to_string()),
            ("random_mdp_seed", self.random_mdp.seed.to_string()),
            ("out", self.out_dir.display().to_string()),
        ];
        rows.into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }
}
