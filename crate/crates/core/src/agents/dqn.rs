use rand::Rng;

use super::{mlp_td_gradient_with_loss, AdamState, Agent, AgentError, Mlp, QFunction};
use crate::replay::ReplayMemory;

#[derive(Debug, Clone, PartialEq)]
pub struct DqnConfig {
    pub hidden: [usize; 2],
    pub lr: f64,
    pub batch_size: usize,
    pub gamma: f64,
    /// Minimum stored transitions before training starts.
    pub warmup: usize,
    /// Train on every `train_frequency`-th environment step.
    pub train_frequency: usize,
    /// Gradient steps between hard target-network copies.
    pub sync_period: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
}

impl Default for DqnConfig {
    fn default() -> Self {
        Self {
            hidden: [64, 64],
            lr: 1e-3,
            batch_size: 32,
            gamma: 0.99,
            warmup: 500,
            train_frequency: 1,
            sync_period: 500,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
        }
    }
}

impl DqnConfig {
    pub fn validate(&self) -> Result<(), AgentError> {
        if self.hidden.contains(&0)
            || self.batch_size == 0
            || self.train_frequency == 0
            || self.sync_period == 0
        {
            return Err(AgentError::InvalidConfig(
                "hidden widths, batch size, train frequency and sync period must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(AgentError::InvalidConfig(format!("gamma {} not in [0, 1]", self.gamma)));
        }
        if !(self.lr > 0.0) {
            return Err(AgentError::InvalidConfig(format!("learning rate {} must be positive", self.lr)));
        }
        Ok(())
    }
}

/// Every state's Q-values under a frozen network. The target network only
/// changes on sync, so bootstrap values are read from this table instead of
/// re-running the network for each sampled transition.
#[derive(Debug, Clone, PartialEq)]
pub struct QSnapshot {
    num_states: usize,
    num_actions: usize,
    values: Vec<f64>,
}

impl QSnapshot {
    pub fn of(net: &Mlp) -> Self {
        let (num_states, num_actions) = (net.num_states(), net.num_actions());
        let values = (0..num_states).flat_map(|s| net.forward_state(s)).collect();
        Self {
            num_states,
            num_actions,
            values,
        }
    }
}

impl QFunction for QSnapshot {
    fn num_states(&self) -> usize {
        self.num_states
    }

    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn q_values(&self, s: usize) -> Vec<f64> {
        self.values[s * self.num_actions..(s + 1) * self.num_actions].to_vec()
    }

    fn q(&self, s: usize, a: usize) -> f64 {
        self.values[s * self.num_actions + a]
    }

    fn max_q(&self, s: usize) -> f64 {
        self.values[s * self.num_actions..(s + 1) * self.num_actions]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// DQN over one-hot states: online network, hard-synced target network and
/// Adam, trained on minibatches from any replay memory.
#[derive(Debug, Clone)]
pub struct DqnAgent {
    pub online: Mlp,
    target: Mlp,
    target_q: QSnapshot,
    pub optimizer: AdamState,
    config: DqnConfig,
    env_steps: usize,
    grad_steps: usize,
}

impl DqnAgent {
    pub fn new<R: Rng + ?Sized>(
        num_states: usize,
        num_actions: usize,
        config: DqnConfig,
        init_rng: &mut R,
    ) -> Result<Self, AgentError> {
        config.validate()?;
        let online = Mlp::init(
            [num_states, config.hidden[0], config.hidden[1], num_actions],
            init_rng,
        )?;
        let target = online.clone();
        let target_q = QSnapshot::of(&target);
        let optimizer = AdamState::new(
            crate::agents::DifferentiableQ::num_params(&online),
            config.lr,
            config.adam_beta1,
            config.adam_beta2,
            config.adam_eps,
        );
        Ok(Self {
            online,
            target,
            target_q,
            optimizer,
            config,
            env_steps: 0,
            grad_steps: 0,
        })
    }

    pub fn config(&self) -> &DqnConfig {
        &self.config
    }

    pub fn target(&self) -> &Mlp {
        &self.target
    }

    pub fn grad_steps(&self) -> usize {
        self.grad_steps
    }

    /// One call per environment step. Trains once warm and on schedule,
    /// copying the online parameters into the target every `sync_period`
    /// gradient steps.
    pub fn dqn_train_step<M, R>(&mut self, memory: &M, rng: &mut R) -> Result<Option<f64>, AgentError>
    where
        M: ReplayMemory,
        R: Rng + ?Sized,
    {
        self.env_steps += 1;
        if memory.len() < self.config.warmup.max(1)
            || !self.env_steps.is_multiple_of(self.config.train_frequency)
        {
            return Ok(None);
        }
        let batch = memory.sample_batch(rng, self.config.batch_size)?;
        let (grad, loss) =
            mlp_td_gradient_with_loss(&self.online, &self.target_q, &batch, self.config.gamma)?;
        self.optimizer.step(self.online.params_mut(), &grad)?;
        self.grad_steps += 1;
        if self.grad_steps.is_multiple_of(self.config.sync_period) {
            self.target.copy_from(&self.online)?;
            self.target_q = QSnapshot::of(&self.target);
        }
        Ok(Some(loss))
    }
}

impl Agent for DqnAgent {
    fn q_values(&self, state: usize) -> Vec<f64> {
        self.online.forward_state(state)
    }

    fn train_step<M, R>(&mut self, memory: &M, rng: &mut R) -> Result<Option<f64>, AgentError>
    where
        M: ReplayMemory,
        R: Rng + ?Sized,
    {
        self.dqn_train_step(memory, rng)
    }
}
