use rand::Rng;

use super::{td_error, Agent, AgentError, DifferentiableQ, QFunction};
use crate::replay::{ReplayMemory, Transition};

/// Lookup-table Q-function with its learning rate and discount.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    num_states: usize,
    num_actions: usize,
    values: Vec<f64>,
    pub alpha: f64,
    pub gamma: f64,
}

impl QTable {
    pub fn new(num_states: usize, num_actions: usize, alpha: f64, gamma: f64) -> Result<Self, AgentError> {
        if num_states == 0 || num_actions == 0 {
            return Err(AgentError::InvalidConfig("empty Q-table".into()));
        }
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&gamma) {
            return Err(AgentError::InvalidConfig(format!(
                "alpha {alpha} and gamma {gamma} must lie in [0, 1]"
            )));
        }
        Ok(Self {
            num_states,
            num_actions,
            values: vec![0.0; num_states * num_actions],
            alpha,
            gamma,
        })
    }

    pub fn from_values(
        num_states: usize,
        num_actions: usize,
        values: Vec<f64>,
        alpha: f64,
        gamma: f64,
    ) -> Result<Self, AgentError> {
        let mut table = Self::new(num_states, num_actions, alpha, gamma)?;
        if values.len() != table.values.len() {
            return Err(AgentError::ShapeMismatch {
                expected: table.values.len(),
                got: values.len(),
            });
        }
        table.values = values;
        Ok(table)
    }

    pub fn get(&self, s: usize, a: usize) -> f64 {
        self.values[s * self.num_actions + a]
    }

    pub fn set(&mut self, s: usize, a: usize, v: f64) {
        self.values[s * self.num_actions + a] = v;
    }

    /// Row-major `|S| x |A|` values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// One sampled Q-Learning update `Q(s,a) += α δ`, bootstrapping from the
    /// table itself.
    pub fn q_learning_step(&mut self, t: &Transition) -> Result<(), AgentError> {
        let delta = td_error(t, &*self, &*self, self.gamma)?;
        let idx = t.state as usize * self.num_actions + t.action as usize;
        self.values[idx] += self.alpha * delta;
        Ok(())
    }
}

impl QFunction for QTable {
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
        self.get(s, a)
    }

    fn max_q(&self, s: usize) -> f64 {
        self.values[s * self.num_actions..(s + 1) * self.num_actions]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// One parameter per `(s, a)`; the gradient of `Q(s, a)` is an indicator.
impl DifferentiableQ for QTable {
    fn params(&self) -> &[f64] {
        &self.values
    }

    fn accumulate_grad_q(&self, s: usize, a: usize, scale: f64, out: &mut [f64]) {
        out[s * self.num_actions + a] += scale;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabularConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub batch_size: usize,
    pub warmup: usize,
    pub train_frequency: usize,
}

impl Default for TabularConfig {
    fn default() -> Self {
        Self {
            alpha: 0.1,
            gamma: 0.99,
            batch_size: 32,
            warmup: 500,
            train_frequency: 1,
        }
    }
}

/// Q-Learning on minibatches replayed from a memory.
#[derive(Debug, Clone)]
pub struct TabularAgent {
    pub table: QTable,
    config: TabularConfig,
    env_steps: usize,
}

impl TabularAgent {
    pub fn new(num_states: usize, num_actions: usize, config: TabularConfig) -> Result<Self, AgentError> {
        if config.batch_size == 0 || config.train_frequency == 0 {
            return Err(AgentError::InvalidConfig(
                "batch size and train frequency must be positive".into(),
            ));
        }
        Ok(Self {
            table: QTable::new(num_states, num_actions, config.alpha, config.gamma)?,
            config,
            env_steps: 0,
        })
    }
}

impl Agent for TabularAgent {
    fn q_values(&self, state: usize) -> Vec<f64> {
        self.table.q_values(state)
    }

    fn train_step<M, R>(&mut self, memory: &M, rng: &mut R) -> Result<Option<f64>, AgentError>
    where
        M: ReplayMemory,
        R: Rng + ?Sized,
    {
        self.env_steps += 1;
        if memory.len() < self.config.warmup.max(1) || !self.env_steps.is_multiple_of(self.config.train_frequency) {
            return Ok(None);
        }
        let batch = memory.sample_batch(rng, self.config.batch_size)?;
        let mut loss = 0.0;
        for t in &batch {
            let delta = td_error(t, &self.table, &self.table, self.table.gamma)?;
            loss += 0.5 * delta * delta;
            self.table.q_learning_step(t)?;
        }
        Ok(Some(loss / batch.len() as f64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_update() {
        let mut q = QTable::new(2, 1, 0.5, 0.0).unwrap();
        q.q_learning_step(&Transition::new(0, 0, 1.0, 1, false)).unwrap();
        assert_eq!(q.get(0, 0), 0.5);
    }

    #[test]
    fn zero_learning_rate_is_identity() {
        let mut q = QTable::from_values(2, 1, vec![0.3, -0.2], 0.0, 0.9).unwrap();
        let before = q.clone();
        q.q_learning_step(&Transition::new(0, 0, 7.0, 1, false)).unwrap();
        assert_eq!(q, before);
    }

    #[test]
    fn deterministic_chain_converges_to_value_iteration() {
        // 0 -> 1 (r = 1), 1 -> 0 (r = 0), γ = 0.9.
        // Value iteration fixed point: Q0 = 1 + 0.9 Q1, Q1 = 0.9 Q0.
        let gamma = 0.9;
        let mut vi = [0.0f64; 2];
        for _ in 0..10_000 {
            vi = [1.0 + gamma * vi[1], gamma * vi[0]];
        }
        let mut q = QTable::new(2, 1, 0.5, gamma).unwrap();
        let a = Transition::new(0, 0, 1.0, 1, false);
        let b = Transition::new(1, 0, 0.0, 0, false);
        for _ in 0..5_000 {
            q.q_learning_step(&a).unwrap();
            q.q_learning_step(&b).unwrap();
        }
        assert!((q.get(0, 0) - vi[0]).abs() < 1e-6);
        assert!((q.get(1, 0) - vi[1]).abs() < 1e-6);
    }

    #[test]
    fn rejects_out_of_range_transition() {
        let mut q = QTable::new(2, 2, 0.1, 0.9).unwrap();
        assert!(q.q_learning_step(&Transition::new(2, 0, 0.0, 0, false)).is_err());
    }
}
