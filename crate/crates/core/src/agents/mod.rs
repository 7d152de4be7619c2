//! Tabular Q-Learning and a small DQN, both trained from either replay memory.

mod adam;
mod dqn;
mod mlp;
mod tabular;

use rand::Rng;
use thiserror::Error;

use crate::replay::{ReplayError, Transition};

pub use adam::AdamState;
pub use dqn::{DqnAgent, DqnConfig, QSnapshot};
pub use mlp::{mlp_td_gradient, mlp_td_gradient_with_loss, Mlp};
pub use tabular::{QTable, TabularAgent, TabularConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgentError {
    #[error("transition ({state}, {action}) -> {next_state} does not fit a Q-function with {num_states} states and {num_actions} actions")]
    DimensionMismatch {
        state: usize,
        action: usize,
        next_state: usize,
        num_states: usize,
        num_actions: usize,
    },
    #[error("shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("cannot compute a gradient over an empty batch")]
    EmptyBatch,
    #[error("cannot pick an action from an empty value vector")]
    EmptyQValues,
    #[error("exploration rate {0} not in [0, 1]")]
    InvalidEpsilon(f64),
    #[error("invalid hyperparameter: {0}")]
    InvalidConfig(String),
    #[error("malformed checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// An action-value function over discrete states and actions.
pub trait QFunction {
    fn num_states(&self) -> usize;

    fn num_actions(&self) -> usize;

    /// `Q(s, ·)`; `s` must be in range.
    fn q_values(&self, s: usize) -> Vec<f64>;

    fn q(&self, s: usize, a: usize) -> f64 {
        self.q_values(s)[a]
    }

    fn max_q(&self, s: usize) -> f64 {
        self.q_values(s)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A Q-function with a flat parameter vector and its gradient.
pub trait DifferentiableQ: QFunction {
    fn params(&self) -> &[f64];

    fn num_params(&self) -> usize {
        self.params().len()
    }

    /// Adds `scale * ∇θ Q(s, a; θ)` into `out`.
    fn accumulate_grad_q(&self, s: usize, a: usize, scale: f64, out: &mut [f64]);

    fn grad_q(&self, s: usize, a: usize) -> Vec<f64> {
        let mut g = vec![0.0; self.num_params()];
        self.accumulate_grad_q(s, a, 1.0, &mut g);
        g
    }
}

fn check_transition<Q: QFunction + ?Sized>(t: &Transition, q: &Q) -> Result<(), AgentError> {
    let (s, a, s2) = (t.state as usize, t.action as usize, t.next_state as usize);
    if s >= q.num_states() || s2 >= q.num_states() || a >= q.num_actions() {
        return Err(AgentError::DimensionMismatch {
            state: s,
            action: a,
            next_state: s2,
            num_states: q.num_states(),
            num_actions: q.num_actions(),
        });
    }
    Ok(())
}

/// `r + γ max_a' Q_target(s', a') - Q_online(s, a)`, dropping the bootstrap
/// term on terminal transitions.
pub fn td_error<Q, T>(t: &Transition, online: &Q, target: &T, gamma: f64) -> Result<f64, AgentError>
where
    Q: QFunction + ?Sized,
    T: QFunction + ?Sized,
{
    check_transition(t, online)?;
    check_transition(t, target)?;
    let bootstrap = if t.terminal {
        0.0
    } else {
        gamma * target.max_q(t.next_state as usize)
    };
    Ok(t.reward + bootstrap - online.q(t.state as usize, t.action as usize))
}

/// Index of the largest value, lowest index on ties.
pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

/// With probability `epsilon` a uniformly random action, otherwise the greedy
/// one. Always consumes one uniform draw, plus one more when exploring.
pub fn epsilon_greedy_action<R: Rng + ?Sized>(
    q_values: &[f64],
    epsilon: f64,
    rng: &mut R,
) -> Result<usize, AgentError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(AgentError::InvalidEpsilon(epsilon));
    }
    if q_values.is_empty() {
        return Err(AgentError::EmptyQValues);
    }
    if rng.gen::<f64>() < epsilon {
        Ok(rng.gen_range(0..q_values.len()))
    } else {
        Ok(argmax(q_values).expect("nonempty"))
    }
}

/// Linear decay from `start` to `end` over `decay_steps`, constant after.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonSchedule {
    pub start: f64,
    pub end: f64,
    pub decay_steps: usize,
}

impl EpsilonSchedule {
    pub fn new(start: f64, end: f64, decay_steps: usize) -> Result<Self, AgentError> {
        if !(0.0 <= end && end <= start && start <= 1.0) {
            return Err(AgentError::InvalidConfig(format!(
                "epsilon schedule needs 0 <= end <= start <= 1, got {start} -> {end}"
            )));
        }
        Ok(Self {
            start,
            end,
            decay_steps,
        })
    }

    pub fn value(&self, step: usize) -> f64 {
        if self.decay_steps == 0 || step >= self.decay_steps {
            return self.end;
        }
        let frac = step as f64 / self.decay_steps as f64;
        self.start + (self.end - self.start) * frac
    }
}

/// Agent interface the harness drives.
pub trait Agent {
    fn q_values(&self, state: usize) -> Vec<f64>;

    fn greedy_action(&self, state: usize) -> usize {
        argmax(&self.q_values(state)).expect("agents have at least one action")
    }

    fn act<R: Rng + ?Sized>(&self, state: usize, epsilon: f64, rng: &mut R) -> Result<usize, AgentError> {
        epsilon_greedy_action(&self.q_values(state), epsilon, rng)
    }

    /// Called once per environment step after the transition is stored.
    /// Returns the minibatch loss when a gradient step happened.
    fn train_step<M, R>(&mut self, memory: &M, rng: &mut R) -> Result<Option<f64>, AgentError>
    where
        M: crate::replay::ReplayMemory,
        R: Rng + ?Sized;
}
