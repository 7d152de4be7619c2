//! Explicit tabular MDPs with both an episodic step interface and the full
//! transition model.

mod frozenlake;
mod random;
mod taxi;

use std::io::{self, Write};

use rand::Rng;
use thiserror::Error;

pub use frozenlake::make_frozenlake;
pub use random::make_random_mdp;
pub use taxi::{make_taxi, TaxiState};

const PROB_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("invalid MDP: {0}")]
    InvalidModel(String),
    #[error("invalid MDP size: {0}")]
    InvalidSize(String),
    #[error("state {state} out of range for {num_states} states")]
    StateOutOfRange { state: usize, num_states: usize },
    #[error("action {action} out of range for {num_actions} actions")]
    ActionOutOfRange { action: usize, num_actions: usize },
    #[error("episode already finished; call reset first")]
    EpisodeFinished,
}

/// One successor entry of `T(s, a, ·)` with its reward `R(s, a, s')`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub prob: f64,
    pub next_state: usize,
    pub reward: f64,
    pub terminal: bool,
}

/// Result of one environment step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub next_state: usize,
    pub reward: f64,
    pub terminal: bool,
    /// Step limit reached without termination.
    pub truncated: bool,
}

/// Per-episode control state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Episode {
    state: usize,
    steps_taken: usize,
    step_limit: usize,
    finished: bool,
}

impl Episode {
    pub fn state(&self) -> usize {
        self.state
    }

    pub fn steps_taken(&self) -> usize {
        self.steps_taken
    }

    pub fn step_limit(&self) -> usize {
        self.step_limit
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }
}

#[derive(Debug, Clone)]
pub struct TabularMdp {
    name: String,
    num_states: usize,
    num_actions: usize,
    /// Indexed by `s * num_actions + a`, entries sorted by `next_state`.
    model: Vec<Vec<Outcome>>,
    initial: Vec<f64>,
    initial_cdf: Vec<f64>,
    gamma_default: f64,
    step_limit: usize,
}

impl TabularMdp {
    /// Validates and assembles a model. `model` is indexed by
    /// `s * num_actions + a`.
    pub fn new(
        name: impl Into<String>,
        num_states: usize,
        num_actions: usize,
        mut model: Vec<Vec<Outcome>>,
        initial: Vec<f64>,
        gamma_default: f64,
        step_limit: usize,
    ) -> Result<Self, EnvError> {
        if num_states == 0 || num_actions == 0 {
            return Err(EnvError::InvalidSize(
                "need at least one state and one action".into(),
            ));
        }
        if step_limit == 0 {
            return Err(EnvError::InvalidSize("step limit must be positive".into()));
        }
        if model.len() != num_states * num_actions {
            return Err(EnvError::InvalidModel(format!(
                "expected {} (s,a) entry lists, got {}",
                num_states * num_actions,
                model.len()
            )));
        }
        if !(0.0..=1.0).contains(&gamma_default) {
            return Err(EnvError::InvalidModel(format!("discount {gamma_default} not in [0,1]")));
        }
        for (idx, entries) in model.iter_mut().enumerate() {
            let (s, a) = (idx / num_actions, idx % num_actions);
            if entries.is_empty() {
                return Err(EnvError::InvalidModel(format!("({s},{a}) has no successors")));
            }
            let mut total = 0.0;
            for e in entries.iter() {
                if e.next_state >= num_states {
                    return Err(EnvError::InvalidModel(format!(
                        "({s},{a}) successor {} out of range",
                        e.next_state
                    )));
                }
                if !(e.prob >= 0.0) || !e.reward.is_finite() {
                    return Err(EnvError::InvalidModel(format!(
                        "({s},{a}) has a negative probability or non-finite reward"
                    )));
                }
                total += e.prob;
            }
            if (total - 1.0).abs() > PROB_TOLERANCE {
                return Err(EnvError::InvalidModel(format!(
                    "({s},{a}) probabilities sum to {total}"
                )));
            }
            entries.sort_by_key(|e| e.next_state);
            if entries.windows(2).any(|w| w[0].next_state == w[1].next_state) {
                return Err(EnvError::InvalidModel(format!(
                    "({s},{a}) lists a successor twice"
                )));
            }
        }
        if initial.len() != num_states {
            return Err(EnvError::InvalidModel(
                "initial distribution has wrong length".into(),
            ));
        }
        if initial.iter().any(|&p| !(p >= 0.0))
            || (initial.iter().sum::<f64>() - 1.0).abs() > PROB_TOLERANCE
        {
            return Err(EnvError::InvalidModel(
                "initial distribution is not a probability vector".into(),
            ));
        }
        let initial_cdf = initial
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(Self {
            name: name.into(),
            num_states,
            num_actions,
            model,
            initial,
            initial_cdf,
            gamma_default,
            step_limit,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn gamma_default(&self) -> f64 {
        self.gamma_default
    }

    pub fn step_limit(&self) -> usize {
        self.step_limit
    }

    pub fn initial_distribution(&self) -> &[f64] {
        &self.initial
    }

    /// Successor entries of `(s, a)`, sorted by next state.
    pub fn outcomes(&self, s: usize, a: usize) -> &[Outcome] {
        &self.model[s * self.num_actions + a]
    }

    /// True when every action from `s` self-loops as a terminal entry, i.e. the
    /// state is absorbing and an agent never acts in it.
    pub fn is_absorbing(&self, s: usize) -> bool {
        (0..self.num_actions).all(|a| {
            matches!(self.outcomes(s, a), [o] if o.next_state == s && o.terminal && o.reward == 0.0)
        })
    }

    /// Draws one successor of `(s, a)`. Always consumes exactly one uniform.
    pub fn sample_outcome<R: Rng + ?Sized>(&self, s: usize, a: usize, rng: &mut R) -> &Outcome {
        let entries = self.outcomes(s, a);
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for e in entries {
            acc += e.prob;
            if u < acc {
                return e;
            }
        }
        entries
            .iter()
            .rev()
            .find(|e| e.prob > 0.0)
            .expect("probabilities sum to one")
    }

    pub fn sample_initial_state<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let idx = self.initial_cdf.partition_point(|&c| c <= u);
        if idx < self.num_states && self.initial[idx] > 0.0 {
            idx
        } else {
            self.initial
                .iter()
                .rposition(|&p| p > 0.0)
                .expect("initial distribution has mass")
        }
    }

    pub fn reset<R: Rng + ?Sized>(&self, rng: &mut R) -> Episode {
        Episode {
            state: self.sample_initial_state(rng),
            steps_taken: 0,
            step_limit: self.step_limit,
            finished: false,
        }
    }

    pub fn step<R: Rng + ?Sized>(
        &self,
        episode: &mut Episode,
        action: usize,
        rng: &mut R,
    ) -> Result<StepOutcome, EnvError> {
        if episode.finished {
            return Err(EnvError::EpisodeFinished);
        }
        if action >= self.num_actions {
            return Err(EnvError::ActionOutOfRange {
                action,
                num_actions: self.num_actions,
            });
        }
        let o = *self.sample_outcome(episode.state, action, rng);
        episode.steps_taken += 1;
        episode.state = o.next_state;
        let truncated = !o.terminal && episode.steps_taken >= episode.step_limit;
        episode.finished = o.terminal || truncated;
        Ok(StepOutcome {
            next_state: o.next_state,
            reward: o.reward,
            terminal: o.terminal,
            truncated,
        })
    }

    /// Plain-text model listing, one `s a prob s' r terminal` row per entry,
    /// ordered by `(s, a, s')`.
    pub fn write_model<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# s a prob next_state reward terminal")?;
        for s in 0..self.num_states {
            for a in 0..self.num_actions {
                for o in self.outcomes(s, a) {
                    writeln!(
                        w,
                        "{s} {a} {} {} {} {}",
                        o.prob, o.next_state, o.reward, o.terminal as u8
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Merges entries that share a successor, summing their probabilities.
pub(crate) fn merge_outcomes(mut entries: Vec<Outcome>) -> Vec<Outcome> {
    entries.sort_by_key(|e| e.next_state);
    let mut merged: Vec<Outcome> = Vec::with_capacity(entries.len());
    for e in entries {
        match merged.last_mut() {
            Some(last) if last.next_state == e.next_state => {
                debug_assert_eq!(last.reward, e.reward);
                debug_assert_eq!(last.terminal, e.terminal);
                last.prob += e.prob;
            }
            _ => merged.push(e),
        }
    }
    merged
}

pub fn one_hot_encode(state: usize, num_states: usize) -> Result<Vec<f64>, EnvError> {
    if state >= num_states {
        return Err(EnvError::StateOutOfRange { state, num_states });
    }
    let mut v = vec![0.0; num_states];
    v[state] = 1.0;
    Ok(v)
}

/// Builds a named benchmark environment.
pub fn make_env(name: &str) -> Option<TabularMdp> {
    match name {
        "taxi" => Some(make_taxi()),
        "frozenlake" => Some(make_frozenlake()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn det(next_state: usize, reward: f64, terminal: bool) -> Vec<Outcome> {
        vec![Outcome {
            prob: 1.0,
            next_state,
            reward,
            terminal,
        }]
    }

    fn point_mass(s: usize, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[s] = 1.0;
        v
    }

    #[test]
    fn one_hot() {
        assert_eq!(one_hot_encode(2, 4).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
        assert_eq!(one_hot_encode(0, 1).unwrap(), vec![1.0]);
        assert!(matches!(
            one_hot_encode(4, 4),
            Err(EnvError::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn point_mass_reset() {
        let model = (0..6).map(|s| det((s + 1) % 6, 0.0, false)).collect();
        let mdp = TabularMdp::new("ring", 6, 1, model, point_mass(3, 6), 0.9, 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!((0..100).all(|_| mdp.reset(&mut rng).state() == 3));
    }

    #[test]
    fn deterministic_step_and_truncation() {
        let model = (0..6).map(|_| det(5, -1.0, false)).collect();
        let mdp = TabularMdp::new("d", 6, 1, model, point_mass(0, 6), 0.9, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut ep = mdp.reset(&mut rng);
        for i in 1..=3 {
            let out = mdp.step(&mut ep, 0, &mut rng).unwrap();
            assert_eq!((out.next_state, out.reward, out.terminal), (5, -1.0, false));
            assert_eq!(out.truncated, i == 3);
        }
        assert_eq!(mdp.step(&mut ep, 0, &mut rng), Err(EnvError::EpisodeFinished));
    }

    #[test]
    fn terminal_is_not_truncated() {
        let model = vec![det(1, 1.0, true), det(1, 0.0, true)];
        let mdp = TabularMdp::new("t", 2, 1, model, point_mass(0, 2), 0.9, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut ep = mdp.reset(&mut rng);
        let out = mdp.step(&mut ep, 0, &mut rng).unwrap();
        assert!(out.terminal && !out.truncated);
        assert!(mdp.is_absorbing(1) && !mdp.is_absorbing(0));
    }

    #[test]
    fn rejects_bad_models() {
        let bad_sum = vec![vec![Outcome {
            prob: 0.5,
            next_state: 0,
            reward: 0.0,
            terminal: false,
        }]];
        assert!(TabularMdp::new("x", 1, 1, bad_sum, vec![1.0], 0.9, 5).is_err());
        let out_of_range = vec![det(3, 0.0, false)];
        assert!(TabularMdp::new("x", 1, 1, out_of_range, vec![1.0], 0.9, 5).is_err());
        assert!(TabularMdp::new("x", 1, 1, vec![det(0, 0.0, false)], vec![0.5], 0.9, 5).is_err());
    }

    #[test]
    fn bad_action_is_rejected() {
        let mdp = TabularMdp::new("x", 1, 1, vec![det(0, 0.0, false)], vec![1.0], 0.9, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut ep = mdp.reset(&mut rng);
        assert!(matches!(
            mdp.step(&mut ep, 1, &mut rng),
            Err(EnvError::ActionOutOfRange { .. })
        ));
    }

    #[test]
    fn model_dump_is_ordered() {
        let mdp = make_frozenlake();
        let mut buf = Vec::new();
        mdp.write_model(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<(usize, usize, usize)> = text
            .lines()
            .skip(1)
            .map(|l| {
                let f: Vec<&str> = l.split(' ').collect();
                (f[0].parse().unwrap(), f[1].parse().unwrap(), f[3].parse().unwrap())
            })
            .collect();
        let mut sorted = rows.clone();
        sorted.sort();
        assert_eq!(rows, sorted);
        assert!(text.lines().nth(1).unwrap().starts_with("0 0 "));
    }
}
