//! Brute-force expected updates and sampling distributions on enumerable
//! MDPs. These are the ground truth the replay memories and agents are
//! checked against.
//!
//! Episodic chains are made recurrent by sending terminal transitions back
//! to the initial distribution, so a behavior policy run forever has a
//! well-defined stationary occupancy `Pr(s, a)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use thiserror::Error;

use crate::agents::{DifferentiableQ, QFunction, QTable};
use crate::envs::TabularMdp;
use crate::replay::{ReplayError, ReplayMemory, Transition, TransitionKey};

pub const STATIONARY_TOLERANCE: f64 = 1e-10;
pub const STATIONARY_MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("power iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("invalid behavior policy: {0}")]
    InvalidPolicy(String),
    #[error("parameter shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// Fixed stochastic policy `μ(a | s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorPolicy {
    num_states: usize,
    num_actions: usize,
    probs: Vec<f64>,
}

impl BehaviorPolicy {
    /// `probs` is row-major `[s][a]`; every row must sum to 1 within 1e-12.
    pub fn new(num_states: usize, num_actions: usize, probs: Vec<f64>) -> Result<Self, OracleError> {
        if probs.len() != num_states * num_actions {
            return Err(OracleError::InvalidPolicy(format!(
                "expected {} probabilities, got {}",
                num_states * num_actions,
                probs.len()
            )));
        }
        for (s, row) in probs.chunks(num_actions).enumerate() {
            let total: f64 = row.iter().sum();
            if row.iter().any(|&p| !(p >= 0.0)) || (total - 1.0).abs() > 1e-12 {
                return Err(OracleError::InvalidPolicy(format!(
                    "row {s} is not a distribution (sum {total})"
                )));
            }
        }
        Ok(Self {
            num_states,
            num_actions,
            probs,
        })
    }

    pub fn uniform(mdp: &TabularMdp) -> Self {
        let n = mdp.num_actions();
        Self {
            num_states: mdp.num_states(),
            num_actions: n,
            probs: vec![1.0 / n as f64; mdp.num_states() * n],
        }
    }

    pub fn prob(&self, s: usize, a: usize) -> f64 {
        self.probs[s * self.num_actions + a]
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.probs[s * self.num_actions..(s + 1) * self.num_actions]
    }

    pub fn sample_action<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (a, &p) in self.row(s).iter().enumerate() {
            acc += p;
            if u < acc {
                return a;
            }
        }
        self.row(s)
            .iter()
            .rposition(|&p| p > 0.0)
            .expect("row has mass")
    }

    fn check(&self, mdp: &TabularMdp) -> Result<(), OracleError> {
        if self.num_states != mdp.num_states() || self.num_actions != mdp.num_actions() {
            return Err(OracleError::InvalidPolicy(format!(
                "policy is {}x{}, MDP is {}x{}",
                self.num_states,
                self.num_actions,
                mdp.num_states(),
                mdp.num_actions()
            )));
        }
        Ok(())
    }
}

/// Probability vector over `(s, a)` pairs, row-major `[s][a]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupancyDistribution {
    num_states: usize,
    num_actions: usize,
    probs: Vec<f64>,
}

impl OccupancyDistribution {
    pub fn prob(&self, s: usize, a: usize) -> f64 {
        self.probs[s * self.num_actions + a]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn state_marginal(&self) -> Vec<f64> {
        self.probs
            .chunks(self.num_actions)
            .map(|row| row.iter().sum())
            .collect()
    }

    /// Pairs with positive occupancy.
    pub fn support(&self) -> Vec<(usize, usize)> {
        (0..self.num_states)
            .flat_map(|s| (0..self.num_actions).map(move |a| (s, a)))
            .filter(|&(s, a)| self.prob(s, a) > 0.0)
            .collect()
    }
}

/// One application of the restart chain: `x ↦ xP`.
fn restart_chain_step(mdp: &TabularMdp, mu: &BehaviorPolicy, x: &[f64], out: &mut [f64]) {
    let n_a = mdp.num_actions();
    let mut inflow = vec![0.0; mdp.num_states()];
    let mut restart = 0.0;
    for (idx, &mass) in x.iter().enumerate() {
        if mass == 0.0 {
            continue;
        }
        for o in mdp.outcomes(idx / n_a, idx % n_a) {
            if o.terminal {
                restart += mass * o.prob;
            } else {
                inflow[o.next_state] += mass * o.prob;
            }
        }
    }
    if restart > 0.0 {
        for (f, &p) in inflow.iter_mut().zip(mdp.initial_distribution()) {
            *f += restart * p;
        }
    }
    for (idx, slot) in out.iter_mut().enumerate() {
        *slot = inflow[idx / n_a] * mu.prob(idx / n_a, idx % n_a);
    }
}

/// Long-run `(s, a)` visitation frequencies of `μ` with terminal-to-initial
/// restarts. Power iteration runs on the lazy chain `(I + P) / 2`, which has
/// the same fixed point and is aperiodic, until `‖xP − x‖₁ ≤ 1e-10`.
pub fn stationary_distribution(
    mdp: &TabularMdp,
    mu: &BehaviorPolicy,
) -> Result<OccupancyDistribution, OracleError> {
    mu.check(mdp)?;
    let n_a = mdp.num_actions();
    let n = mdp.num_states() * n_a;
    let init = mdp.initial_distribution();
    let mut x: Vec<f64> = (0..n).map(|i| init[i / n_a] * mu.prob(i / n_a, i % n_a)).collect();
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..STATIONARY_MAX_ITERATIONS {
        restart_chain_step(mdp, mu, &x, &mut next);
        residual = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        if residual <= STATIONARY_TOLERANCE {
            let total: f64 = next.iter().sum();
            next.iter_mut().for_each(|p| *p /= total);
            return Ok(OccupancyDistribution {
                num_states: mdp.num_states(),
                num_actions: n_a,
                probs: next,
            });
        }
        for (xi, ni) in x.iter_mut().zip(&next) {
            *xi = 0.5 * (*xi + ni);
        }
    }
    Err(OracleError::NonConvergence {
        iterations: STATIONARY_MAX_ITERATIONS,
        residual,
    })
}

/// `Pr(s' | s, a) / |S × A|` for every model entry.
pub fn ideal_distribution(mdp: &TabularMdp) -> BTreeMap<(usize, usize, usize), f64> {
    let pairs: Vec<(usize, usize)> = (0..mdp.num_states())
        .flat_map(|s| (0..mdp.num_actions()).map(move |a| (s, a)))
        .collect();
    ideal_distribution_on_support(mdp, &pairs)
}

/// `Pr(s' | s, a) / K` over a support of `K` pairs, the law a stratified
/// memory realizes when it holds exactly those keys.
pub fn ideal_distribution_on_support(
    mdp: &TabularMdp,
    support: &[(usize, usize)],
) -> BTreeMap<(usize, usize, usize), f64> {
    let k = support.len() as f64;
    support
        .iter()
        .flat_map(|&(s, a)| {
            mdp.outcomes(s, a)
                .iter()
                .map(move |o| ((s, a, o.next_state), o.prob / k))
        })
        .collect()
}

fn expected_td<Q, T>(mdp: &TabularMdp, online: &Q, target: &T, gamma: f64, s: usize, a: usize) -> f64
where
    Q: QFunction + ?Sized,
    T: QFunction + ?Sized,
{
    let q_sa = online.q(s, a);
    mdp.outcomes(s, a)
        .iter()
        .map(|o| {
            let bootstrap = if o.terminal {
                0.0
            } else {
                gamma * target.max_q(o.next_state)
            };
            o.prob * (o.reward + bootstrap - q_sa)
        })
        .sum()
}

/// Expected tabular Q-Learning update `α Σ_{s'} Pr(s'|s,a) δ(s,a,s')`.
pub fn expected_q_update(mdp: &TabularMdp, table: &QTable, s: usize, a: usize) -> f64 {
    table.alpha * expected_td(mdp, table, table, table.gamma, s, a)
}

/// How replayed `(s, a)` pairs are weighted in an expected update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Weight `Pr(s, a)`: uniform replay over a memory filled by `μ`.
    Uniform,
    /// Weight `1 / K` over the `K` pairs with positive occupancy.
    Stratified,
}

/// Expected parameter change, shaped like the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateVector(pub Vec<f64>);

/// Expected DQN update with the occupancy already computed.
pub fn expected_dqn_update_with_occupancy<Q, T>(
    mdp: &TabularMdp,
    occupancy: &OccupancyDistribution,
    net: &Q,
    target_net: &T,
    gamma: f64,
    alpha: f64,
    mode: SamplingMode,
) -> Result<UpdateVector, OracleError>
where
    Q: DifferentiableQ + ?Sized,
    T: QFunction + ?Sized,
{
    if net.num_states() != mdp.num_states()
        || net.num_actions() != mdp.num_actions()
        || target_net.num_states() != mdp.num_states()
        || target_net.num_actions() != mdp.num_actions()
    {
        return Err(OracleError::ShapeMismatch(
            "Q-functions must match the MDP's state and action counts".into(),
        ));
    }
    let support = occupancy.support();
    let k = support.len() as f64;
    let mut update = vec![0.0; net.num_params()];
    for (s, a) in support {
        let weight = match mode {
            SamplingMode::Uniform => occupancy.prob(s, a),
            SamplingMode::Stratified => 1.0 / k,
        };
        let td = expected_td(mdp, net, target_net, gamma, s, a);
        net.accumulate_grad_q(s, a, alpha * weight * td, &mut update);
    }
    Ok(UpdateVector(update))
}

/// Uniform mode: `α Σ Pr(s,a) Σ_{s'} Pr(s'|s,a) δ ∇θQ(s,a;θ)` with `Pr(s,a)`
/// the stationary occupancy of `μ`. Stratified mode replaces `Pr(s,a)` by
/// `1/K` over reachable pairs.
pub fn expected_dqn_update<Q, T>(
    mdp: &TabularMdp,
    mu: &BehaviorPolicy,
    net: &Q,
    target_net: &T,
    gamma: f64,
    alpha: f64,
    mode: SamplingMode,
) -> Result<UpdateVector, OracleError>
where
    Q: DifferentiableQ + ?Sized,
    T: QFunction + ?Sized,
{
    let occupancy = stationary_distribution(mdp, mu)?;
    expected_dqn_update_with_occupancy(mdp, &occupancy, net, target_net, gamma, alpha, mode)
}

/// Per-slot counts of `M` draws from a memory, with key and successor
/// aggregations.
#[derive(Debug, Clone)]
pub struct EmpiricalSampling {
    draws: usize,
    slot_counts: BTreeMap<usize, u64>,
    transitions: BTreeMap<usize, Transition>,
}

impl EmpiricalSampling {
    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn slot_frequencies(&self) -> BTreeMap<usize, f64> {
        self.slot_counts
            .iter()
            .map(|(&slot, &c)| (slot, c as f64 / self.draws as f64))
            .collect()
    }

    pub fn key_frequencies(&self) -> BTreeMap<TransitionKey, f64> {
        let mut out = BTreeMap::new();
        for (slot, &c) in &self.slot_counts {
            *out.entry(self.transitions[slot].key()).or_insert(0.0) += c as f64;
        }
        out.values_mut().for_each(|v| *v /= self.draws as f64);
        out
    }

    /// Frequencies of each successor state among draws that returned `key`.
    pub fn successor_frequencies(&self, key: TransitionKey) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        let mut total = 0u64;
        for (slot, &c) in &self.slot_counts {
            let t = &self.transitions[slot];
            if t.key() == key {
                *out.entry(t.next_state as usize).or_insert(0.0) += c as f64;
                total += c;
            }
        }
        out.values_mut().for_each(|v| *v /= total as f64);
        out
    }
}

pub fn empirical_sampling_distribution<M, R>(
    memory: &M,
    rng: &mut R,
    draws: usize,
) -> Result<EmpiricalSampling, OracleError>
where
    M: ReplayMemory,
    R: Rng + ?Sized,
{
    if memory.is_empty() {
        return Err(ReplayError::Empty.into());
    }
    let mut slot_counts = BTreeMap::new();
    for _ in 0..draws.max(1) {
        *slot_counts.entry(memory.sample_index(rng)?).or_insert(0u64) += 1;
    }
    let transitions = slot_counts
        .keys()
        .map(|&slot| (slot, *memory.get(slot).expect("sampled slot is occupied")))
        .collect();
    Ok(EmpiricalSampling {
        draws: draws.max(1),
        slot_counts,
        transitions,
    })
}

/// Runs `μ` for `steps` transitions without a step limit, restarting from the
/// initial distribution after each terminal transition.
pub fn behavior_trajectory<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    mu: &BehaviorPolicy,
    steps: usize,
    rng: &mut R,
) -> Vec<Transition> {
    let mut out = Vec::with_capacity(steps);
    let mut s = mdp.sample_initial_state(rng);
    for _ in 0..steps {
        let a = mu.sample_action(s, rng);
        let o = *mdp.sample_outcome(s, a, rng);
        out.push(Transition::new(s as u32, a as u32, o.reward, o.next_state as u32, o.terminal));
        s = if o.terminal {
            mdp.sample_initial_state(rng)
        } else {
            o.next_state
        };
    }
    out
}

/// Optimal action values by synchronous value iteration, iterated until the
/// sup-norm change drops below `tolerance`. Returned row-major `[s][a]`.
pub fn value_iteration(mdp: &TabularMdp, gamma: f64, tolerance: f64, max_iterations: usize) -> Vec<f64> {
    let (n_s, n_a) = (mdp.num_states(), mdp.num_actions());
    let mut q = vec![0.0; n_s * n_a];
    for _ in 0..max_iterations {
        let v: Vec<f64> = q
            .chunks(n_a)
            .map(|row| row.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            .collect();
        let mut change: f64 = 0.0;
        for s in 0..n_s {
            for a in 0..n_a {
                let new: f64 = mdp
                    .outcomes(s, a)
                    .iter()
                    .map(|o| o.prob * (o.reward + if o.terminal { 0.0 } else { gamma * v[o.next_state] }))
                    .sum();
                change = change.max((new - q[s * n_a + a]).abs());
                q[s * n_a + a] = new;
            }
        }
        if change < tolerance {
            break;
        }
    }
    q
}

/// Plain-text oracle tables: stationary occupancy, ideal key marginal and the
/// resulting per-pair weights of both sampling modes.
pub fn oracle_report(mdp: &TabularMdp, mu: &BehaviorPolicy) -> Result<String, OracleError> {
    let occupancy = stationary_distribution(mdp, mu)?;
    let support = occupancy.support();
    let k = support.len();
    let n_pairs = mdp.num_states() * mdp.num_actions();
    let mut out = String::new();
    let _ = writeln!(out, "# env {}", mdp.name());
    let _ = writeln!(
        out,
        "# states {} actions {} reachable_pairs {k}",
        mdp.num_states(),
        mdp.num_actions()
    );
    let _ = writeln!(out, "s a occupancy uniform_weight stratified_weight ideal_weight");
    for (s, a) in support {
        let p = occupancy.prob(s, a);
        let _ = writeln!(
            out,
            "{s} {a} {p:.10e} {p:.10e} {:.10e} {:.10e}",
            1.0 / k as f64,
            1.0 / n_pairs as f64
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envs::{make_frozenlake, make_random_mdp, Outcome};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn entry(prob: f64, next_state: usize, reward: f64) -> Outcome {
        Outcome {
            prob,
            next_state,
            reward,
            terminal: false,
        }
    }

    fn two_state_chain() -> TabularMdp {
        TabularMdp::new(
            "chain",
            2,
            1,
            vec![
                vec![entry(0.9, 0, 0.0), entry(0.1, 1, 0.0)],
                vec![entry(0.5, 0, 0.0), entry(0.5, 1, 0.0)],
            ],
            vec![1.0, 0.0],
            0.9,
            100,
        )
        .unwrap()
    }

    #[test]
    fn two_state_stationary_matches_linear_solve() {
        // πP = π with π0 + π1 = 1: 0.1 π0 = 0.5 π1  =>  π = (5/6, 1/6).
        let mdp = two_state_chain();
        let pi = stationary_distribution(&mdp, &BehaviorPolicy::uniform(&mdp)).unwrap();
        assert!((pi.prob(0, 0) - 5.0 / 6.0).abs() < 1e-9);
        assert!((pi.prob(1, 0) - 1.0 / 6.0).abs() < 1e-9);
    }

    #[test]
    fn deterministic_cycle_is_uniform() {
        let k = 5;
        let model = (0..k).map(|s| vec![entry(1.0, (s + 1) % k, 0.0)]).collect();
        let mut init = vec![0.0; k];
        init[2] = 1.0;
        let mdp = TabularMdp::new("cycle", k, 1, model, init, 0.9, 100).unwrap();
        let pi = stationary_distribution(&mdp, &BehaviorPolicy::uniform(&mdp)).unwrap();
        for s in 0..k {
            assert!((pi.prob(s, 0) - 0.2).abs() < 1e-9);
        }
    }

    #[test]
    fn frozenlake_occupancy_skips_absorbing_states() {
        let mdp = make_frozenlake();
        let pi = stationary_distribution(&mdp, &BehaviorPolicy::uniform(&mdp)).unwrap();
        let marginal = pi.state_marginal();
        for s in [5, 7, 11, 12, 15] {
            assert_eq!(marginal[s], 0.0);
        }
        assert!((marginal.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ideal_distribution_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let det = make_random_mdp(&mut rng, 4, 2, 1).unwrap();
        let ideal = ideal_distribution(&det);
        assert_eq!(ideal.len(), 8);
        assert!(ideal.values().all(|&p| (p - 0.125).abs() < 1e-15));

        let mdp = TabularMdp::new(
            "split",
            2,
            1,
            vec![
                vec![entry(0.3, 0, 0.0), entry(0.7, 1, 0.0)],
                vec![entry(0.3, 0, 0.0), entry(0.7, 1, 0.0)],
            ],
            vec![0.5, 0.5],
            0.9,
            10,
        )
        .unwrap();
        let got: Vec<f64> = ideal_distribution(&mdp).values().copied().collect();
        let want = [0.15, 0.35, 0.15, 0.35];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-15);
        }

        let random = make_random_mdp(&mut rng, 6, 3, 3).unwrap();
        let ideal = ideal_distribution(&random);
        assert!((ideal.values().sum::<f64>() - 1.0).abs() < 1e-12);
        // Marginal over s' is uniform over S × A.
        let mut marginal: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (&(s, a, _), &p) in &ideal {
            *marginal.entry((s, a)).or_default() += p;
        }
        assert!(marginal.values().all(|&p| (p - 1.0 / 18.0).abs() < 1e-12));
    }

    #[test]
    fn expected_q_update_arithmetic() {
        // Two successors with δ = 2 and δ = 4: rewards 2 and 4, γ = 0, Q = 0.
        let mdp = TabularMdp::new(
            "two",
            3,
            1,
            vec![
                vec![entry(0.5, 1, 2.0), entry(0.5, 2, 4.0)],
                vec![entry(1.0, 1, 0.0)],
                vec![entry(1.0, 2, 0.0)],
            ],
            vec![1.0, 0.0, 0.0],
            0.0,
            10,
        )
        .unwrap();
        let table = QTable::new(3, 1, 0.1, 0.0).unwrap();
        assert!((expected_q_update(&mdp, &table, 0, 0) - 0.3).abs() < 1e-15);
        let frozen = QTable::new(3, 1, 0.0, 0.0).unwrap();
        assert_eq!(expected_q_update(&mdp, &frozen, 0, 0), 0.0);
    }

    #[test]
    fn zero_td_gives_zero_updates() {
        // Deterministic cycle with zero rewards and Q ≡ 0 has δ ≡ 0.
        let model = (0..3).map(|s| vec![entry(1.0, (s + 1) % 3, 0.0)]).collect();
        let mdp = TabularMdp::new("c", 3, 1, model, vec![1.0, 0.0, 0.0], 0.9, 10).unwrap();
        let table = QTable::new(3, 1, 0.5, 0.9).unwrap();
        let mu = BehaviorPolicy::uniform(&mdp);
        for mode in [SamplingMode::Uniform, SamplingMode::Stratified] {
            let u = expected_dqn_update(&mdp, &mu, &table, &table, 0.9, 0.5, mode).unwrap();
            assert!(u.0.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn tabular_identity_and_stratified_scaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mdp = make_random_mdp(&mut rng, 5, 2, 2).unwrap();
        let mu = BehaviorPolicy::uniform(&mdp);
        let values: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let table = QTable::from_values(5, 2, values, 0.3, 0.8).unwrap();
        let occ = stationary_distribution(&mdp, &mu).unwrap();
        let uni = expected_dqn_update(&mdp, &mu, &table, &table, 0.8, 0.3, SamplingMode::Uniform).unwrap();
        let strat =
            expected_dqn_update(&mdp, &mu, &table, &table, 0.8, 0.3, SamplingMode::Stratified).unwrap();
        let k = occ.support().len() as f64;
        for s in 0..5 {
            for a in 0..2 {
                let eq1 = expected_q_update(&mdp, &table, s, a);
                assert!((uni.0[s * 2 + a] - occ.prob(s, a) * eq1).abs() < 1e-9);
                assert!((strat.0[s * 2 + a] - eq1 / k).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn policy_validation() {
        assert!(BehaviorPolicy::new(2, 2, vec![0.5, 0.5, 0.9, 0.2]).is_err());
        assert!(BehaviorPolicy::new(2, 2, vec![0.5, 0.5]).is_err());
        let mdp = two_state_chain();
        let wrong = BehaviorPolicy::new(1, 1, vec![1.0]).unwrap();
        assert!(stationary_distribution(&mdp, &wrong).is_err());
    }

    #[test]
    fn empirical_sampling_requires_data() {
        let m = crate::replay::StratifiedReplayMemory::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            empirical_sampling_distribution(&m, &mut rng, 10),
            Err(OracleError::Replay(ReplayError::Empty))
        ));
        let mut m = m;
        m.insert(Transition::new(0, 0, 0.0, 1, false));
        let e = empirical_sampling_distribution(&m, &mut rng, 10).unwrap();
        assert_eq!(e.slot_frequencies(), BTreeMap::from([(0, 1.0)]));
    }

    #[test]
    fn report_is_deterministic() {
        let mdp = make_frozenlake();
        let mu = BehaviorPolicy::uniform(&mdp);
        let a = oracle_report(&mdp, &mu).unwrap();
        assert_eq!(a, oracle_report(&mdp, &mu).unwrap());
        assert!(a.starts_with("# env frozenlake\n"));
    }
}
