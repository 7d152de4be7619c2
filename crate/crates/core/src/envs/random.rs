use rand::seq::index;
use rand::Rng;

use super::{EnvError, Outcome, TabularMdp};

/// Seeded random MDP without terminal states. Each `(s, a)` has `branching`
/// distinct successors whose probabilities are normalized draws from
/// `[1, 2)`, keeping every listed successor probability at least
/// `1 / (2 * branching)`. Rewards are uniform in `[-1, 1]`; the initial
/// distribution is uniform.
pub fn make_random_mdp<R: Rng + ?Sized>(
    rng: &mut R,
    num_states: usize,
    num_actions: usize,
    branching: usize,
) -> Result<TabularMdp, EnvError> {
    if num_states == 0 || num_actions == 0 || branching == 0 {
        return Err(EnvError::InvalidSize(
            "states, actions and branching must be at least 1".into(),
        ));
    }
    if branching > num_states {
        return Err(EnvError::InvalidSize(format!(
            "branching {branching} exceeds {num_states} states"
        )));
    }
    let mut model = Vec::with_capacity(num_states * num_actions);
    for _ in 0..num_states * num_actions {
        let successors = index::sample(rng, num_states, branching).into_vec();
        let weights: Vec<f64> = (0..branching).map(|_| rng.gen_range(1.0..2.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut entries: Vec<Outcome> = successors
            .into_iter()
            .zip(&weights)
            .map(|(next_state, w)| Outcome {
                prob: w / total,
                next_state,
                reward: rng.gen_range(-1.0..=1.0),
                terminal: false,
            })
            .collect();
        // Put the rounding residue on one entry so each row sums to one.
        let residue = 1.0 - entries.iter().map(|e| e.prob).sum::<f64>();
        entries[0].prob += residue;
        model.push(entries);
    }
    let initial = vec![1.0 / num_states as f64; num_states];
    TabularMdp::new("random", num_states, num_actions, model, initial, 0.9, 100)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn branching_one_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mdp = make_random_mdp(&mut rng, 6, 3, 1).unwrap();
        for s in 0..6 {
            for a in 0..3 {
                assert_eq!(mdp.outcomes(s, a).len(), 1);
                assert_eq!(mdp.outcomes(s, a)[0].prob, 1.0);
            }
        }
    }

    #[test]
    fn same_seed_same_model() {
        let a = make_random_mdp(&mut ChaCha8Rng::seed_from_u64(7), 5, 2, 2).unwrap();
        let b = make_random_mdp(&mut ChaCha8Rng::seed_from_u64(7), 5, 2, 2).unwrap();
        let c = make_random_mdp(&mut ChaCha8Rng::seed_from_u64(8), 5, 2, 2).unwrap();
        let rows = |m: &TabularMdp| -> Vec<Outcome> {
            (0..5)
                .flat_map(|s| (0..2).map(move |a| (s, a)))
                .flat_map(|(s, a)| m.outcomes(s, a).to_vec())
                .collect()
        };
        assert_eq!(rows(&a), rows(&b));
        assert_ne!(rows(&a), rows(&c));
    }

    #[test]
    fn rows_are_distributions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mdp = make_random_mdp(&mut rng, 8, 3, 4).unwrap();
        for s in 0..8 {
            for a in 0..3 {
                let o = mdp.outcomes(s, a);
                assert_eq!(o.len(), 4);
                assert!((o.iter().map(|e| e.prob).sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(o.iter().all(|e| (-1.0..=1.0).contains(&e.reward)));
            }
        }
    }

    #[test]
    fn invalid_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(make_random_mdp(&mut rng, 0, 2, 1).is_err());
        assert!(make_random_mdp(&mut rng, 3, 2, 4).is_err());
        assert!(make_random_mdp(&mut rng, 3, 2, 0).is_err());
    }
}
