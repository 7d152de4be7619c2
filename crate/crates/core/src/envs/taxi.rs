use super::{merge_outcomes, Outcome, TabularMdp};

const MAP: [&[u8; 11]; 7] = [
    b"+---------+",
    b"|R: | : :G|",
    b"| : | : : |",
    b"| : : : : |",
    b"| | : | : |",
    b"|Y| : |B: |",
    b"+---------+",
];

/// Pickup/dropoff landmarks R, G, Y, B as `(row, col)`.
pub const LANDMARKS: [(usize, usize); 4] = [(0, 0), (0, 4), (4, 0), (4, 3)];

/// Passenger location index meaning "inside the taxi".
pub const IN_TAXI: usize = 4;

pub const SOUTH: usize = 0;
pub const NORTH: usize = 1;
pub const EAST: usize = 2;
pub const WEST: usize = 3;
pub const PICKUP: usize = 4;
pub const DROPOFF: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaxiState {
    pub row: usize,
    pub col: usize,
    /// 0..4 for a landmark, [`IN_TAXI`] when riding.
    pub passenger: usize,
    pub destination: usize,
}

impl TaxiState {
    pub fn encode(&self) -> usize {
        ((self.row * 5 + self.col) * 5 + self.passenger) * 4 + self.destination
    }

    pub fn decode(mut s: usize) -> Self {
        let destination = s % 4;
        s /= 4;
        let passenger = s % 5;
        s /= 5;
        let col = s % 5;
        let row = s / 5;
        Self {
            row,
            col,
            passenger,
            destination,
        }
    }
}

fn taxi_successor(state: TaxiState, action: usize) -> (TaxiState, f64, bool) {
    let mut next = state;
    let mut reward = -1.0;
    let mut terminal = false;
    let here = (state.row, state.col);
    match action {
        SOUTH => next.row = (state.row + 1).min(4),
        NORTH => next.row = state.row.saturating_sub(1),
        EAST if MAP[1 + state.row][2 * state.col + 2] == b':' => next.col = (state.col + 1).min(4),
        WEST if MAP[1 + state.row][2 * state.col] == b':' => next.col = state.col.saturating_sub(1),
        EAST | WEST => {}
        PICKUP => {
            if state.passenger < IN_TAXI && here == LANDMARKS[state.passenger] {
                next.passenger = IN_TAXI;
            } else {
                reward = -10.0;
            }
        }
        DROPOFF => {
            if state.passenger == IN_TAXI && here == LANDMARKS[state.destination] {
                next.passenger = state.destination;
                reward = 20.0;
                terminal = true;
            } else if let Some(loc) = LANDMARKS.iter().position(|&l| l == here) {
                if state.passenger == IN_TAXI {
                    next.passenger = loc;
                } else {
                    reward = -10.0;
                }
            } else {
                reward = -10.0;
            }
        }
        _ => unreachable!("taxi has six actions"),
    }
    (next, reward, terminal)
}

/// The 5x5 Taxi domain: 500 states, 6 actions (south, north, east, west,
/// pickup, dropoff), deterministic dynamics, step limit 200.
pub fn make_taxi() -> TabularMdp {
    let num_states = 500;
    let num_actions = 6;
    let mut model = Vec::with_capacity(num_states * num_actions);
    let mut initial = vec![0.0; num_states];
    for s in 0..num_states {
        let st = TaxiState::decode(s);
        if st.passenger < IN_TAXI && st.passenger != st.destination {
            initial[s] = 1.0;
        }
        for a in 0..num_actions {
            let (next, reward, terminal) = taxi_successor(st, a);
            model.push(merge_outcomes(vec![Outcome {
                prob: 1.0,
                next_state: next.encode(),
                reward,
                terminal,
            }]));
        }
    }
    let starts = initial.iter().sum::<f64>();
    initial.iter_mut().for_each(|p| *p /= starts);
    TabularMdp::new("taxi", num_states, num_actions, model, initial, 0.99, 200)
        .expect("taxi model is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sizes() {
        let mdp = make_taxi();
        assert_eq!(mdp.num_states(), 25 * 5 * 4);
        assert_eq!(mdp.num_actions(), 6);
        assert_eq!(mdp.step_limit(), 200);
    }

    #[test]
    fn deterministic_dynamics() {
        let mdp = make_taxi();
        for s in 0..500 {
            for a in 0..6 {
                let o = mdp.outcomes(s, a);
                assert_eq!(o.len(), 1);
                assert_eq!(o[0].prob, 1.0);
            }
        }
    }

    #[test]
    fn three_hundred_uniform_start_states() {
        let mdp = make_taxi();
        let support: Vec<usize> = (0..500)
            .filter(|&s| mdp.initial_distribution()[s] > 0.0)
            .collect();
        assert_eq!(support.len(), 300);
        for &s in &support {
            let st = TaxiState::decode(s);
            assert!(st.passenger < IN_TAXI && st.passenger != st.destination);
            assert!((mdp.initial_distribution()[s] - 1.0 / 300.0).abs() < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let st = TaxiState::decode(mdp.reset(&mut rng).state());
            assert!(st.passenger < IN_TAXI && st.passenger != st.destination);
        }
    }

    #[test]
    fn encoding_round_trips() {
        for s in 0..500 {
            assert_eq!(TaxiState::decode(s).encode(), s);
        }
    }

    // Spot checks against the reference environment's transition table.
    #[test]
    fn reference_transitions() {
        let mdp = make_taxi();
        let at = |row, col, passenger, destination| {
            TaxiState {
                row,
                col,
                passenger,
                destination,
            }
            .encode()
        };
        // Wall between columns 1 and 2 on row 0.
        let o = mdp.outcomes(at(0, 1, 0, 1), EAST)[0];
        assert_eq!((o.next_state, o.reward), (at(0, 1, 0, 1), -1.0));
        // Open move east on row 2.
        assert_eq!(mdp.outcomes(at(2, 1, 0, 1), EAST)[0].next_state, at(2, 2, 0, 1));
        // Wall west of column 1 on row 3.
        assert_eq!(mdp.outcomes(at(3, 1, 0, 1), WEST)[0].next_state, at(3, 1, 0, 1));
        // Legal pickup at R.
        let o = mdp.outcomes(at(0, 0, 0, 1), PICKUP)[0];
        assert_eq!((o.next_state, o.reward, o.terminal), (at(0, 0, IN_TAXI, 1), -1.0, false));
        // Illegal pickup.
        assert_eq!(mdp.outcomes(at(1, 1, 0, 1), PICKUP)[0].reward, -10.0);
        // Successful dropoff at G.
        let o = mdp.outcomes(at(0, 4, IN_TAXI, 1), DROPOFF)[0];
        assert_eq!((o.next_state, o.reward, o.terminal), (at(0, 4, 1, 1), 20.0, true));
        // Dropoff at the wrong landmark leaves the passenger there.
        let o = mdp.outcomes(at(4, 3, IN_TAXI, 1), DROPOFF)[0];
        assert_eq!((o.next_state, o.reward, o.terminal), (at(4, 3, 3, 1), -1.0, false));
        // Dropoff off-landmark.
        assert_eq!(mdp.outcomes(at(2, 2, IN_TAXI, 1), DROPOFF)[0].reward, -10.0);
        // Known encoded index from the reference: row 3, col 1, passenger 2, dest 0.
        assert_eq!(at(3, 1, 2, 0), 328);
    }
}
