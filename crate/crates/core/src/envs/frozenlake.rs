use super::{merge_outcomes, Outcome, TabularMdp};

const MAP: [&[u8; 4]; 4] = [b"SFFF", b"FHFH", b"FFFH", b"HFFG"];

pub const LEFT: usize = 0;
pub const DOWN: usize = 1;
pub const RIGHT: usize = 2;
pub const UP: usize = 3;

fn cell(s: usize) -> u8 {
    MAP[s / 4][s % 4]
}

fn moved(s: usize, action: usize) -> usize {
    let (row, col) = (s / 4, s % 4);
    let (row, col) = match action {
        LEFT => (row, col.saturating_sub(1)),
        DOWN => ((row + 1).min(3), col),
        RIGHT => (row, (col + 1).min(3)),
        UP => (row.saturating_sub(1), col),
        _ => unreachable!("frozenlake has four actions"),
    };
    row * 4 + col
}

/// The slippery 4x4 FrozenLake: the intended move and both perpendicular
/// moves each happen with probability 1/3. Reaching G pays 1; holes and the
/// goal end the episode. Step limit 100.
pub fn make_frozenlake() -> TabularMdp {
    let num_states = 16;
    let num_actions = 4;
    let mut model = Vec::with_capacity(num_states * num_actions);
    for s in 0..num_states {
        for a in 0..num_actions {
            let entries = if matches!(cell(s), b'H' | b'G') {
                vec![Outcome {
                    prob: 1.0,
                    next_state: s,
                    reward: 0.0,
                    terminal: true,
                }]
            } else {
                [(a + 3) % 4, a, (a + 1) % 4]
                    .into_iter()
                    .map(|dir| {
                        let next = moved(s, dir);
                        Outcome {
                            prob: 1.0 / 3.0,
                            next_state: next,
                            reward: if cell(next) == b'G' { 1.0 } else { 0.0 },
                            terminal: matches!(cell(next), b'H' | b'G'),
                        }
                    })
                    .collect()
            };
            model.push(merge_outcomes(entries));
        }
    }
    let mut initial = vec![0.0; num_states];
    initial[0] = 1.0;
    TabularMdp::new("frozenlake", num_states, num_actions, model, initial, 0.99, 100)
        .expect("frozenlake model is valid")
}
