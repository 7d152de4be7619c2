use std::io::{BufRead, Write};

use rand::Rng;

use super::{check_transition, AgentError, DifferentiableQ, QFunction};
use crate::replay::Transition;

/// Two-hidden-layer tanh MLP with a linear output head, parameters stored in
/// one flat vector: `W1 b1 W2 b2 W3 b3`, each weight matrix row-major
/// `[out][in]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: [usize; 4],
    theta: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    w1: usize,
    b1: usize,
    w2: usize,
    b2: usize,
    w3: usize,
    b3: usize,
    len: usize,
}

impl Layout {
    fn new([n_in, h1, h2, n_out]: [usize; 4]) -> Self {
        let w1 = 0;
        let b1 = w1 + h1 * n_in;
        let w2 = b1 + h1;
        let b2 = w2 + h2 * h1;
        let w3 = b2 + h2;
        let b3 = w3 + n_out * h2;
        Self {
            w1,
            b1,
            w2,
            b2,
            w3,
            b3,
            len: b3 + n_out,
        }
    }
}

/// Dot product with four independent accumulators so the loop vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    let mut acc = [0.0; 4];
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Hidden activations of one forward pass.
struct Activations {
    h1: Vec<f64>,
    h2: Vec<f64>,
}

impl Mlp {
    /// All-zero network.
    pub fn zeros(sizes: [usize; 4]) -> Result<Self, AgentError> {
        if sizes.contains(&0) {
            return Err(AgentError::InvalidConfig(format!(
                "layer sizes must be positive, got {sizes:?}"
            )));
        }
        Ok(Self {
            sizes,
            theta: vec![0.0; Layout::new(sizes).len],
        })
    }

    /// Glorot-uniform weights, zero biases.
    pub fn init<R: Rng + ?Sized>(sizes: [usize; 4], rng: &mut R) -> Result<Self, AgentError> {
        let mut net = Self::zeros(sizes)?;
        let l = net.layout();
        let mut fill = |start: usize, fan_in: usize, fan_out: usize| {
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            for w in &mut net.theta[start..start + fan_in * fan_out] {
                *w = rng.gen_range(-limit..limit);
            }
        };
        fill(l.w1, sizes[0], sizes[1]);
        fill(l.w2, sizes[1], sizes[2]);
        fill(l.w3, sizes[2], sizes[3]);
        Ok(net)
    }

    pub fn from_params(sizes: [usize; 4], theta: Vec<f64>) -> Result<Self, AgentError> {
        let mut net = Self::zeros(sizes)?;
        if theta.len() != net.theta.len() {
            return Err(AgentError::ShapeMismatch {
                expected: net.theta.len(),
                got: theta.len(),
            });
        }
        net.theta = theta;
        Ok(net)
    }

    fn layout(&self) -> Layout {
        Layout::new(self.sizes)
    }

    /// `[input, hidden1, hidden2, output]`.
    pub fn sizes(&self) -> [usize; 4] {
        self.sizes
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    /// Overwrites this network's parameters with `other`'s.
    pub fn copy_from(&mut self, other: &Mlp) -> Result<(), AgentError> {
        if self.sizes != other.sizes {
            return Err(AgentError::ShapeMismatch {
                expected: self.theta.len(),
                got: other.theta.len(),
            });
        }
        self.theta.copy_from_slice(&other.theta);
        Ok(())
    }

    /// Forward pass on an arbitrary input vector.
    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>, AgentError> {
        if x.len() != self.sizes[0] {
            return Err(AgentError::ShapeMismatch {
                expected: self.sizes[0],
                got: x.len(),
            });
        }
        let l = self.layout();
        let [n_in, h1, _, _] = self.sizes;
        let z1: Vec<f64> = (0..h1)
            .map(|i| {
                let row = &self.theta[l.w1 + i * n_in..l.w1 + (i + 1) * n_in];
                self.theta[l.b1 + i] + dot(row, x)
            })
            .collect();
        let acts = self.hidden_from_preactivation(z1);
        Ok(self.head(&acts))
    }

    /// Forward pass on the one-hot encoding of `state`.
    pub fn forward_state(&self, state: usize) -> Vec<f64> {
        self.head(&self.activations_state(state))
    }

    fn activations_state(&self, state: usize) -> Activations {
        let l = self.layout();
        let [n_in, h1, _, _] = self.sizes;
        let z1 = (0..h1)
            .map(|i| self.theta[l.b1 + i] + self.theta[l.w1 + i * n_in + state])
            .collect();
        self.hidden_from_preactivation(z1)
    }

    fn hidden_from_preactivation(&self, mut z1: Vec<f64>) -> Activations {
        let l = self.layout();
        let [_, h1, h2, _] = self.sizes;
        z1.iter_mut().for_each(|z| *z = z.tanh());
        let h2v = (0..h2)
            .map(|i| {
                let row = &self.theta[l.w2 + i * h1..l.w2 + (i + 1) * h1];
                (self.theta[l.b2 + i] + dot(row, &z1)).tanh()
            })
            .collect();
        Activations { h1: z1, h2: h2v }
    }

    fn head(&self, acts: &Activations) -> Vec<f64> {
        let l = self.layout();
        let [_, _, h2, n_out] = self.sizes;
        (0..n_out)
            .map(|k| {
                let row = &self.theta[l.w3 + k * h2..l.w3 + (k + 1) * h2];
                self.theta[l.b3 + k] + dot(row, &acts.h2)
            })
            .collect()
    }

    /// Adds `scale * ∂Q(state, action)/∂θ` into `grad`.
    fn backprop_state(&self, state: usize, action: usize, acts: &Activations, scale: f64, grad: &mut [f64]) {
        let l = self.layout();
        let [n_in, h1, h2, _] = self.sizes;
        grad[l.b3 + action] += scale;
        let w3_row = l.w3 + action * h2;
        let mut dz2 = vec![0.0; h2];
        for j in 0..h2 {
            grad[w3_row + j] += scale * acts.h2[j];
            dz2[j] = scale * self.theta[w3_row + j] * (1.0 - acts.h2[j] * acts.h2[j]);
        }
        let mut dh1 = vec![0.0; h1];
        for i in 0..h2 {
            let d = dz2[i];
            grad[l.b2 + i] += d;
            let row = l.w2 + i * h1..l.w2 + (i + 1) * h1;
            for (g, &x) in grad[row.clone()].iter_mut().zip(&acts.h1) {
                *g += d * x;
            }
            for (acc, &w) in dh1.iter_mut().zip(&self.theta[row]) {
                *acc += d * w;
            }
        }
        for i in 0..h1 {
            let dz1 = dh1[i] * (1.0 - acts.h1[i] * acts.h1[i]);
            grad[l.b1 + i] += dz1;
            grad[l.w1 + i * n_in + state] += dz1;
        }
    }

    /// Text checkpoint: a `mlp <in> <h1> <h2> <out>` header, then one
    /// parameter per line in layout order.
    pub fn write_checkpoint<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let [a, b, c, d] = self.sizes;
        writeln!(w, "mlp {a} {b} {c} {d}")?;
        for v in &self.theta {
            writeln!(w, "{v}")?;
        }
        Ok(())
    }

    pub fn read_checkpoint<R: BufRead>(r: R) -> Result<Self, AgentError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| AgentError::Checkpoint("empty input".into()))?
            .map_err(|e| AgentError::Checkpoint(e.to_string()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "mlp" {
            return Err(AgentError::Checkpoint(format!("bad header `{header}`")));
        }
        let mut sizes = [0usize; 4];
        for (slot, f) in sizes.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|_| AgentError::Checkpoint(format!("bad layer size `{f}`")))?;
        }
        let theta = lines
            .map(|l| {
                let l = l.map_err(|e| AgentError::Checkpoint(e.to_string()))?;
                l.trim()
                    .parse::<f64>()
                    .map_err(|_| AgentError::Checkpoint(format!("bad parameter `{l}`")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        Self::from_params(sizes, theta).map_err(|e| AgentError::Checkpoint(e.to_string()))
    }
}

impl QFunction for Mlp {
    fn num_states(&self) -> usize {
        self.sizes[0]
    }

    fn num_actions(&self) -> usize {
        self.sizes[3]
    }

    fn q_values(&self, s: usize) -> Vec<f64> {
        self.forward_state(s)
    }
}

impl DifferentiableQ for Mlp {
    fn params(&self) -> &[f64] {
        &self.theta
    }

    fn accumulate_grad_q(&self, s: usize, a: usize, scale: f64, out: &mut [f64]) {
        let acts = self.activations_state(s);
        self.backprop_state(s, a, &acts, scale, out);
    }
}

/// Semi-gradient of `(1/m) Σ ½δ²` with respect to the online parameters,
/// holding the target network's bootstrap term constant, together with the
/// loss value itself.
pub fn mlp_td_gradient_with_loss<T: QFunction + ?Sized>(
    net: &Mlp,
    target_net: &T,
    batch: &[Transition],
    gamma: f64,
) -> Result<(Vec<f64>, f64), AgentError> {
    if batch.is_empty() {
        return Err(AgentError::EmptyBatch);
    }
    let m = batch.len() as f64;
    let mut grad = vec![0.0; net.theta.len()];
    let mut loss = 0.0;
    let l = net.layout();
    let h2 = net.sizes[2];
    for t in batch {
        check_transition(t, net)?;
        check_transition(t, target_net)?;
        let (s, a) = (t.state as usize, t.action as usize);
        let acts = net.activations_state(s);
        let q = net.theta[l.b3 + a] + dot(&net.theta[l.w3 + a * h2..l.w3 + (a + 1) * h2], &acts.h2);
        let bootstrap = if t.terminal {
            0.0
        } else {
            gamma * target_net.max_q(t.next_state as usize)
        };
        let delta = t.reward + bootstrap - q;
        loss += 0.5 * delta * delta;
        net.backprop_state(s, a, &acts, -delta / m, &mut grad);
    }
    Ok((grad, loss / m))
}

/// `-(1/m) Σ δ ∇θ Q(s, a; θ)`.
pub fn mlp_td_gradient<T: QFunction + ?Sized>(
    net: &Mlp,
    target_net: &T,
    batch: &[Transition],
    gamma: f64,
) -> Result<Vec<f64>, AgentError> {
    mlp_td_gradient_with_loss(net, target_net, batch, gamma).map(|(g, _)| g)
}
