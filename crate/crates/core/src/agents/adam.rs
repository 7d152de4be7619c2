use super::AgentError;

/// Adam optimizer state with bias-corrected moment estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    m: Vec<f64>,
    v: Vec<f64>,
    t: u64,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamState {
    pub fn new(num_params: usize, lr: f64, beta1: f64, beta2: f64, eps: f64) -> Self {
        Self {
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            t: 0,
            lr,
            beta1,
            beta2,
            eps,
        }
    }

    /// Standard settings (β1 = 0.9, β2 = 0.999, ε = 1e-8).
    pub fn with_lr(num_params: usize, lr: f64) -> Self {
        Self::new(num_params, lr, 0.9, 0.999, 1e-8)
    }

    pub fn steps(&self) -> u64 {
        self.t
    }

    pub fn step(&mut self, theta: &mut [f64], grad: &[f64]) -> Result<(), AgentError> {
        if theta.len() != self.m.len() || grad.len() != self.m.len() {
            return Err(AgentError::ShapeMismatch {
                expected: self.m.len(),
                got: if theta.len() != self.m.len() { theta.len() } else { grad.len() },
            });
        }
        self.t += 1;
        let inv_bc1 = 1.0 / (1.0 - self.beta1.powi(self.t as i32));
        let inv_bc2 = 1.0 / (1.0 - self.beta2.powi(self.t as i32));
        let (b1, b2, lr, eps) = (self.beta1, self.beta2, self.lr, self.eps);
        for (((p, g), m), v) in theta.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            *p -= lr * (*m * inv_bc1) / ((*v * inv_bc2).sqrt() + eps);
        }
        Ok(())
    }
}
