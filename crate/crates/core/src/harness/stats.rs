use statrs::distribution::{ContinuousCDF, StudentsT};

use super::{HarnessError, TrialResult};

/// Area under a learning curve, normalized by its x-span so it reads as the
/// average evaluation return. A single point's AUC is its value.
pub fn normalized_auc(trial: &TrialResult) -> f64 {
    let pts = &trial.points;
    match pts.len() {
        0 => 0.0,
        1 => pts[0].eval_return,
        _ => {
            let area: f64 = pts
                .windows(2)
                .map(|w| {
                    (w[1].env_step - w[0].env_step) as f64 * 0.5 * (w[0].eval_return + w[1].eval_return)
                })
                .sum();
            area / (pts[pts.len() - 1].env_step - pts[0].env_step) as f64
        }
    }
}

/// Across-seed statistics of a set of learning curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub env_steps: Vec<usize>,
    pub mean: Vec<f64>,
    /// Sample standard deviation (n − 1); zero for a single trial.
    pub std: Vec<f64>,
    pub sem: Vec<f64>,
    /// One entry per trial, in input order.
    pub auc: Vec<f64>,
    pub num_trials: usize,
}

impl Summary {
    pub fn from_trials(trials: &[TrialResult]) -> Result<Self, HarnessError> {
        let first = trials
            .first()
            .ok_or_else(|| HarnessError::Config("cannot summarize zero trials".into()))?;
        let env_steps: Vec<usize> = first.points.iter().map(|p| p.env_step).collect();
        for t in trials {
            if t.points.iter().map(|p| p.env_step).ne(env_steps.iter().copied()) {
                return Err(HarnessError::Config(format!(
                    "seed {} has a different evaluation grid",
                    t.seed
                )));
            }
        }
        let n = trials.len() as f64;
        let mut mean = Vec::with_capacity(env_steps.len());
        let mut std = Vec::with_capacity(env_steps.len());
        for i in 0..env_steps.len() {
            let values: Vec<f64> = trials.iter().map(|t| t.points[i].eval_return).collect();
            let (m, s) = mean_std(&values);
            mean.push(m);
            std.push(s);
        }
        let sem = std.iter().map(|s| s / n.sqrt()).collect();
        Ok(Self {
            env_steps,
            mean,
            std,
            sem,
            auc: trials.iter().map(normalized_auc).collect(),
            num_trials: trials.len(),
        })
    }

    pub fn mean_auc(&self) -> f64 {
        mean_std(&self.auc).0
    }
}

/// Mean and sample standard deviation (zero for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WelchTest {
    pub t: f64,
    pub df: f64,
    /// One-sided p-value for `mean(a) > mean(b)`.
    pub p_greater: f64,
}

impl WelchTest {
    /// One-sided p-value for `mean(a) < mean(b)`.
    pub fn p_less(&self) -> f64 {
        1.0 - self.p_greater
    }
}

/// Welch's unequal-variance t-test of `a` against `b`.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchTest, HarnessError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(HarnessError::Config("Welch's test needs two samples per group".into()));
    }
    let (ma, sa) = mean_std(a);
    let (mb, sb) = mean_std(b);
    let va = sa * sa / a.len() as f64;
    let vb = sb * sb / b.len() as f64;
    let se2 = va + vb;
    if se2 == 0.0 {
        let p = if ma > mb {
            0.0
        } else if ma < mb {
            1.0
        } else {
            0.5
        };
        let t = if ma == mb { 0.0 } else { (ma - mb).signum() * f64::INFINITY };
        return Ok(WelchTest {
            t,
            df: f64::INFINITY,
            p_greater: p,
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / (va * va / (a.len() as f64 - 1.0) + vb * vb / (b.len() as f64 - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(WelchTest {
        t,
        df,
        p_greater: 1.0 - dist.cdf(t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{CurvePoint, RunLabel};

    fn trial(seed: u64, values: &[(usize, f64)]) -> TrialResult {
        TrialResult {
            label: RunLabel::new("taxi", "uniform", "dqn"),
            seed,
            points: values
                .iter()
                .map(|&(env_step, eval_return)| CurvePoint {
                    env_step,
                    eval_return,
                })
                .collect(),
        }
    }

    #[test]
    fn single_trial_summary() {
        let t = trial(0, &[(0, 1.0), (10, 3.0)]);
        let s = Summary::from_trials(&[t]).unwrap();
        assert_eq!(s.mean, vec![1.0, 3.0]);
        assert_eq!(s.std, vec![0.0, 0.0]);
        assert_eq!(s.auc, vec![2.0]);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = trial(0, &[(0, 1.0), (10, 3.0)]);
        let b = trial(1, &[(0, 1.0), (5, 3.0)]);
        assert!(Summary::from_trials(&[a, b]).is_err());
    }

    #[test]
    fn auc_trapezoid() {
        let t = trial(0, &[(0, 0.0), (10, 10.0), (30, 10.0)]);
        // (50 + 200) / 30
        assert!((normalized_auc(&t) - 250.0 / 30.0).abs() < 1e-12);
    }

    #[test]
    fn welch_matches_hand_computation() {
        // a: mean 2, var 1; b: mean 1, var 1; n = 3 each.
        // t = 1 / sqrt(2/3), df = (2/3)^2 / (2 * (1/3)^2 / 2) = 4.
        let a = [1.0, 2.0, 3.0];
        let b = [0.0, 1.0, 2.0];
        let w = welch_t_test(&a, &b).unwrap();
        assert!((w.t - 1.224744871391589).abs() < 1e-12);
        assert!((w.df - 4.0).abs() < 1e-12);
        // Closed-form t_4 CDF: 1/2 + t (t² + 6) / (2 (t² + 4)^{3/2}).
        let t = w.t;
        let cdf4 = 0.5 + (t * (6.0 + t * t)) / (2.0 * (4.0 + t * t).powf(1.5));
        assert!((cdf4 - 0.8560679326366546).abs() < 1e-12);
        assert!((w.p_greater - (1.0 - cdf4)).abs() < 1e-9);
        assert!((w.p_less() - cdf4).abs() < 1e-9);
    }

    #[test]
    fn welch_degenerate_variances() {
        let w = welch_t_test(&[1.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(w.p_greater, 0.0);
        assert!(welch_t_test(&[1.0], &[0.0, 1.0]).is_err());
    }
}
