use alloc::vec;
use alloc::vec::Vec;

use super::env::{argmax, LinearEnv};
use super::linalg::{dot, Mat};
use super::{ArmBounds, BanditError, Policy};

/// Disjoint LinUCB: one ridge model per arm with `A = I + Σ x xᵀ`. With a
/// bound table the index is truncated at the arm's upper bound.
#[derive(Debug, Clone)]
pub struct LinUcb {
    alpha: f64,
    a: Vec<Mat>,
    a_inv: Vec<Mat>,
    b: Vec<Vec<f64>>,
    bounds: Option<ArmBounds>,
}

impl LinUcb {
    pub fn new(n_arms: usize, dim: usize, alpha: f64, bounds: Option<ArmBounds>) -> Self {
        LinUcb {
            alpha,
            a: vec![Mat::identity(dim); n_arms],
            a_inv: vec![Mat::identity(dim); n_arms],
            b: vec![vec![0.0; dim]; n_arms],
            bounds,
        }
    }

    pub fn design(&self, arm: usize) -> &Mat {
        &self.a[arm]
    }

    pub fn theta_hat(&self, arm: usize) -> Vec<f64> {
        self.a_inv[arm].mul_vec(&self.b[arm])
    }

    pub fn predict(&self, x: &[f64], arm: usize) -> f64 {
        dot(&self.theta_hat(arm), x)
    }

    /// Index of `arm` at features `x`, before truncation.
    pub fn ucb(&self, x: &[f64], arm: usize) -> f64 {
        self.predict(x, arm) + self.alpha * libm::sqrt(self.a_inv[arm].quad_form(x).max(0.0))
    }

    pub fn indices(&self, env: &LinearEnv, context: usize) -> Vec<f64> {
        (0..self.a.len())
            .map(|arm| {
                let ucb = self.ucb(env.features(context, arm), arm);
                match self.bounds.as_ref().and_then(|b| b.informative_upper(context, arm)) {
                    Some(u) => ucb.min(u),
                    None => ucb,
                }
            })
            .collect()
    }

    fn observe(&mut self, x: &[f64], arm: usize, reward: f64, weight: f64) {
        self.a[arm].add_outer(x, weight);
        self.a_inv[arm].sherman_morrison(x, weight);
        for (bi, xi) in self.b[arm].iter_mut().zip(x) {
            *bi += weight * reward * xi;
        }
    }

    /// Adds `n0` pseudo-observations per (context, arm) with reward equal to
    /// the estimate.
    pub fn warm_start(&mut self, env: &LinearEnv, estimates: &[Vec<f64>], n0: u32) -> Result<(), BanditError> {
        if estimates.len() != env.n_contexts() || estimates.iter().any(|r| r.len() != env.n_arms()) {
            return Err(BanditError::Shape("warm-start estimates must cover every context and arm"));
        }
        if estimates.iter().flatten().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(BanditError::OutOfRange("warm-start estimate"));
        }
        if n0 == 0 {
            return Ok(());
        }
        for (c, row) in estimates.iter().enumerate() {
            for (arm, est) in row.iter().enumerate() {
                self.observe(env.features(c, arm), arm, *est, f64::from(n0));
            }
        }
        Ok(())
    }
}

impl Policy for LinUcb {
    fn choose(&mut self, env: &LinearEnv, context: usize) -> usize {
        argmax(&self.indices(env, context))
    }

    fn update(&mut self, env: &LinearEnv, context: usize, arm: usize, reward: f64) {
        self.observe(env.features(context, arm), arm, reward, 1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_arm_env() -> LinearEnv {
        LinearEnv::new(
            vec![1.0],
            vec![vec![0.3, 0.6]],
            vec![vec![vec![1.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]]],
        )
        .unwrap()
    }

    #[test]
    fn truncation_is_a_min() {
        let env = two_arm_env();
        let b = ArmBounds::from_fn(1, 2, |_, a| if a == 0 { (0.0, 0.5) } else { (0.0, 1.0) });
        let p = LinUcb::new(2, 3, 1.0, Some(b));
        let idx = p.indices(&env, 0);
        assert!(p.ucb(env.features(0, 0), 0) > 0.9);
        assert_eq!(idx[0], 0.5);
        assert_eq!(idx[1], p.ucb(env.features(0, 1), 1));
    }

    #[test]
    fn ties_go_to_the_lowest_arm() {
        let env = two_arm_env();
        let mut p = LinUcb::new(2, 3, 0.0, None);
        assert_eq!(p.choose(&env, 0), 0);
    }

    #[test]
    fn warm_start_moves_prediction_toward_estimate() {
        let env = two_arm_env();
        let x = env.features(0, 1).to_vec();
        let mut p = LinUcb::new(2, 3, 1.0, None);
        let before = p.predict(&x, 1);
        p.warm_start(&env, &[vec![0.3, 0.6]], 1).unwrap();
        let after = p.predict(&x, 1);
        assert!((after - 0.6).abs() < (before - 0.6).abs());

        let mut q = LinUcb::new(2, 3, 1.0, None);
        q.warm_start(&env, &[vec![0.3, 0.6]], 0).unwrap();
        assert_eq!(q.theta_hat(1), [0.0; 3]);
        assert!(q.warm_start(&env, &[vec![0.3, 1.2]], 5).is_err());
    }
}
