use alloc::vec;
use alloc::vec::Vec;

use super::env::{argmax, LinearEnv};
use super::{ArmBounds, Policy};

/// Non-contextual UCB with width `√(2 log(1/δ) / N)`. With a bound table (one
/// context row) the index is clipped into `[L, U]`, and an unpulled arm's
/// index is `U` instead of infinity.
#[derive(Debug, Clone)]
pub struct Ucb {
    log_inv_delta: f64,
    counts: Vec<u64>,
    sums: Vec<f64>,
    bounds: Option<ArmBounds>,
}

impl Ucb {
    pub fn new(n_arms: usize, delta: f64, bounds: Option<ArmBounds>) -> Self {
        Ucb { log_inv_delta: -libm::log(delta), counts: vec![0; n_arms], sums: vec![0.0; n_arms], bounds }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn index(&self, arm: usize) -> f64 {
        let n = self.counts[arm];
        let raw = if n == 0 {
            f64::INFINITY
        } else {
            self.sums[arm] / n as f64 + libm::sqrt(2.0 * self.log_inv_delta / n as f64)
        };
        match &self.bounds {
            Some(b) => b.clip(0, arm, raw),
            None => raw,
        }
    }
}

impl Policy for Ucb {
    fn contextual(&self) -> bool {
        false
    }

    fn choose(&mut self, _: &LinearEnv, _: usize) -> usize {
        let idx: Vec<f64> = (0..self.counts.len()).map(|a| self.index(a)).collect();
        argmax(&idx)
    }

    fn update(&mut self, _: &LinearEnv, _: usize, arm: usize, reward: f64) {
        self.counts[arm] += 1;
        self.sums[arm] += reward;
    }
}
