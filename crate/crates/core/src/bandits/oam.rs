use alloc::vec;
use alloc::vec::Vec;

use super::allocation::{solve_allocation, AllocationConfig};
use super::env::{argmax, LinearEnv};
use super::linalg::{dot, Mat};
use super::{ArmBounds, Diagnostics, Policy};

#[derive(Debug, Clone, PartialEq)]
pub struct OamConfig {
    /// Constant `c` in `f_{n,δ}`.
    pub c: f64,
    /// Ridge of the shared design matrix.
    pub lambda: f64,
    /// Forced-exploration rate `ε_t = epsilon / t`.
    pub epsilon: f64,
    /// Rounds between allocation re-solves.
    pub resolve_every: u64,
    /// Lower floor on the smallest estimated gap.
    pub gap_floor: f64,
    pub allocation: AllocationConfig,
}

impl Default for OamConfig {
    fn default() -> Self {
        OamConfig {
            c: 1.0,
            lambda: 1.0,
            epsilon: 0.5,
            resolve_every: 100,
            gap_floor: 1e-3,
            allocation: AllocationConfig { max_iter: 2_000, ..AllocationConfig::default() },
        }
    }
}

/// `f_{n,δ} = 2(1 + 1/log n) log(1/δ) + c·d·log(d·log n)`.
pub fn f_n_delta(n: usize, delta: f64, c: f64, d: usize) -> f64 {
    let ln_n = libm::log(n.max(3) as f64);
    let d = d as f64;
    2.0 * (1.0 + 1.0 / ln_n) * -libm::log(delta) + c * d * libm::log(d * ln_n)
}

const ZERO_GAP: f64 = 1e-9;

/// Optimal allocation matching on a shared linear model. Bounds clip the
/// exploitation estimate and truncate the exploration UCB; arms that bounds
/// rule out are dropped from the allocation and from exploration.
#[derive(Debug, Clone)]
pub struct Oam {
    cfg: OamConfig,
    horizon: usize,
    f_n: f64,
    g_inv: Mat,
    b: Vec<f64>,
    n_arms: usize,
    counts: Vec<u64>,
    t: u64,
    s: u64,
    targets: Option<Vec<f64>>,
    solved_at: u64,
    bounds: Option<ArmBounds>,
    diag: Diagnostics,
}

impl Oam {
    pub fn new(env: &LinearEnv, horizon: usize, cfg: OamConfig, bounds: Option<ArmBounds>) -> Self {
        let d = env.dim();
        let n = horizon.max(3);
        Oam {
            f_n: f_n_delta(n, 1.0 / n as f64, cfg.c, d),
            g_inv: Mat::scaled_identity(d, 1.0 / cfg.lambda),
            b: vec![0.0; d],
            n_arms: env.n_arms(),
            counts: vec![0; env.n_contexts() * env.n_arms()],
            t: 0,
            s: 0,
            targets: None,
            solved_at: 0,
            horizon,
            cfg,
            bounds,
            diag: Diagnostics::default(),
        }
    }

    pub fn f_n(&self) -> f64 {
        self.f_n
    }

    fn allowed(&self, c: usize, a: usize) -> bool {
        self.bounds.as_ref().map_or(true, |b| !b.dominated(c, a))
    }

    fn clip(&self, c: usize, a: usize, v: f64) -> f64 {
        self.bounds.as_ref().map_or(v, |b| b.clip(c, a, v))
    }

    fn truncate(&self, c: usize, a: usize, v: f64) -> f64 {
        match self.bounds.as_ref().and_then(|b| b.informative_upper(c, a)) {
            Some(u) => v.min(u),
            None => v,
        }
    }

    fn count(&self, c: usize, a: usize) -> u64 {
        self.counts[c * self.n_arms + a]
    }

    /// Highest score among allowed arms, ties to the lowest index.
    fn best_allowed(&self, c: usize, score: impl Fn(usize) -> f64) -> usize {
        let v: Vec<f64> =
            (0..self.n_arms).map(|a| if self.allowed(c, a) { score(a) } else { f64::NEG_INFINITY }).collect();
        argmax(&v)
    }

    fn truncated_ucb(&self, env: &LinearEnv, c: usize, theta: &[f64]) -> usize {
        let s = self.s.max(1) as f64;
        let width = libm::sqrt(f_n_delta(self.horizon.max(3), 1.0 / (s * s), self.cfg.c, env.dim()));
        self.best_allowed(c, |a| {
            let x = env.features(c, a);
            let ucb = dot(theta, x) + width * libm::sqrt(self.g_inv.quad_form(x).max(0.0));
            self.truncate(c, a, ucb)
        })
    }

    /// Clipped estimates and their gaps for every (context, arm).
    fn gaps(&self, env: &LinearEnv, theta: &[f64]) -> (Vec<f64>, f64) {
        let (m, k) = (env.n_contexts(), self.n_arms);
        let mut gaps = vec![f64::NAN; m * k];
        let mut min_gap = f64::INFINITY;
        for c in 0..m {
            let est: Vec<f64> = (0..k).map(|a| self.clip(c, a, dot(theta, env.features(c, a)))).collect();
            let best = (0..k).filter(|&a| self.allowed(c, a)).map(|a| est[a]).fold(f64::NEG_INFINITY, f64::max);
            for a in 0..k {
                if self.allowed(c, a) {
                    let g = best - est[a];
                    gaps[c * k + a] = if g <= ZERO_GAP { 0.0 } else { g };
                    if g > ZERO_GAP {
                        min_gap = min_gap.min(g);
                    }
                }
            }
        }
        if !min_gap.is_finite() {
            min_gap = self.cfg.gap_floor;
        }
        (gaps, min_gap.max(self.cfg.gap_floor))
    }

    fn solve(&mut self, env: &LinearEnv, gaps: &[f64], min_gap: f64) {
        let k = self.n_arms;
        let mut feats = Vec::new();
        let mut g = Vec::new();
        let mut slots = Vec::new();
        for (i, gap) in gaps.iter().enumerate() {
            if gap.is_nan() {
                continue;
            }
            feats.push(env.features(i / k, i % k).to_vec());
            g.push(if *gap > 0.0 { gap.max(min_gap) } else { 0.0 });
            slots.push(i);
        }
        self.diag.solves += 1;
        let alloc = solve_allocation(&feats, &g, self.f_n, &self.cfg.allocation);
        self.solved_at = self.t;
        if !alloc.converged {
            self.targets = None;
            return;
        }
        let mut targets = vec![0.0; gaps.len()];
        for (slot, w) in slots.into_iter().zip(alloc.weights) {
            targets[slot] = w;
        }
        self.targets = Some(targets);
    }
}

impl Policy for Oam {
    fn choose(&mut self, env: &LinearEnv, c: usize) -> usize {
        self.t += 1;
        let k = self.n_arms;
        if let Some(a) = (0..k).find(|&a| self.allowed(c, a) && self.count(c, a) == 0) {
            self.diag.init += 1;
            return a;
        }
        let theta = self.g_inv.mul_vec(&self.b);
        let (gaps, min_gap) = self.gaps(env, &theta);

        let exploit = (0..k).filter(|&a| self.allowed(c, a)).all(|a| {
            let g = gaps[c * k + a];
            self.g_inv.quad_form(env.features(c, a)) <= min_gap.max(g).powi(2) / self.f_n
        });
        if exploit {
            self.diag.exploit += 1;
            return self.best_allowed(c, |a| self.clip(c, a, dot(&theta, env.features(c, a))));
        }

        let s_prev = self.s;
        self.s += 1;
        let stale = self.diag.solves == 0 || self.t - self.solved_at >= self.cfg.resolve_every;
        if stale {
            self.solve(env, &gaps, min_gap);
        }
        let Some(targets) = self.targets.as_ref() else {
            // last solve did not converge; wait for the next one
            self.diag.fallback += 1;
            return self.truncated_ucb(env, c, &theta);
        };
        let level = self.f_n / (min_gap * min_gap);
        let cap = |a: usize| targets[c * k + a].min(level);
        let allowed: Vec<usize> = (0..k).filter(|&a| self.allowed(c, a)).collect();
        if allowed.iter().all(|&a| self.count(c, a) as f64 >= cap(a)) {
            self.diag.wasted += 1;
            return self.truncated_ucb(env, c, &theta);
        }
        let ratio = |a: usize| {
            let cap = cap(a);
            if cap > 0.0 {
                self.count(c, a) as f64 / cap
            } else {
                f64::INFINITY
            }
        };
        let b1 = self.best_allowed(c, |a| -ratio(a));
        let b2 = self.best_allowed(c, |a| -(self.count(c, a) as f64));
        let eps = self.cfg.epsilon / self.t as f64;
        if self.count(c, b2) as f64 <= eps * s_prev as f64 {
            self.diag.forced += 1;
            b2
        } else {
            self.diag.unwasted += 1;
            b1
        }
    }

    fn update(&mut self, env: &LinearEnv, c: usize, a: usize, reward: f64) {
        let x = env.features(c, a);
        self.g_inv.sherman_morrison(x, 1.0);
        for (bi, xi) in self.b.iter_mut().zip(x) {
            *bi += reward * xi;
        }
        self.counts[c * self.n_arms + a] += 1;
    }

    fn diagnostics(&self) -> Diagnostics {
        self.diag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_n_matches_formula() {
        let n = 15_000usize;
        let ln_n = libm::log(n as f64);
        let want = 2.0 * (1.0 + 1.0 / ln_n) * ln_n + 5.0 * libm::log(5.0 * ln_n);
        assert!((f_n_delta(n, 1.0 / n as f64, 1.0, 5) - want).abs() < 1e-12);
    }

    #[test]
    fn every_arm_is_tried_first() {
        let env = LinearEnv::new(
            vec![1.0],
            vec![vec![0.2, 0.8, 0.5]],
            vec![vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]],
        )
        .unwrap();
        let mut p = Oam::new(&env, 100, OamConfig::default(), None);
        for want in 0..3 {
            let a = p.choose(&env, 0);
            assert_eq!(a, want);
            p.update(&env, 0, a, 1.0);
        }
        assert_eq!(p.diagnostics().init, 3);
    }
}
