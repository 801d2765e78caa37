//! Online learning with prior causal bounds: UCB, disjoint LinUCB and
//! optimal allocation matching, each with an optional bound table that
//! truncates its index.

pub mod allocation;
pub mod env;
pub mod linalg;
pub mod linucb;
pub mod oam;
pub mod runner;
pub mod ucb;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bounds::{BoundTable, BoundsError};

pub use allocation::{solve_allocation, Allocation, AllocationConfig};
pub use env::LinearEnv;
pub use linucb::LinUcb;
pub use oam::{Oam, OamConfig};
pub use runner::{aggregate, run_experiment, run_replication, Aggregate, RunResult};
pub use ucb::Ucb;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BanditError {
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    #[error("{0} outside [0, 1]")]
    OutOfRange(&'static str),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Per (context, arm) interval on the mean reward. A side is informative
/// only when it is strictly inside (0, 1); trivial sides never touch an index.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmBounds {
    n_contexts: usize,
    n_arms: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ArmBounds {
    pub fn from_fn(n_contexts: usize, n_arms: usize, mut f: impl FnMut(usize, usize) -> (f64, f64)) -> Self {
        let mut lower = Vec::with_capacity(n_contexts * n_arms);
        let mut upper = Vec::with_capacity(n_contexts * n_arms);
        for c in 0..n_contexts {
            for a in 0..n_arms {
                let (l, u) = f(c, a);
                lower.push(l);
                upper.push(u);
            }
        }
        ArmBounds { n_contexts, n_arms, lower, upper }
    }

    pub fn trivial(n_contexts: usize, n_arms: usize) -> Self {
        Self::from_fn(n_contexts, n_arms, |_, _| (0.0, 1.0))
    }

    pub fn from_table(t: &BoundTable) -> Self {
        Self::from_fn(t.n_contexts(), t.n_arms(), |c, a| {
            let e = t.entry(c, a);
            (e.lower, e.upper)
        })
    }

    /// `[truth, truth]` for every cell.
    pub fn exact(env: &LinearEnv) -> Self {
        Self::from_fn(env.n_contexts(), env.n_arms(), |c, a| (env.mean(c, a), env.mean(c, a)))
    }

    /// Bounds on context-averaged means, for non-contextual policies.
    pub fn marginal(&self, context_probs: &[f64]) -> Self {
        Self::from_fn(1, self.n_arms, |_, a| {
            let mut l = 0.0;
            let mut u = 0.0;
            for (c, p) in context_probs.iter().enumerate() {
                l += p * self.lower(c, a);
                u += p * self.upper(c, a);
            }
            (l, u.min(1.0))
        })
    }

    pub fn n_contexts(&self) -> usize {
        self.n_contexts
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    pub fn lower(&self, context: usize, arm: usize) -> f64 {
        self.lower[context * self.n_arms + arm]
    }

    pub fn upper(&self, context: usize, arm: usize) -> f64 {
        self.upper[context * self.n_arms + arm]
    }

    pub fn informative_upper(&self, context: usize, arm: usize) -> Option<f64> {
        let u = self.upper(context, arm);
        (u < 1.0).then_some(u)
    }

    pub fn informative_lower(&self, context: usize, arm: usize) -> Option<f64> {
        let l = self.lower(context, arm);
        (l > 0.0).then_some(l)
    }

    /// `min(v, U)` then `max(·, L)`, skipping trivial sides.
    pub fn clip(&self, context: usize, arm: usize, v: f64) -> f64 {
        let mut v = v;
        if let Some(u) = self.informative_upper(context, arm) {
            v = v.min(u);
        }
        if let Some(l) = self.informative_lower(context, arm) {
            v = v.max(l);
        }
        v
    }

    /// Arms in `context` whose upper bound falls below some other arm's lower
    /// bound, and so cannot be optimal.
    pub fn dominated(&self, context: usize, arm: usize) -> bool {
        let best_lower = (0..self.n_arms).map(|b| self.lower(context, b)).fold(0.0, f64::max);
        self.upper(context, arm) < best_lower
    }

    fn check(&self, env: &LinearEnv, contextual: bool) -> Result<(), BanditError> {
        let m = if contextual { env.n_contexts() } else { 1 };
        if self.n_contexts != m || self.n_arms != env.n_arms() {
            return Err(BanditError::Shape("bound table does not match the environment"));
        }
        Ok(())
    }
}

/// Per-branch round counts reported by a policy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub init: u64,
    pub exploit: u64,
    pub wasted: u64,
    pub forced: u64,
    pub unwasted: u64,
    pub fallback: u64,
    pub solves: u64,
}

impl Diagnostics {
    pub fn add(&mut self, o: &Diagnostics) {
        self.init += o.init;
        self.exploit += o.exploit;
        self.wasted += o.wasted;
        self.forced += o.forced;
        self.unwasted += o.unwasted;
        self.fallback += o.fallback;
        self.solves += o.solves;
    }
}

pub trait Policy {
    /// Contextual policies are scored against the best arm of each context,
    /// the others against the best arm on average.
    fn contextual(&self) -> bool {
        true
    }

    fn choose(&mut self, env: &LinearEnv, context: usize) -> usize;

    fn update(&mut self, env: &LinearEnv, context: usize, arm: usize, reward: f64);

    fn diagnostics(&self) -> Diagnostics {
        Diagnostics::default()
    }
}

/// Always plays the best arm of the drawn context.
#[derive(Debug, Clone, Copy, Default)]
pub struct OraclePolicy;

impl Policy for OraclePolicy {
    fn choose(&mut self, env: &LinearEnv, context: usize) -> usize {
        env.best_arm(context)
    }

    fn update(&mut self, _: &LinearEnv, _: usize, _: usize, _: f64) {}
}

/// Pseudo-observations injected before the first round.
#[derive(Debug, Clone, PartialEq)]
pub struct WarmStart {
    /// Estimated mean per context (outer) and arm (inner).
    pub estimates: Vec<Vec<f64>>,
    pub n0: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolicyKind {
    Oracle,
    Ucb { bounds: Option<ArmBounds>, delta: Option<f64> },
    LinUcb { alpha: f64, bounds: Option<ArmBounds>, warm: Option<WarmStart> },
    Oam { bounds: Option<ArmBounds>, config: OamConfig },
}

/// A named recipe for building a fresh policy per replication.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicySpec {
    pub name: String,
    pub kind: PolicyKind,
}

impl PolicySpec {
    pub fn new(name: &str, kind: PolicyKind) -> Self {
        PolicySpec { name: String::from(name), kind }
    }

    pub fn oracle() -> Self {
        Self::new("oracle", PolicyKind::Oracle)
    }

    pub fn linucb(alpha: f64) -> Self {
        Self::new("linucb", PolicyKind::LinUcb { alpha, bounds: None, warm: None })
    }

    pub fn linucb_pcb(alpha: f64, bounds: ArmBounds) -> Self {
        Self::new("linucb-pcb", PolicyKind::LinUcb { alpha, bounds: Some(bounds), warm: None })
    }

    pub fn linucb_warm(name: &str, alpha: f64, warm: WarmStart) -> Self {
        Self::new(name, PolicyKind::LinUcb { alpha, bounds: None, warm: Some(warm) })
    }

    pub fn ucb() -> Self {
        Self::new("ucb", PolicyKind::Ucb { bounds: None, delta: None })
    }

    pub fn ucb_pcb(bounds: ArmBounds) -> Self {
        Self::new("ucb-pcb", PolicyKind::Ucb { bounds: Some(bounds), delta: None })
    }

    pub fn oam(config: OamConfig) -> Self {
        Self::new("oam", PolicyKind::Oam { bounds: None, config })
    }

    pub fn oam_pcb(config: OamConfig, bounds: ArmBounds) -> Self {
        Self::new("oam-pcb", PolicyKind::Oam { bounds: Some(bounds), config })
    }

    pub fn build(&self, env: &LinearEnv, horizon: usize) -> Result<Box<dyn Policy>, BanditError> {
        Ok(match &self.kind {
            PolicyKind::Oracle => Box::new(OraclePolicy),
            PolicyKind::Ucb { bounds, delta } => {
                if let Some(b) = bounds {
                    b.check(env, false)?;
                }
                let delta = delta.unwrap_or(1.0 / (horizon.max(2) as f64 * horizon.max(2) as f64));
                Box::new(Ucb::new(env.n_arms(), delta, bounds.clone()))
            }
            PolicyKind::LinUcb { alpha, bounds, warm } => {
                if let Some(b) = bounds {
                    b.check(env, true)?;
                }
                let mut p = LinUcb::new(env.n_arms(), env.dim(), *alpha, bounds.clone());
                if let Some(w) = warm {
                    p.warm_start(env, &w.estimates, w.n0)?;
                }
                Box::new(p)
            }
            PolicyKind::Oam { bounds, config } => {
                if let Some(b) = bounds {
                    b.check(env, true)?;
                }
                Box::new(Oam::new(env, horizon, config.clone(), bounds.clone()))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_ignores_trivial_sides() {
        let b = ArmBounds::from_fn(1, 3, |_, a| [(0.0, 1.0), (0.2, 0.5), (0.0, 0.5)][a]);
        assert_eq!(b.clip(0, 0, 1.7), 1.7);
        assert_eq!(b.clip(0, 1, 0.9), 0.5);
        assert_eq!(b.clip(0, 1, -0.3), 0.2);
        assert_eq!(b.clip(0, 2, 0.9), 0.5);
        assert_eq!(b.informative_lower(0, 2), None);
    }

    #[test]
    fn dominance_and_marginal() {
        let b = ArmBounds::from_fn(2, 2, |c, a| if a == 0 { (0.6, 0.8) } else { (0.1 * c as f64, 0.5) });
        assert!(b.dominated(0, 1) && !b.dominated(0, 0));
        let m = b.marginal(&[0.5, 0.5]);
        assert_eq!(m.n_contexts(), 1);
        assert!((m.lower(0, 1) - 0.05).abs() < 1e-12);
        assert!((m.upper(0, 0) - 0.8).abs() < 1e-12);
    }
}
