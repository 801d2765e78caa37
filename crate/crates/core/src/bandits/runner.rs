use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BanditError, Diagnostics, LinearEnv, PolicySpec};

/// One replication. Rewards are realized draws; regret is the expected
/// shortfall of the chosen arm (pseudo-regret).
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub policy: String,
    pub seed: u64,
    pub replication: u64,
    pub contexts: Vec<u16>,
    pub arms: Vec<u16>,
    pub rewards: Vec<u8>,
    pub regret: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl RunResult {
    pub fn final_regret(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// Pull counts per context (outer) and arm (inner).
    pub fn pulls(&self, n_contexts: usize, n_arms: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; n_arms]; n_contexts];
        for (c, a) in self.contexts.iter().zip(&self.arms) {
            out[*c as usize][*a as usize] += 1;
        }
        out
    }
}

/// Stream `replication` of the master seed. Every policy sees the same
/// contexts and reward uniforms in a given replication.
pub fn replication_rng(master_seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replication);
    rng
}

pub fn run_replication(
    env: &LinearEnv,
    spec: &PolicySpec,
    horizon: usize,
    master_seed: u64,
    replication: u64,
) -> Result<RunResult, BanditError> {
    let mut policy = spec.build(env, horizon)?;
    let mut rng = replication_rng(master_seed, replication);
    let contextual = policy.contextual();
    let marginal = env.marginal_means();
    let best_marginal = marginal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = RunResult {
        policy: spec.name.clone(),
        seed: master_seed,
        replication,
        contexts: Vec::with_capacity(horizon),
        arms: Vec::with_capacity(horizon),
        rewards: Vec::with_capacity(horizon),
        regret: Vec::with_capacity(horizon),
        cumulative: Vec::with_capacity(horizon),
        diagnostics: Diagnostics::default(),
    };
    let mut total = 0.0;
    for _ in 0..horizon {
        let c = env.draw_context(rng.random::<f64>());
        let u: f64 = rng.random();
        let a = policy.choose(env, c);
        let r = env.reward(c, a, u);
        policy.update(env, c, a, r);
        let inst = if contextual { env.gap(c, a) } else { best_marginal - marginal[a] };
        total += inst;
        out.contexts.push(c as u16);
        out.arms.push(a as u16);
        out.rewards.push(r as u8);
        out.regret.push(inst);
        out.cumulative.push(total);
    }
    out.diagnostics = policy.diagnostics();
    Ok(out)
}

/// Mean cumulative regret curve with its standard error across replications.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub policy: String,
    pub horizon: usize,
    pub replications: usize,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub finals: Vec<f64>,
    /// Summed pull counts per context (outer) and arm (inner).
    pub pulls: Vec<Vec<u64>>,
    pub diagnostics: Diagnostics,
}

impl Aggregate {
    pub fn final_mean(&self) -> f64 {
        self.mean.last().copied().unwrap_or(0.0)
    }

    pub fn final_stderr(&self) -> f64 {
        self.stderr.last().copied().unwrap_or(0.0)
    }
}

/// Reduces replications in the order given.
pub fn aggregate(env: &LinearEnv, results: &[RunResult]) -> Aggregate {
    let n = results.len();
    let horizon = results.first().map_or(0, |r| r.cumulative.len());
    let mut mean = vec![0.0; horizon];
    let mut sq = vec![0.0; horizon];
    let mut pulls = vec![vec![0u64; env.n_arms()]; env.n_contexts()];
    let mut diagnostics = Diagnostics::default();
    for r in results {
        for (t, v) in r.cumulative.iter().enumerate() {
            mean[t] += v;
            sq[t] += v * v;
        }
        for (row, add) in pulls.iter_mut().zip(r.pulls(env.n_contexts(), env.n_arms())) {
            for (p, q) in row.iter_mut().zip(add) {
                *p += q;
            }
        }
        diagnostics.add(&r.diagnostics);
    }
    let nf = n as f64;
    let stderr = (0..horizon)
        .map(|t| {
            mean[t] /= nf;
            if n < 2 {
                return 0.0;
            }
            let var = ((sq[t] - nf * mean[t] * mean[t]) / (nf - 1.0)).max(0.0);
            libm::sqrt(var / nf)
        })
        .collect();
    Aggregate {
        policy: results.first().map(|r| r.policy.clone()).unwrap_or_default(),
        horizon,
        replications: n,
        mean,
        stderr,
        finals: results.iter().map(RunResult::final_regret).collect(),
        pulls,
        diagnostics,
    }
}

/// Replications `0..replications` run in order.
pub fn run_experiment(
    env: &LinearEnv,
    spec: &PolicySpec,
    horizon: usize,
    replications: usize,
    master_seed: u64,
) -> Result<Aggregate, BanditError> {
    let runs = (0..replications as u64)
        .map(|r| run_replication(env, spec, horizon, master_seed, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate(env, &runs))
}
