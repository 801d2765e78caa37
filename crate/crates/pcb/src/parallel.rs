use pcb_core::bandits::{aggregate, run_replication, Aggregate, BanditError, LinearEnv, PolicySpec};
use rayon::prelude::*;

/// Same result as the sequential runner: replications are independent
/// streams and the reduction runs in replication order.
pub fn run_experiment_par(
    env: &LinearEnv,
    spec: &PolicySpec,
    horizon: usize,
    replications: usize,
    master_seed: u64,
) -> Result<Aggregate, BanditError> {
    let runs = (0..replications as u64)
        .into_par_iter()
        .map(|r| run_replication(env, spec, horizon, master_seed, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate(env, &runs))
}
