//! Non-causal estimates used as offline comparison points.

use crate::estimand::Estimand;
use crate::graph::{CausalGraph, GraphError, NodeSet};

use super::Query;

/// Naive conditional `P(y | x, c, S=1)`.
pub fn conditional_estimand(query: &Query) -> Estimand {
    Estimand::prob(NodeSet::singleton(query.outcome), query.treatments.union(query.contexts))
}

/// Back-door adjustment that accounts for confounding but ignores selection:
/// `Σ_z P(y | x, c, z, S=1) P(z | c, S=1)` with the smallest `z` (at most
/// `k_max` nodes) making `z ∪ c` an adjustment set once the selection node is
/// dropped. Returns the adjustment set, or `None` when no set qualifies.
pub fn confounding_only(g: &CausalGraph, query: &Query, k_max: usize) -> Result<Option<(NodeSet, Estimand)>, GraphError> {
    let p = g.latent_project();
    let p = p.induced(p.nodes().difference(p.selection_set()));
    let (x, c) = (query.treatments, query.contexts);
    let y = NodeSet::singleton(query.outcome);
    let pool = p.observed().difference(p.descendants(x)?).difference(y.union(c));
    for k in 0..=k_max.min(pool.len()) {
        for z in pool.subsets_of_size(k) {
            if p.generalized_backdoor_ok(x, y, z.union(c))? {
                let e = Estimand::sum(
                    z,
                    Estimand::Product(alloc::vec![Estimand::prob(y, x.union(c).union(z)), Estimand::prob(z, c)]),
                );
                return Ok(Some((z, e.simplify())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn synthetic_confounding_only_reduces_to_conditional() {
        let g = fixtures::synthetic_graph();
        let q = Query::from_names(&g, &["X1", "X2"], "Y", &["U1", "U2"]).unwrap();
        let (z, e) = confounding_only(&g, &q, 2).unwrap().unwrap();
        assert!(z.is_empty());
        assert_eq!(e, conditional_estimand(&q));
    }
}
