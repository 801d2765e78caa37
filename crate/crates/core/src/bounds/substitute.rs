//! Bounds through substitute interventions: a larger, recoverable
//! intervention `do(x, w)` whose values over `w` bracket the target effect.

use alloc::vec::Vec;

use crate::estimand::{Estimand, Extremum};
use crate::graph::{CausalGraph, GraphError, NodeSet};

/// How a candidate set `W` licenses its bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// `P_x(y, c | w) = P_{x,w}(y, c)` and `P_{x,w}(y, c)` is recovered by
    /// adjustment over `adjustment`; the bracket is divided by `P(c)`.
    Exchange,
    /// `P_x(y | c, w) = P(y | x, c, w, S=1)`, so the conditional effect is a
    /// mixture of those terms over `w`.
    Conditional,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstituteCandidate {
    pub w: NodeSet,
    pub route: Route,
    pub adjustment: NodeSet,
}

impl SubstituteCandidate {
    /// The quantity bracketed by min/max over `w`, before division by `P(c)`
    /// for the exchange route.
    pub fn body(&self, x: NodeSet, y: NodeSet, c: NodeSet) -> Estimand {
        match self.route {
            Route::Conditional => Estimand::prob(y, x.union(c).union(self.w)),
            Route::Exchange => {
                let z = self.adjustment;
                let term = Estimand::Product(alloc::vec![
                    Estimand::prob(y.union(c), x.union(self.w).union(z)),
                    Estimand::prob(z, NodeSet::EMPTY),
                ]);
                Estimand::sum(z, term).simplify()
            }
        }
    }

    pub fn lower(&self, x: NodeSet, y: NodeSet, c: NodeSet) -> Estimand {
        Estimand::extremum(Extremum::Min, self.w, self.body(x, y, c))
    }

    pub fn upper(&self, x: NodeSet, y: NodeSet, c: NodeSet) -> Estimand {
        Estimand::extremum(Extremum::Max, self.w, self.body(x, y, c))
    }

    pub fn divides_by_context(&self) -> bool {
        self.route == Route::Exchange
    }
}

/// Whether observing `w` may replace intervening on it for the `targets`
/// under `do(x)`: `targets ⫫ w ∪ {S} | x` once edges into `x` and out of `w`
/// are removed.
pub fn rule2_holds(g: &CausalGraph, targets: NodeSet, w: NodeSet, x: NodeSet) -> Result<bool, GraphError> {
    let m = g.mutilate(x, w)?;
    m.d_separated(targets, w.union(g.selection_set()), x)
}

/// `Y ⫫ X | C ∪ W` with the edges out of `X` removed, and `Y ⫫ S | X ∪ C ∪ W`.
fn conditional_route_ok(g: &CausalGraph, x: NodeSet, y: NodeSet, c: NodeSet, w: NodeSet) -> Result<bool, GraphError> {
    let cw = c.union(w);
    if !g.mutilate(NodeSet::EMPTY, x)?.d_separated(y, x, cw)? {
        return Ok(false);
    }
    let sel = g.selection_set();
    if sel.is_empty() {
        return Ok(true);
    }
    g.d_separated(y, sel, x.union(cw))
}

/// Smallest adjustment set (up to `k_max` members, lexicographic within a
/// size) recovering `P_{x}(y)` from selection-biased data.
pub fn find_adjustment(g: &CausalGraph, x: NodeSet, y: NodeSet, k_max: usize) -> Result<Option<NodeSet>, GraphError> {
    let pool = g.observed().difference(g.descendants(x)?).difference(y);
    for k in 0..=k_max.min(pool.len()) {
        for z in pool.subsets_of_size(k) {
            if g.selection_adjustment_ok(x, y, z)? {
                return Ok(Some(z));
            }
        }
    }
    Ok(None)
}

/// Candidate sets `W` of up to `k_max` observed nodes outside `x ∪ y ∪ c`, in
/// increasing size and then lexicographic order.
pub fn find_rsi(g: &CausalGraph, x: NodeSet, y: NodeSet, c: NodeSet, k_max: usize) -> Result<Vec<SubstituteCandidate>, GraphError> {
    let pool = g.observed().difference(x.union(y).union(c));
    let yc = y.union(c);
    let mut out = Vec::new();
    for k in 1..=k_max.min(pool.len()) {
        for w in pool.subsets_of_size(k) {
            if rule2_holds(g, yc, w, x)? {
                if let Some(z) = find_adjustment(g, x.union(w), yc, k_max)? {
                    out.push(SubstituteCandidate { w, route: Route::Exchange, adjustment: z });
                    continue;
                }
            }
            if conditional_route_ok(g, x, y, c, w)? {
                out.push(SubstituteCandidate { w, route: Route::Conditional, adjustment: NodeSet::EMPTY });
            }
        }
    }
    Ok(out)
}
