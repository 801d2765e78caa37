//! c-factor decomposition, identification of sub-c-factors, and recovery of
//! c-factors from selection-biased distributions.

use alloc::vec::Vec;

use crate::estimand::Estimand;
use crate::graph::{CausalGraph, GraphError, NodeId, NodeSet};

use super::BoundPair;

/// A (possibly unnormalized) distribution over `vars`. Variables referenced
/// by `expr` outside `vars` act as fixed parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    pub expr: Estimand,
    pub vars: NodeSet,
}

impl Dist {
    /// `P(vars | S=1)` over the given observed variables.
    pub fn biased(vars: NodeSet) -> Dist {
        Dist { expr: Estimand::prob(vars, NodeSet::EMPTY), vars }
    }

    /// `P(vars)` with no selection conditioning.
    pub fn unbiased(vars: NodeSet) -> Dist {
        Dist { expr: Estimand::Prob { vars, cond: NodeSet::EMPTY, biased: false }, vars }
    }

    pub fn marginal(&self, keep: NodeSet) -> Dist {
        let keep = keep.intersection(self.vars);
        Dist { expr: Estimand::sum(self.vars.difference(keep), self.expr.clone()).simplify(), vars: keep }
    }

    /// Conditional of `target` given `given`; members of `given` outside
    /// `vars` are parameters and are not summed.
    pub fn conditional(&self, target: NodeSet, given: NodeSet) -> Estimand {
        let num = self.marginal(target.union(given));
        let den = self.marginal(given);
        Estimand::quotient(num.expr, den.expr).simplify()
    }
}

/// Topological order of `g` with the ancestors of `first` placed before every
/// other node. Ancestral sets are closed under parents, so the result is still
/// topological.
pub(crate) fn order_with_prefix(g: &CausalGraph, first: NodeSet) -> Vec<NodeId> {
    let topo = g.topological_order();
    let mut out: Vec<NodeId> = topo.iter().copied().filter(|v| first.contains(*v)).collect();
    out.extend(topo.iter().copied().filter(|v| !first.contains(*v)));
    out
}

/// c-factor of `comp` from `dist`, which must factorize according to `g`
/// restricted to `dist.vars`. Each term conditions on the smallest set the
/// graph allows; when `selection` is present the reduced set is used only if it
/// also separates the term from the selection node.
pub(crate) fn c_factor(dist: &Dist, g: &CausalGraph, comp: NodeSet, order: &[NodeId], selection: Option<NodeId>) -> Estimand {
    let mut prefix = NodeSet::EMPTY;
    let mut factors = Vec::new();
    for &v in order {
        if !dist.vars.contains(v) {
            continue;
        }
        if comp.contains(v) {
            let here = prefix.with(v);
            let t = g.c_component_of(v, here);
            let mut cond = t.union(g.parents_of_set(t)).intersection(prefix);
            if let Some(s) = selection {
                let ok = g
                    .d_separated(NodeSet::singleton(v), NodeSet::singleton(s), cond)
                    .unwrap_or(false);
                if !ok {
                    cond = prefix;
                }
            }
            factors.push(dist.conditional(NodeSet::singleton(v), cond));
        }
        prefix.insert(v);
    }
    Estimand::Product(factors).simplify()
}

/// Expresses the c-factor `Q[c]` through `Q[t]`, where `c ⊆ t` and `t` is a
/// c-component; `None` when `Q[c]` is not identifiable from `Q[t]`.
pub fn identify(c: NodeSet, t: NodeSet, q_t: &Dist, g: &CausalGraph) -> Option<Estimand> {
    let gt = g.induced(t);
    let a = gt.ancestors(c).ok()?;
    if a == c {
        return Some(q_t.marginal(c).expr);
    }
    if a == t {
        return None;
    }
    let q_a = q_t.marginal(a);
    let ga = g.induced(a);
    let first = c.first()?;
    let t2 = ga.c_component_of(first, a);
    if !c.is_subset(t2) {
        return None;
    }
    let order = ga.topological_order();
    let q_t2 = Dist { expr: c_factor(&q_a, &ga, t2, &order, None), vars: t2 };
    identify(c, t2, &q_t2, g)
}

/// `D` is the ancestral closure of `y ∪ c` once `x` is removed, and the
/// components are the c-components of the graph induced by `D`.
pub fn q_decompose(g: &CausalGraph, x: NodeSet, y: NodeSet, c: NodeSet) -> Result<(NodeSet, Vec<NodeSet>), GraphError> {
    if !x.is_disjoint(y) || !x.is_disjoint(c) || !y.is_disjoint(c) {
        return Err(GraphError::OverlappingSets);
    }
    let sub = g.induced(g.observed().difference(x));
    let d = sub.ancestors(y.union(c))?;
    Ok((d, g.induced(d).c_components()))
}

/// Recovers `Q[e]` from `dist` (a distribution conditioned on selection) or
/// returns the trivial pair when the recursion finds no recoverable
/// component.
pub fn rc_star(e: NodeSet, dist: &Dist, g: &CausalGraph) -> BoundPair {
    let mut g = g.clone();
    let mut dist = dist.clone();
    loop {
        let sel = g.selection_set();
        let keep = match g.ancestors(e.union(sel)) {
            Ok(k) => k,
            Err(_) => return BoundPair::trivial(),
        };
        if keep != g.nodes() {
            dist = dist.marginal(keep);
            g = g.induced(keep);
        }
        let an_s = g.ancestors(sel).unwrap_or(NodeSet::EMPTY);
        let recoverable: Vec<NodeSet> = g.c_components().into_iter().filter(|c| c.is_disjoint(an_s)).collect();
        if recoverable.is_empty() {
            return BoundPair::trivial();
        }
        let order = order_with_prefix(&g, an_s);
        let s = g.selection();
        if let Some(&ci) = recoverable.iter().find(|ci| e.is_subset(**ci)) {
            let q = Dist { expr: c_factor(&dist, &g, ci, &order, s), vars: ci };
            return match identify(e, ci, &q, &g) {
                Some(expr) => BoundPair::point(expr.simplify()),
                None => BoundPair::trivial(),
            };
        }
        let removed = recoverable.iter().fold(NodeSet::EMPTY, |acc, c| acc.union(*c));
        let qs: Vec<Estimand> = recoverable.iter().map(|ci| c_factor(&dist, &g, *ci, &order, s)).collect();
        dist = Dist {
            expr: Estimand::quotient(dist.expr, Estimand::Product(qs)).simplify(),
            vars: dist.vars.difference(removed),
        };
        g = g.induced(g.nodes().difference(removed));
    }
}
