//! Bounds on conditional causal effects `P(y | do(x), c)` from
//! selection-biased data, combining c-factor recovery with substitute
//! interventions.

pub mod baseline;
pub mod identify;
pub mod substitute;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::assignment::Assignment;
use crate::estimand::{Estimand, EvalError, Evaluator};
use crate::graph::{CausalGraph, GraphError, NodeId, NodeSet};
use crate::scm::{JointTable, ScmError};

pub use identify::{identify, q_decompose, rc_star, Dist};
pub use substitute::{find_rsi, rule2_holds, Route, SubstituteCandidate};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Scm(#[from] ScmError),
    #[error("context {0} has probability zero")]
    ZeroContext(String),
    #[error("treatments, outcome and contexts must be distinct observed nodes")]
    InvalidQuery,
}

/// Which method produced one side of a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Cfact,
    Substitute,
    Trivial,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Cfact => "cfact",
            Method::Substitute => "substitute",
            Method::Trivial => "trivial",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundPair {
    pub lower: Estimand,
    pub upper: Estimand,
    pub method: Method,
}

impl BoundPair {
    pub fn trivial() -> Self {
        BoundPair { lower: Estimand::Const(0.0), upper: Estimand::Const(1.0), method: Method::Trivial }
    }

    pub fn point(e: Estimand) -> Self {
        BoundPair { lower: e.clone(), upper: e, method: Method::Cfact }
    }

    pub fn is_trivial(&self) -> bool {
        self.method == Method::Trivial
    }
}

/// The effect being bounded: `P(outcome = 1 | do(treatments), contexts)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Query {
    pub treatments: NodeSet,
    pub outcome: NodeId,
    pub contexts: NodeSet,
}

impl Query {
    pub fn from_names(g: &CausalGraph, treatments: &[&str], outcome: &str, contexts: &[&str]) -> Result<Self, GraphError> {
        Ok(Query { treatments: g.node_set(treatments)?, outcome: g.node(outcome)?, contexts: g.node_set(contexts)? })
    }

    fn validate(&self, g: &CausalGraph) -> Result<(), BoundsError> {
        let y = NodeSet::singleton(self.outcome);
        let all = self.treatments.union(self.contexts).union(y);
        let disjoint = self.treatments.is_disjoint(self.contexts) && !all.is_empty() && !self.treatments.contains(self.outcome) && !self.contexts.contains(self.outcome);
        if !disjoint || !all.is_subset(g.observed()) || self.treatments.is_empty() {
            return Err(BoundsError::InvalidQuery);
        }
        Ok(())
    }

    pub fn arms(&self) -> Vec<Assignment> {
        Assignment::grid(self.treatments)
    }

    pub fn context_grid(&self) -> Vec<Assignment> {
        Assignment::grid(self.contexts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BceConfig {
    /// Largest substitute set (and adjustment set) considered.
    pub k_max: usize,
}

impl Default for BceConfig {
    fn default() -> Self {
        BceConfig { k_max: 2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContextSource {
    Model,
    UnbiasedSample,
    Biased,
}

impl ContextSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ContextSource::Model => "model",
            ContextSource::UnbiasedSample => "unbiased-sample",
            ContextSource::Biased => "biased",
        }
    }
}

/// Where `P(c)` comes from.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextMarginal {
    pub source: ContextSource,
    pub table: JointTable,
}

impl ContextMarginal {
    pub fn probability(&self, g: &CausalGraph, ctx: &Assignment) -> Result<f64, BoundsError> {
        let event: Vec<(&str, u8)> = ctx
            .vars()
            .iter()
            .map(|v| (g.name(v), u8::from(ctx.get(v) == Some(true))))
            .collect();
        let p = self.table.probability(&event)?;
        if p <= 0.0 {
            return Err(BoundsError::ZeroContext(ctx.render(g)));
        }
        Ok(p)
    }

    pub fn warning(&self) -> Option<&'static str> {
        (self.source == ContextSource::Biased)
            .then_some("context marginal estimated from selection-biased rows; it is not P(c)")
    }
}

/// Final bound for one (arm, context) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub arm: Assignment,
    pub context: Assignment,
    pub lower: f64,
    pub upper: f64,
    pub lower_src: Method,
    pub upper_src: Method,
    pub lower_estimand: String,
    pub upper_estimand: String,
    /// The c-factor interval before intersection.
    pub cfact: (f64, f64),
    /// The substitute-intervention interval before intersection.
    pub substitute: (f64, f64),
    /// The two intervals were disjoint and the looser one was kept.
    pub crossed: bool,
    /// Some side fell back to its trivial value because a cell was undefined.
    pub widened: bool,
}

impl BoundEntry {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// Bounds over the full arm × context grid, contexts outer and arms inner.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundTable {
    pub query: Query,
    pub entries: Vec<BoundEntry>,
    pub warnings: Vec<String>,
}

impl BoundTable {
    pub fn n_arms(&self) -> usize {
        1 << self.query.treatments.len()
    }

    pub fn n_contexts(&self) -> usize {
        1 << self.query.contexts.len()
    }

    pub fn entry(&self, context: usize, arm: usize) -> &BoundEntry {
        &self.entries[context * self.n_arms() + arm]
    }

    pub fn get(&self, arm: &Assignment, context: &Assignment) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.arm == *arm && e.context == *context)
    }

    /// `[0, 1]` everywhere, for the same grid.
    pub fn trivial(query: Query) -> BoundTable {
        Self::from_fn(query, |_, _| (0.0, 1.0))
    }

    /// Table with the given interval per (context index, arm index).
    pub fn from_fn(query: Query, mut f: impl FnMut(usize, usize) -> (f64, f64)) -> BoundTable {
        let mut entries = Vec::new();
        for (ci, context) in query.context_grid().into_iter().enumerate() {
            for (ai, arm) in query.arms().into_iter().enumerate() {
                let (lower, upper) = f(ci, ai);
                entries.push(BoundEntry {
                    arm,
                    context,
                    lower,
                    upper,
                    lower_src: Method::Trivial,
                    upper_src: Method::Trivial,
                    lower_estimand: format!("{lower}"),
                    upper_estimand: format!("{upper}"),
                    cfact: (0.0, 1.0),
                    substitute: (0.0, 1.0),
                    crossed: false,
                    widened: false,
                });
            }
        }
        BoundTable { query, entries, warnings: Vec::new() }
    }
}

/// Gap below which lower > upper is treated as floating-point noise.
const ROUNDING: f64 = 1e-12;

fn clamp01(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

/// Sums variables other than `allowed` out uniformly. The true value does not
/// depend on them, so any average is exact in the infinite-data limit.
fn average_extras(e: Estimand, allowed: NodeSet) -> Estimand {
    let extras = e.free_vars().difference(allowed);
    if extras.is_empty() {
        return e;
    }
    let w = 1.0 / (1u64 << extras.len()) as f64;
    Estimand::sum(extras, Estimand::Product(alloc::vec![Estimand::Const(w), e]))
}

/// Symbolic part of the bound computation, shared by every (arm, context).
#[derive(Debug, Clone)]
pub struct BcePlan {
    graph: CausalGraph,
    query: Query,
    pub d: NodeSet,
    pub components: Vec<NodeSet>,
    pub factors: Vec<BoundPair>,
    /// Numerators of the c-factor interval; both are divided by `P(c)`.
    pub cfact_lower: Estimand,
    pub cfact_upper: Estimand,
    pub candidates: Vec<SubstituteCandidate>,
    substitutes: Vec<(Estimand, Estimand)>,
}

impl BcePlan {
    pub fn new(g: &CausalGraph, query: Query, config: &BceConfig) -> Result<Self, BoundsError> {
        let p = g.latent_project();
        query.validate(&p)?;
        let (x, c) = (query.treatments, query.contexts);
        let y = NodeSet::singleton(query.outcome);
        let (d, components) = q_decompose(&p, x, y, c)?;
        let base = Dist::biased(p.observed());
        let factors: Vec<BoundPair> = components.iter().map(|comp| rc_star(*comp, &base, &p)).collect();
        let summed = d.difference(y.union(c));
        let allowed = x.union(y).union(c);
        let build = |side: fn(&BoundPair) -> &Estimand| {
            let prod = Estimand::Product(factors.iter().map(|f| side(f).clone()).collect());
            average_extras(Estimand::sum(summed, prod).simplify(), allowed)
        };
        let cfact_lower = build(|f| &f.lower);
        let cfact_upper = build(|f| &f.upper);
        let candidates = find_rsi(&p, x, y, c, config.k_max)?;
        let substitutes = candidates
            .iter()
            .map(|cand| (average_extras(cand.lower(x, y, c), allowed), average_extras(cand.upper(x, y, c), allowed)))
            .collect();
        Ok(BcePlan { graph: p, query, d, components, factors, cfact_lower, cfact_upper, candidates, substitutes })
    }

    /// The latent projection the plan was derived on.
    pub fn graph(&self) -> &CausalGraph {
        &self.graph
    }

    pub fn query(&self) -> Query {
        self.query
    }

    pub fn cfact_is_trivial(&self) -> bool {
        self.factors.iter().all(BoundPair::is_trivial)
    }

    /// Rendered estimands for every part of the plan.
    pub fn explain(&self) -> Vec<String> {
        let g = &self.graph;
        let mut out = Vec::new();
        out.push(format!("D = {{{}}}", g.names_of(self.d).join(", ")));
        for (comp, f) in self.components.iter().zip(&self.factors) {
            let name = g.names_of(*comp).join(", ");
            if f.is_trivial() {
                out.push(format!("Q[{name}] in [0, 1] (not recoverable)"));
            } else {
                out.push(format!("Q[{name}] = {}", f.lower.render(g)));
            }
        }
        out.push(format!("cfact lower = {} / P(c)", self.cfact_lower.render(g)));
        out.push(format!("cfact upper = {} / P(c)", self.cfact_upper.render(g)));
        for (cand, (lo, hi)) in self.candidates.iter().zip(&self.substitutes) {
            let div = if cand.divides_by_context() { " / P(c)" } else { "" };
            out.push(format!("W = {{{}}}: lower = {}{div}", g.names_of(cand.w).join(", "), lo.render(g)));
            out.push(format!("W = {{{}}}: upper = {}{div}", g.names_of(cand.w).join(", "), hi.render(g)));
        }
        out
    }

    /// Bound for one cell; `p_c` is the context probability.
    pub fn evaluate(&self, ev: &Evaluator<'_>, arm: &Assignment, context: &Assignment, p_c: f64) -> BoundEntry {
        let g = &self.graph;
        let at = arm.merge(context).with(self.query.outcome, true);
        let mut widened = false;
        let mut side = |r: Result<f64, EvalError>, scale: f64, fallback: f64| match r {
            Ok(v) => clamp01(v / scale),
            Err(_) => {
                widened = true;
                fallback
            }
        };
        let cf_l = side(ev.evaluate(&self.cfact_lower, &at), p_c, 0.0);
        let cf_u = side(ev.evaluate(&self.cfact_upper, &at), p_c, 1.0);
        let cf_text = |e: &Estimand| {
            if self.cfact_is_trivial() {
                e.render(g)
            } else {
                format!("{} / P(c)", e.render_grouped(g))
            }
        };

        let mut si_l = 0.0;
        let mut si_u = 1.0;
        let mut si_l_text = String::from("0");
        let mut si_u_text = String::from("1");
        for (cand, (lo, hi)) in self.candidates.iter().zip(&self.substitutes) {
            let scale = if cand.divides_by_context() { p_c } else { 1.0 };
            let div = if cand.divides_by_context() { " / P(c)" } else { "" };
            let l = side(ev.evaluate(lo, &at), scale, 0.0);
            let u = side(ev.evaluate(hi, &at), scale, 1.0);
            if l > si_l {
                si_l = l;
                si_l_text = format!("{}{div}", lo.render(g));
            }
            if u < si_u {
                si_u = u;
                si_u_text = format!("{}{div}", hi.render(g));
            }
        }

        let pick_lower = |cf: f64, si: f64| {
            if cf <= 0.0 && si <= 0.0 {
                (0.0, Method::Trivial)
            } else if cf >= si {
                (cf, Method::Cfact)
            } else {
                (si, Method::Substitute)
            }
        };
        let pick_upper = |cf: f64, si: f64| {
            if cf >= 1.0 && si >= 1.0 {
                (1.0, Method::Trivial)
            } else if cf <= si {
                (cf, Method::Cfact)
            } else {
                (si, Method::Substitute)
            }
        };
        let (mut lower, mut lower_src) = pick_lower(cf_l, si_l);
        let (mut upper, mut upper_src) = pick_upper(cf_u, si_u);
        let mut crossed = false;
        if lower > upper && lower - upper <= ROUNDING {
            let mid = 0.5 * (lower + upper);
            lower = mid;
            upper = mid;
        } else if lower > upper {
            crossed = true;
            let (l, u, m) = if cf_u - cf_l >= si_u - si_l { (cf_l, cf_u, Method::Cfact) } else { (si_l, si_u, Method::Substitute) };
            lower = l;
            upper = u;
            lower_src = if l <= 0.0 { Method::Trivial } else { m };
            upper_src = if u >= 1.0 { Method::Trivial } else { m };
        }
        let text = |m: Method, cf: String, si: &str, trivial: &str| match m {
            Method::Cfact => cf,
            Method::Substitute => si.to_string(),
            Method::Trivial => trivial.to_string(),
        };
        BoundEntry {
            arm: *arm,
            context: *context,
            lower,
            upper,
            lower_src,
            upper_src,
            lower_estimand: text(lower_src, cf_text(&self.cfact_lower), &si_l_text, "0"),
            upper_estimand: text(upper_src, cf_text(&self.cfact_upper), &si_u_text, "1"),
            cfact: (cf_l, cf_u),
            substitute: (si_l, si_u),
            crossed,
            widened,
        }
    }

    /// Bounds for every (context, arm) cell. `biased` is the selection-biased
    /// distribution (exact or empirical).
    pub fn bound_table(&self, biased: &JointTable, marginal: &ContextMarginal) -> Result<BoundTable, BoundsError> {
        let ev = Evaluator::new(&self.graph, biased);
        let mut entries = Vec::new();
        for context in self.query.context_grid() {
            let p_c = marginal.probability(&self.graph, &context)?;
            for arm in self.query.arms() {
                entries.push(self.evaluate(&ev, &arm, &context, p_c));
            }
        }
        let warnings = marginal.warning().into_iter().map(String::from).collect();
        Ok(BoundTable { query: self.query, entries, warnings })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn synthetic_exact_bounds_contain_truth() {
        let m = fixtures::synthetic_model();
        let g = m.graph();
        let q = Query::from_names(g, &["X1", "X2"], "Y", &["U1", "U2"]).unwrap();
        let plan = BcePlan::new(g, q, &BceConfig::default()).unwrap();
        let trivial: Vec<bool> = plan.factors.iter().map(BoundPair::is_trivial).collect();
        let names: Vec<String> = plan.components.iter().map(|c| g.names_of(*c).join(",")).collect();
        let recovered: Vec<&str> = names.iter().zip(&trivial).filter(|(_, t)| !**t).map(|(n, _)| n.as_str()).collect();
        assert_eq!(recovered, ["U2"]);
        assert_eq!(plan.candidates.len(), 1);
        let marginal = ContextMarginal { source: ContextSource::Model, table: m.observed_joint(false).unwrap() };
        let table = plan.bound_table(&m.biased_joint().unwrap(), &marginal).unwrap();
        assert_eq!(table.entries.len(), 16);
        for e in &table.entries {
            let truth = m.conditional_effect(q.outcome, &e.arm, &e.context).unwrap();
            assert!(e.contains(truth), "{e:?} truth {truth}");
            assert_eq!(e.lower_src, Method::Substitute);
            assert_eq!(e.upper_src, Method::Substitute);
            assert!(!e.crossed);
        }
    }

    #[test]
    fn context_marginal_from_model() {
        let m = fixtures::synthetic_model();
        let g = m.graph();
        let marginal = ContextMarginal { source: ContextSource::Model, table: m.observed_joint(false).unwrap() };
        let ctx = Assignment::from_names(g, &[("U1", 0), ("U2", 0)]).unwrap();
        assert!((marginal.probability(g, &ctx).unwrap() - 0.24).abs() < 1e-12);
        assert!(marginal.warning().is_none());
        let biased = ContextMarginal { source: ContextSource::Biased, table: m.biased_joint().unwrap() };
        assert!(biased.warning().is_some());
    }
}
