//! Symbolic expressions over observational distributions, usually the
//! selection-biased `P(· | S=1)`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;

use crate::assignment::Assignment;
use crate::graph::{CausalGraph, NodeSet};
use crate::scm::{extract_bits, JointTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Estimand {
    Const(f64),
    /// `P(vars | cond)`, conditioned on `S = 1` as well when `biased`.
    Prob { vars: NodeSet, cond: NodeSet, biased: bool },
    Sum { over: NodeSet, body: Box<Estimand> },
    Product(Vec<Estimand>),
    Quotient(Box<Estimand>, Box<Estimand>),
    Extremum { kind: Extremum, over: NodeSet, body: Box<Estimand> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("undefined cell: {0} has probability zero")]
    Undefined(String),
    #[error("distribution has no column `{0}`")]
    MissingVariable(String),
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
}

impl Estimand {
    pub fn prob(vars: NodeSet, cond: NodeSet) -> Estimand {
        Estimand::Prob { vars, cond, biased: true }
    }

    pub fn sum(over: NodeSet, body: Estimand) -> Estimand {
        Estimand::Sum { over, body: Box::new(body) }
    }

    pub fn quotient(num: Estimand, den: Estimand) -> Estimand {
        Estimand::Quotient(Box::new(num), Box::new(den))
    }

    pub fn extremum(kind: Extremum, over: NodeSet, body: Estimand) -> Estimand {
        Estimand::Extremum { kind, over, body: Box::new(body) }
    }

    pub fn is_const(&self, c: f64) -> bool {
        matches!(self, Estimand::Const(v) if *v == c)
    }

    /// Variables whose values must be supplied to evaluate the expression.
    pub fn free_vars(&self) -> NodeSet {
        match self {
            Estimand::Const(_) => NodeSet::EMPTY,
            Estimand::Prob { vars, cond, .. } => vars.union(*cond),
            Estimand::Sum { over, body } | Estimand::Extremum { over, body, .. } => {
                body.free_vars().difference(*over)
            }
            Estimand::Product(fs) => fs.iter().fold(NodeSet::EMPTY, |acc, f| acc.union(f.free_vars())),
            Estimand::Quotient(n, d) => n.free_vars().union(d.free_vars()),
        }
    }

    /// Deterministic text form, using node names from `g`.
    pub fn render(&self, g: &CausalGraph) -> String {
        let names = |s: NodeSet| g.names_of(s).join(", ");
        match self {
            Estimand::Const(c) => format!("{c}"),
            Estimand::Prob { vars, cond, biased } => {
                let mut given: Vec<String> = g.names_of(*cond).iter().map(|s| s.to_string()).collect();
                if *biased && g.selection().is_some() {
                    given.push("S=1".into());
                }
                if given.is_empty() {
                    format!("P({})", names(*vars))
                } else {
                    format!("P({} | {})", names(*vars), given.join(", "))
                }
            }
            Estimand::Sum { over, body } => format!("Σ_{{{}}} {}", names(*over), body.render_grouped(g)),
            Estimand::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|f| f.render_grouped(g)).collect();
                parts.join("·")
            }
            Estimand::Quotient(n, d) => format!("{} / {}", n.render_grouped(g), d.render_grouped(g)),
            Estimand::Extremum { kind, over, body } => {
                let op = match kind {
                    Extremum::Min => "min",
                    Extremum::Max => "max",
                };
                format!("{op}_{{{}}} [{}]", names(*over), body.render(g))
            }
        }
    }

    /// Rendering wrapped in parentheses when it is a compound term.
    pub fn render_grouped(&self, g: &CausalGraph) -> String {
        match self {
            Estimand::Product(fs) if fs.len() > 1 => format!("({})", self.render(g)),
            Estimand::Quotient(..) | Estimand::Sum { .. } => format!("({})", self.render(g)),
            _ => self.render(g),
        }
    }

    /// Algebraic clean-up that preserves the value wherever the original is
    /// defined.
    pub fn simplify(&self) -> Estimand {
        match self {
            Estimand::Prob { vars, .. } if vars.is_empty() => Estimand::Const(1.0),
            Estimand::Const(_) | Estimand::Prob { .. } => self.clone(),
            Estimand::Product(fs) => simplify_product(fs.iter().map(Estimand::simplify).collect()),
            Estimand::Quotient(n, d) => simplify_quotient(n.simplify(), d.simplify()),
            Estimand::Sum { over, body } => simplify_sum(*over, body.simplify()),
            Estimand::Extremum { kind, over, body } => {
                let body = body.simplify();
                let over = over.intersection(body.free_vars());
                if over.is_empty() {
                    body
                } else {
                    Estimand::extremum(*kind, over, body)
                }
            }
        }
    }
}

fn product_factors(e: Estimand) -> Vec<Estimand> {
    match e {
        Estimand::Product(fs) => fs,
        other => vec![other],
    }
}

fn simplify_product(fs: Vec<Estimand>) -> Estimand {
    let mut c = 1.0;
    let mut out = Vec::new();
    for f in fs {
        for f in product_factors(f) {
            match f {
                Estimand::Const(v) => c *= v,
                other => out.push(other),
            }
        }
    }
    if c == 0.0 {
        return Estimand::Const(0.0);
    }
    if c != 1.0 {
        out.insert(0, Estimand::Const(c));
    }
    match out.len() {
        0 => Estimand::Const(1.0),
        1 => out.pop().expect("one factor"),
        _ => Estimand::Product(out),
    }
}

fn simplify_quotient(num: Estimand, den: Estimand) -> Estimand {
    if den.is_const(1.0) {
        return num;
    }
    if num == den {
        return Estimand::Const(1.0);
    }
    if let (Estimand::Const(a), Estimand::Const(b)) = (&num, &den) {
        if *b != 0.0 && a / b <= 1.0 {
            return Estimand::Const(a / b);
        }
    }
    // P(A, B | C) / P(B | C) = P(A | B, C)
    if let (
        Estimand::Prob { vars: a, cond: c1, biased: b1 },
        Estimand::Prob { vars: b, cond: c2, biased: b2 },
    ) = (&num, &den)
    {
        if b1 == b2 && c1 == c2 && b.is_subset(*a) && *a != *b {
            return Estimand::Prob { vars: a.difference(*b), cond: c1.union(*b), biased: *b1 };
        }
    }
    // cancel syntactically identical factors
    let mut ns = product_factors(num);
    let mut ds = product_factors(den);
    let mut i = 0;
    let mut cancelled = false;
    while i < ns.len() {
        if let Some(j) = ds.iter().position(|d| *d == ns[i]) {
            ns.remove(i);
            ds.remove(j);
            cancelled = true;
        } else {
            i += 1;
        }
    }
    let num = simplify_product(ns);
    let den = simplify_product(ds);
    if cancelled {
        return simplify_quotient(num, den);
    }
    if den.is_const(1.0) {
        num
    } else {
        Estimand::quotient(num, den)
    }
}

fn simplify_sum(over: NodeSet, body: Estimand) -> Estimand {
    let free = body.free_vars();
    if over.is_empty() {
        return body;
    }
    if !over.is_subset(free) {
        // variables the body ignores stay bound so constants remain in [0, 1]
        let idle = over.difference(free);
        return Estimand::sum(idle, simplify_sum(over.intersection(free), body));
    }
    match body {
        Estimand::Sum { over: inner, body } => simplify_sum(over.union(inner), *body),
        Estimand::Prob { vars, cond, biased } if over.is_subset(vars) && over.is_disjoint(cond) => {
            let rest = vars.difference(over);
            if rest.is_empty() {
                Estimand::Const(1.0)
            } else {
                Estimand::Prob { vars: rest, cond, biased }
            }
        }
        Estimand::Product(fs) => {
            let (inside, outside): (Vec<Estimand>, Vec<Estimand>) =
                fs.into_iter().partition(|f| !f.free_vars().is_disjoint(over));
            if outside.is_empty() {
                Estimand::sum(over, Estimand::Product(inside))
            } else {
                let mut out = outside;
                out.push(simplify_sum(over, simplify_product(inside)));
                simplify_product(out)
            }
        }
        Estimand::Quotient(n, d) if d.free_vars().is_disjoint(over) => {
            simplify_quotient(simplify_sum(over, *n), *d)
        }
        other => Estimand::sum(over, other),
    }
}

// (variable set bits, selected-only) → marginal
type MarginalCache = RefCell<BTreeMap<(u64, bool), Rc<Vec<f64>>>>;

/// Evaluates estimands against one joint table, caching marginals.
pub struct Evaluator<'a> {
    graph: &'a CausalGraph,
    table: &'a JointTable,
    position: Vec<Option<usize>>,
    selection: Option<usize>,
    cache: MarginalCache,
}

impl<'a> Evaluator<'a> {
    /// Columns are matched to graph nodes by name. A table without the
    /// selection column is taken to be the biased distribution already.
    pub fn new(graph: &'a CausalGraph, table: &'a JointTable) -> Self {
        let position = (0..graph.capacity())
            .map(|v| if graph.nodes().contains(v) { table.position(graph.name(v)) } else { None })
            .collect();
        let selection = graph.selection().and_then(|s| table.position(graph.name(s)));
        Evaluator { graph, table, position, selection, cache: RefCell::new(BTreeMap::new()) }
    }

    pub fn graph(&self) -> &CausalGraph {
        self.graph
    }

    /// Marginal over graph nodes `vars`, indexed by the compressed node-id bits.
    fn marginal(&self, vars: NodeSet, biased: bool) -> Result<Rc<Vec<f64>>, EvalError> {
        let biased = biased && self.selection.is_some();
        if let Some(m) = self.cache.borrow().get(&(vars.bits(), biased)) {
            return Ok(m.clone());
        }
        let mut cols = Vec::with_capacity(vars.len());
        for v in vars.iter() {
            match self.position[v] {
                Some(p) => cols.push(p),
                None => return Err(EvalError::MissingVariable(self.graph.name(v).to_string())),
            }
        }
        let mut out = vec![0.0; 1 << cols.len()];
        let mut total = 0.0;
        for (k, &p) in self.table.probs().iter().enumerate() {
            if biased && k >> self.selection.expect("biased implies a selection column") & 1 == 0 {
                continue;
            }
            total += p;
            let mut idx = 0usize;
            for (i, &c) in cols.iter().enumerate() {
                idx |= (k >> c & 1) << i;
            }
            out[idx] += p;
        }
        if biased {
            if total <= 0.0 {
                return Err(EvalError::Undefined("S=1".into()));
            }
            out.iter_mut().for_each(|p| *p /= total);
        }
        let out = Rc::new(out);
        self.cache.borrow_mut().insert((vars.bits(), biased), out.clone());
        Ok(out)
    }

    fn probability(&self, vars: NodeSet, at: &Assignment, biased: bool) -> Result<f64, EvalError> {
        if let Some(v) = vars.difference(at.vars()).first() {
            return Err(EvalError::UnboundVariable(self.graph.name(v).to_string()));
        }
        let m = self.marginal(vars, biased)?;
        Ok(m[extract_bits(at.values(), vars.bits()) as usize])
    }

    pub fn evaluate(&self, e: &Estimand, at: &Assignment) -> Result<f64, EvalError> {
        match e {
            Estimand::Const(c) => Ok(*c),
            Estimand::Prob { vars, cond, biased } => {
                let joint = self.probability(vars.union(*cond), at, *biased)?;
                if cond.is_empty() {
                    return Ok(joint);
                }
                let den = self.probability(*cond, at, *biased)?;
                if den <= 0.0 {
                    return Err(EvalError::Undefined(at.restrict(*cond).render(self.graph)));
                }
                Ok(joint / den)
            }
            Estimand::Sum { over, body } => {
                let mut s = 0.0;
                for a in Assignment::grid(*over) {
                    s += self.evaluate(body, &at.merge(&a))?;
                }
                Ok(s)
            }
            Estimand::Product(fs) => fs.iter().try_fold(1.0, |acc, f| Ok(acc * self.evaluate(f, at)?)),
            Estimand::Quotient(n, d) => {
                let den = self.evaluate(d, at)?;
                if den <= 0.0 {
                    return Err(EvalError::Undefined(format!("denominator at {}", at.render(self.graph))));
                }
                Ok(self.evaluate(n, at)? / den)
            }
            Estimand::Extremum { kind, over, body } => {
                let mut best: Option<f64> = None;
                for a in Assignment::grid(*over) {
                    let v = self.evaluate(body, &at.merge(&a))?;
                    best = Some(match (best, kind) {
                        (None, _) => v,
                        (Some(b), Extremum::Min) => b.min(v),
                        (Some(b), Extremum::Max) => b.max(v),
                    });
                }
                Ok(best.expect("a grid has at least one assignment"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::GraphBuilder;

    fn ab_graph() -> CausalGraph {
        GraphBuilder::new().observed(&["A", "B"]).selection("S").edge("A", "B").build().unwrap()
    }

    #[test]
    fn evaluate_basics() {
        let g = ab_graph();
        let t = JointTable::new(vec!["A".into(), "B".into()], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let ev = Evaluator::new(&g, &t);
        let (a, b) = (g.node("A").unwrap(), g.node("B").unwrap());
        let at = Assignment::EMPTY.with(a, true).with(b, true);
        assert_eq!(ev.evaluate(&Estimand::Const(0.3), &at).unwrap(), 0.3);
        let pa = Estimand::prob(NodeSet::singleton(a), NodeSet::EMPTY);
        assert!((ev.evaluate(&pa, &at).unwrap() - 0.6).abs() < 1e-15);
        let pb_a = Estimand::prob(NodeSet::singleton(b), NodeSet::singleton(a));
        assert!((ev.evaluate(&pb_a, &at).unwrap() - 0.4 / 0.6).abs() < 1e-15);
        let unbound = ev.evaluate(&pa, &Assignment::EMPTY);
        assert!(matches!(unbound, Err(EvalError::UnboundVariable(_))));
    }

    #[test]
    fn zero_conditioning_event_is_an_error() {
        let g = ab_graph();
        let t = JointTable::new(vec!["A".into(), "B".into()], vec![0.5, 0.0, 0.5, 0.0]).unwrap();
        let ev = Evaluator::new(&g, &t);
        let (a, b) = (g.node("A").unwrap(), g.node("B").unwrap());
        let e = Estimand::prob(NodeSet::singleton(b), NodeSet::singleton(a));
        let at = Assignment::EMPTY.with(a, true).with(b, false);
        assert_eq!(ev.evaluate(&e, &at), Err(EvalError::Undefined("A=1".into())));
    }

    #[test]
    fn biased_flag_conditions_on_selection_column() {
        let g = ab_graph();
        // columns A, S: P(A=1, S=1) = 0.3, P(S=1) = 0.4
        let t = JointTable::new(vec!["A".into(), "S".into()], vec![0.5, 0.1, 0.1, 0.3]).unwrap();
        let ev = Evaluator::new(&g, &t);
        let a = g.node("A").unwrap();
        let at = Assignment::EMPTY.with(a, true);
        let biased = Estimand::prob(NodeSet::singleton(a), NodeSet::EMPTY);
        let plain = Estimand::Prob { vars: NodeSet::singleton(a), cond: NodeSet::EMPTY, biased: false };
        assert!((ev.evaluate(&biased, &at).unwrap() - 0.75).abs() < 1e-15);
        assert!((ev.evaluate(&plain, &at).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn render_examples() {
        let g = fixtures::synthetic_projected();
        let s = |n: &[&str]| g.node_set(n).unwrap();
        assert_eq!(Estimand::Const(1.0).render(&g), "1");
        let e = Estimand::prob(s(&["Y"]), s(&["X1"]));
        assert_eq!(e.render(&g), "P(Y | X1, S=1)");
        let adj = Estimand::sum(
            s(&["U1"]),
            Estimand::Product(vec![
                Estimand::prob(s(&["Y"]), s(&["U1", "X1"])),
                Estimand::prob(s(&["U1"]), NodeSet::EMPTY),
            ]),
        );
        assert_eq!(adj.render(&g), "Σ_{U1} (P(Y | U1, X1, S=1)·P(U1 | S=1))");
        let ext = Estimand::extremum(Extremum::Min, s(&["I1"]), Estimand::prob(s(&["Y"]), s(&["I1"])));
        assert_eq!(ext.render(&g), "min_{I1} [P(Y | I1, S=1)]");
        let plain = GraphBuilder::new().observed(&["A"]).build().unwrap();
        assert_eq!(Estimand::prob(plain.nodes(), NodeSet::EMPTY).render(&plain), "P(A)");
    }

    #[test]
    fn simplify_examples() {
        let g = ab_graph();
        let (a, b) = (g.node("A").unwrap(), g.node("B").unwrap());
        let x = Estimand::prob(NodeSet::singleton(a), NodeSet::EMPTY);
        assert_eq!(Estimand::Product(vec![Estimand::Const(1.0), x.clone()]).simplify(), x);
        let joint = Estimand::prob(NodeSet::singleton(a).with(b), NodeSet::EMPTY);
        assert_eq!(Estimand::sum(NodeSet::singleton(b), joint.clone()).simplify(), x);
        assert_eq!(Estimand::quotient(x.clone(), x.clone()).simplify(), Estimand::Const(1.0));
        let cond = Estimand::quotient(joint, x).simplify();
        assert_eq!(cond, Estimand::prob(NodeSet::singleton(b), NodeSet::singleton(a)));
        assert_eq!(Estimand::sum(NodeSet::EMPTY, cond.clone()).simplify(), cond);
    }
}
