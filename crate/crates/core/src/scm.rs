//! Discrete structural causal models over binary variables: exact inference
//! by enumeration and ancestral sampling through the selection mechanism.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::assignment::Assignment;
use crate::graph::{CausalGraph, GraphError, NodeId, NodeKind, NodeSet};

/// Largest number of variables a dense joint table may span.
pub const MAX_TABLE_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScmError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no conditional probability table for `{0}`")]
    MissingCpt(String),
    #[error("table given for unknown node `{0}`")]
    UnknownCpt(String),
    #[error("table for `{node}` has {got} entries, expected {expected}")]
    CptLength { node: String, expected: usize, got: usize },
    #[error("table for `{0}` has an entry outside [0, 1]")]
    CptRange(String),
    #[error("cannot intervene on `{0}`: only observed nodes can be set")]
    InvalidIntervention(String),
    #[error("context variable `{0}` is a descendant of an intervened node")]
    ContextDescendant(String),
    #[error("conditioning event has probability zero")]
    ZeroProbability,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("sample size must be positive")]
    ZeroSamples,
    #[error("joint table over {0} variables is too large")]
    TableTooLarge(usize),
    #[error("probability vector of length {got} does not match {vars} variables")]
    TableShape { vars: usize, got: usize },
}

/// Copies the bits of `x` selected by `mask` into the low bits of the result.
pub(crate) fn extract_bits(x: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut i = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if x & low != 0 {
            out |= 1 << i;
        }
        i += 1;
        m &= m - 1;
    }
    out
}

/// Inverse of [`extract_bits`]: spreads the low bits of `x` over `mask`.
pub(crate) fn deposit_bits(x: u64, mask: u64) -> u64 {
    let mut out = 0;
    let mut m = mask;
    let mut i = 0;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if x >> i & 1 == 1 {
            out |= low;
        }
        i += 1;
        m &= m - 1;
    }
    out
}

/// A dense distribution over binary variables. Cell `k` holds the probability
/// of the assignment whose bit `i` is the value of `vars[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    vars: Vec<String>,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn new(vars: Vec<String>, probs: Vec<f64>) -> Result<Self, ScmError> {
        if vars.len() > MAX_TABLE_VARS {
            return Err(ScmError::TableTooLarge(vars.len()));
        }
        if probs.len() != 1 << vars.len() {
            return Err(ScmError::TableShape { vars: vars.len(), got: probs.len() });
        }
        Ok(JointTable { vars, probs })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    fn mask_of(&self, names: &[&str]) -> Result<u64, ScmError> {
        names.iter().try_fold(0u64, |m, n| {
            self.position(n)
                .map(|p| m | 1 << p)
                .ok_or_else(|| ScmError::UnknownVariable(n.to_string()))
        })
    }

    /// Marginal mass over the table positions in `mask`, indexed by the
    /// compressed bits of those positions.
    pub fn marginal_mass(&self, mask: u64) -> Vec<f64> {
        let mut out = vec![0.0; 1 << mask.count_ones()];
        for (k, &p) in self.probs.iter().enumerate() {
            out[extract_bits(k as u64, mask) as usize] += p;
        }
        out
    }

    /// Probability of a partial assignment given by name.
    pub fn probability(&self, event: &[(&str, u8)]) -> Result<f64, ScmError> {
        let names: Vec<&str> = event.iter().map(|(n, _)| *n).collect();
        let mask = self.mask_of(&names)?;
        let mut want = 0u64;
        for (n, v) in event {
            if *v != 0 {
                want |= 1 << self.position(n).expect("checked above");
            }
        }
        Ok(self
            .probs
            .iter()
            .enumerate()
            .filter(|(k, _)| (*k as u64) & mask == want)
            .map(|(_, p)| p)
            .sum())
    }

    /// Marginal over `names`, kept in the table's own variable order.
    pub fn marginal(&self, names: &[&str]) -> Result<JointTable, ScmError> {
        let mask = self.mask_of(names)?;
        let vars = (0..self.vars.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| self.vars[i].clone())
            .collect();
        Ok(JointTable { vars, probs: self.marginal_mass(mask) })
    }

    /// Distribution of the remaining variables given `name = value`.
    pub fn conditioned(&self, name: &str, value: bool) -> Result<JointTable, ScmError> {
        let pos = self.position(name).ok_or_else(|| ScmError::UnknownVariable(name.to_string()))?;
        let rest = ((1u64 << self.vars.len()) - 1) & !(1 << pos);
        let mut probs = vec![0.0; 1 << (self.vars.len() - 1)];
        for (k, &p) in self.probs.iter().enumerate() {
            if (k >> pos & 1 == 1) == value {
                probs[extract_bits(k as u64, rest) as usize] += p;
            }
        }
        let z: f64 = probs.iter().sum();
        if z <= 0.0 {
            return Err(ScmError::ZeroProbability);
        }
        probs.iter_mut().for_each(|p| *p /= z);
        let mut vars = self.vars.clone();
        vars.remove(pos);
        Ok(JointTable { vars, probs })
    }
}

/// Rows of a selection-biased sample. Bit `i` of a row is the value of
/// `columns[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub columns: Vec<String>,
    pub rows: Vec<u64>,
    /// Number of draws before selection.
    pub n_pre: usize,
}

impl Dataset {
    pub fn retained(&self) -> usize {
        self.rows.len()
    }

    pub fn retention_rate(&self) -> f64 {
        if self.n_pre == 0 {
            0.0
        } else {
            self.rows.len() as f64 / self.n_pre as f64
        }
    }

    /// Relative frequencies over `vars`, in the order given. Empty cells stay 0.
    pub fn empirical_distribution(&self, vars: &[&str]) -> Result<JointTable, ScmError> {
        if self.rows.is_empty() {
            return Err(ScmError::EmptyDataset);
        }
        if vars.len() > MAX_TABLE_VARS {
            return Err(ScmError::TableTooLarge(vars.len()));
        }
        let cols: Vec<usize> = vars
            .iter()
            .map(|n| {
                self.columns
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| ScmError::UnknownVariable(n.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let mut counts = vec![0u64; 1 << vars.len()];
        for &row in &self.rows {
            let mut k = 0usize;
            for (i, &c) in cols.iter().enumerate() {
                k |= ((row >> c & 1) as usize) << i;
            }
            counts[k] += 1;
        }
        let n = self.rows.len() as f64;
        Ok(JointTable {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            probs: counts.iter().map(|&c| c as f64 / n).collect(),
        })
    }

    /// Frequencies over every column.
    pub fn to_table(&self) -> Result<JointTable, ScmError> {
        let names: Vec<&str> = self.columns.iter().map(String::as_str).collect();
        self.empirical_distribution(&names)
    }
}

/// A causal model whose every node (latent and selection included) carries a
/// table of `P(node = 1 | parents)`. The table index reads the parents in
/// canonical order with the first parent as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteScm {
    graph: CausalGraph,
    cpts: Vec<Vec<f64>>,
    parent_lists: Vec<Vec<NodeId>>,
}

impl DiscreteScm {
    pub fn new<I, S>(graph: CausalGraph, cpts: I) -> Result<Self, ScmError>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: AsRef<str>,
    {
        let mut tables: Vec<Option<Vec<f64>>> = vec![None; graph.capacity()];
        for (name, table) in cpts {
            let name = name.as_ref();
            let v = graph.node(name).map_err(|_| ScmError::UnknownCpt(name.to_string()))?;
            let expected = 1usize << graph.parents(v).len();
            if table.len() != expected {
                return Err(ScmError::CptLength { node: name.to_string(), expected, got: table.len() });
            }
            if table.iter().any(|p| !(0.0..=1.0).contains(p)) {
                return Err(ScmError::CptRange(name.to_string()));
            }
            tables[v] = Some(table);
        }
        let mut cpts = vec![Vec::new(); graph.capacity()];
        for v in graph.nodes().iter() {
            cpts[v] = tables[v].take().ok_or_else(|| ScmError::MissingCpt(graph.name(v).to_string()))?;
        }
        let parent_lists = (0..graph.capacity()).map(|v| graph.parents(v).iter().collect()).collect();
        Ok(DiscreteScm { graph, cpts, parent_lists })
    }

    pub fn graph(&self) -> &CausalGraph {
        &self.graph
    }

    pub fn cpt(&self, v: NodeId) -> &[f64] {
        &self.cpts[v]
    }

    /// `P(v = 1)` given the parent values found in `full`.
    pub fn p_one(&self, v: NodeId, full: u64) -> f64 {
        let mut idx = 0usize;
        for &p in &self.parent_lists[v] {
            idx = idx << 1 | (full >> p & 1) as usize;
        }
        self.cpts[v][idx]
    }

    fn check_do(&self, do_: &Assignment) -> Result<(), ScmError> {
        for v in do_.vars().iter() {
            if !self.graph.nodes().contains(v) {
                return Err(GraphError::UnknownNode(alloc::format!("#{v}")).into());
            }
            if self.graph.kind(v) != NodeKind::Observed {
                return Err(ScmError::InvalidIntervention(self.graph.name(v).to_string()));
            }
        }
        Ok(())
    }

    /// Joint over `vars` (node ids) in the model mutilated by `do_`; intervened
    /// variables in `vars` carry point masses.
    fn enumerate(&self, vars: NodeSet, do_: &Assignment) -> Result<JointTable, ScmError> {
        if vars.len() > MAX_TABLE_VARS {
            return Err(ScmError::TableTooLarge(vars.len()));
        }
        let order = self.graph.topological_order();
        // every non-selection node is summed over unless fixed by the intervention
        let free: NodeSet = self
            .graph
            .nodes()
            .difference(self.graph.selection_set().difference(vars))
            .difference(do_.vars());
        if free.len() > MAX_TABLE_VARS {
            return Err(ScmError::TableTooLarge(free.len()));
        }
        let names = vars.iter().map(|v| self.graph.name(v).to_string()).collect();
        let mut probs = vec![0.0; 1 << vars.len()];
        for code in 0..1u64 << free.len() {
            let full = deposit_bits(code, free.bits()) | do_.values();
            let mut p = 1.0;
            for &v in &order {
                if !free.contains(v) {
                    continue;
                }
                let one = self.p_one(v, full);
                p *= if full >> v & 1 == 1 { one } else { 1.0 - one };
                if p == 0.0 {
                    break;
                }
            }
            if p != 0.0 {
                probs[extract_bits(full, vars.bits()) as usize] += p;
            }
        }
        Ok(JointTable { vars: names, probs })
    }

    /// Joint over every node, latent ones included; the selection node is
    /// summed out unless `include_selection`.
    pub fn exact_joint(&self, include_selection: bool) -> Result<JointTable, ScmError> {
        let mut vars = self.graph.nodes();
        if !include_selection {
            vars = vars.difference(self.graph.selection_set());
        }
        self.enumerate(vars, &Assignment::EMPTY)
    }

    /// Joint over all non-selection nodes after setting `do_`.
    pub fn interventional(&self, do_: &Assignment) -> Result<JointTable, ScmError> {
        self.check_do(do_)?;
        let vars = self.graph.nodes().difference(self.graph.selection_set());
        self.enumerate(vars, do_)
    }

    /// Joint over observed nodes (plus the selection node if requested),
    /// latent nodes summed out.
    pub fn observed_joint(&self, include_selection: bool) -> Result<JointTable, ScmError> {
        let mut vars = self.graph.observed();
        if include_selection {
            vars = vars.union(self.graph.selection_set());
        }
        self.enumerate(vars, &Assignment::EMPTY)
    }

    /// `P(observed | S = 1)`: the infinite-data limit of a biased sample.
    pub fn biased_joint(&self) -> Result<JointTable, ScmError> {
        match self.graph.selection() {
            Some(s) => self.observed_joint(true)?.conditioned(self.graph.name(s), true),
            None => self.observed_joint(false),
        }
    }

    /// `P(S = 1)`, or 1 when there is no selection node.
    pub fn selection_rate(&self) -> Result<f64, ScmError> {
        match self.graph.selection() {
            Some(s) => {
                let t = self.enumerate(NodeSet::singleton(s), &Assignment::EMPTY)?;
                Ok(t.probs[1])
            }
            None => Ok(1.0),
        }
    }

    /// `P(outcome = 1 | do, ctx)`. Context variables must not descend from
    /// intervened ones, so the denominator is the plain `P(ctx)`.
    pub fn conditional_effect(&self, outcome: NodeId, do_: &Assignment, ctx: &Assignment) -> Result<f64, ScmError> {
        self.check_do(do_)?;
        let de = self.graph.descendants(do_.vars())?;
        if let Some(v) = ctx.vars().intersection(de).first() {
            return Err(ScmError::ContextDescendant(self.graph.name(v).to_string()));
        }
        let vars = ctx.vars().with(outcome);
        let t = self.enumerate(vars, do_)?;
        let ctx_bits = extract_bits(ctx.values(), vars.bits());
        let out_bit = extract_bits(1 << outcome, vars.bits());
        let mask = extract_bits(ctx.vars().bits(), vars.bits());
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, &p) in t.probs.iter().enumerate() {
            let k = k as u64;
            if k & mask != ctx_bits {
                continue;
            }
            den += p;
            if k & out_bit != 0 {
                num += p;
            }
        }
        if den <= 0.0 {
            return Err(ScmError::ZeroProbability);
        }
        Ok(num / den)
    }

    /// One ancestral draw of every node as a bitmask over node ids. Exactly
    /// one uniform is consumed per node, intervened or not.
    pub fn sample_full<R: RngCore + ?Sized>(&self, rng: &mut R, do_: &Assignment) -> u64 {
        let mut full = 0u64;
        for v in self.graph.topological_order() {
            let u: f64 = rng.random();
            let value = match do_.get(v) {
                Some(b) => b,
                None => u < self.p_one(v, full),
            };
            if value {
                full |= 1 << v;
            }
        }
        full
    }

    /// Draws `n_pre` units, keeps those with `S = 1`, and emits only the
    /// observed columns.
    pub fn sample_biased_dataset<R: RngCore + ?Sized>(&self, n_pre: usize, rng: &mut R) -> Result<Dataset, ScmError> {
        if n_pre == 0 {
            return Err(ScmError::ZeroSamples);
        }
        let observed = self.graph.observed();
        let sel = self.graph.selection();
        let mut rows = Vec::new();
        for _ in 0..n_pre {
            let full = self.sample_full(rng, &Assignment::EMPTY);
            if sel.map_or(true, |s| full >> s & 1 == 1) {
                rows.push(extract_bits(full, observed.bits()));
            }
        }
        Ok(Dataset {
            columns: observed.iter().map(|v| self.graph.name(v).to_string()).collect(),
            rows,
            n_pre,
        })
    }

    /// Draws `n` units without selection and keeps the columns in `vars`.
    pub fn sample_unbiased<R: RngCore + ?Sized>(&self, vars: NodeSet, n: usize, rng: &mut R) -> Result<Dataset, ScmError> {
        if n == 0 {
            return Err(ScmError::ZeroSamples);
        }
        let rows = (0..n)
            .map(|_| extract_bits(self.sample_full(rng, &Assignment::EMPTY), vars.bits()))
            .collect();
        Ok(Dataset {
            columns: vars.iter().map(|v| self.graph.name(v).to_string()).collect(),
            rows,
            n_pre: n,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::GraphBuilder;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        libm::fabs(a - b) <= tol
    }

    #[test]
    fn bit_helpers_roundtrip() {
        let mask = 0b1011_0100;
        for x in 0..16u64 {
            assert_eq!(extract_bits(deposit_bits(x, mask), mask), x);
        }
        assert_eq!(extract_bits(0b1000_0100, mask), 0b1001);
    }

    #[test]
    fn single_node_table() {
        let g = GraphBuilder::new().observed(&["A"]).build().unwrap();
        let m = DiscreteScm::new(g, [("A", vec![0.3])]).unwrap();
        let t = m.exact_joint(false).unwrap();
        assert!(close(t.probs()[0], 0.7, 1e-15) && close(t.probs()[1], 0.3, 1e-15));
    }

    #[test]
    fn rejects_bad_tables() {
        let g = GraphBuilder::new().observed(&["A", "B"]).edge("A", "B").build().unwrap();
        assert!(matches!(
            DiscreteScm::new(g.clone(), [("A", vec![0.3]), ("B", vec![0.1])]),
            Err(ScmError::CptLength { .. })
        ));
        assert!(matches!(
            DiscreteScm::new(g.clone(), [("A", vec![1.3]), ("B", vec![0.1, 0.2])]),
            Err(ScmError::CptRange(_))
        ));
        assert!(matches!(DiscreteScm::new(g.clone(), [("A", vec![0.3])]), Err(ScmError::MissingCpt(_))));
        assert!(matches!(
            DiscreteScm::new(g, [("A", vec![0.3]), ("B", vec![0.1, 0.2]), ("Q", vec![0.5])]),
            Err(ScmError::UnknownCpt(_))
        ));
    }

    #[test]
    fn synthetic_marginals() {
        let m = fixtures::synthetic_model();
        let joint = m.exact_joint(true).unwrap();
        assert!(close(joint.total(), 1.0, 1e-12));
        assert!(close(joint.probability(&[("S", 1)]).unwrap(), 0.47625, 1e-12));
        assert!(close(m.selection_rate().unwrap(), 0.47625, 1e-12));
        let ey = joint.probability(&[("Y", 1)]).unwrap();
        assert!(close(ey, 0.414583333333, 1e-9), "{ey}");
    }

    #[test]
    fn synthetic_interventions() {
        let m = fixtures::synthetic_model();
        let g = m.graph();
        let i1 = g.node("I1").unwrap();
        let y = g.node("Y").unwrap();
        let do_x1 = Assignment::from_names(g, &[("X1", 1)]).unwrap();
        let e = m.conditional_effect(i1, &do_x1, &Assignment::EMPTY).unwrap();
        assert!(close(e, 0.675, 1e-12));

        let do_00 = Assignment::from_names(g, &[("X1", 0), ("X2", 0)]).unwrap();
        let e = m.conditional_effect(y, &do_00, &Assignment::EMPTY).unwrap();
        assert!(close(e, 0.320833333333, 1e-9), "{e}");

        let ctx = Assignment::from_names(g, &[("U1", 0), ("U2", 0)]).unwrap();
        assert!(close(m.conditional_effect(y, &do_00, &ctx).unwrap(), 0.254166666667, 1e-9));
        let do_11 = Assignment::from_names(g, &[("X1", 1), ("X2", 1)]).unwrap();
        let ctx = Assignment::from_names(g, &[("U1", 1), ("U2", 1)]).unwrap();
        assert!(close(m.conditional_effect(y, &do_11, &ctx).unwrap(), 0.629166666667, 1e-9));

        let e = m.conditional_effect(y, &Assignment::EMPTY, &Assignment::EMPTY).unwrap();
        assert!(close(e, 0.414583333333, 1e-9));

        let do_none = m.interventional(&Assignment::EMPTY).unwrap();
        assert_eq!(do_none, m.exact_joint(false).unwrap());
    }

    #[test]
    fn intervention_errors() {
        let m = fixtures::synthetic_model();
        let g = m.graph();
        let do_s = Assignment::from_names(g, &[("S", 1)]).unwrap();
        assert!(matches!(m.interventional(&do_s), Err(ScmError::InvalidIntervention(_))));
        let do_x1 = Assignment::from_names(g, &[("X1", 1)]).unwrap();
        let ctx = Assignment::from_names(g, &[("I1", 1)]).unwrap();
        let y = g.node("Y").unwrap();
        assert!(matches!(m.conditional_effect(y, &do_x1, &ctx), Err(ScmError::ContextDescendant(_))));
    }

    #[test]
    fn interventional_pins_treatment() {
        let m = fixtures::synthetic_model();
        let do_x1 = Assignment::from_names(m.graph(), &[("X1", 1)]).unwrap();
        let t = m.interventional(&do_x1).unwrap();
        assert!(close(t.total(), 1.0, 1e-12));
        assert!(close(t.probability(&[("X1", 1)]).unwrap(), 1.0, 1e-12));
    }

    #[test]
    fn biased_joint_matches_bayes() {
        let m = fixtures::synthetic_model();
        let b = m.biased_joint().unwrap();
        assert!(b.position("S").is_none() && b.position("C1").is_none());
        let p = b.probability(&[("I1", 1)]).unwrap();
        assert!(close(p, 0.8 * 0.5375 / 0.47625, 1e-12));
    }

    #[test]
    fn sampling_is_deterministic_and_drops_hidden_columns() {
        let m = fixtures::synthetic_model();
        let a = m.sample_biased_dataset(2000, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        let b = m.sample_biased_dataset(2000, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.columns, ["I1", "U1", "U2", "X1", "X2", "Y"]);
        assert!(a.retained() < 2000);
        assert!(matches!(m.sample_biased_dataset(0, &mut ChaCha8Rng::seed_from_u64(7)), Err(ScmError::ZeroSamples)));
    }

    #[test]
    fn all_rows_kept_when_selection_is_certain() {
        let g = GraphBuilder::new().observed(&["A"]).selection("S").edge("A", "S").build().unwrap();
        let m = DiscreteScm::new(g, [("A", vec![0.5]), ("S", vec![1.0, 1.0])]).unwrap();
        let d = m.sample_biased_dataset(500, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(d.retained(), 500);
    }

    #[test]
    fn empirical_distribution_examples() {
        let one = Dataset { columns: vec!["A".into(), "B".into()], rows: vec![0b10], n_pre: 1 };
        let t = one.empirical_distribution(&["A", "B"]).unwrap();
        assert_eq!(t.probs(), [0.0, 0.0, 1.0, 0.0]);
        let two = Dataset { columns: vec!["A".into()], rows: vec![0, 1], n_pre: 2 };
        assert_eq!(two.empirical_distribution(&["A"]).unwrap().probs(), [0.5, 0.5]);
        let empty = Dataset { columns: vec!["A".into()], rows: vec![], n_pre: 3 };
        assert_eq!(empty.empirical_distribution(&["A"]), Err(ScmError::EmptyDataset));
        assert!(matches!(two.empirical_distribution(&["Z"]), Err(ScmError::UnknownVariable(_))));
    }

    #[test]
    fn table_marginal_and_conditioning() {
        let t = JointTable::new(vec!["A".into(), "B".into()], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let a = t.marginal(&["A"]).unwrap();
        assert!(close(a.probs()[1], 0.6, 1e-15));
        let given = t.conditioned("B", true).unwrap();
        assert_eq!(given.vars(), ["A"]);
        assert!(close(given.probs()[1], 0.4 / 0.7, 1e-15));
        let zero = JointTable::new(vec!["A".into()], vec![1.0, 0.0]).unwrap();
        assert_eq!(zero.conditioned("A", true), Err(ScmError::ZeroProbability));
    }
}
