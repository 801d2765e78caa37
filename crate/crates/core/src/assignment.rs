//! Partial assignments of binary values to graph nodes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::graph::{CausalGraph, GraphError, NodeId, NodeSet};

/// Values for a set of nodes. Bit `v` of `values` is the value of node `v`;
/// bits outside `vars` are always zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Assignment {
    vars: NodeSet,
    values: u64,
}

impl Assignment {
    pub const EMPTY: Assignment = Assignment { vars: NodeSet::EMPTY, values: 0 };

    pub fn from_bits(vars: NodeSet, values: u64) -> Self {
        Assignment { vars, values: values & vars.bits() }
    }

    /// Builds an assignment from `(name, value)` pairs; any nonzero value is 1.
    pub fn from_names(g: &CausalGraph, pairs: &[(&str, u8)]) -> Result<Self, GraphError> {
        let mut a = Assignment::EMPTY;
        for &(name, val) in pairs {
            a.set(g.node(name)?, val != 0);
        }
        Ok(a)
    }

    pub fn vars(&self) -> NodeSet {
        self.vars
    }

    pub fn values(&self) -> u64 {
        self.values
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn get(&self, v: NodeId) -> Option<bool> {
        self.vars.contains(v).then(|| self.values & (1 << v) != 0)
    }

    pub fn set(&mut self, v: NodeId, value: bool) {
        self.vars.insert(v);
        if value {
            self.values |= 1 << v;
        } else {
            self.values &= !(1 << v);
        }
    }

    pub fn with(mut self, v: NodeId, value: bool) -> Self {
        self.set(v, value);
        self
    }

    /// Union of two assignments; `other` wins on shared variables.
    pub fn merge(&self, other: &Assignment) -> Assignment {
        let vars = self.vars.union(other.vars);
        let values = (self.values & !other.vars.bits()) | other.values;
        Assignment { vars, values }
    }

    pub fn restrict(&self, keep: NodeSet) -> Assignment {
        Assignment::from_bits(self.vars.intersection(keep), self.values)
    }

    /// True when both assign the same values to their shared variables.
    pub fn agrees_with(&self, other: &Assignment) -> bool {
        let shared = self.vars.intersection(other.vars).bits();
        (self.values ^ other.values) & shared == 0
    }

    /// Every assignment of `vars`, ascending with the smallest node id as the
    /// most significant bit.
    pub fn grid(vars: NodeSet) -> Vec<Assignment> {
        let members: Vec<NodeId> = vars.iter().collect();
        let k = members.len();
        (0..1u64 << k)
            .map(|code| {
                let mut values = 0u64;
                for (i, &v) in members.iter().enumerate() {
                    if code >> (k - 1 - i) & 1 == 1 {
                        values |= 1 << v;
                    }
                }
                Assignment { vars, values }
            })
            .collect()
    }

    /// `"X1=0,X2=1"` in canonical order.
    pub fn render(&self, g: &CausalGraph) -> String {
        let mut out = String::new();
        for (i, v) in self.vars.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}={}", g.name(v), u8::from(self.values & (1 << v) != 0));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_msb_first() {
        let vars = NodeSet::from_bits(0b101);
        let g: Vec<(Option<bool>, Option<bool>)> = Assignment::grid(vars).iter().map(|a| (a.get(0), a.get(2))).collect();
        assert_eq!(
            g,
            [
                (Some(false), Some(false)),
                (Some(false), Some(true)),
                (Some(true), Some(false)),
                (Some(true), Some(true))
            ]
        );
        assert_eq!(Assignment::grid(NodeSet::EMPTY), [Assignment::EMPTY]);
    }

    #[test]
    fn merge_prefers_right_side() {
        let a = Assignment::EMPTY.with(0, true).with(1, false);
        let b = Assignment::EMPTY.with(1, true);
        let m = a.merge(&b);
        assert_eq!(m.get(0), Some(true));
        assert_eq!(m.get(1), Some(true));
        assert!(!a.agrees_with(&b));
        assert!(a.agrees_with(&Assignment::EMPTY.with(0, true)));
    }
}
