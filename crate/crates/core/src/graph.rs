//! Acyclic directed mixed graphs with an optional selection node.
//!
//! Nodes are kept in lexicographic name order and addressed by their position
//! in that order, so iteration over a [`NodeSet`] is reproducible. Subgraph
//! operations never renumber nodes: a node that is dropped simply becomes
//! inactive. Identifiers obtained from a graph therefore stay valid for its
//! latent projection and for every induced or mutilated subgraph.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Hard cap imposed by the 64-bit node-set representation.
pub const MAX_NODES: usize = 64;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Observed,
    Latent,
    Selection,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Observed => "observed",
            NodeKind::Latent => "latent",
            NodeKind::Selection => "selection",
        }
    }
}

impl core::str::FromStr for NodeKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "observed" => Ok(NodeKind::Observed),
            "latent" => Ok(NodeKind::Latent),
            "selection" => Ok(NodeKind::Selection),
            other => Err(GraphError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown node kind `{0}`")]
    UnknownKind(String),
    #[error("node `{0}` declared twice")]
    DuplicateNode(String),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("directed part contains a cycle through `{0}`")]
    Cycle(String),
    #[error("at most one selection node is allowed (found `{0}` and `{1}`)")]
    MultipleSelection(String, String),
    #[error("selection node `{0}` must not have outgoing edges")]
    SelectionHasChildren(String),
    #[error("selection node `{0}` must not have latent parents")]
    SelectionLatentParent(String),
    #[error("bidirected edge {0} <-> {1} touches a latent or selection node")]
    InvalidBidirected(String, String),
    #[error("graph has {0} nodes; at most {MAX_NODES} are supported")]
    TooManyNodes(usize),
    #[error("node sets must be pairwise disjoint")]
    OverlappingSets,
    #[error("graph has no selection node")]
    MissingSelection,
}

/// A set of nodes of one graph, stored as a bitmask over node identifiers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeSet(u64);

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        NodeSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(v: NodeId) -> Self {
        NodeSet(1 << v)
    }

    pub fn contains(self, v: NodeId) -> bool {
        v < MAX_NODES && self.0 & (1 << v) != 0
    }

    pub fn insert(&mut self, v: NodeId) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: NodeId) {
        self.0 &= !(1 << v);
    }

    pub fn with(self, v: NodeId) -> Self {
        NodeSet(self.0 | (1 << v))
    }

    pub fn without(self, v: NodeId) -> Self {
        NodeSet(self.0 & !(1 << v))
    }

    pub fn union(self, other: NodeSet) -> Self {
        NodeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: NodeSet) -> Self {
        NodeSet(self.0 & other.0)
    }

    pub fn difference(self, other: NodeSet) -> Self {
        NodeSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: NodeSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<NodeId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending (canonical) order.
    pub fn iter(self) -> NodeSetIter {
        NodeSetIter(self.0)
    }

    /// All subsets of `self` with exactly `k` members, in lexicographic order
    /// of their sorted member lists.
    pub fn subsets_of_size(self, k: usize) -> Vec<NodeSet> {
        fn rec(items: &[NodeId], k: usize, start: usize, acc: NodeSet, out: &mut Vec<NodeSet>) {
            if k == 0 {
                out.push(acc);
                return;
            }
            for i in start..items.len() {
                if items.len() - i < k {
                    break;
                }
                rec(items, k - 1, i + 1, acc.with(items[i]), out);
            }
        }
        let items: Vec<NodeId> = self.iter().collect();
        let mut out = Vec::new();
        if k <= items.len() {
            rec(&items, k, 0, NodeSet::EMPTY, &mut out);
        }
        out
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<NodeId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut s = NodeSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for NodeSet {
    type Item = NodeId;
    type IntoIter = NodeSetIter;

    fn into_iter(self) -> NodeSetIter {
        self.iter()
    }
}

pub struct NodeSetIter(u64);

impl Iterator for NodeSetIter {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Collects nodes and edges by name, then validates them into a [`CausalGraph`].
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    nodes: Vec<(String, NodeKind)>,
    directed: Vec<(String, String)>,
    bidirected: Vec<(String, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(mut self, name: &str, kind: NodeKind) -> Self {
        self.nodes.push((name.to_string(), kind));
        self
    }

    pub fn observed(self, names: &[&str]) -> Self {
        names.iter().fold(self, |b, n| b.node(n, NodeKind::Observed))
    }

    pub fn latent(self, name: &str) -> Self {
        self.node(name, NodeKind::Latent)
    }

    pub fn selection(self, name: &str) -> Self {
        self.node(name, NodeKind::Selection)
    }

    pub fn edge(mut self, from: &str, to: &str) -> Self {
        self.directed.push((from.to_string(), to.to_string()));
        self
    }

    pub fn edges(self, edges: &[(&str, &str)]) -> Self {
        edges.iter().fold(self, |b, (f, t)| b.edge(f, t))
    }

    pub fn bidirected(mut self, a: &str, b: &str) -> Self {
        self.bidirected.push((a.to_string(), b.to_string()));
        self
    }

    pub fn build(self) -> Result<CausalGraph, GraphError> {
        let mut nodes = self.nodes;
        if nodes.len() > MAX_NODES {
            return Err(GraphError::TooManyNodes(nodes.len()));
        }
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        for w in nodes.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GraphError::DuplicateNode(w[0].0.clone()));
            }
        }
        let n = nodes.len();
        let names: Vec<String> = nodes.iter().map(|(n, _)| n.clone()).collect();
        let kinds: Vec<NodeKind> = nodes.iter().map(|(_, k)| *k).collect();
        let lookup = |name: &str| {
            names
                .binary_search_by(|probe| probe.as_str().cmp(name))
                .map_err(|_| GraphError::UnknownNode(name.to_string()))
        };

        let mut parents = alloc::vec![NodeSet::EMPTY; n];
        let mut children = alloc::vec![NodeSet::EMPTY; n];
        let mut spouses = alloc::vec![NodeSet::EMPTY; n];
        for (f, t) in &self.directed {
            let (a, b) = (lookup(f)?, lookup(t)?);
            if a == b {
                return Err(GraphError::SelfLoop(f.clone()));
            }
            if children[a].contains(b) {
                return Err(GraphError::DuplicateEdge(f.clone(), t.clone()));
            }
            children[a].insert(b);
            parents[b].insert(a);
        }
        for (f, t) in &self.bidirected {
            let (a, b) = (lookup(f)?, lookup(t)?);
            if a == b {
                return Err(GraphError::SelfLoop(f.clone()));
            }
            if kinds[a] != NodeKind::Observed || kinds[b] != NodeKind::Observed {
                return Err(GraphError::InvalidBidirected(f.clone(), t.clone()));
            }
            if spouses[a].contains(b) {
                return Err(GraphError::DuplicateEdge(f.clone(), t.clone()));
            }
            spouses[a].insert(b);
            spouses[b].insert(a);
        }

        let mut selection: Option<NodeId> = None;
        for v in 0..n {
            if kinds[v] != NodeKind::Selection {
                continue;
            }
            if let Some(s) = selection {
                return Err(GraphError::MultipleSelection(names[s].clone(), names[v].clone()));
            }
            if !children[v].is_empty() {
                return Err(GraphError::SelectionHasChildren(names[v].clone()));
            }
            if parents[v].iter().any(|p| kinds[p] == NodeKind::Latent) {
                return Err(GraphError::SelectionLatentParent(names[v].clone()));
            }
            selection = Some(v);
        }

        let active = if n == MAX_NODES { NodeSet(u64::MAX) } else { NodeSet((1u64 << n) - 1) };
        let g = CausalGraph { names, kinds, active, parents, children, spouses };
        g.topological_order_checked()?;
        Ok(g)
    }
}

/// An acyclic directed mixed graph over named binary variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalGraph {
    names: Vec<String>,
    kinds: Vec<NodeKind>,
    active: NodeSet,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
    spouses: Vec<NodeSet>,
}

impl CausalGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Size of the node table, including inactive nodes.
    pub fn capacity(&self) -> usize {
        self.names.len()
    }

    pub fn nodes(&self) -> NodeSet {
        self.active
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    pub fn kind(&self, v: NodeId) -> NodeKind {
        self.kinds[v]
    }

    /// Looks up an active node by name.
    pub fn node(&self, name: &str) -> Result<NodeId, GraphError> {
        match self.names.binary_search_by(|probe| probe.as_str().cmp(name)) {
            Ok(v) if self.active.contains(v) => Ok(v),
            _ => Err(GraphError::UnknownNode(name.to_string())),
        }
    }

    pub fn node_set<S: AsRef<str>>(&self, names: &[S]) -> Result<NodeSet, GraphError> {
        names.iter().map(|n| self.node(n.as_ref())).collect()
    }

    pub fn names_of(&self, s: NodeSet) -> Vec<&str> {
        s.iter().map(|v| self.name(v)).collect()
    }

    fn of_kind(&self, kind: NodeKind) -> NodeSet {
        self.active.iter().filter(|&v| self.kinds[v] == kind).collect()
    }

    pub fn observed(&self) -> NodeSet {
        self.of_kind(NodeKind::Observed)
    }

    pub fn latent(&self) -> NodeSet {
        self.of_kind(NodeKind::Latent)
    }

    pub fn selection(&self) -> Option<NodeId> {
        self.of_kind(NodeKind::Selection).first()
    }

    pub fn selection_set(&self) -> NodeSet {
        self.of_kind(NodeKind::Selection)
    }

    pub fn parents(&self, v: NodeId) -> NodeSet {
        self.parents[v]
    }

    pub fn children(&self, v: NodeId) -> NodeSet {
        self.children[v]
    }

    pub fn spouses(&self, v: NodeId) -> NodeSet {
        self.spouses[v]
    }

    pub fn parents_of_set(&self, s: NodeSet) -> NodeSet {
        s.iter().fold(NodeSet::EMPTY, |acc, v| acc.union(self.parents[v]))
    }

    pub fn directed_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.active
            .iter()
            .flat_map(move |a| self.children[a].iter().map(move |b| (a, b)))
    }

    pub fn bidirected_edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.active
            .iter()
            .flat_map(move |a| self.spouses[a].iter().filter(move |&b| a < b).map(move |b| (a, b)))
    }

    fn check_nodes(&self, s: NodeSet) -> Result<(), GraphError> {
        match s.difference(self.active).first() {
            Some(v) => Err(GraphError::UnknownNode(self.names[v].clone())),
            None => Ok(()),
        }
    }

    fn topological_order_checked(&self) -> Result<Vec<NodeId>, GraphError> {
        let mut indeg: Vec<usize> = (0..self.capacity())
            .map(|v| self.parents[v].intersection(self.active).len())
            .collect();
        let mut ready: Vec<NodeId> = self.active.iter().filter(|&v| indeg[v] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(self.active.len());
        while let Some(v) = ready.pop() {
            order.push(v);
            // keep the smallest ready node on top of the stack
            for c in self.children[v].iter() {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    let pos = ready.iter().position(|&r| r < c).unwrap_or(ready.len());
                    ready.insert(pos, c);
                }
            }
        }
        if order.len() != self.active.len() {
            let stuck = self
                .active
                .iter()
                .find(|v| !order.contains(v))
                .expect("some node is left on a cycle");
            return Err(GraphError::Cycle(self.names[stuck].clone()));
        }
        Ok(order)
    }

    /// Deterministic topological order of the active nodes (smallest ready
    /// node first).
    pub fn topological_order(&self) -> Vec<NodeId> {
        self.topological_order_checked()
            .expect("graphs are validated acyclic on construction")
    }

    /// Reflexive ancestors of `s`.
    pub fn ancestors(&self, s: NodeSet) -> Result<NodeSet, GraphError> {
        self.check_nodes(s)?;
        Ok(self.closure(s, &self.parents))
    }

    /// Reflexive descendants of `s`.
    pub fn descendants(&self, s: NodeSet) -> Result<NodeSet, GraphError> {
        self.check_nodes(s)?;
        Ok(self.closure(s, &self.children))
    }

    fn closure(&self, s: NodeSet, step: &[NodeSet]) -> NodeSet {
        let mut seen = s;
        let mut stack: Vec<NodeId> = s.iter().collect();
        while let Some(v) = stack.pop() {
            for w in step[v].iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Subgraph induced by `keep` (intersected with the active nodes).
    pub fn induced(&self, keep: NodeSet) -> CausalGraph {
        let active = self.active.intersection(keep);
        let mut g = self.clone();
        g.active = active;
        for v in 0..self.capacity() {
            if active.contains(v) {
                g.parents[v] = self.parents[v].intersection(active);
                g.children[v] = self.children[v].intersection(active);
                g.spouses[v] = self.spouses[v].intersection(active);
            } else {
                g.parents[v] = NodeSet::EMPTY;
                g.children[v] = NodeSet::EMPTY;
                g.spouses[v] = NodeSet::EMPTY;
            }
        }
        g
    }

    /// Projects out latent nodes: `a -> b` whenever a directed path from `a`
    /// to `b` runs through latent nodes only, and `a <-> b` whenever some
    /// latent node reaches both along such paths.
    pub fn latent_project(&self) -> CausalGraph {
        let latent = self.latent();
        if latent.is_empty() {
            return self.clone();
        }
        let keep = self.active.difference(latent);
        let mut g = self.induced(keep);

        // non-latent nodes reachable from `v` through latent intermediates only
        let reach_through_latent = |v: NodeId| {
            let mut out = NodeSet::EMPTY;
            let mut seen = NodeSet::EMPTY;
            let mut stack: Vec<NodeId> = self.children[v].iter().collect();
            while let Some(w) = stack.pop() {
                if seen.contains(w) {
                    continue;
                }
                seen.insert(w);
                if latent.contains(w) {
                    stack.extend(self.children[w].iter());
                } else {
                    out.insert(w);
                }
            }
            out
        };

        for a in keep.iter() {
            for b in reach_through_latent(a).iter() {
                g.children[a].insert(b);
                g.parents[b].insert(a);
            }
        }
        for l in latent.iter() {
            let hit: Vec<NodeId> = reach_through_latent(l).iter().collect();
            for (i, &a) in hit.iter().enumerate() {
                for &b in &hit[i + 1..] {
                    g.spouses[a].insert(b);
                    g.spouses[b].insert(a);
                }
            }
        }
        g
    }

    /// Removes directed edges into `cut_incoming` and out of `cut_outgoing`,
    /// plus bidirected edges touching `cut_incoming`.
    pub fn mutilate(&self, cut_incoming: NodeSet, cut_outgoing: NodeSet) -> Result<CausalGraph, GraphError> {
        self.check_nodes(cut_incoming.union(cut_outgoing))?;
        let mut g = self.clone();
        for v in self.active.iter() {
            if cut_incoming.contains(v) {
                g.parents[v] = NodeSet::EMPTY;
                g.spouses[v] = NodeSet::EMPTY;
            } else {
                g.parents[v] = g.parents[v].difference(cut_outgoing);
                g.spouses[v] = g.spouses[v].difference(cut_incoming);
            }
            if cut_outgoing.contains(v) {
                g.children[v] = NodeSet::EMPTY;
            } else {
                g.children[v] = g.children[v].difference(cut_incoming);
            }
        }
        Ok(g)
    }

    /// m-separation of `a` and `b` given `z`; bidirected edges count as
    /// arrowheads at both ends.
    pub fn d_separated(&self, a: NodeSet, b: NodeSet, z: NodeSet) -> Result<bool, GraphError> {
        self.check_nodes(a.union(b).union(z))?;
        if !a.is_disjoint(b) || !a.is_disjoint(z) || !b.is_disjoint(z) {
            return Err(GraphError::OverlappingSets);
        }
        Ok(self.reachable(a, z).is_disjoint(b))
    }

    /// Nodes m-connected to `a` given `z`.
    fn reachable(&self, a: NodeSet, z: NodeSet) -> NodeSet {
        let an_z = self.closure(z, &self.parents);
        // state bit 0: entered with an arrowhead at the node; bit 1: entered via a tail
        let n = self.capacity();
        let mut visited = alloc::vec![[false; 2]; n];
        let mut stack: Vec<(NodeId, usize)> = Vec::new();
        let mut out = NodeSet::EMPTY;
        for v in a.iter() {
            // the start node behaves like a non-collider that is not conditioned on
            visited[v][1] = true;
            stack.push((v, 1));
        }
        while let Some((v, state)) = stack.pop() {
            if !a.contains(v) {
                out.insert(v);
            }
            let conditioned = z.contains(v);
            let arrow_in = state == 0;
            // leave through a tail (v -> c): v is a non-collider
            if !conditioned {
                for c in self.children[v].iter() {
                    if !visited[c][0] {
                        visited[c][0] = true;
                        stack.push((c, 0));
                    }
                }
            }
            // leave through an arrowhead at v (v <- p or v <-> s)
            let may_pass = if arrow_in { an_z.contains(v) } else { !conditioned };
            if may_pass {
                for p in self.parents[v].iter() {
                    if !visited[p][1] {
                        visited[p][1] = true;
                        stack.push((p, 1));
                    }
                }
                for s in self.spouses[v].iter() {
                    if !visited[s][0] {
                        visited[s][0] = true;
                        stack.push((s, 0));
                    }
                }
            }
        }
        out
    }

    /// Connected components of the bidirected skeleton over observed nodes,
    /// ordered by smallest member.
    pub fn c_components(&self) -> Vec<NodeSet> {
        let observed = self.observed();
        let mut left = observed;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = NodeSet::singleton(start);
            let mut stack = alloc::vec![start];
            while let Some(v) = stack.pop() {
                for s in self.spouses[v].intersection(observed).iter() {
                    if !comp.contains(s) {
                        comp.insert(s);
                        stack.push(s);
                    }
                }
            }
            left = left.difference(comp);
            out.push(comp);
        }
        out
    }

    /// The c-component of `v` within the subgraph induced by `within`.
    pub fn c_component_of(&self, v: NodeId, within: NodeSet) -> NodeSet {
        let mut comp = NodeSet::singleton(v);
        let mut stack = alloc::vec![v];
        while let Some(u) = stack.pop() {
            for s in self.spouses[u].intersection(within).iter() {
                if !comp.contains(s) {
                    comp.insert(s);
                    stack.push(s);
                }
            }
        }
        comp
    }

    /// Nodes other than `x` lying on a proper causal path from `x` to `y`.
    fn proper_causal_nodes(&self, x: NodeSet, y: NodeSet) -> Result<NodeSet, GraphError> {
        let de = self.mutilate(x, NodeSet::EMPTY)?.descendants(x)?.difference(x);
        let an = self.mutilate(NodeSet::EMPTY, x)?.ancestors(y)?;
        Ok(de.intersection(an))
    }

    /// Adjustment criterion for `P(y | do(x))` ignoring selection: `z` holds
    /// no descendant (after cutting edges into `x`) of a node on a proper
    /// causal path, and blocks every proper non-causal path from `x` to `y`.
    pub fn generalized_backdoor_ok(&self, x: NodeSet, y: NodeSet, z: NodeSet) -> Result<bool, GraphError> {
        self.check_nodes(x.union(y).union(z))?;
        if !x.is_disjoint(y) || !x.is_disjoint(z) || !y.is_disjoint(z) {
            return Err(GraphError::OverlappingSets);
        }
        let causal = self.proper_causal_nodes(x, y)?;
        let forbidden = self.mutilate(x, NodeSet::EMPTY)?.descendants(causal)?;
        if !z.is_disjoint(forbidden) {
            return Ok(false);
        }
        // proper back-door graph: drop the first edge of every proper causal path
        let mut pbd = self.clone();
        for v in x.iter() {
            for c in self.children[v].intersection(causal).iter() {
                pbd.children[v].remove(c);
                pbd.parents[c].remove(v);
            }
        }
        pbd.d_separated(x, y, z)
    }

    /// Whether `P(y | do(x)) = Σ_z P(y | x, z, S=1) P(z | S=1)` is licensed.
    ///
    /// Sound sufficient conditions: `z` is an adjustment set for `(x, y)`,
    /// `y` is separated from `S` given `x ∪ z`, and `z` is marginally
    /// separated from `S`.
    pub fn generalized_adjustment_ok(&self, x: NodeSet, y: NodeSet, z: NodeSet) -> Result<bool, GraphError> {
        if self.selection().is_none() {
            return Err(GraphError::MissingSelection);
        }
        self.selection_adjustment_ok(x, y, z)
    }

    /// As [`Self::generalized_adjustment_ok`], treating a graph without a
    /// selection node as unselected data.
    pub fn selection_adjustment_ok(&self, x: NodeSet, y: NodeSet, z: NodeSet) -> Result<bool, GraphError> {
        let sel = self.selection_set();
        if !sel.is_disjoint(x.union(y).union(z)) {
            return Err(GraphError::OverlappingSets);
        }
        if !self.generalized_backdoor_ok(x, y, z)? {
            return Ok(false);
        }
        if sel.is_empty() {
            return Ok(true);
        }
        if !self.d_separated(y, sel, x.union(z))? {
            return Ok(false);
        }
        self.d_separated(z, sel, NodeSet::EMPTY)
    }

    /// Members of `z` that are not ancestors of `w` once edges into `x` are cut.
    pub fn z_of_w(&self, x: NodeSet, z: NodeSet, w: NodeSet) -> Result<NodeSet, GraphError> {
        let an = self.mutilate(x, NodeSet::EMPTY)?.ancestors(w)?;
        Ok(z.difference(an))
    }
}

impl fmt::Display for CausalGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.active.iter() {
            writeln!(f, "{} [{}]", self.names[v], self.kinds[v].as_str())?;
        }
        for (a, b) in self.directed_edges() {
            writeln!(f, "{} -> {}", self.names[a], self.names[b])?;
        }
        for (a, b) in self.bidirected_edges() {
            writeln!(f, "{} <-> {}", self.names[a], self.names[b])?;
        }
        Ok(())
    }
}
