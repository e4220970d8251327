//! Arena code trees.
//!
//! Nodes are always stored in raster order: root first, then row by row,
//! left to right within each row. A node id is therefore also a position,
//! and `(row, index-in-row)` resolves to the same node in any two trees
//! with the same canonical label.

use std::collections::VecDeque;
use std::fmt;

use num_traits::{One, Zero};

use crate::code::{Codeword, PrefixCode};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::source::Source;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    parent: Option<NodeId>,
    left: Option<NodeId>,
    right: Option<NodeId>,
    depth: usize,
    prob: Rational,
    symbol: Option<usize>,
}

impl Node {
    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    pub fn left(&self) -> Option<NodeId> {
        self.left
    }

    pub fn right(&self) -> Option<NodeId> {
        self.right
    }

    pub fn child(&self, bit: bool) -> Option<NodeId> {
        if bit {
            self.right
        } else {
            self.left
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Probability of all leaf descendants.
    pub fn prob(&self) -> &Rational {
        &self.prob
    }

    /// Source index of the symbol at a leaf.
    pub fn symbol(&self) -> Option<usize> {
        self.symbol
    }

    pub fn is_leaf(&self) -> bool {
        self.symbol.is_some()
    }

    pub fn child_count(&self) -> usize {
        self.left.is_some() as usize + self.right.is_some() as usize
    }
}

/// Nested-pair rendering of a tree; equal labels mean identical trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalLabel(String);

impl CanonicalLabel {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for CanonicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Position-free description of a tree, used while rebuilding.
#[derive(Debug, Clone)]
pub(crate) struct Draft {
    pub kids: Vec<[Option<usize>; 2]>,
    pub symbol: Vec<Option<usize>>,
    pub root: usize,
}

impl Draft {
    pub fn new() -> Self {
        Draft { kids: Vec::new(), symbol: Vec::new(), root: 0 }
    }

    pub fn leaf(&mut self, symbol: usize) -> usize {
        self.kids.push([None, None]);
        self.symbol.push(Some(symbol));
        self.kids.len() - 1
    }

    pub fn join(&mut self, left: Option<usize>, right: Option<usize>) -> usize {
        self.kids.push([left, right]);
        self.symbol.push(None);
        self.kids.len() - 1
    }

    /// Lays the draft out in raster order and recomputes depths and probabilities.
    pub fn build(&self, source: &Source) -> CodeTree {
        let mut order = Vec::with_capacity(self.kids.len());
        let mut new_id = vec![usize::MAX; self.kids.len()];
        let mut queue = VecDeque::from([self.root]);
        while let Some(old) = queue.pop_front() {
            new_id[old] = order.len();
            order.push(old);
            for kid in self.kids[old].iter().flatten() {
                queue.push_back(*kid);
            }
        }

        let mut nodes: Vec<Node> = Vec::with_capacity(order.len());
        for &old in &order {
            let [l, r] = self.kids[old];
            nodes.push(Node {
                parent: None,
                left: l.map(|k| new_id[k]),
                right: r.map(|k| new_id[k]),
                depth: 0,
                prob: Rational::zero(),
                symbol: self.symbol[old],
            });
        }
        let mut row_starts = vec![0];
        for id in 0..nodes.len() {
            let depth = nodes[id].depth;
            if depth + 1 > row_starts.len() {
                row_starts.push(id);
            }
            for kid in [nodes[id].left, nodes[id].right].into_iter().flatten() {
                nodes[kid].parent = Some(id);
                nodes[kid].depth = depth + 1;
            }
        }
        let mut leaf_of = vec![usize::MAX; source.len()];
        for id in (0..nodes.len()).rev() {
            let prob = match nodes[id].symbol {
                Some(s) => {
                    debug_assert!(nodes[id].left.is_none() && nodes[id].right.is_none());
                    leaf_of[s] = id;
                    source.prob(s).clone()
                }
                None => {
                    let mut p = Rational::zero();
                    for kid in [nodes[id].left, nodes[id].right].into_iter().flatten() {
                        p += &nodes[kid].prob;
                    }
                    p
                }
            };
            nodes[id].prob = prob;
        }
        debug_assert!(leaf_of.iter().all(|&l| l != usize::MAX));
        CodeTree { source: source.clone(), nodes, row_starts, leaf_of }
    }
}

impl Default for Draft {
    fn default() -> Self {
        Self::new()
    }
}

/// A rooted binary code tree whose leaves are the source symbols.
#[derive(Debug, Clone)]
pub struct CodeTree {
    source: Source,
    nodes: Vec<Node>,
    row_starts: Vec<usize>,
    leaf_of: Vec<NodeId>,
}

impl PartialEq for CodeTree {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.nodes == other.nodes
    }
}

impl Eq for CodeTree {}

impl CodeTree {
    /// Builds the tree whose root-to-leaf paths (0 = left, 1 = right) spell the codewords.
    pub fn from_code(source: &Source, code: &PrefixCode) -> Result<Self> {
        if !code.covers(source) {
            return Err(Error::AlphabetMismatch);
        }
        let mut draft = Draft::new();
        let root = draft.join(None, None);
        draft.root = root;
        for (i, symbol) in source.symbols().enumerate() {
            let word = code.word(symbol).expect("covered");
            let mut at = root;
            let (last, path) = word.bits().split_last().expect("nonempty codeword");
            for &bit in path {
                at = match draft.kids[at][bit as usize] {
                    Some(next) => next,
                    None => {
                        let next = draft.join(None, None);
                        draft.kids[at][bit as usize] = Some(next);
                        next
                    }
                };
            }
            let leaf = draft.leaf(i);
            draft.kids[at][*last as usize] = Some(leaf);
        }
        Ok(draft.build(source))
    }

    pub(crate) fn to_draft(&self) -> Draft {
        Draft {
            kids: self.nodes.iter().map(|n| [n.left, n.right]).collect(),
            symbol: self.nodes.iter().map(|n| n.symbol).collect(),
            root: 0,
        }
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn get(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of rows, i.e. the height plus one.
    pub fn row_count(&self) -> usize {
        self.row_starts.len()
    }

    /// Node ids of row `r`, left to right.
    pub fn row(&self, r: usize) -> std::ops::Range<NodeId> {
        let end = self.row_starts.get(r + 1).copied().unwrap_or(self.nodes.len());
        self.row_starts[r]..end
    }

    pub fn rows(&self) -> impl Iterator<Item = std::ops::Range<NodeId>> + '_ {
        (0..self.row_count()).map(move |r| self.row(r))
    }

    /// `(row, index within row)` of a node.
    pub fn position(&self, id: NodeId) -> (usize, usize) {
        let row = self.nodes[id].depth;
        (row, id - self.row_starts[row])
    }

    pub fn node_at(&self, row: usize, index: usize) -> Option<NodeId> {
        if row >= self.row_count() {
            return None;
        }
        let range = self.row(row);
        (index < range.len()).then_some(range.start + index)
    }

    pub fn leaf_of(&self, symbol: usize) -> NodeId {
        self.leaf_of[symbol]
    }

    /// Codeword lengths in source order.
    pub fn lengths(&self) -> Vec<usize> {
        self.leaf_of.iter().map(|&id| self.nodes[id].depth).collect()
    }

    /// True if `a` is `b` or lies on the path from the root to `b`.
    pub fn is_ancestor(&self, a: NodeId, b: NodeId) -> bool {
        let target = self.nodes[a].depth;
        let mut at = b;
        while self.nodes[at].depth > target {
            at = self.nodes[at].parent.expect("non-root has parent");
        }
        at == a
    }

    pub fn internal_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(move |&id| !self.nodes[id].is_leaf())
    }

    /// No node has exactly one child.
    pub fn is_complete(&self) -> bool {
        self.nodes.iter().all(|n| n.child_count() != 1)
    }

    pub fn sibling(&self, id: NodeId) -> Option<NodeId> {
        let parent = &self.nodes[self.nodes[id].parent?];
        if parent.left == Some(id) {
            parent.right
        } else {
            parent.left
        }
    }

    pub fn kraft_total(&self) -> Rational {
        self.leaf_of
            .iter()
            .fold(Rational::zero(), |acc, &id| acc + rational::pow2_neg(self.nodes[id].depth))
    }

    pub fn expected_length(&self) -> Rational {
        crate::code::expected_length_of(&self.source, &self.lengths())
    }

    /// Reads the codewords off the root-to-leaf paths.
    pub fn to_code(&self) -> PrefixCode {
        let words = self.leaf_of.iter().map(|&leaf| {
            let mut bits = Vec::with_capacity(self.nodes[leaf].depth);
            let mut at = leaf;
            while let Some(parent) = self.nodes[at].parent {
                bits.push(self.nodes[parent].right == Some(at));
                at = parent;
            }
            bits.reverse();
            Codeword::new(bits)
        });
        PrefixCode::new(self.source.symbols().map(str::to_string).zip(words))
            .expect("tree paths form a prefix code")
    }

    pub fn canonical_label(&self) -> CanonicalLabel {
        let mut out = String::with_capacity(self.nodes.len() * 3);
        self.write_label(0, &mut out);
        CanonicalLabel(out)
    }

    fn write_label(&self, id: NodeId, out: &mut String) {
        let node = &self.nodes[id];
        if let Some(s) = node.symbol {
            out.push_str(self.source.symbol(s));
            return;
        }
        out.push('(');
        match node.left {
            Some(l) => self.write_label(l, out),
            None => out.push('_'),
        }
        out.push(',');
        match node.right {
            Some(r) => self.write_label(r, out),
            None => out.push('_'),
        }
        out.push(')');
    }

    /// Graphviz rendering: exact probabilities, leaf symbols, edges labeled 0/1.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph code_tree {\n  node [shape=circle];\n");
        for (id, node) in self.nodes.iter().enumerate() {
            let label = match node.symbol {
                Some(s) => format!("{}\\n{}", node.prob, self.source.symbol(s)),
                None => node.prob.to_string(),
            };
            let shape = if node.is_leaf() { "box" } else { "circle" };
            out.push_str(&format!("  n{id} [label=\"{label}\", shape={shape}];\n"));
        }
        for (id, node) in self.nodes.iter().enumerate() {
            if let Some(l) = node.left {
                out.push_str(&format!("  n{id} -> n{l} [label=\"0\"];\n"));
            }
            if let Some(r) = node.right {
                out.push_str(&format!("  n{id} -> n{r} [label=\"1\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Checks the cached fields against a from-scratch recomputation.
    pub fn check_invariants(&self) -> bool {
        let root_ok = self.nodes[0].parent.is_none() && self.nodes[0].depth == 0 && self.nodes[0].prob.is_one();
        root_ok
            && self.nodes.iter().enumerate().all(|(id, n)| {
                let kids: Vec<_> = [n.left, n.right].into_iter().flatten().collect();
                let leaf_ok = n.symbol.is_some() == kids.is_empty();
                let prob_ok = match n.symbol {
                    Some(s) => &n.prob == self.source.prob(s),
                    None => kids.iter().fold(Rational::zero(), |a, &k| a + &self.nodes[k].prob) == n.prob,
                };
                let kids_ok = kids
                    .iter()
                    .all(|&k| self.nodes[k].parent == Some(id) && self.nodes[k].depth == n.depth + 1);
                leaf_ok && prob_ok && kids_ok
            })
    }
}
