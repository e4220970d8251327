//! Huffman construction, tie-break enumeration and the sibling property.

use std::collections::{BTreeMap, HashSet};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::source::Source;
use crate::tree::{CodeTree, Draft, NodeId};

/// Default limit on the number of distinct trees [`huffman_enumerate`] may return.
pub const DEFAULT_ENUMERATION_CAP: usize = 100_000;

/// Which of several equally small nodes a merge step picks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Selector {
    /// Lowest position in the working list (leaves in source order, merged nodes appended).
    #[default]
    FirstIndex,
    LastIndex,
}

/// Where the first-selected (smaller) node of a merge goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ChildOrder {
    #[default]
    SmallerLeft,
    SmallerRight,
}

/// Fully determines one run of the merge loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct TiePolicy {
    pub selector: Selector,
    pub child_order: ChildOrder,
}

impl TiePolicy {
    pub const ALL: [TiePolicy; 4] = [
        TiePolicy { selector: Selector::FirstIndex, child_order: ChildOrder::SmallerLeft },
        TiePolicy { selector: Selector::FirstIndex, child_order: ChildOrder::SmallerRight },
        TiePolicy { selector: Selector::LastIndex, child_order: ChildOrder::SmallerLeft },
        TiePolicy { selector: Selector::LastIndex, child_order: ChildOrder::SmallerRight },
    ];
}

/// Runs the merge loop once under `policy`.
pub fn huffman_build(source: &Source, policy: TiePolicy) -> CodeTree {
    let mut draft = Draft::new();
    let mut active: Vec<(usize, Rational)> = (0..source.len())
        .map(|i| (draft.leaf(i), source.prob(i).clone()))
        .collect();

    let pick = |active: &Vec<(usize, Rational)>| -> usize {
        let mut best = 0;
        for (i, (_, p)) in active.iter().enumerate().skip(1) {
            let better = match policy.selector {
                Selector::FirstIndex => p < &active[best].1,
                Selector::LastIndex => p <= &active[best].1,
            };
            if better {
                best = i;
            }
        }
        best
    };

    while active.len() > 1 {
        let (small, _) = active.remove(pick(&active));
        let (other, _) = active.remove(pick(&active));
        let merged = match policy.child_order {
            ChildOrder::SmallerLeft => draft.join(Some(small), Some(other)),
            ChildOrder::SmallerRight => draft.join(Some(other), Some(small)),
        };
        let prob = draft_prob(&draft, source, merged);
        active.push((merged, prob));
    }
    draft.root = active[0].0;
    draft.build(source)
}

fn draft_prob(draft: &Draft, source: &Source, id: usize) -> Rational {
    match draft.symbol[id] {
        Some(s) => source.prob(s).clone(),
        None => draft.kids[id]
            .iter()
            .flatten()
            .map(|&k| draft_prob(draft, source, k))
            .sum(),
    }
}

#[derive(Debug)]
enum Sub {
    Leaf(usize),
    Pair(Rc<Part>, Rc<Part>),
}

#[derive(Debug)]
struct Part {
    label: String,
    prob: Rational,
    sub: Sub,
}

impl Part {
    fn add_to(&self, draft: &mut Draft) -> usize {
        match &self.sub {
            Sub::Leaf(s) => draft.leaf(*s),
            Sub::Pair(l, r) => {
                let l = l.add_to(draft);
                let r = r.add_to(draft);
                draft.join(Some(l), Some(r))
            }
        }
    }
}

struct Enumerator {
    cap: usize,
    seen: HashSet<Vec<String>>,
    found: BTreeMap<String, Rc<Part>>,
}

impl Enumerator {
    fn explore(&mut self, state: Vec<Rc<Part>>) -> Result<()> {
        if state.len() == 1 {
            let root = state.into_iter().next().expect("one node");
            self.found.insert(root.label.clone(), root);
            if self.found.len() > self.cap {
                return Err(Error::CapExceeded(self.cap));
            }
            return Ok(());
        }
        let mut key: Vec<String> = state.iter().map(|p| p.label.clone()).collect();
        key.sort();
        if !self.seen.insert(key) {
            return Ok(());
        }

        let mut probs: Vec<&Rational> = state.iter().map(|p| &p.prob).collect();
        probs.sort();
        let (p1, p2) = (probs[0].clone(), probs[1].clone());

        for i in 0..state.len() {
            for j in i + 1..state.len() {
                let (a, b) = (&state[i].prob, &state[j].prob);
                let admissible = (a == &p1 && b == &p2) || (a == &p2 && b == &p1);
                if !admissible {
                    continue;
                }
                let rest: Vec<Rc<Part>> = state
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, p)| Rc::clone(p))
                    .collect();
                for (l, r) in [(i, j), (j, i)] {
                    let (l, r) = (&state[l], &state[r]);
                    let merged = Part {
                        label: format!("({},{})", l.label, r.label),
                        prob: &l.prob + &r.prob,
                        sub: Sub::Pair(Rc::clone(l), Rc::clone(r)),
                    };
                    let mut next = rest.clone();
                    next.push(Rc::new(merged));
                    self.explore(next)?;
                }
            }
        }
        Ok(())
    }
}

/// Every tree some run of the merge loop can produce, ordered by canonical label.
///
/// Each step branches over every pair whose probabilities can occupy the two
/// smallest positions of the sorted working multiset, and over both child
/// orders. Fails with [`Error::CapExceeded`] once more than `cap` distinct trees
/// are found.
pub fn huffman_enumerate(source: &Source, cap: usize) -> Result<Vec<CodeTree>> {
    let leaves = (0..source.len())
        .map(|i| {
            Rc::new(Part {
                label: source.symbol(i).to_string(),
                prob: source.prob(i).clone(),
                sub: Sub::Leaf(i),
            })
        })
        .collect();
    let mut search = Enumerator { cap, seen: HashSet::new(), found: BTreeMap::new() };
    search.explore(leaves)?;
    Ok(search
        .found
        .values()
        .map(|part| {
            let mut draft = Draft::new();
            draft.root = part.add_to(&mut draft);
            draft.build(source)
        })
        .collect())
}

/// Non-root nodes in non-increasing probability with siblings adjacent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiblingListing {
    pub order: Vec<NodeId>,
}

impl SiblingListing {
    /// Checks the listing against the definition directly.
    pub fn is_valid_for(&self, tree: &CodeTree) -> bool {
        let mut seen = vec![false; tree.len()];
        for &id in &self.order {
            if id == tree.root() || id >= tree.len() || std::mem::replace(&mut seen[id], true) {
                return false;
            }
        }
        if self.order.len() + 1 != tree.len() {
            return false;
        }
        let sorted = self.order.windows(2).all(|w| tree.node(w[0]).prob() >= tree.node(w[1]).prob());
        let adjacent = self.order.iter().enumerate().all(|(k, &id)| {
            let sib = tree.sibling(id);
            sib.is_some() && ((k > 0 && Some(self.order[k - 1]) == sib) || self.order.get(k + 1).copied() == sib)
        });
        sorted && adjacent
    }
}

/// Finds a sibling-property listing if one exists.
///
/// Sibling pairs are ordered by (larger probability, smaller probability),
/// both descending; a listing exists iff each pair's smaller member is at
/// least the next pair's larger member.
pub fn sibling_property(tree: &CodeTree) -> Result<Option<SiblingListing>> {
    if !tree.is_complete() {
        return Err(Error::NotComplete);
    }
    let mut pairs: Vec<(NodeId, NodeId)> = tree
        .internal_nodes()
        .map(|p| {
            let node = tree.node(p);
            let (l, r) = (node.left().expect("complete"), node.right().expect("complete"));
            if tree.node(l).prob() >= tree.node(r).prob() {
                (l, r)
            } else {
                (r, l)
            }
        })
        .collect();
    pairs.sort_by(|a, b| {
        let key = |&(hi, lo): &(NodeId, NodeId)| (tree.node(hi).prob(), tree.node(lo).prob());
        key(b).cmp(&key(a))
    });
    let ok = pairs
        .windows(2)
        .all(|w| tree.node(w[0].1).prob() >= tree.node(w[1].0).prob());
    Ok(ok.then(|| SiblingListing {
        order: pairs.into_iter().flat_map(|(hi, lo)| [hi, lo]).collect(),
    }))
}

/// A tree is Huffman iff it has the sibling property.
pub fn is_huffman(tree: &CodeTree) -> bool {
    matches!(sibling_property(tree), Ok(Some(_)))
}

/// Reorders every row, bottom row first, into non-increasing probability.
///
/// The sort is stable, so non-leaves that are already ordered keep their
/// relative order. Node depths are untouched: the result is length
/// equivalent to the input.
pub fn sort_rows(tree: &CodeTree) -> CodeTree {
    let mut current = tree.clone();
    for row in (1..tree.row_count()).rev() {
        let slots: Vec<NodeId> = current.row(row).collect();
        let mut sorted = slots.clone();
        sorted.sort_by(|&a, &b| current.node(b).prob().cmp(current.node(a).prob()));
        if sorted == slots {
            continue;
        }
        let mut draft = current.to_draft();
        for (slot, &node) in slots.iter().zip(&sorted) {
            let parent = current.node(*slot).parent().expect("non-root");
            let side = (current.node(parent).right() == Some(*slot)) as usize;
            draft.kids[parent][side] = Some(node);
        }
        current = draft.build(tree.source());
    }
    current
}

/// Turns an optimal complete tree into a length-equivalent Huffman tree.
pub fn huffmanize(tree: &CodeTree) -> Result<CodeTree> {
    if !tree.is_complete() {
        return Err(Error::NotComplete);
    }
    let reference = huffman_build(tree.source(), TiePolicy::default()).expected_length();
    if tree.expected_length() != reference {
        return Err(Error::NotOptimal);
    }
    Ok(sort_rows(tree))
}
