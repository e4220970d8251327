//! Self-synchronizing strings.
//!
//! The decoder sits on an internal node; a bit moves it to the matching
//! child, and reaching a leaf emits the symbol and returns to the root. A
//! string synchronizes the tree when, fed from every internal node, it ends
//! with every copy of the decoder back at the root.

use std::collections::{HashMap, VecDeque};

use crate::code::Codeword;
use crate::error::{Error, Result};
use crate::tree::{CodeTree, NodeId};

/// Most internal nodes the bitmask search supports.
pub const MAX_STATES: usize = 64;

/// Default bound on explored state sets.
pub const DEFAULT_SUBSET_CAP: usize = 1 << 22;

/// One decoding step from internal node `state`.
pub fn decoder_step(tree: &CodeTree, state: NodeId, bit: bool) -> Result<NodeId> {
    if !tree.is_complete() {
        return Err(Error::NotComplete);
    }
    let node = tree.get(state).ok_or(Error::NoSuchNode(state))?;
    if node.is_leaf() {
        return Err(Error::NotInternal(state));
    }
    let child = node.child(bit).expect("complete tree");
    Ok(if tree.node(child).is_leaf() { tree.root() } else { child })
}

/// The decoder as a transition table over internal nodes.
#[derive(Debug, Clone)]
pub struct DecoderAutomaton {
    /// Internal node ids; state index `k` is `states[k]`, the root is index 0.
    pub states: Vec<NodeId>,
    /// `transition[k][bit]` is a state index.
    pub transition: Vec<[usize; 2]>,
}

impl DecoderAutomaton {
    pub fn new(tree: &CodeTree) -> Result<Self> {
        if !tree.is_complete() {
            return Err(Error::NotComplete);
        }
        let states: Vec<NodeId> = tree.internal_nodes().collect();
        let index: HashMap<NodeId, usize> = states.iter().enumerate().map(|(k, &id)| (id, k)).collect();
        let transition = states
            .iter()
            .map(|&id| {
                let step = |bit| index[&decoder_step(tree, id, bit).expect("internal")];
                [step(false), step(true)]
            })
            .collect();
        Ok(DecoderAutomaton { states, transition })
    }

    /// Image of a state set under one bit.
    pub fn image(&self, mask: u64, bit: bool) -> u64 {
        let mut out = 0;
        let mut rest = mask;
        while rest != 0 {
            let k = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            out |= 1 << self.transition[k][bit as usize];
        }
        out
    }

    pub fn full_mask(&self) -> u64 {
        if self.states.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.states.len()) - 1
        }
    }

    /// Final state index reached from `state` after `bits`.
    pub fn run(&self, state: usize, bits: &[bool]) -> usize {
        bits.iter().fold(state, |s, &b| self.transition[s][b as usize])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncResult {
    /// Shortest synchronizing string, lexicographically least among the shortest.
    pub string: Option<Codeword>,
    pub exists: bool,
    pub explored_subsets: usize,
}

/// Breadth-first search over decoder state sets, starting from the set of
/// all internal nodes and stopping at `{root}`.
///
/// Bits are tried 0 before 1, so the first hit is the lexicographically
/// least shortest string. When the reachable sets run out without hitting
/// `{root}`, no synchronizing string exists.
pub fn shortest_sync_string(tree: &CodeTree, subset_cap: usize) -> Result<SyncResult> {
    let automaton = DecoderAutomaton::new(tree)?;
    if automaton.states.len() > MAX_STATES {
        return Err(Error::TooManyStates(automaton.states.len()));
    }
    let start = automaton.full_mask();
    let target = 1u64;
    let mut back: HashMap<u64, Option<(u64, bool)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(mask) = queue.pop_front() {
        if mask == target {
            let mut bits = Vec::new();
            let mut at = mask;
            while let Some((prev, bit)) = back[&at] {
                bits.push(bit);
                at = prev;
            }
            bits.reverse();
            return Ok(SyncResult {
                string: Some(Codeword::new(bits)),
                exists: true,
                explored_subsets: back.len(),
            });
        }
        for bit in [false, true] {
            let next = automaton.image(mask, bit);
            if back.contains_key(&next) {
                continue;
            }
            if back.len() >= subset_cap {
                return Err(Error::SubsetCapExceeded(subset_cap));
            }
            back.insert(next, Some((mask, bit)));
            queue.push_back(next);
        }
    }
    Ok(SyncResult { string: None, exists: false, explored_subsets: back.len() })
}

/// True if `bits` drives every internal node to the root.
pub fn synchronizes(tree: &CodeTree, bits: &[bool]) -> Result<bool> {
    let automaton = DecoderAutomaton::new(tree)?;
    Ok((0..automaton.states.len()).all(|k| automaton.run(k, bits) == 0))
}
