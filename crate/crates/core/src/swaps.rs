//! Node swaps and swap-closure exploration.
//!
//! A node swap exchanges the subtrees rooted at two distinct nodes, neither
//! an ancestor of the other. Same-row swaps need equal depths, same-parent
//! swaps need siblings, same-probability swaps need exactly equal subtree
//! probabilities.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tree::{CanonicalLabel, CodeTree, NodeId};

/// Default limit on explored states in a closure.
pub const DEFAULT_CLOSURE_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SwapKind {
    SameParent,
    SameRow,
    SameProbability,
}

impl SwapKind {
    pub const ALL: [SwapKind; 3] = [SwapKind::SameParent, SwapKind::SameRow, SwapKind::SameProbability];

    /// Short name used in certificates and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            SwapKind::SameParent => "parent",
            SwapKind::SameRow => "row",
            SwapKind::SameProbability => "prob",
        }
    }

    fn holds(self, tree: &CodeTree, u: NodeId, v: NodeId) -> bool {
        let (a, b) = (tree.node(u), tree.node(v));
        match self {
            SwapKind::SameParent => a.parent().is_some() && a.parent() == b.parent(),
            SwapKind::SameRow => a.depth() == b.depth(),
            SwapKind::SameProbability => a.prob() == b.prob(),
        }
    }
}

impl fmt::Display for SwapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SwapKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "parent" => Ok(SwapKind::SameParent),
            "row" => Ok(SwapKind::SameRow),
            "prob" | "probability" => Ok(SwapKind::SameProbability),
            other => Err(format!("unknown swap kind `{other}` (expected parent, row or prob)")),
        }
    }
}

/// A set of swap kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SwapKinds([bool; 3]);

impl SwapKinds {
    pub fn of(kinds: &[SwapKind]) -> Self {
        let mut set = [false; 3];
        for &k in kinds {
            set[k as usize] = true;
        }
        SwapKinds(set)
    }

    pub fn contains(&self, kind: SwapKind) -> bool {
        self.0[kind as usize]
    }

    /// Member kinds, most specific first.
    pub fn iter(&self) -> impl Iterator<Item = SwapKind> + '_ {
        SwapKind::ALL.into_iter().filter(|&k| self.contains(k))
    }
}

impl FromStr for SwapKinds {
    type Err = String;

    /// Comma-separated kind names, e.g. `parent,prob`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let kinds = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(str::parse)
            .collect::<std::result::Result<Vec<SwapKind>, _>>()?;
        if kinds.is_empty() {
            return Err("no swap kinds given".into());
        }
        Ok(SwapKinds::of(&kinds))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SwapMove {
    pub u: NodeId,
    pub v: NodeId,
    pub kind: SwapKind,
}

impl SwapMove {
    pub fn validate(&self, tree: &CodeTree) -> Result<()> {
        for id in [self.u, self.v] {
            tree.get(id).ok_or(Error::NoSuchNode(id))?;
        }
        if self.u == self.v || tree.is_ancestor(self.u, self.v) || tree.is_ancestor(self.v, self.u) {
            return Err(Error::AncestryViolation(self.u, self.v));
        }
        if !self.kind.holds(tree, self.u, self.v) {
            return Err(Error::KindViolation(self.u, self.v));
        }
        Ok(())
    }
}

/// Exchanges the subtrees at `mv.u` and `mv.v`; the input is left untouched.
pub fn node_swap(tree: &CodeTree, mv: SwapMove) -> Result<CodeTree> {
    mv.validate(tree)?;
    let slot = |id: NodeId| {
        let parent = tree.node(id).parent().expect("root is an ancestor of everything");
        (parent, (tree.node(parent).right() == Some(id)) as usize)
    };
    let (pu, su) = slot(mv.u);
    let (pv, sv) = slot(mv.v);
    let mut draft = tree.to_draft();
    draft.kids[pu][su] = Some(mv.v);
    draft.kids[pv][sv] = Some(mv.u);
    Ok(draft.build(tree.source()))
}

/// Every admissible move of the requested kinds, ordered by `(u, v)`.
///
/// A pair that qualifies under several requested kinds is reported once,
/// under the most specific one.
pub fn available_swaps(tree: &CodeTree, kinds: SwapKinds) -> Vec<SwapMove> {
    let mut moves = Vec::new();
    for u in 1..tree.len() {
        for v in u + 1..tree.len() {
            // Raster order puts ancestors first, so only `u` can be an ancestor.
            if tree.is_ancestor(u, v) {
                continue;
            }
            if let Some(kind) = kinds.iter().find(|k| k.holds(tree, u, v)) {
                moves.push(SwapMove { u, v, kind });
            }
        }
    }
    moves
}

/// Breadth-first closure of a tree under admissible swaps.
#[derive(Debug, Clone)]
pub struct ClosureResult {
    /// Members in discovery order; `members[0]` is the start tree.
    pub members: Vec<CanonicalLabel>,
    pub trees: Vec<CodeTree>,
    /// `(from, move, to)` as indices into `members`.
    pub edges: Vec<(usize, SwapMove, usize)>,
    pub truncated: bool,
    index: HashMap<CanonicalLabel, usize>,
}

impl ClosureResult {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, label: &CanonicalLabel) -> bool {
        self.index.contains_key(label)
    }

    pub fn index_of(&self, label: &CanonicalLabel) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Members sorted by canonical label.
    pub fn sorted_labels(&self) -> Vec<CanonicalLabel> {
        let mut labels = self.members.clone();
        labels.sort();
        labels
    }
}

/// Explores every tree reachable from `tree` by moves of `kinds`, stopping
/// (and flagging `truncated`) once `cap` states are known.
pub fn swap_closure(tree: &CodeTree, kinds: SwapKinds, cap: usize) -> ClosureResult {
    let start = tree.canonical_label();
    let mut result = ClosureResult {
        members: vec![start.clone()],
        trees: vec![tree.clone()],
        edges: Vec::new(),
        truncated: false,
        index: HashMap::from([(start, 0)]),
    };
    let mut queue = VecDeque::from([0]);
    'bfs: while let Some(from) = queue.pop_front() {
        let current = result.trees[from].clone();
        for mv in available_swaps(&current, kinds) {
            let next = node_swap(&current, mv).expect("available moves are valid");
            let label = next.canonical_label();
            let to = match result.index.get(&label) {
                Some(&to) => to,
                None => {
                    if result.members.len() >= cap {
                        result.truncated = true;
                        break 'bfs;
                    }
                    let to = result.members.len();
                    result.index.insert(label.clone(), to);
                    result.members.push(label);
                    result.trees.push(next);
                    queue.push_back(to);
                    to
                }
            };
            result.edges.push((from, mv, to));
        }
    }
    result
}

/// Finds a sequence of moves turning `t1` into `t2`, or `None` if `t2` is
/// outside the closure of `t1`. Moves refer to node ids of the tree they are
/// applied to.
pub fn swap_equivalent(t1: &CodeTree, t2: &CodeTree, kinds: SwapKinds, cap: usize) -> Result<Option<Vec<SwapMove>>> {
    let goal = t2.canonical_label();
    let start = t1.canonical_label();
    if start == goal {
        return Ok(Some(Vec::new()));
    }
    let mut trees = vec![t1.clone()];
    let mut back: Vec<Option<(usize, SwapMove)>> = vec![None];
    let mut seen = HashMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([0]);
    while let Some(from) = queue.pop_front() {
        let current = trees[from].clone();
        for mv in available_swaps(&current, kinds) {
            let next = node_swap(&current, mv).expect("available moves are valid");
            let label = next.canonical_label();
            if seen.contains_key(&label) {
                continue;
            }
            if label == goal {
                let mut path = vec![mv];
                let mut at = from;
                while let Some((prev, step)) = back[at] {
                    path.push(step);
                    at = prev;
                }
                path.reverse();
                return Ok(Some(path));
            }
            if trees.len() >= cap {
                return Err(Error::Truncated(cap));
            }
            seen.insert(label, trees.len());
            trees.push(next);
            back.push(Some((from, mv)));
            queue.push_back(trees.len() - 1);
        }
    }
    Ok(None)
}

/// A swap addressed by `(row, index-in-row)` positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateStep {
    pub kind: SwapKind,
    pub u: (usize, usize),
    pub v: (usize, usize),
}

impl CertificateStep {
    pub fn from_move(tree: &CodeTree, mv: SwapMove) -> Self {
        CertificateStep { kind: mv.kind, u: tree.position(mv.u), v: tree.position(mv.v) }
    }

    pub fn resolve(&self, tree: &CodeTree) -> Result<SwapMove> {
        let find = |(row, idx): (usize, usize)| tree.node_at(row, idx).ok_or(Error::NoSuchNode(usize::MAX));
        Ok(SwapMove { u: find(self.u)?, v: find(self.v)?, kind: self.kind })
    }
}

impl fmt::Display for CertificateStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {} {}", self.kind, self.u.0, self.u.1, self.v.0, self.v.1)
    }
}

impl FromStr for CertificateStep {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        let [kind, ru, iu, rv, iv] = parts[..] else {
            return Err(format!("expected `kind row_u idx_u row_v idx_v`, got `{s}`"));
        };
        let num = |t: &str| t.parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        Ok(CertificateStep { kind: kind.parse()?, u: (num(ru)?, num(iu)?), v: (num(rv)?, num(iv)?) })
    }
}

/// A replayable move sequence, one step per line.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub steps: Vec<CertificateStep>,
}

impl Certificate {
    /// Converts moves produced by [`swap_equivalent`] starting from `start`.
    pub fn from_moves(start: &CodeTree, moves: &[SwapMove]) -> Result<Self> {
        let mut tree = start.clone();
        let mut steps = Vec::with_capacity(moves.len());
        for &mv in moves {
            steps.push(CertificateStep::from_move(&tree, mv));
            tree = node_swap(&tree, mv)?;
        }
        Ok(Certificate { steps })
    }

    pub fn replay(&self, start: &CodeTree) -> Result<CodeTree> {
        self.steps
            .iter()
            .try_fold(start.clone(), |tree, step| node_swap(&tree, step.resolve(&tree)?))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

impl FromStr for Certificate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let steps = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()?;
        Ok(Certificate { steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::PrefixCode;
    use crate::huffman::is_huffman;
    use crate::rational::from_ratio;
    use crate::source::Source;

    fn src(probs: &[(i64, i64)]) -> Source {
        Source::lettered(&probs.iter().map(|&(p, q)| from_ratio(p, q)).collect::<Vec<_>>()).unwrap()
    }

    fn tree(source: &Source, words: &[(&str, &str)]) -> CodeTree {
        CodeTree::from_code(source, &PrefixCode::from_strs(words.iter().copied()).unwrap()).unwrap()
    }

    fn ex4() -> (Source, CodeTree, CodeTree, CodeTree) {
        let s = src(&[(1, 3), (1, 3), (1, 6), (1, 6)]);
        let h1 = tree(&s, &[("a", "0"), ("b", "10"), ("c", "110"), ("d", "111")]);
        let h2 = tree(&s, &[("a", "00"), ("b", "01"), ("c", "10"), ("d", "11")]);
        let c = tree(&s, &[("a", "00"), ("c", "01"), ("b", "10"), ("d", "11")]);
        (s, h1, h2, c)
    }

    fn kinds(k: &[SwapKind]) -> SwapKinds {
        SwapKinds::of(k)
    }

    #[test]
    fn swap_examples() {
        let s = src(&[(1, 2), (1, 4), (1, 8), (1, 8)]);
        let h1 = tree(&s, &[("a", "0"), ("b", "10"), ("c", "110"), ("d", "111")]);
        let b = h1.leaf_of(1);
        let sib = h1.sibling(b).unwrap();
        let h2 = node_swap(&h1, SwapMove { u: b, v: sib, kind: SwapKind::SameParent }).unwrap();
        assert_eq!(h2.canonical_label().as_str(), "(a,((c,d),b))");
        assert!(h2.check_invariants());
        assert_eq!(h1.canonical_label().as_str(), "(a,(b,(c,d)))");

        let (_, _, h2, c) = ex4();
        let mv = SwapMove { u: h2.leaf_of(1), v: h2.leaf_of(2), kind: SwapKind::SameRow };
        assert_eq!(node_swap(&h2, mv).unwrap().canonical_label(), c.canonical_label());

        let s5 = src(&[(1, 3), (1, 3), (1, 9), (1, 9), (1, 9)]);
        let h1 = tree(&s5, &[("a", "00"), ("b", "01"), ("d", "100"), ("e", "101"), ("c", "11")]);
        let parent_c = h1.node(h1.leaf_of(2)).parent().unwrap();
        let mid = node_swap(&h1, SwapMove { u: h1.leaf_of(0), v: parent_c, kind: SwapKind::SameProbability }).unwrap();
        assert_eq!(mid.canonical_label().as_str(), "((((d,e),c),b),a)");
        let mv = SwapMove { u: mid.leaf_of(2), v: mid.leaf_of(4), kind: SwapKind::SameProbability };
        let h2 = node_swap(&mid, mv).unwrap();
        assert_eq!(h2.canonical_label().as_str(), "((((d,c),e),b),a)");
        assert_eq!(h2.node(h2.leaf_of(2)).depth(), 4);
    }

    #[test]
    fn swap_errors() {
        let (_, h1, _, _) = ex4();
        let a = h1.leaf_of(0);
        let c = h1.leaf_of(2);
        assert_eq!(
            node_swap(&h1, SwapMove { u: 2, v: c, kind: SwapKind::SameProbability }),
            Err(Error::AncestryViolation(2, c))
        );
        assert_eq!(
            node_swap(&h1, SwapMove { u: a, v: c, kind: SwapKind::SameRow }),
            Err(Error::KindViolation(a, c))
        );
        assert_eq!(
            node_swap(&h1, SwapMove { u: a, v: a, kind: SwapKind::SameRow }),
            Err(Error::AncestryViolation(a, a))
        );
        assert_eq!(
            node_swap(&h1, SwapMove { u: a, v: 99, kind: SwapKind::SameRow }),
            Err(Error::NoSuchNode(99))
        );
    }

    #[test]
    fn available_swap_counts() {
        let two = src(&[(1, 2), (1, 2)]);
        let t = tree(&two, &[("a", "0"), ("b", "1")]);
        assert_eq!(available_swaps(&t, kinds(&[SwapKind::SameParent])).len(), 1);

        let s = src(&[(1, 2), (1, 4), (1, 8), (1, 8)]);
        let h1 = tree(&s, &[("a", "0"), ("b", "10"), ("c", "110"), ("d", "111")]);
        assert_eq!(available_swaps(&h1, kinds(&[SwapKind::SameParent])).len(), 3);

        let s3 = src(&[(3, 8), (3, 8), (1, 8), (1, 8)]);
        let c = tree(&s3, &[("a", "00"), ("c", "01"), ("b", "10"), ("d", "11")]);
        let moves = available_swaps(&c, kinds(&[SwapKind::SameProbability]));
        assert!(moves
            .iter()
            .any(|m| (m.u, m.v) == (c.leaf_of(0).min(c.leaf_of(1)), c.leaf_of(0).max(c.leaf_of(1)))));
    }

    #[test]
    fn closures_of_examples() {
        let s = src(&[(1, 2), (1, 4), (1, 8), (1, 8)]);
        let h1 = tree(&s, &[("a", "0"), ("b", "10"), ("c", "110"), ("d", "111")]);
        let closure = swap_closure(&h1, kinds(&[SwapKind::SameParent]), 1000);
        assert_eq!(closure.len(), 8);
        assert!(!closure.truncated);
        assert!(closure.trees.iter().all(is_huffman));

        let (_, h1, h2, c) = ex4();
        let pp = kinds(&[SwapKind::SameParent, SwapKind::SameProbability]);
        let from_h1 = swap_closure(&h1, pp, 1000);
        assert!(from_h1.contains(&h2.canonical_label()));
        assert!(!from_h1.contains(&c.canonical_label()));
        assert!(!swap_closure(&h2, pp, 1000).contains(&c.canonical_label()));
        let rp = kinds(&[SwapKind::SameRow, SwapKind::SameProbability]);
        assert!(swap_closure(&h2, rp, 1000).contains(&c.canonical_label()));

        let truncated = swap_closure(&h1, pp, 3);
        assert!(truncated.truncated);
        assert_eq!(truncated.len(), 3);
    }

    #[test]
    fn equivalence_certificates() {
        let (_, h1, h2, _) = ex4();
        let pp = kinds(&[SwapKind::SameParent, SwapKind::SameProbability]);
        let path = swap_equivalent(&h1, &h2, pp, 1000).unwrap().expect("equivalent");
        assert_eq!(path.len(), 3);
        let cert = Certificate::from_moves(&h1, &path).unwrap();
        assert_eq!(cert.replay(&h1).unwrap().canonical_label(), h2.canonical_label());
        let reparsed: Certificate = cert.to_string().parse().unwrap();
        assert_eq!(reparsed, cert);

        assert_eq!(swap_equivalent(&h1, &h2, kinds(&[SwapKind::SameRow]), 1000).unwrap(), None);
        assert_eq!(swap_equivalent(&h1, &h1, kinds(&[SwapKind::SameRow]), 1000).unwrap(), Some(vec![]));
        assert_eq!(swap_equivalent(&h1, &h2, pp, 2), Err(Error::Truncated(2)));
    }

    #[test]
    fn certificate_parsing() {
        let step: CertificateStep = "prob 1 0 2 1".parse().unwrap();
        assert_eq!(step, CertificateStep { kind: SwapKind::SameProbability, u: (1, 0), v: (2, 1) });
        assert!("prob 1 0 2".parse::<CertificateStep>().is_err());
        assert!("twist 1 0 2 1".parse::<CertificateStep>().is_err());
        assert_eq!("row,prob".parse::<SwapKinds>().unwrap(), kinds(&[SwapKind::SameRow, SwapKind::SameProbability]));
    }
}
