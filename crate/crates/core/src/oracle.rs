//! Brute-force ground truth over every complete code tree of a small source.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis;
use crate::code::{code_from_lengths, Codeword, PrefixCode};
use crate::error::{Error, Result};
use crate::huffman::{self, TiePolicy, DEFAULT_ENUMERATION_CAP};
use crate::rational::{self, Rational};
use crate::source::Source;
use crate::swaps::{self, SwapKind, SwapKinds, DEFAULT_CLOSURE_CAP};
use crate::tree::{CanonicalLabel, CodeTree, Draft};

/// Largest alphabet [`enumerate_complete_trees`] accepts.
pub const MAX_ENUMERATION: usize = 7;
/// Largest alphabet [`verify_theorems`] accepts.
pub const MAX_VERIFICATION: usize = 6;

#[derive(Debug)]
enum Shape {
    Leaf,
    Node(Rc<Shape>, Rc<Shape>),
}

fn shapes(leaves: usize, memo: &mut HashMap<usize, Vec<Rc<Shape>>>) -> Vec<Rc<Shape>> {
    if let Some(found) = memo.get(&leaves) {
        return found.clone();
    }
    let out = if leaves == 1 {
        vec![Rc::new(Shape::Leaf)]
    } else {
        let mut out = Vec::new();
        for left in 1..leaves {
            let ls = shapes(left, memo);
            let rs = shapes(leaves - left, memo);
            for l in &ls {
                for r in &rs {
                    out.push(Rc::new(Shape::Node(Rc::clone(l), Rc::clone(r))));
                }
            }
        }
        out
    };
    memo.insert(leaves, out.clone());
    out
}

fn place(shape: &Shape, symbols: &mut impl Iterator<Item = usize>, draft: &mut Draft) -> usize {
    match shape {
        Shape::Leaf => draft.leaf(symbols.next().expect("enough symbols")),
        Shape::Node(l, r) => {
            let l = place(l, symbols, draft);
            let r = place(r, symbols, draft);
            draft.join(Some(l), Some(r))
        }
    }
}

/// Rearranges `perm` into its lexicographic successor; `false` after the last one.
fn next_permutation(perm: &mut [usize]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).expect("pivot has a successor");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn catalan(n: usize) -> usize {
    // C(n) = binom(2n, n) / (n + 1), built incrementally to stay exact.
    (0..n).fold(1, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

/// All complete, leaf-labeled, orientation-distinct trees over a source.
///
/// Shapes come from recursive leaf-count splits; each shape is combined with
/// every permutation of the symbols in lexicographic order.
pub struct TreeEnumeration {
    source: Source,
    shapes: Vec<Rc<Shape>>,
}

impl TreeEnumeration {
    /// `n! * Catalan(n - 1)`.
    pub fn count(&self) -> usize {
        self.shapes.len() * factorial(self.source.len())
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn iter(&self) -> impl Iterator<Item = CodeTree> + '_ {
        let n = self.source.len();
        self.shapes.iter().flat_map(move |shape| {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut first = true;
            std::iter::from_fn(move || {
                if !first && !next_permutation(&mut perm) {
                    return None;
                }
                first = false;
                let mut draft = Draft::new();
                draft.root = place(shape, &mut perm.iter().copied(), &mut draft);
                Some(draft.build(&self.source))
            })
        })
    }
}

pub fn enumerate_complete_trees(source: &Source) -> Result<TreeEnumeration> {
    if source.len() > MAX_ENUMERATION {
        return Err(Error::AlphabetTooLarge { size: source.len(), limit: MAX_ENUMERATION });
    }
    Ok(TreeEnumeration { source: source.clone(), shapes: shapes(source.len(), &mut HashMap::new()) })
}

/// Exact minimum expected length over every complete tree.
pub fn min_expected_length(source: &Source) -> Result<Rational> {
    let all = enumerate_complete_trees(source)?;
    Ok(all.iter().map(|t| t.expected_length()).min().expect("at least one tree"))
}

/// Labels of every complete tree attaining the minimum expected length.
pub fn optimal_set(source: &Source) -> Result<BTreeSet<CanonicalLabel>> {
    let all = enumerate_complete_trees(source)?;
    let scored: Vec<(CanonicalLabel, Rational)> =
        all.iter().map(|t| (t.canonical_label(), t.expected_length())).collect();
    let best = scored.iter().map(|(_, l)| l).min().expect("at least one tree").clone();
    Ok(scored.into_iter().filter(|(_, l)| *l == best).map(|(label, _)| label).collect())
}

/// Outcome of one cross-check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremCheck {
    pub name: &'static str,
    pub statement: &'static str,
    pub passed: bool,
    /// Number of individual cases examined.
    pub cases: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub source: Source,
    pub trees: usize,
    pub checks: Vec<TheoremCheck>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&TheoremCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "source: {} ({} complete trees)", self.source, self.trees)?;
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "  {verdict}  {:<34} {:>8} cases  {}", c.name, c.cases, c.statement)?;
            if let Some(cx) = &c.counterexample {
                writeln!(f, "        counterexample: {cx}")?;
            }
        }
        Ok(())
    }
}

struct Checker {
    name: &'static str,
    statement: &'static str,
    cases: usize,
    counterexample: Option<String>,
}

impl Checker {
    fn new(name: &'static str, statement: &'static str) -> Self {
        Checker { name, statement, cases: 0, counterexample: None }
    }

    /// Records one case; keeps the first failure.
    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> TheoremCheck {
        TheoremCheck {
            name: self.name,
            statement: self.statement,
            passed: self.counterexample.is_none(),
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}

/// Partitions `trees` into classes of the `kinds` swap relation; returns a class id per tree.
pub fn swap_classes(trees: &[CodeTree], kinds: SwapKinds) -> Vec<usize> {
    let index: HashMap<CanonicalLabel, usize> =
        trees.iter().enumerate().map(|(k, t)| (t.canonical_label(), k)).collect();
    let mut class = vec![usize::MAX; trees.len()];
    let mut next = 0;
    for k in 0..trees.len() {
        if class[k] != usize::MAX {
            continue;
        }
        for label in &swaps::swap_closure(&trees[k], kinds, DEFAULT_CLOSURE_CAP).members {
            if let Some(&m) = index.get(label) {
                class[m] = next;
            }
        }
        next += 1;
    }
    class
}

/// Runs every exhaustive cross-check against the full tree enumeration.
pub fn verify_theorems(source: &Source) -> Result<VerificationReport> {
    if source.len() > MAX_VERIFICATION {
        return Err(Error::AlphabetTooLarge { size: source.len(), limit: MAX_VERIFICATION });
    }
    let n = source.len();
    let enumeration = enumerate_complete_trees(source)?;
    let trees: Vec<CodeTree> = enumeration.iter().collect();
    let labels: Vec<CanonicalLabel> = trees.iter().map(CodeTree::canonical_label).collect();
    let lengths: Vec<Vec<usize>> = trees.iter().map(CodeTree::lengths).collect();
    let codes: Vec<PrefixCode> = trees.iter().map(CodeTree::to_code).collect();
    let expected: Vec<Rational> = trees.iter().map(CodeTree::expected_length).collect();
    let min = expected.iter().min().expect("nonempty").clone();
    let optimal: Vec<bool> = expected.iter().map(|e| *e == min).collect();
    let optimal_labels: BTreeSet<&CanonicalLabel> =
        labels.iter().zip(&optimal).filter(|(_, &o)| o).map(|(l, _)| l).collect();

    let huffman_trees = huffman::huffman_enumerate(source, DEFAULT_ENUMERATION_CAP)?;
    let huffman_labels: BTreeSet<CanonicalLabel> = huffman_trees.iter().map(CodeTree::canonical_label).collect();
    let huffman_lengths: HashSet<Vec<usize>> = huffman_trees.iter().map(CodeTree::lengths).collect();
    let show = |k: usize| labels[k].to_string();

    let mut checks = Vec::new();

    let mut c = Checker::new("enumeration_count", "tree count equals n! * Catalan(n-1), all distinct");
    let distinct: HashSet<&CanonicalLabel> = labels.iter().collect();
    let expected_count = factorial(n) * catalan(n - 1);
    c.case(trees.len() == expected_count && distinct.len() == trees.len(), || {
        format!("{} trees, {} distinct, expected {}", trees.len(), distinct.len(), expected_count)
    });
    checks.push(c.finish());

    let mut c = Checker::new("complete_iff_kraft_one", "a prefix code is complete iff its Kraft sum is 1");
    for (k, code) in codes.iter().enumerate() {
        c.case(trees[k].is_complete() && code.kraft_total().is_one(), || show(k));
        // Lengthening one codeword leaves its old node with a single child.
        let first = source.symbol(0);
        let mut bits = code.word(first).expect("covered").bits().to_vec();
        bits.push(false);
        let stretched = PrefixCode::new(
            code.iter()
                .map(|(s, w)| (s.to_string(), if s == first { Codeword::new(bits.clone()) } else { w.clone() })),
        )?;
        let t = CodeTree::from_code(source, &stretched)?;
        c.case(!t.is_complete() && stretched.kraft_total() < Rational::one(), || t.canonical_label().to_string());
    }
    checks.push(c.finish());

    let mut c = Checker::new("huffman_is_optimal", "every Huffman tree attains the brute-force minimum");
    for policy in TiePolicy::ALL {
        let t = huffman::huffman_build(source, policy);
        c.case(t.expected_length() == min, || format!("{policy:?}: {}", t.canonical_label()));
    }
    for t in &huffman_trees {
        c.case(t.expected_length() == min, || t.canonical_label().to_string());
    }
    checks.push(c.finish());

    let mut c = Checker::new("sibling_property_iff_huffman", "a tree has the sibling property iff it is Huffman");
    for (k, t) in trees.iter().enumerate() {
        let sibling = huffman::is_huffman(t);
        c.case(sibling == huffman_labels.contains(&labels[k]), || {
            format!("{} sibling={sibling}", show(k))
        });
    }
    checks.push(c.finish());

    let mut c = Checker::new("optimal_implies_monotone", "every optimal tree is monotone");
    for k in (0..trees.len()).filter(|&k| optimal[k]) {
        c.case(analysis::is_monotone(&trees[k]), || show(k));
    }
    checks.push(c.finish());

    let strongly: Vec<bool> = codes
        .iter()
        .map(|code| analysis::strong_monotonicity_check(source, code).map(|w| w.is_none()))
        .collect::<Result<_>>()?;

    let mut c = Checker::new(
        "strong_monotonicity_equivalence",
        "optimal <=> complete and strongly monotone <=> length equivalent to a Huffman code",
    );
    for k in 0..trees.len() {
        let sm = trees[k].is_complete() && strongly[k];
        let le = huffman_lengths.contains(&lengths[k]);
        c.case(optimal[k] == sm && sm == le, || {
            format!("{} optimal={} complete&sm={sm} length_equiv_huffman={le}", show(k), optimal[k])
        });
    }
    checks.push(c.finish());

    let mut c = Checker::new("optimal_set_is_strongly_monotone_set", "complete codes: optimal iff strongly monotone");
    let sm_labels: BTreeSet<&CanonicalLabel> =
        labels.iter().zip(&strongly).filter(|(_, &s)| s).map(|(l, _)| l).collect();
    c.case(sm_labels == optimal_labels, || {
        format!("{} strongly monotone vs {} optimal", sm_labels.len(), optimal_labels.len())
    });
    checks.push(c.finish());

    let mut c = Checker::new(
        "length_equivalence_preserves_properties",
        "length equivalent codes agree on completeness, strong monotonicity, optimality",
    );
    for k in 0..trees.len() {
        let canonical = code_from_lengths(source, &lengths[k])?;
        let complete = canonical.kraft_total().is_one();
        let sm = analysis::strong_monotonicity_check(source, &canonical)?.is_none();
        let opt = canonical.expected_length(source)? == min;
        c.case(complete && sm == strongly[k] && opt == optimal[k], || show(k));
    }
    checks.push(c.finish());

    let mut c = Checker::new(
        "improvement_from_witness",
        "a non-optimal complete code has a witness whose length rewrite shortens it by (j-i)(P(B-A)-P(A-B))",
    );
    for k in (0..trees.len()).filter(|&k| !optimal[k]) {
        let Some(w) = analysis::strong_monotonicity_check(source, &codes[k])? else {
            c.case(false, || format!("{} has no witness", show(k)));
            continue;
        };
        let better = analysis::improve_from_witness(source, &codes[k], &w)?;
        let a_only: Vec<usize> = w.a.iter().copied().filter(|x| !w.b.contains(x)).collect();
        let b_only: Vec<usize> = w.b.iter().copied().filter(|x| !w.a.contains(x)).collect();
        let gain = rational::from_int(w.j - w.i) * (source.prob_of(&b_only) - source.prob_of(&a_only));
        let after = better.expected_length(source)?;
        c.case(&expected[k] - &after == gain && gain > Rational::from_integer(0.into()), || show(k));
    }
    checks.push(c.finish());

    let mut c = Checker::new("huffmanize", "row sorting an optimal tree yields a length equivalent Huffman tree");
    for k in (0..trees.len()).filter(|&k| optimal[k]) {
        let h = huffman::huffmanize(&trees[k])?;
        c.case(huffman::is_huffman(&h) && h.lengths() == lengths[k], || show(k));
    }
    checks.push(c.finish());

    let mut c = Checker::new("swaps_preserve_expected_length", "every admissible swap preserves expected length");
    let all_kinds = SwapKinds::of(&SwapKind::ALL);
    // Every tree for n <= 5; the optimal and Huffman trees plus every 7th tree beyond that.
    for k in (0..trees.len()).filter(|&k| n <= 5 || optimal[k] || k % 7 == 0) {
        for mv in swaps::available_swaps(&trees[k], all_kinds) {
            let next = swaps::node_swap(&trees[k], mv)?;
            let same_len = next.expected_length() == expected[k];
            let lengths_kept = mv.kind == SwapKind::SameProbability || next.lengths() == lengths[k];
            c.case(same_len && lengths_kept, || format!("{} {mv:?}", show(k)));
        }
    }
    checks.push(c.finish());

    let mut c = Checker::new(
        "huffman_swaps_stay_huffman",
        "same-parent and same-probability swaps map Huffman trees to Huffman trees; equal-probability nodes sit in the same or adjacent rows",
    );
    let parent_prob = SwapKinds::of(&[SwapKind::SameParent, SwapKind::SameProbability]);
    for h in &huffman_trees {
        for mv in swaps::available_swaps(h, parent_prob) {
            let next = swaps::node_swap(h, mv)?;
            let rows = h.node(mv.u).depth().abs_diff(h.node(mv.v).depth());
            c.case(huffman::is_huffman(&next) && rows <= 1, || format!("{} {mv:?}", h.canonical_label()));
        }
    }
    checks.push(c.finish());

    let mut c = Checker::new(
        "huffman_codes_swap_equivalent",
        "the same-parent, same-probability closure of a Huffman tree is exactly the set of Huffman trees",
    );
    let start = &huffman_trees[0];
    let closure = swaps::swap_closure(start, parent_prob, DEFAULT_CLOSURE_CAP);
    let closure_labels: BTreeSet<CanonicalLabel> = closure.members.iter().cloned().collect();
    c.case(!closure.truncated && closure_labels == huffman_labels, || {
        format!("closure {} vs huffman {}", closure_labels.len(), huffman_labels.len())
    });
    checks.push(c.finish());

    let mut c = Checker::new(
        "optimal_codes_swap_equivalent",
        "the same-row, same-probability closure of a Huffman tree is exactly the set of optimal trees",
    );
    let row_prob = SwapKinds::of(&[SwapKind::SameRow, SwapKind::SameProbability]);
    let closure = swaps::swap_closure(start, row_prob, DEFAULT_CLOSURE_CAP);
    let closure_labels: BTreeSet<&CanonicalLabel> = closure.members.iter().collect();
    c.case(!closure.truncated && closure_labels == optimal_labels, || {
        format!("closure {} vs optimal {}", closure_labels.len(), optimal_labels.len())
    });
    checks.push(c.finish());

    let row_classes = swap_classes(&trees, SwapKinds::of(&[SwapKind::SameRow]));
    let mut c = Checker::new(
        "length_equivalent_iff_same_row_equivalent",
        "two complete codes are length equivalent iff they are same-row swap equivalent",
    );
    let mut class_lengths: HashMap<usize, &Vec<usize>> = HashMap::new();
    let mut lengths_class: HashMap<&Vec<usize>, usize> = HashMap::new();
    for k in 0..trees.len() {
        let by_class = *class_lengths.entry(row_classes[k]).or_insert(&lengths[k]);
        let by_lengths = *lengths_class.entry(&lengths[k]).or_insert(row_classes[k]);
        c.case(by_class == &lengths[k] && by_lengths == row_classes[k], || show(k));
    }
    checks.push(c.finish());

    let mut c = Checker::new(
        "optimal_iff_same_row_equivalent_to_huffman",
        "a code is optimal iff it is same-row swap equivalent to a Huffman code",
    );
    let huffman_classes: HashSet<usize> = (0..trees.len())
        .filter(|&k| huffman_labels.contains(&labels[k]))
        .map(|k| row_classes[k])
        .collect();
    for k in 0..trees.len() {
        c.case(optimal[k] == huffman_classes.contains(&row_classes[k]), || show(k));
    }
    checks.push(c.finish());

    Ok(VerificationReport { source: source.clone(), trees: trees.len(), checks })
}

/// A named source used for exhaustive verification.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub source: Source,
}

fn weighted(name: &str, weights: &[u64]) -> CorpusEntry {
    let source = Source::from_weights(weights.iter().enumerate().map(|(i, &w)| (crate::source::letter_name(i), w)))
        .expect("valid weights");
    CorpusEntry { name: name.to_string(), source }
}

/// The five worked-example sources.
pub fn example_sources() -> Vec<CorpusEntry> {
    vec![
        weighted("ex1", &[4, 2, 1, 1]),
        weighted("ex2", &[4, 2, 2, 2, 2, 1, 1, 1, 1]),
        weighted("ex3", &[3, 3, 1, 1]),
        weighted("ex4", &[2, 2, 1, 1]),
        weighted("ex5", &[3, 3, 1, 1, 1]),
    ]
}

/// Example sources plus seeded random sources with small integer weights
/// (totals at most 24) and at least one forced tie each.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = example_sources();
    out.push(weighted("uniform3", &[1, 1, 1]));
    out.push(weighted("uniform5", &[1, 1, 1, 1, 1]));
    out.push(weighted("uniform6", &[1, 1, 1, 1, 1, 1]));
    out.push(weighted("pair", &[1, 2]));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut made = 0;
    while made < 20 {
        let n = 3 + made % 4;
        let mut weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
        let from = rng.gen_range(0..n - 1);
        weights[n - 1] = weights[from];
        if weights.iter().sum::<u64>() > 24 {
            continue;
        }
        out.push(weighted(&format!("random{made:02}"), &weights));
        made += 1;
    }
    out
}
