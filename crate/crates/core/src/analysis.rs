//! Property checks on prefix codes: completeness, monotonicity, strong
//! monotonicity, optimality and length equivalence, plus the length
//! rewrite that strictly shortens a code violating strong monotonicity.

use std::ops::AddAssign;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::code::{code_from_lengths, PrefixCode};
use crate::error::{Error, Result};
use crate::huffman::{self, TiePolicy};
use crate::rational::{self, Rational};
use crate::source::Source;
use crate::tree::CodeTree;

/// Largest alphabet the subset scan accepts.
pub const MAX_SUBSET_SCAN: usize = 20;

/// A certified strong-monotonicity violation: `K(A) = 2^-i > 2^-j = K(B)`
/// yet `P(A) < P(B)`. Sets hold source indices in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityWitness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub i: usize,
    pub j: usize,
}

impl MonotonicityWitness {
    pub fn a_symbols<'s>(&self, source: &'s Source) -> Vec<&'s str> {
        self.a.iter().map(|&k| source.symbol(k)).collect()
    }

    pub fn b_symbols<'s>(&self, source: &'s Source) -> Vec<&'s str> {
        self.b.iter().map(|&k| source.symbol(k)).collect()
    }

    /// Re-derives the violation from scratch.
    pub fn holds_for(&self, source: &Source, code: &PrefixCode) -> bool {
        let kraft = |set: &[usize]| code.kraft_sum(set.iter().map(|&k| source.symbol(k)));
        match (kraft(&self.a), kraft(&self.b)) {
            (Ok(ka), Ok(kb)) => {
                self.i < self.j
                    && ka == rational::pow2_neg(self.i)
                    && kb == rational::pow2_neg(self.j)
                    && source.prob_of(&self.a) < source.prob_of(&self.b)
            }
            _ => false,
        }
    }
}

/// Every node has zero or two children.
pub fn is_complete(tree: &CodeTree) -> bool {
    tree.is_complete()
}

/// The smallest node probability of each row is at least the largest
/// probability of every lower row (internal nodes and leaves alike).
pub fn is_monotone(tree: &CodeTree) -> bool {
    let mut below_max: Option<&Rational> = None;
    for row in (0..tree.row_count()).rev() {
        let range = tree.row(row);
        let min = range.clone().map(|id| tree.node(id).prob()).min().expect("row nonempty");
        let max = range.map(|id| tree.node(id).prob()).max().expect("row nonempty");
        if let Some(lower) = below_max {
            if min < lower {
                return false;
            }
        }
        below_max = Some(below_max.map_or(max, |b| b.max(max)));
    }
    true
}

trait Exact: Clone + Ord + Zero + for<'a> AddAssign<&'a Self> {
    fn log2_exact(&self) -> Option<u64>;
}

impl Exact for u128 {
    fn log2_exact(&self) -> Option<u64> {
        self.is_power_of_two().then(|| self.trailing_zeros() as u64)
    }
}

impl Exact for BigUint {
    fn log2_exact(&self) -> Option<u64> {
        let tz = self.trailing_zeros()?;
        (tz + 1 == self.bits()).then_some(tz)
    }
}

struct Extreme<T> {
    value: T,
    mask: u32,
}

struct Scan<'a, T> {
    kraft: &'a [T],
    prob: &'a [T],
    kraft_bits: u64,
    min: Vec<Option<Extreme<T>>>,
    max: Vec<Option<Extreme<T>>>,
}

/// Subset order used for tie-breaks: ascending index lists compared lexicographically.
fn mask_key(mask: u32) -> Vec<u32> {
    (0..32).filter(|b| mask >> b & 1 == 1).collect()
}

impl<T: Exact> Scan<'_, T> {
    fn visit(&mut self, depth: usize, mask: u32, kraft: T, prob: T) {
        if depth == self.kraft.len() {
            let Some(log) = kraft.log2_exact() else { return };
            let exponent = (self.kraft_bits - log) as usize;
            let replace_min = match &self.min[exponent] {
                None => true,
                Some(e) => prob < e.value || (prob == e.value && mask_key(mask) < mask_key(e.mask)),
            };
            let replace_max = match &self.max[exponent] {
                None => true,
                Some(e) => prob > e.value || (prob == e.value && mask_key(mask) < mask_key(e.mask)),
            };
            if replace_min {
                self.min[exponent] = Some(Extreme { value: prob.clone(), mask });
            }
            if replace_max {
                self.max[exponent] = Some(Extreme { value: prob, mask });
            }
            return;
        }
        let (mut k2, mut p2) = (kraft.clone(), prob.clone());
        k2 += &self.kraft[depth];
        p2 += &self.prob[depth];
        self.visit(depth + 1, mask, kraft, prob);
        self.visit(depth + 1, mask | 1 << depth, k2, p2);
    }

    fn witness(self) -> Option<MonotonicityWitness> {
        let mut best: Option<(usize, usize)> = None;
        for (i, lo) in self.min.iter().enumerate() {
            let Some(lo) = lo else { continue };
            for (j, hi) in self.max.iter().enumerate().skip(i + 1) {
                let Some(hi) = hi else { continue };
                if lo.value >= hi.value {
                    continue;
                }
                // Larger excess hi - lo wins; ties keep the smaller (i, j).
                let better = match best {
                    None => true,
                    Some((bi, bj)) => {
                        let (blo, bhi) = (
                            &self.min[bi].as_ref().expect("realized").value,
                            &self.max[bj].as_ref().expect("realized").value,
                        );
                        let mut lhs = hi.value.clone();
                        lhs += blo;
                        let mut rhs = bhi.clone();
                        rhs += &lo.value;
                        lhs > rhs
                    }
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best.map(|(i, j)| MonotonicityWitness {
            a: mask_key(self.min[i].as_ref().expect("realized").mask).into_iter().map(|b| b as usize).collect(),
            b: mask_key(self.max[j].as_ref().expect("realized").mask).into_iter().map(|b| b as usize).collect(),
            i,
            j,
        })
    }
}

/// Brute-force strong-monotonicity test over all `2^n` symbol subsets.
///
/// Subsets are grouped by their Kraft exponent `k` (`K = 2^-k`); the code is
/// strongly monotone iff for all realized `i < j` the least probability at `i`
/// is at least the greatest probability at `j`. Returns the worst violation
/// (largest probability excess, then smallest `(i, j)`), with each side the
/// lexicographically smallest subset attaining the extreme.
pub fn strong_monotonicity_check(source: &Source, code: &PrefixCode) -> Result<Option<MonotonicityWitness>> {
    let lengths = code.lengths_for(source)?;
    let n = source.len();
    if n > MAX_SUBSET_SCAN {
        return Err(Error::AlphabetTooLarge { size: n, limit: MAX_SUBSET_SCAN });
    }
    let max_len = *lengths.iter().max().expect("n >= 2");
    let denom = source
        .probs()
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let scaled: Vec<BigUint> = source
        .probs()
        .iter()
        .map(|p| (p.numer() * (&denom / p.denom())).to_biguint().expect("positive"))
        .collect();
    let kraft: Vec<BigUint> = lengths.iter().map(|&l| BigUint::one() << (max_len - l)).collect();

    let small = max_len < 120 && denom.bits() < 120;
    let witness = if small {
        let kraft: Vec<u128> = kraft.iter().map(|k| k.to_u128().expect("fits")).collect();
        let prob: Vec<u128> = scaled.iter().map(|p| p.to_u128().expect("fits")).collect();
        run_scan(&kraft, &prob, max_len)
    } else {
        run_scan(&kraft, &scaled, max_len)
    };
    Ok(witness)
}

fn run_scan<T: Exact>(kraft: &[T], prob: &[T], max_len: usize) -> Option<MonotonicityWitness> {
    let mut scan = Scan {
        kraft,
        prob,
        kraft_bits: max_len as u64,
        min: (0..=max_len).map(|_| None).collect(),
        max: (0..=max_len).map(|_| None).collect(),
    };
    scan.visit(0, 0, T::zero(), T::zero());
    scan.witness()
}

/// Exact comparison against the expected length of a Huffman code.
pub fn is_optimal(source: &Source, code: &PrefixCode) -> Result<bool> {
    let len = code.expected_length(source)?;
    Ok(len == huffman_length(source))
}

pub(crate) fn huffman_length(source: &Source) -> Rational {
    huffman::huffman_build(source, TiePolicy::default()).expected_length()
}

/// Same codeword length for every symbol.
pub fn length_equivalent(c1: &PrefixCode, c2: &PrefixCode) -> Result<bool> {
    if c1.len() != c2.len() {
        return Err(Error::AlphabetMismatch);
    }
    let mut equal = true;
    for (symbol, word) in c1.iter() {
        let other = c2.word(symbol).ok_or(Error::AlphabetMismatch)?;
        equal &= word.len() == other.len();
    }
    Ok(equal)
}

/// Shifts `j - i` units of length from `B - A` onto `A - B` and realizes the
/// new lengths canonically. The expected length drops by
/// `(j - i) * (P(B - A) - P(A - B)) > 0`.
pub fn improve_from_witness(source: &Source, code: &PrefixCode, w: &MonotonicityWitness) -> Result<PrefixCode> {
    let mut lengths = code.lengths_for(source)?;
    if w.a.iter().chain(&w.b).any(|&k| k >= source.len()) {
        return Err(Error::InvalidWitness("symbol index out of range"));
    }
    if w.i >= w.j {
        return Err(Error::InvalidWitness("requires i < j"));
    }
    if !w.holds_for(source, code) {
        return Err(Error::InvalidWitness("Kraft sums or probabilities do not certify a violation"));
    }
    let shift = w.j - w.i;
    let in_a = |k: usize| w.a.contains(&k);
    let in_b = |k: usize| w.b.contains(&k);
    for (k, len) in lengths.iter_mut().enumerate() {
        match (in_a(k), in_b(k)) {
            (true, false) => *len += shift,
            (false, true) => *len -= shift,
            _ => {}
        }
    }
    code_from_lengths(source, &lengths)
}

/// Everything [`classify`] reports about a code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub complete: bool,
    pub kraft_total: Rational,
    pub monotone: bool,
    pub strongly_monotone: bool,
    pub witness: Option<MonotonicityWitness>,
    pub optimal: bool,
    pub expected_len: Rational,
    pub huffman_len: Rational,
    pub huffman_member: bool,
    pub length_equivalent_to_huffman: bool,
}

/// Fills every report field from independent computations and fails if
/// optimality, completeness with strong monotonicity, and length
/// equivalence to a Huffman code disagree.
pub fn classify(source: &Source, code: &PrefixCode) -> Result<PropertyReport> {
    let tree = CodeTree::from_code(source, code)?;
    let witness = strong_monotonicity_check(source, code)?;
    let complete = is_complete(&tree);
    let expected_len = code.expected_length(source)?;
    let huffman_len = huffman_length(source);
    let optimal = expected_len == huffman_len;
    let length_equivalent_to_huffman = complete && huffman::is_huffman(&huffman::sort_rows(&tree));
    let report = PropertyReport {
        complete,
        kraft_total: code.kraft_total(),
        monotone: is_monotone(&tree),
        strongly_monotone: witness.is_none(),
        witness,
        optimal,
        expected_len,
        huffman_len,
        huffman_member: huffman::is_huffman(&tree),
        length_equivalent_to_huffman,
    };
    let sm = report.complete && report.strongly_monotone;
    if report.optimal != sm || report.optimal != report.length_equivalent_to_huffman {
        return Err(Error::InconsistentReport(format!(
            "optimal={}, complete&strongly_monotone={}, length_equivalent_to_huffman={}",
            report.optimal, sm, report.length_equivalent_to_huffman
        )));
    }
    if report.complete != report.kraft_total.is_one() {
        return Err(Error::InconsistentReport("completeness disagrees with Kraft sum".into()));
    }
    Ok(report)
}
