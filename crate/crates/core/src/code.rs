//! Prefix codes, Kraft sums and the canonical length-to-code assignment.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::source::Source;

/// A binary word, most significant (first transmitted) bit first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Codeword(Vec<bool>);

impl Codeword {
    pub fn new(bits: Vec<bool>) -> Self {
        Codeword(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &Codeword) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Adds one to the word read as a binary number; `false` on overflow.
    fn increment(&mut self) -> bool {
        for bit in self.0.iter_mut().rev() {
            if *bit {
                *bit = false;
            } else {
                *bit = true;
                return true;
            }
        }
        false
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Error returned when a bit string contains something other than `0`/`1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadBit(pub char);

impl fmt::Display for BadBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid bit `{}`", self.0)
    }
}

impl std::error::Error for BadBit {}

impl FromStr for Codeword {
    type Err = BadBit;

    fn from_str(s: &str) -> std::result::Result<Self, BadBit> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BadBit(other)),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Codeword)
    }
}

/// A prefix-free map from symbols to nonempty codewords.
///
/// Equality is map equality; insertion order only affects display.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCode {
    words: IndexMap<String, Codeword>,
}

impl PrefixCode {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, Codeword)>) -> Result<Self> {
        let mut words = IndexMap::new();
        for (symbol, word) in entries {
            let symbol = symbol.into();
            if word.is_empty() {
                return Err(Error::EmptyCodeword(symbol));
            }
            if words.contains_key(&symbol) {
                return Err(Error::DuplicateSymbol(symbol));
            }
            words.insert(symbol, word);
        }
        // In lexicographic order a word that prefixes anything prefixes its successor.
        let mut sorted: Vec<(&String, &Codeword)> = words.iter().collect();
        sorted.sort_by(|a, b| a.1.cmp(b.1));
        for pair in sorted.windows(2) {
            if pair[0].1.is_prefix_of(pair[1].1) {
                return Err(Error::PrefixViolation(pair[0].0.clone(), pair[1].0.clone()));
            }
        }
        Ok(PrefixCode { words })
    }

    /// Convenience constructor from `(symbol, "0101")` pairs.
    pub fn from_strs<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut parsed = Vec::new();
        for (symbol, bits) in entries {
            let word = bits
                .parse::<Codeword>()
                .map_err(|_| Error::InvalidCodeword(symbol.to_string()))?;
            parsed.push((symbol, word));
        }
        Self::new(parsed)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, symbol: &str) -> Option<&Codeword> {
        self.words.get(symbol)
    }

    pub fn length(&self, symbol: &str) -> Option<usize> {
        self.words.get(symbol).map(Codeword::len)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Codeword)> + '_ {
        self.words.iter().map(|(s, w)| (s.as_str(), w))
    }

    /// True iff the code's symbols are exactly the source alphabet.
    pub fn covers(&self, source: &Source) -> bool {
        self.words.len() == source.len() && source.symbols().all(|s| self.words.contains_key(s))
    }

    /// Codeword lengths in source order.
    pub fn lengths_for(&self, source: &Source) -> Result<Vec<usize>> {
        if !self.covers(source) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(source.symbols().map(|s| self.words[s].len()).collect())
    }

    /// `K_C(U) = sum over U of 2^-len`.
    pub fn kraft_sum<'a>(&self, subset: impl IntoIterator<Item = &'a str>) -> Result<Rational> {
        let mut total = Rational::zero();
        for symbol in subset {
            let word = self
                .words
                .get(symbol)
                .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
            total += rational::pow2_neg(word.len());
        }
        Ok(total)
    }

    /// Kraft sum over the whole code.
    pub fn kraft_total(&self) -> Rational {
        self.words
            .values()
            .fold(Rational::zero(), |acc, w| acc + rational::pow2_neg(w.len()))
    }

    /// `sum_y P(y) * len(y)`.
    pub fn expected_length(&self, source: &Source) -> Result<Rational> {
        let lengths = self.lengths_for(source)?;
        Ok(expected_length_of(source, &lengths))
    }
}

impl fmt::Display for PrefixCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (symbol, word) in &self.words {
            writeln!(f, "{symbol} {word}")?;
        }
        Ok(())
    }
}

pub(crate) fn expected_length_of(source: &Source, lengths: &[usize]) -> Rational {
    lengths
        .iter()
        .zip(source.probs())
        .fold(Rational::zero(), |acc, (&l, p)| acc + p * rational::from_int(l))
}

/// Kraft sum of a length sequence.
pub fn kraft_of_lengths(lengths: &[usize]) -> Rational {
    lengths
        .iter()
        .fold(Rational::zero(), |acc, &l| acc + rational::pow2_neg(l))
}

/// Canonical prefix code with the requested lengths (given in source order).
///
/// Symbols are taken by ascending length, ties in source order, and each gets
/// the numerically smallest word of its length that extends no earlier word.
pub fn code_from_lengths(source: &Source, lengths: &[usize]) -> Result<PrefixCode> {
    if lengths.len() != source.len() {
        return Err(Error::AlphabetMismatch);
    }
    let kraft = kraft_of_lengths(lengths);
    if kraft > Rational::one() {
        return Err(Error::KraftExceeded(rational::to_fraction(&kraft)));
    }
    let mut order: Vec<usize> = (0..source.len()).collect();
    order.sort_by_key(|&i| (lengths[i], i));

    let mut words = vec![Codeword::default(); source.len()];
    let mut current: Option<Codeword> = None;
    for &i in &order {
        let len = lengths[i];
        let next = match current.take() {
            None => Codeword(vec![false; len]),
            Some(mut prev) => {
                let carried = prev.increment();
                // Kraft <= 1 rules out running past the all-ones word.
                debug_assert!(carried);
                prev.0.resize(len, false);
                prev
            }
        };
        words[i] = next.clone();
        current = Some(next);
    }
    PrefixCode::new(source.symbols().map(str::to_string).zip(words))
}
