use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A finite source: distinct named symbols with strictly positive
/// probabilities summing to exactly one. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    inner: Arc<Inner>,
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    symbols: Vec<String>,
    probs: Vec<Rational>,
    index: HashMap<String, usize>,
}

impl Source {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, Rational)>) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut probs = Vec::new();
        let mut index = HashMap::new();
        let mut total = Rational::zero();
        for (symbol, prob) in entries {
            let symbol = symbol.into();
            if symbol.is_empty() {
                return Err(Error::EmptySymbol);
            }
            if prob <= Rational::zero() {
                return Err(Error::NonPositiveProbability(symbol));
            }
            if index.insert(symbol.clone(), symbols.len()).is_some() {
                return Err(Error::DuplicateSymbol(symbol));
            }
            total += &prob;
            symbols.push(symbol);
            probs.push(prob);
        }
        if symbols.len() < 2 {
            return Err(Error::TooFewSymbols(symbols.len()));
        }
        if !total.is_one() {
            return Err(Error::BadProbabilitySum(rational::to_fraction(&total)));
        }
        Ok(Source {
            inner: Arc::new(Inner { symbols, probs, index }),
        })
    }

    /// Builds a source from positive integer weights, normalized by their total.
    pub fn from_weights<S: Into<String>>(entries: impl IntoIterator<Item = (S, u64)>) -> Result<Self> {
        let entries: Vec<(String, u64)> = entries.into_iter().map(|(s, w)| (s.into(), w)).collect();
        let total: u64 = entries.iter().map(|(_, w)| *w).sum();
        let total = Rational::from_integer(total.into());
        Self::new(
            entries
                .into_iter()
                .map(|(s, w)| (s, Rational::from_integer(w.into()) / &total)),
        )
    }

    /// Single-letter symbols `a`, `b`, ... with the given probabilities.
    pub fn lettered(probs: &[Rational]) -> Result<Self> {
        Self::new(probs.iter().enumerate().map(|(i, p)| (letter_name(i), p.clone())))
    }

    pub fn len(&self) -> usize {
        self.inner.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.symbols.is_empty()
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.inner.symbols[i]
    }

    pub fn prob(&self, i: usize) -> &Rational {
        &self.inner.probs[i]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> + '_ {
        self.inner.symbols.iter().map(String::as_str)
    }

    pub fn probs(&self) -> &[Rational] {
        &self.inner.probs
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.inner.index.get(symbol).copied()
    }

    /// `P(U)` for a set of symbol indices.
    pub fn prob_of<'a>(&self, indices: impl IntoIterator<Item = &'a usize>) -> Rational {
        indices.into_iter().fold(Rational::zero(), |acc, &i| acc + &self.inner.probs[i])
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, p)) in self.inner.symbols.iter().zip(&self.inner.probs).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}:{p}")?;
        }
        Ok(())
    }
}

/// `a`..`z`, then `s26`, `s27`, ...
pub(crate) fn letter_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("s{i}")
    }
}
