//! Text formats for sources and codes.
//!
//! Source files hold one `symbol value` entry per line. If every value is a
//! positive integer the values are weights and get normalized by their total;
//! otherwise every value must be an exact rational (`p/q` or an integer) and
//! the values must sum to 1. Code files hold one `symbol bits` entry per line.
//! In both, `#` starts a comment and blank lines are ignored.

use std::fs;
use std::path::Path;

use mincode::rational::{self, Rational};
use mincode::{Codeword, PrefixCode, Source};

#[derive(Debug)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn entries(text: &str) -> Result<Vec<(usize, String, String)>, FormatError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [symbol, value] = parts[..] else {
            return Err(FormatError(format!("line {}: expected `symbol value`, got `{line}`", k + 1)));
        };
        out.push((k + 1, symbol.to_string(), value.to_string()));
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|e| FormatError(format!("{}: {e}", path.display())))
}

pub fn parse_source(text: &str) -> Result<Source, FormatError> {
    let entries = entries(text)?;
    let weights: Option<Vec<u64>> = entries.iter().map(|(_, _, v)| v.parse::<u64>().ok()).collect();
    let result = match weights {
        Some(weights) => Source::from_weights(entries.iter().zip(weights).map(|((_, s, _), w)| (s.clone(), w))),
        None => {
            let mut probs = Vec::with_capacity(entries.len());
            for (line, symbol, value) in &entries {
                let p: Rational = rational::parse(value)
                    .ok_or_else(|| FormatError(format!("line {line}: `{value}` is not an exact rational")))?;
                probs.push((symbol.clone(), p));
            }
            Source::new(probs)
        }
    };
    result.map_err(|e| FormatError(format!("invalid source: {e}")))
}

pub fn parse_code(text: &str) -> Result<PrefixCode, FormatError> {
    let mut words = Vec::new();
    for (line, symbol, bits) in entries(text)? {
        let word: Codeword = bits
            .parse()
            .map_err(|_| FormatError(format!("line {line}: `{bits}` is not a bit string")))?;
        words.push((symbol, word));
    }
    PrefixCode::new(words).map_err(|e| FormatError(format!("invalid code: {e}")))
}

pub fn load_source(path: &Path) -> Result<Source, FormatError> {
    parse_source(&read(path)?).map_err(|e| FormatError(format!("{}: {e}", path.display())))
}

pub fn load_code(path: &Path) -> Result<PrefixCode, FormatError> {
    parse_code(&read(path)?).map_err(|e| FormatError(format!("{}: {e}", path.display())))
}
