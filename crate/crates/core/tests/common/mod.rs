#![allow(dead_code)]

use mincode::rational::{self, Rational};
use mincode::{CodeTree, Codeword, NodeId, PrefixCode, Source};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn weights(w: &[u64]) -> Source {
    let names = "abcdefghijklmnopqrstuvwxyz";
    Source::from_weights(w.iter().enumerate().map(|(i, &x)| (&names[i..i + 1], x))).unwrap()
}

pub fn ratios(p: &[(i64, i64)]) -> Source {
    Source::lettered(&p.iter().map(|&(a, b)| rational::from_ratio(a, b)).collect::<Vec<Rational>>()).unwrap()
}

pub fn tree(source: &Source, words: &[(&str, &str)]) -> CodeTree {
    CodeTree::from_code(source, &PrefixCode::from_strs(words.iter().copied()).unwrap()).unwrap()
}

/// A random prefix code covering `source`. With `unary_odds > 0` some nodes
/// get a single child; the flag reports whether that happened.
pub fn random_code(source: &Source, rng: &mut impl Rng, unary_odds: f64) -> (PrefixCode, bool) {
    let mut symbols: Vec<usize> = (0..source.len()).collect();
    symbols.shuffle(rng);
    let mut out = Vec::new();
    let mut unary = false;
    grow(&symbols, Vec::new(), rng, unary_odds, &mut unary, &mut out);
    let code = PrefixCode::new(out.into_iter().map(|(s, bits)| (source.symbol(s).to_string(), Codeword::new(bits))))
        .unwrap();
    (code, unary)
}

fn grow(
    symbols: &[usize],
    prefix: Vec<bool>,
    rng: &mut impl Rng,
    unary_odds: f64,
    unary: &mut bool,
    out: &mut Vec<(usize, Vec<bool>)>,
) {
    if prefix.len() < 12 && rng.gen_bool(unary_odds) {
        *unary = true;
        let mut next = prefix;
        next.push(rng.gen());
        return grow(symbols, next, rng, unary_odds, unary, out);
    }
    if symbols.len() == 1 {
        out.push((symbols[0], prefix));
        return;
    }
    let cut = rng.gen_range(1..symbols.len());
    for (bit, part) in [(false, &symbols[..cut]), (true, &symbols[cut..])] {
        let mut next = prefix.clone();
        next.push(bit);
        grow(part, next, rng, unary_odds, unary, out);
    }
}

/// Root-to-node path of `id`.
pub fn path_of(tree: &CodeTree, id: NodeId) -> Vec<bool> {
    let mut bits = Vec::new();
    let mut at = id;
    while let Some(p) = tree.node(at).parent() {
        bits.push(tree.node(p).right() == Some(at));
        at = p;
    }
    bits.reverse();
    bits
}

pub fn node_by_path(tree: &CodeTree, path: &[bool]) -> Option<NodeId> {
    path.iter().try_fold(tree.root(), |at, &b| tree.node(at).child(b))
}
