//! Minimum expected length binary prefix codes over exact rational sources.
//!
//! The crate builds Huffman trees (one run or every tie-break outcome),
//! classifies arbitrary prefix codes (complete, monotone, strongly monotone,
//! optimal, Huffman), explores same-parent / same-row / same-probability node
//! swap closures, searches for self-synchronizing strings, and carries a
//! brute-force oracle over all complete code trees of small sources.

pub mod analysis;
pub mod code;
pub mod error;
pub mod huffman;
pub mod oracle;
pub mod rational;
pub mod source;
pub mod swaps;
pub mod sync;
pub mod tree;

pub use code::{code_from_lengths, Codeword, PrefixCode};
pub use error::{Error, Result};
pub use rational::Rational;
pub use source::Source;
pub use tree::{CanonicalLabel, CodeTree, Node, NodeId};
