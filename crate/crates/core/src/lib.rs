//! Frequency sequence of the V meta-Fibonacci recursion, its local window
//! rules, and automata that compute it from binary digits.

pub mod cli;
pub mod dfao;
pub mod local_rules;
pub mod num;
pub mod paper_tables;
pub mod seq_core;
pub mod synthesis;

pub use dfao::{Dfao, Equivalence, OutputKind, Symbol};
pub use local_rules::{Parity, Window, WindowRuleTable};
pub use num::SeqValue;
pub use seq_core::{SeqError, SequenceTable};
pub use synthesis::{SynthesisConfig, SynthesisError};

/// V and Q values.
pub type VTable = SequenceTable<u64>;
/// F values, all in `0..=4`.
pub type FTable = SequenceTable<u8>;
/// First differences of V.
pub type DiffTable = SequenceTable<i64>;
