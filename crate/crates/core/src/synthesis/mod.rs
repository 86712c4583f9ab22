//! Automaton synthesis from a sequence oracle, and its certification.
//!
//! States are discovered breadth-first from the empty input: each candidate
//! string is summarised by the oracle's values on all its extensions up to a
//! fixed length, and candidates with equal summaries share a state. The
//! result is a conjecture until [`certify_transitions`] and
//! [`cross_validate`] accept it.

mod arith;
mod certify;
mod discover;
mod pipeline;
mod probe;
mod validate;

use thiserror::Error;

use crate::dfao::DfaoError;
use crate::local_rules::RuleError;
use crate::num::SeqValue;
use crate::seq_core::SequenceTable;

pub use arith::{euclid_div, shift_bounds};
pub use certify::{certification_oracle_bound, certify_transitions, CertificateReport, TransitionRecord, Witness};
pub use discover::{
    discover, discovery_oracle_bound, separating_extension, signature, synthesize, synthesize_msb, Synthesis, Target,
};
pub use pipeline::{frequency_pipeline, Pipeline, RULE_DERIVATION_BOUND};
pub use probe::{automaton_kernel, kernel_probe, KernelLevel, ProbeReport};
pub use validate::{cross_validate, cross_validate_jobs, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("oracle ends at {hi}, index {needed} is required")]
    OracleTooShort { needed: i64, hi: i64 },
    #[error("horizon {horizon} merges states that differ at n = {n}")]
    InsufficientHorizon { horizon: u32, n: u64 },
    #[error("transition {from} -{digit}-> {to} fails at witness {witness}")]
    CertificationFailure { from: String, digit: u8, to: String, witness: String },
    #[error("divisor must be positive")]
    NonpositiveDivisor,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("more than {0} states discovered")]
    StateLimit(usize),
    #[error("oracle value at {0} is not a digit in 0..=4")]
    BadOracleValue(i64),
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error(transparent)]
    Dfao(#[from] DfaoError),
}

/// Parameters of a synthesis run.
///
/// `tower`, `left`, `right` and `threshold` describe the recursion
/// `U(q^(t+1) n + j) = f_j(U(n-a), .., U(n+b), ...)` valid for `n >= n0`;
/// the shift bounds are derived from them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisConfig {
    pub base: u32,
    pub tower: u32,
    pub left: u32,
    pub right: u32,
    pub threshold: u64,
    pub left_shift: u64,
    pub right_shift: u64,
    /// Longest extension compared during discovery.
    pub horizon: u32,
    /// Exhaustive cross-validation bound.
    pub validate_to: u64,
    /// Length of the boundary families checked during certification.
    pub depth: u32,
    pub max_states: usize,
    pub max_retries: u32,
}

pub const DEFAULT_HORIZON: u32 = 12;
pub const DEFAULT_VALIDATE_TO: u64 = 1 << 22;
pub const DEFAULT_DEPTH: u32 = 16;

impl SynthesisConfig {
    pub fn new(base: u32, tower: u32, left: u32, right: u32, threshold: u64) -> Result<Self, SynthesisError> {
        let (left_shift, right_shift) = shift_bounds(base as u64, tower, left as u64, right as u64, threshold)?;
        Ok(Self {
            base,
            tower,
            left,
            right,
            threshold,
            left_shift,
            right_shift,
            horizon: DEFAULT_HORIZON,
            validate_to: DEFAULT_VALIDATE_TO,
            depth: DEFAULT_DEPTH,
            max_states: 4096,
            max_retries: 3,
        })
    }

    /// The binary recursion for F: `F(2n+j)` from `F(n-2..=n+1)` for `n >= 4`.
    pub fn frequency() -> Self {
        Self::new(2, 0, 2, 1, 4).expect("fixed parameters are valid")
    }

    pub fn with_horizon(mut self, horizon: u32) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_validate_to(mut self, validate_to: u64) -> Self {
        self.validate_to = validate_to;
        self
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = depth;
        self
    }

    pub fn validate(&self) -> Result<(), SynthesisError> {
        let (a, b) = shift_bounds(self.base as u64, self.tower, self.left as u64, self.right as u64, self.threshold)?;
        if self.left_shift < a || self.right_shift < b {
            return Err(SynthesisError::InvalidConfig(format!(
                "shift bounds ({}, {}) are below the minimum ({a}, {b})",
                self.left_shift, self.right_shift
            )));
        }
        if self.horizon < 1 {
            return Err(SynthesisError::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.base > 36 {
            return Err(SynthesisError::InvalidConfig(format!("base {} is above 36", self.base)));
        }
        Ok(())
    }

    /// Offsets of the window read around each index, `-left..=right`.
    pub fn window_offsets(&self) -> std::ops::RangeInclusive<i64> {
        -(self.left as i64)..=self.right as i64
    }
}

/// Oracle reads with `F(n) = 0` for negative `n`.
pub(crate) struct Oracle<'a, T> {
    table: &'a SequenceTable<T>,
}

impl<'a, T: SeqValue> Oracle<'a, T> {
    pub(crate) fn new(table: &'a SequenceTable<T>) -> Self {
        Self { table }
    }

    pub(crate) fn hi(&self) -> i64 {
        self.table.hi()
    }

    pub(crate) fn at(&self, n: i64) -> Result<u8, SynthesisError> {
        if n < 0 {
            return Ok(0);
        }
        match self.table.get(n) {
            Some(v) => v.to_u8().filter(|&d| d <= 4).ok_or(SynthesisError::BadOracleValue(n)),
            None => Err(SynthesisError::OracleTooShort { needed: n, hi: self.table.hi() }),
        }
    }

    pub(crate) fn require(&self, n: i64) -> Result<(), SynthesisError> {
        if n > self.table.hi() {
            Err(SynthesisError::OracleTooShort { needed: n, hi: self.table.hi() })
        } else {
            Ok(())
        }
    }
}

/// Integer value of a digit string read in base `q`.
pub(crate) fn word_value(word: &[u8], q: u64) -> u64 {
    word.iter().fold(0, |acc, &d| acc * q + d as u64)
}
