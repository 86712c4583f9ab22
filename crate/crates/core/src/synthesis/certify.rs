//! Transition certification.
//!
//! For a transition `u -d-> v` the automaton claims that `u·d·x` and `v·x`
//! lead to the same output for every extension `x`. Because `F(2N)` and
//! `F(2N+1)` depend only on the window around `N`, equal windows propagate
//! from `x` to `x·0` and `x·1`, except where reading the window crosses out
//! of the extension block: `x = 0^j` (left neighbours borrow from the
//! prefix), `x = 0^j 1` (two to the left) and `x = 1^j` (right neighbour
//! carries into the prefix). Those boundary families are checked directly
//! against the oracle up to a fixed length, the window maps are checked to
//! predict the oracle at every checked point, and the whole automaton is
//! compared exhaustively with the oracle on an initial range.

use std::fmt;

use super::validate::{cross_validate, Verdict};
use super::{word_value, Oracle, SynthesisError};
use crate::dfao::{digits_to_string, Dfao, OutputKind};
use crate::local_rules::{verify_rules, Parity, RuleVerification, WindowRuleTable, RULE_THRESHOLD};
use crate::num::SeqValue;
use crate::seq_core::SequenceTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Base,
    Family,
    Propagation,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Base => "base",
            Stage::Family => "family",
            Stage::Propagation => "propagation",
        })
    }
}

/// The first failing check of a transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub stage: Stage,
    pub extension: Vec<u8>,
    pub offset: i64,
    /// Full input string `u·d·x` on the source side.
    pub input: Vec<u8>,
    pub left: (i64, u8),
    pub right: (i64, u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRecord {
    pub from: String,
    pub digit: u8,
    pub to: String,
    pub base_ok: bool,
    pub family_ok: bool,
    pub propagation_ok: bool,
    pub checks: u64,
    pub witness: Option<Witness>,
}

impl TransitionRecord {
    pub fn passed(&self) -> bool {
        self.base_ok && self.family_ok && self.propagation_ok
    }
}

impl fmt::Display for TransitionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "OK {} -{}-> {}", self.from, self.digit, self.to),
            Some(w) => write!(
                f,
                "FAIL {} -{}-> {} stage={} x={} offset={} F({})={} F({})={} witness={}",
                self.from,
                self.digit,
                self.to,
                w.stage,
                digits_to_string(&w.extension),
                w.offset,
                w.left.0,
                w.left.1,
                w.right.0,
                w.right.1,
                digits_to_string(&w.input)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub records: Vec<TransitionRecord>,
    pub depth: u32,
    pub rules: RuleVerification,
    pub validation: Verdict,
    pub pass: bool,
}

impl CertificateReport {
    pub fn failures(&self) -> impl Iterator<Item = &TransitionRecord> {
        self.records.iter().filter(|r| !r.passed())
    }

    /// The first failing transition as an error, or the report itself.
    pub fn into_result(self) -> Result<Self, SynthesisError> {
        if let Some(r) = self.failures().next() {
            let witness = r.witness.as_ref().map(|w| digits_to_string(&w.input)).unwrap_or_default();
            return Err(SynthesisError::CertificationFailure {
                from: r.from.clone(),
                digit: r.digit,
                to: r.to.clone(),
                witness,
            });
        }
        if let Verdict::Mismatch { n, .. } = self.validation {
            return Err(SynthesisError::CertificationFailure {
                from: "validation".into(),
                digit: 0,
                to: "oracle".into(),
                witness: n.to_string(),
            });
        }
        Ok(self)
    }
}

/// Boundary extensions of length at most `depth + 1`: `0^j`, `0^j 1` and
/// `(q-1)^j`, together with the empty extension.
fn extensions(q: u8, depth: u32) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for j in 1..=depth as usize {
        out.push(vec![0; j]);
    }
    for j in 0..=depth as usize {
        let mut x = vec![0; j];
        x.push(1);
        out.push(x);
    }
    if q > 2 {
        for j in 1..=depth as usize {
            out.push(vec![q - 1; j]);
        }
    } else {
        // 1^1 is already present as 0^0 1
        for j in 2..=depth as usize {
            out.push(vec![1; j]);
        }
    }
    out
}

/// Largest oracle index touched when certifying `m` at `depth`.
pub fn certification_oracle_bound(m: &Dfao, depth: u32) -> i64 {
    let q = m.alphabet_size() as u64;
    let longest = m.access_strings().iter().map(|(_, w)| word_value(w, q) * q + (q - 1)).max().unwrap_or(0);
    // (s + 1) q^(depth+1) covers [s 0^depth 1] + 1, [s (q-1)^depth] + 1 and 2N + 1
    // for every checked N
    ((longest + 1) * q.pow(depth + 1)) as i64 + 1
}

/// Certifies every reachable transition of `m` against the oracle and the
/// window maps, then validates the automaton on `0..=validate_to`.
pub fn certify_transitions<T: SeqValue>(
    m: &Dfao,
    oracle: &SequenceTable<T>,
    rules: &WindowRuleTable,
    depth: u32,
    validate_to: u64,
) -> Result<CertificateReport, SynthesisError> {
    let lookup = Oracle::new(oracle);
    lookup.require(certification_oracle_bound(m, depth))?;
    let q = m.alphabet_size() as u64;
    let offsets: Vec<i64> = match m.output_kind() {
        OutputKind::Window => vec![-2, -1, 0, 1],
        OutputKind::Single => vec![0],
    };
    let window = |n: i64| -> Result<[u8; 4], SynthesisError> {
        Ok([lookup.at(n - 2)?, lookup.at(n - 1)?, lookup.at(n)?, lookup.at(n + 1)?])
    };
    let exts = extensions(q as u8, depth);
    let access = m.access_strings();
    let mut rep = vec![None; m.state_count()];
    for (s, w) in &access {
        rep[*s] = Some(w.clone());
    }

    let mut records = Vec::new();
    for (s, u) in &access {
        for d in 0..q as u8 {
            let t = m.successor(*s, d);
            let v = rep[t].as_ref().expect("successor of a reachable state is reachable");
            let mut src = u.clone();
            src.push(d);
            let (sv, vv) = (word_value(&src, q), word_value(v, q));
            let mut rec = TransitionRecord {
                from: digits_to_string(u),
                digit: d,
                to: digits_to_string(v),
                base_ok: true,
                family_ok: true,
                propagation_ok: true,
                checks: 0,
                witness: None,
            };
            'outer: for x in &exts {
                let scale = q.pow(x.len() as u32);
                let xv = word_value(x, q);
                let n1 = (sv * scale + xv) as i64;
                let n2 = (vv * scale + xv) as i64;
                let stage = if x.is_empty() { Stage::Base } else { Stage::Family };
                for &o in &offsets {
                    rec.checks += 1;
                    let (a, b) = (lookup.at(n1 + o)?, lookup.at(n2 + o)?);
                    if a != b {
                        match stage {
                            Stage::Base => rec.base_ok = false,
                            _ => rec.family_ok = false,
                        }
                        rec.witness = Some(Witness {
                            stage,
                            extension: x.clone(),
                            offset: o,
                            input: [src.as_slice(), x.as_slice()].concat(),
                            left: (n1 + o, a),
                            right: (n2 + o, b),
                        });
                        break 'outer;
                    }
                }
                if m.output_kind() != OutputKind::Window || x.len() > depth as usize {
                    continue;
                }
                for n in [n1, n2] {
                    if n < RULE_THRESHOLD as i64 {
                        continue;
                    }
                    let w = window(n)?;
                    for parity in [Parity::Even, Parity::Odd] {
                        rec.checks += 1;
                        let idx = 2 * n + parity.bit() as i64;
                        let actual = lookup.at(idx)?;
                        let predicted = rules.apply(&w, parity).ok();
                        if predicted != Some(actual) {
                            rec.propagation_ok = false;
                            let mut input = [src.as_slice(), x.as_slice()].concat();
                            input.push(parity.bit() as u8);
                            rec.witness = Some(Witness {
                                stage: Stage::Propagation,
                                extension: x.clone(),
                                offset: 0,
                                input,
                                left: (idx, predicted.unwrap_or(0)),
                                right: (idx, actual),
                            });
                            break 'outer;
                        }
                    }
                }
            }
            records.push(rec);
        }
    }

    let rules_to = (validate_to.max(RULE_THRESHOLD) as i64).min((lookup.hi() - 1) / 2) as u64;
    let rule_report = verify_rules(rules, oracle, rules_to)?;
    let validation = cross_validate(m, oracle, validate_to)?;
    let pass = records.iter().all(TransitionRecord::passed) && validation.is_pass();
    Ok(CertificateReport { records, depth, rules: rule_report, validation, pass })
}
