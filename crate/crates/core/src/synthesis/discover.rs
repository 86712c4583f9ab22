use std::collections::HashMap;

use super::validate::{cross_validate, Verdict};
use super::{word_value, Oracle, SynthesisConfig, SynthesisError};
use crate::dfao::{Dfao, Symbol};
use crate::num::SeqValue;
use crate::seq_core::SequenceTable;

/// What the synthesized automaton outputs for input `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// The window `F(n-a..=n+b)`; requires `a + b + 1 = 4`.
    Window,
    /// The single value `F(n)`.
    Single,
}

/// A validated synthesis result.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub dfao: Dfao,
    /// Horizon at which discovery produced an automaton that passed validation.
    pub horizon: u32,
    pub attempts: u32,
    pub verdict: Verdict,
}

fn offsets(cfg: &SynthesisConfig, target: Target) -> Vec<i64> {
    match target {
        Target::Window => cfg.window_offsets().collect(),
        Target::Single => vec![0],
    }
}

/// Oracle values at `[w x] + o` for every extension `x` with `|x| <= horizon`
/// (shortlex order) and every output offset `o`.
pub fn signature<T: SeqValue>(
    oracle: &SequenceTable<T>,
    word: &[u8],
    cfg: &SynthesisConfig,
    target: Target,
) -> Result<Vec<u8>, SynthesisError> {
    let oracle = Oracle::new(oracle);
    let q = cfg.base as u64;
    let offs = offsets(cfg, target);
    let base = word_value(word, q);
    let top = (base + 1) * q.pow(cfg.horizon) - 1 + *offs.last().unwrap() as u64;
    oracle.require(top as i64)?;
    let mut sig = Vec::with_capacity(offs.len() * ((q.pow(cfg.horizon + 1) - 1) / (q - 1)) as usize);
    let mut scale = 1u64;
    for _ in 0..=cfg.horizon {
        let start = base * scale;
        for n in start..start + scale {
            for &o in &offs {
                sig.push(oracle.at(n as i64 + o)?);
            }
        }
        scale *= q;
    }
    Ok(sig)
}

/// Shortlex-least extension `x`, `|x| <= horizon`, on which the outputs at
/// `[u x]` and `[v x]` differ.
pub fn separating_extension<T: SeqValue>(
    oracle: &SequenceTable<T>,
    u: &[u8],
    v: &[u8],
    cfg: &SynthesisConfig,
    target: Target,
) -> Result<Option<Vec<u8>>, SynthesisError> {
    let su = signature(oracle, u, cfg, target)?;
    let sv = signature(oracle, v, cfg, target)?;
    let width = offsets(cfg, target).len();
    let Some(pos) = su.chunks(width).zip(sv.chunks(width)).position(|(a, b)| a != b) else {
        return Ok(None);
    };
    // position -> (length, value) in shortlex enumeration
    let q = cfg.base as u64;
    let (mut len, mut rest, mut block) = (0u32, pos as u64, 1u64);
    while rest >= block {
        rest -= block;
        block *= q;
        len += 1;
    }
    let mut x = vec![0u8; len as usize];
    for slot in x.iter_mut().rev() {
        *slot = (rest % q) as u8;
        rest /= q;
    }
    Ok(Some(x))
}

/// Largest oracle index touched by discovery when the longest candidate
/// string has value below `max_word_value`.
pub fn discovery_oracle_bound(cfg: &SynthesisConfig, max_word_value: u64) -> i64 {
    (max_word_value * (cfg.base as u64).pow(cfg.horizon)) as i64 + cfg.right as i64
}

/// Breadth-first state discovery. Returns an unvalidated conjecture whose
/// state names are shortlex-least access strings with no leading zero.
pub fn discover<T: SeqValue>(
    oracle: &SequenceTable<T>,
    cfg: &SynthesisConfig,
    target: Target,
) -> Result<Dfao, SynthesisError> {
    cfg.validate()?;
    if target == Target::Window && cfg.left + cfg.right + 1 != 4 {
        return Err(SynthesisError::InvalidConfig("window outputs need a + b + 1 = 4".into()));
    }
    let q = cfg.base as usize;
    let lookup = Oracle::new(oracle);

    let mut reps: Vec<Vec<u8>> = vec![Vec::new()];
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    index.insert(signature(oracle, &[], cfg, target)?, 0);
    let mut rows: Vec<Vec<usize>> = Vec::new();

    let mut next = 0;
    while next < reps.len() {
        let mut row = Vec::with_capacity(q);
        for d in 0..q as u8 {
            if reps[next].is_empty() && d == 0 {
                row.push(0);
                continue;
            }
            let mut word = reps[next].clone();
            word.push(d);
            let sig = signature(oracle, &word, cfg, target)?;
            let id = match index.get(&sig) {
                Some(&id) => id,
                None => {
                    if reps.len() >= cfg.max_states {
                        return Err(SynthesisError::StateLimit(cfg.max_states));
                    }
                    index.insert(sig, reps.len());
                    reps.push(word);
                    reps.len() - 1
                }
            };
            row.push(id);
        }
        rows.push(row);
        next += 1;
    }

    let outputs = reps
        .iter()
        .map(|rep| {
            let n = word_value(rep, q as u64) as i64;
            Ok(match target {
                Target::Window => {
                    let mut w = [0u8; 4];
                    for (slot, o) in w.iter_mut().zip(cfg.window_offsets()) {
                        *slot = lookup.at(n + o)?;
                    }
                    Symbol::Window(w)
                }
                Target::Single => Symbol::Single(lookup.at(n)?),
            })
        })
        .collect::<Result<Vec<_>, SynthesisError>>()?;
    let names =
        reps.iter().map(|r| Some(r.iter().map(|&d| char::from_digit(d as u32, 36).unwrap()).collect())).collect();
    Ok(Dfao::new(q, 0, rows, outputs, names)?)
}

/// Window-output discovery, the automaton whose state determines `F(n-2..=n+1)`.
pub fn synthesize_msb<T: SeqValue>(oracle: &SequenceTable<T>, cfg: &SynthesisConfig) -> Result<Dfao, SynthesisError> {
    discover(oracle, cfg, Target::Window)
}

/// Discovery followed by exhaustive validation up to `cfg.validate_to`. A
/// validation mismatch means the horizon merged distinguishable states, so the
/// horizon is doubled and discovery repeated, at most `cfg.max_retries` times.
pub fn synthesize<T: SeqValue>(
    oracle: &SequenceTable<T>,
    cfg: &SynthesisConfig,
    target: Target,
) -> Result<Synthesis, SynthesisError> {
    let mut cfg = cfg.clone();
    let mut attempts = 0;
    loop {
        attempts += 1;
        let dfao = discover(oracle, &cfg, target)?;
        match cross_validate(&dfao, oracle, cfg.validate_to)? {
            verdict @ Verdict::Pass { .. } => {
                return Ok(Synthesis { dfao, horizon: cfg.horizon, attempts, verdict });
            }
            Verdict::Mismatch { n, .. } => {
                if attempts > cfg.max_retries {
                    return Err(SynthesisError::InsufficientHorizon { horizon: cfg.horizon, n });
                }
                cfg.horizon *= 2;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq_core::gen_f;

    #[test]
    fn signature_layout() {
        let f = gen_f::<u8>(200).unwrap();
        let cfg = SynthesisConfig::frequency().with_horizon(2);
        let sig = signature(&f, &[1, 1, 0], &cfg, Target::Single).unwrap();
        // extensions of 110: eps, 0, 1, 00, 01, 10, 11 -> n = 6, 12, 13, 24..27
        let expect: Vec<u8> = [6, 12, 13, 24, 25, 26, 27].iter().map(|&n| f.get(n).unwrap()).collect();
        assert_eq!(sig, expect);
        let wsig = signature(&f, &[1, 1, 0], &cfg, Target::Window).unwrap();
        assert_eq!(&wsig[..4], &[1, 2, 2, 1]);
        assert_eq!(wsig.len(), 28);
        assert!(matches!(
            signature(&f, &[1, 1, 0, 0, 0, 0], &cfg.clone().with_horizon(3), Target::Single),
            Err(SynthesisError::OracleTooShort { .. })
        ));
    }

    #[test]
    fn separating_extension_is_shortlex_least() {
        let f = gen_f::<u8>(5000).unwrap();
        let cfg = SynthesisConfig::frequency().with_horizon(6);
        let x = separating_extension(&f, &[1, 0, 1], &[1, 1, 0], &cfg, Target::Single).unwrap().unwrap();
        let differs = |x: &[u8]| {
            let n = |w: &[u8]| word_value(&[w, x].concat(), 2) as i64;
            f.get(n(&[1, 0, 1])) != f.get(n(&[1, 1, 0]))
        };
        assert!(differs(&x));
        assert!(!x.is_empty());
        let xv = word_value(&x, 2);
        let shorter = (0..=x.len() as u32)
            .flat_map(|len| (0..1u64 << len).map(move |v| (len, v)))
            .filter(|&(len, v)| (len as usize) < x.len() || v < xv)
            .map(|(len, v)| (0..len).rev().map(|i| ((v >> i) & 1) as u8).collect::<Vec<_>>())
            .any(|y| differs(&y));
        assert!(!shorter);
        assert_eq!(separating_extension(&f, &[1, 0, 0, 1], &[1, 1, 0], &cfg, Target::Window).unwrap(), None);
        // windows 1122 and 2122 differ only left of F(n)
        assert_eq!(separating_extension(&f, &[1, 0, 1], &[1, 0, 0, 0], &cfg, Target::Single).unwrap(), None);
        assert!(separating_extension(&f, &[1, 0, 1], &[1, 0, 0, 0], &cfg, Target::Window).unwrap().is_some());
    }
}
