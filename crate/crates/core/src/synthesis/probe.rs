use std::collections::HashSet;

use crate::dfao::{Dfao, Symbol};
use crate::num::SeqValue;
use crate::seq_core::SequenceTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelLevel {
    pub exponent: u32,
    /// Distinct prefixes among the `q^e` subsequences of this level.
    pub distinct: usize,
    /// Prefixes not seen at any lower level.
    pub new: usize,
    /// Distinct prefixes over all levels so far.
    pub cumulative: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub base: u64,
    /// Number of leading terms compared, after truncation to the oracle.
    pub prefix: usize,
    pub levels: Vec<KernelLevel>,
}

impl ProbeReport {
    /// The deepest level added nothing new.
    pub fn stabilized(&self) -> bool {
        self.levels.len() >= 2 && self.levels.last().is_some_and(|l| l.new == 0)
    }

    pub fn kernel_size(&self) -> usize {
        self.levels.last().map_or(0, |l| l.cumulative)
    }
}

/// Counts kernel subsequences `n -> S(q^e n + c)`, `0 <= c < q^e`, `e <= depth`,
/// identified by their first `prefix` terms. Indices are taken as absolute
/// table indices; positions below the table's start read as absent. The
/// prefix shrinks if the table is too short to supply it at the deepest level.
pub fn kernel_probe<T: SeqValue>(oracle: &SequenceTable<T>, q: u64, depth: u32, prefix: usize) -> ProbeReport {
    let top = q.pow(depth);
    let available = if oracle.hi() < 0 { 0 } else { ((oracle.hi() as u64 + 1) / top) as usize };
    let prefix = prefix.min(available).max(1);
    let read = |n: u64| -> Option<T> { oracle.get(n as i64) };

    let mut seen: HashSet<Vec<Option<T>>> = HashSet::new();
    let mut levels = Vec::with_capacity(depth as usize + 1);
    let mut modulus = 1u64;
    for exponent in 0..=depth {
        let mut level: HashSet<Vec<Option<T>>> = HashSet::new();
        let mut new = 0;
        for c in 0..modulus {
            let sub: Vec<Option<T>> = (0..prefix as u64).map(|n| read(modulus * n + c)).collect();
            if seen.insert(sub.clone()) {
                new += 1;
            }
            level.insert(sub);
        }
        levels.push(KernelLevel { exponent, distinct: level.len(), new, cumulative: seen.len() });
        modulus *= q;
    }
    ProbeReport { base: q, prefix, levels }
}

/// Exact kernel of the sequence an automaton computes, level by level, until
/// a level adds nothing new or `max_depth` is reached.
///
/// A kernel element `n -> S(q^e n + c)` is the output of the state reached on
/// `n` followed by the `e` digits of `c`, so it is determined by the vector of
/// outputs `tau(delta(s, w))` over all reachable states `s`. Prepending digit
/// `d` to `w` turns that vector `v` into `s -> v(delta(s, d))`.
pub fn automaton_kernel(m: &Dfao, max_depth: u32) -> Vec<KernelLevel> {
    let states: Vec<usize> = m.access_strings().into_iter().map(|(s, _)| s).collect();
    let mut slot = vec![usize::MAX; m.state_count()];
    for (i, &s) in states.iter().enumerate() {
        slot[s] = i;
    }
    let start: Vec<Symbol> = states.iter().map(|&s| m.output(s)).collect();
    let mut seen: HashSet<Vec<Symbol>> = HashSet::from([start.clone()]);
    let mut level = vec![start];
    let mut levels = vec![KernelLevel { exponent: 0, distinct: 1, new: 1, cumulative: 1 }];
    for exponent in 1..=max_depth {
        let mut next: HashSet<Vec<Symbol>> = HashSet::new();
        for v in &level {
            for d in 0..m.alphabet_size() as u8 {
                next.insert(states.iter().map(|&s| v[slot[m.successor(s, d)]]).collect());
            }
        }
        let new = next.iter().filter(|v| !seen.contains(*v)).count();
        seen.extend(next.iter().cloned());
        levels.push(KernelLevel { exponent, distinct: next.len(), new, cumulative: seen.len() });
        level = next.into_iter().collect();
        if new == 0 {
            break;
        }
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence_has_one_kernel_element() {
        let t = SequenceTable::new("c", 0, vec![5u8; 4096]).unwrap();
        let r = kernel_probe(&t, 2, 6, 32);
        assert!(r.levels.iter().all(|l| l.distinct == 1 && l.cumulative == 1));
        assert!(r.stabilized());
    }

    #[test]
    fn thue_morse_kernel_has_two_elements() {
        let t = SequenceTable::new("tm", 0, (0..1u32 << 14).map(|n| (n.count_ones() % 2) as u8).collect()).unwrap();
        let r = kernel_probe(&t, 2, 6, 64);
        assert_eq!(r.kernel_size(), 2);
        assert!(r.stabilized());
    }

    #[test]
    fn identity_sequence_keeps_growing() {
        let t = SequenceTable::new("n", 0, (0..1u32 << 12).collect()).unwrap();
        let r = kernel_probe(&t, 2, 5, 16);
        assert_eq!(r.levels.iter().map(|l| l.new).collect::<Vec<_>>(), vec![1, 2, 4, 8, 16, 32]);
        assert!(!r.stabilized());
    }

    #[test]
    fn thue_morse_automaton_kernel_matches_probe() {
        let tm =
            Dfao::new(2, 0, vec![vec![0, 1], vec![1, 0]], vec![Symbol::Single(0), Symbol::Single(1)], vec![None; 2])
                .unwrap();
        let exact = automaton_kernel(&tm, 10);
        assert_eq!(exact.last().unwrap().cumulative, 2);
        assert_eq!(exact.last().unwrap().new, 0);
        let t = SequenceTable::new(
            "tm",
            0,
            (0..1u32 << 12).map(|n| tm.eval_u64(n as u64) == Symbol::Single(1)).map(u8::from).collect(),
        )
        .unwrap();
        let probed = kernel_probe(&t, 2, exact.len() as u32 - 1, 64);
        assert_eq!(probed.levels, exact);
    }

    #[test]
    fn prefix_is_truncated_to_the_table() {
        let t = SequenceTable::new("c", 0, vec![1u8; 100]).unwrap();
        let r = kernel_probe(&t, 2, 3, 1000);
        assert_eq!(r.prefix, 12);
    }
}
