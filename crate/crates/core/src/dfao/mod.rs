//! Deterministic finite automata with output, read most-significant digit first.

mod dot;
mod text;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

pub use dot::to_dot;
pub use text::{deserialize, serialize};

/// Largest digit allowed in an output symbol.
pub const MAX_OUTPUT_DIGIT: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutputKind {
    /// Four consecutive sequence values.
    Window,
    /// A single sequence value.
    Single,
}

impl fmt::Display for OutputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputKind::Window => "window",
            OutputKind::Single => "single",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Window([u8; 4]),
    Single(u8),
}

impl Symbol {
    pub fn kind(&self) -> OutputKind {
        match self {
            Symbol::Window(_) => OutputKind::Window,
            Symbol::Single(_) => OutputKind::Single,
        }
    }

    fn digits(&self) -> &[u8] {
        match self {
            Symbol::Window(w) => w,
            Symbol::Single(d) => std::slice::from_ref(d),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.digits() {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DfaoError {
    #[error("digit {digit} at position {position} is not below the base {base}")]
    BadDigit { digit: u8, position: usize, base: usize },
    #[error("`{0}` is not a decimal numeral")]
    BadNumeral(String),
    #[error("automaton output is not a window")]
    NotWindowKind,
    #[error("window component {0} does not exist")]
    BadComponent(usize),
    #[error("automata differ in {0}")]
    KindMismatch(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("malformed automaton: {0}")]
    Malformed(String),
}

/// A complete DFAO over the digits `0..alphabet_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    alphabet_size: usize,
    initial: usize,
    kind: OutputKind,
    // row-major: transitions[state * alphabet_size + digit]
    transitions: Vec<usize>,
    outputs: Vec<Symbol>,
    names: Vec<Option<String>>,
}

type Pair = (usize, usize);

/// Outcome of a product-automaton comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// Shortlex-least input on which the two automata disagree.
    Distinguished(Vec<u8>),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Renders a digit string; the empty string is written `eps`.
pub fn digits_to_string(digits: &[u8]) -> String {
    if digits.is_empty() {
        return "eps".to_string();
    }
    digits.iter().map(|&d| char::from_digit(d as u32, 36).unwrap_or('?')).collect()
}

/// Parses a string of base-`base` digits; `eps` and the empty string denote ε.
pub fn parse_digits(s: &str, base: usize) -> Result<Vec<u8>, DfaoError> {
    if s == "eps" || s == "ε" {
        return Ok(Vec::new());
    }
    s.chars()
        .enumerate()
        .map(|(position, c)| match c.to_digit(36) {
            Some(d) if (d as usize) < base => Ok(d as u8),
            Some(d) => Err(DfaoError::BadDigit { digit: d as u8, position, base }),
            None => Err(DfaoError::BadNumeral(s.to_string())),
        })
        .collect()
}

/// Base-`base` digits of a decimal numeral, most significant first; zero is ε.
pub fn decimal_to_digits(numeral: &str, base: usize) -> Result<Vec<u8>, DfaoError> {
    let numeral = numeral.trim();
    if numeral.is_empty() || !numeral.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DfaoError::BadNumeral(numeral.to_string()));
    }
    let n = BigUint::parse_bytes(numeral.as_bytes(), 10).ok_or_else(|| DfaoError::BadNumeral(numeral.to_string()))?;
    if n == BigUint::from(0u8) {
        return Ok(Vec::new());
    }
    Ok(n.to_radix_be(base as u32))
}

impl Dfao {
    /// Builds an automaton from per-state successor rows.
    pub fn new(
        alphabet_size: usize,
        initial: usize,
        transitions: Vec<Vec<usize>>,
        outputs: Vec<Symbol>,
        names: Vec<Option<String>>,
    ) -> Result<Self, DfaoError> {
        let n = transitions.len();
        if n == 0 {
            return Err(DfaoError::Malformed("no states".into()));
        }
        if alphabet_size < 2 {
            return Err(DfaoError::Malformed(format!("alphabet size {alphabet_size} is below 2")));
        }
        if initial >= n {
            return Err(DfaoError::Malformed(format!("initial state {initial} out of range")));
        }
        if outputs.len() != n || names.len() != n {
            return Err(DfaoError::Malformed("outputs and names must have one entry per state".into()));
        }
        let kind = outputs[0].kind();
        for (s, out) in outputs.iter().enumerate() {
            if out.kind() != kind {
                return Err(DfaoError::Malformed(format!(
                    "state {s} has a {} output in a {kind} automaton",
                    out.kind()
                )));
            }
            if out.digits().iter().any(|&d| d > MAX_OUTPUT_DIGIT) {
                return Err(DfaoError::Malformed(format!("state {s} output {out} uses a digit above 4")));
            }
        }
        let mut flat = Vec::with_capacity(n * alphabet_size);
        for (s, row) in transitions.iter().enumerate() {
            if row.len() != alphabet_size {
                return Err(DfaoError::Malformed(format!("state {s} has {} successors", row.len())));
            }
            if let Some(&t) = row.iter().find(|&&t| t >= n) {
                return Err(DfaoError::Malformed(format!("state {s} has successor {t} out of range")));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self { alphabet_size, initial, kind, transitions: flat, outputs, names })
    }

    pub fn state_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn output_kind(&self) -> OutputKind {
        self.kind
    }

    pub fn output(&self, state: usize) -> Symbol {
        self.outputs[state]
    }

    pub fn name(&self, state: usize) -> Option<&str> {
        self.names[state].as_deref()
    }

    /// The state's name, or `s<id>` when it has none; ε is shown as `eps`.
    pub fn display_name(&self, state: usize) -> String {
        match &self.names[state] {
            Some(n) if n.is_empty() => "eps".to_string(),
            Some(n) => n.clone(),
            None => format!("s{state}"),
        }
    }

    pub fn successor(&self, state: usize, digit: u8) -> usize {
        self.transitions[state * self.alphabet_size + digit as usize]
    }

    /// State reached from the initial state on `digits`.
    pub fn run(&self, digits: &[u8]) -> Result<usize, DfaoError> {
        let mut s = self.initial;
        for (position, &d) in digits.iter().enumerate() {
            if d as usize >= self.alphabet_size {
                return Err(DfaoError::BadDigit { digit: d, position, base: self.alphabet_size });
            }
            s = self.successor(s, d);
        }
        Ok(s)
    }

    pub fn eval(&self, digits: &[u8]) -> Result<Symbol, DfaoError> {
        Ok(self.outputs[self.run(digits)?])
    }

    /// Output on `n`, walking its base-`q` digits without allocating.
    pub fn eval_u64(&self, n: u64) -> Symbol {
        let q = self.alphabet_size as u64;
        let mut top = 1u64;
        while top <= n / q {
            top *= q;
        }
        let mut s = self.initial;
        let mut rest = n;
        if n > 0 {
            loop {
                s = self.successor(s, (rest / top) as u8);
                rest %= top;
                if top == 1 {
                    break;
                }
                top /= q;
            }
        }
        self.outputs[s]
    }

    /// Output on a non-negative integer given as a decimal numeral of any length.
    pub fn eval_big(&self, numeral: &str) -> Result<Symbol, DfaoError> {
        let digits = decimal_to_digits(numeral, self.alphabet_size)?;
        self.eval(&digits)
    }

    /// Same automaton, with each window output replaced by one of its components.
    pub fn project_output(&self, component: usize) -> Result<Dfao, DfaoError> {
        if self.kind != OutputKind::Window {
            return Err(DfaoError::NotWindowKind);
        }
        if component >= 4 {
            return Err(DfaoError::BadComponent(component));
        }
        let outputs = self
            .outputs
            .iter()
            .map(|o| match o {
                Symbol::Window(w) => Symbol::Single(w[component]),
                Symbol::Single(_) => unreachable!("kind checked above"),
            })
            .collect();
        Ok(Dfao { kind: OutputKind::Single, outputs, ..self.clone() })
    }

    /// Reachable states in breadth-first order with their shortlex-least access strings.
    pub fn access_strings(&self) -> Vec<(usize, Vec<u8>)> {
        let mut seen = vec![false; self.state_count()];
        let mut order = vec![(self.initial, Vec::new())];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let (s, word) = order[i].clone();
            for d in 0..self.alphabet_size as u8 {
                let t = self.successor(s, d);
                if !seen[t] {
                    seen[t] = true;
                    let mut w = word.clone();
                    w.push(d);
                    order.push((t, w));
                }
            }
            i += 1;
        }
        order
    }

    /// Minimal automaton for the same digit-string function: unreachable states are
    /// dropped, then Moore refinement from the output partition. States come out in
    /// shortlex order of their access strings, which also become their names.
    pub fn minimize(&self) -> Dfao {
        let reachable = self.access_strings();
        let q = self.alphabet_size;
        let mut class: HashMap<usize, usize> = HashMap::new();
        let mut by_output: HashMap<Symbol, usize> = HashMap::new();
        for &(s, _) in &reachable {
            let next = by_output.len();
            class.insert(s, *by_output.entry(self.outputs[s]).or_insert(next));
        }
        let mut count = by_output.len();
        loop {
            let mut blocks: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut refined = HashMap::with_capacity(class.len());
            for &(s, _) in &reachable {
                let mut key = Vec::with_capacity(q + 1);
                key.push(class[&s]);
                key.extend((0..q as u8).map(|d| class[&self.successor(s, d)]));
                let next = blocks.len();
                refined.insert(s, *blocks.entry(key).or_insert(next));
            }
            class = refined;
            if blocks.len() == count {
                break;
            }
            count = blocks.len();
        }

        // renumber blocks in breadth-first order from the initial block
        let mut rep_of_block: Vec<Option<usize>> = vec![None; count];
        for &(s, _) in &reachable {
            rep_of_block[class[&s]].get_or_insert(s);
        }
        let mut new_id: Vec<Option<usize>> = vec![None; count];
        let mut order: Vec<(usize, Vec<u8>)> = vec![(class[&self.initial], Vec::new())];
        new_id[class[&self.initial]] = Some(0);
        let mut i = 0;
        while i < order.len() {
            let (b, word) = order[i].clone();
            let s = rep_of_block[b].expect("every block has a member");
            for d in 0..q as u8 {
                let tb = class[&self.successor(s, d)];
                if new_id[tb].is_none() {
                    new_id[tb] = Some(order.len());
                    let mut w = word.clone();
                    w.push(d);
                    order.push((tb, w));
                }
            }
            i += 1;
        }
        let transitions = order
            .iter()
            .map(|(b, _)| {
                let s = rep_of_block[*b].unwrap();
                (0..q as u8).map(|d| new_id[class[&self.successor(s, d)]].unwrap()).collect()
            })
            .collect();
        let outputs = order.iter().map(|(b, _)| self.outputs[rep_of_block[*b].unwrap()]).collect();
        let names = order.iter().map(|(_, w)| Some(word_name(w))).collect();
        Dfao::new(q, 0, transitions, outputs, names).expect("quotient of a valid automaton is valid")
    }

    /// Whether two automata agree on every input, by breadth-first search over
    /// the reachable part of their product.
    pub fn equivalent(&self, other: &Dfao) -> Result<Equivalence, DfaoError> {
        if self.alphabet_size != other.alphabet_size {
            return Err(DfaoError::KindMismatch(format!(
                "alphabet size ({} vs {})",
                self.alphabet_size, other.alphabet_size
            )));
        }
        if self.kind != other.kind {
            return Err(DfaoError::KindMismatch(format!("output kind ({} vs {})", self.kind, other.kind)));
        }
        let start = (self.initial, other.initial);
        let mut parent: HashMap<Pair, Option<(Pair, u8)>> = HashMap::new();
        parent.insert(start, None);
        let mut queue = VecDeque::from([start]);
        while let Some(pair) = queue.pop_front() {
            if self.outputs[pair.0] != other.outputs[pair.1] {
                let mut word = Vec::new();
                let mut cur = pair;
                while let Some(Some((prev, d))) = parent.get(&cur) {
                    word.push(*d);
                    cur = *prev;
                }
                word.reverse();
                return Ok(Equivalence::Distinguished(word));
            }
            for d in 0..self.alphabet_size as u8 {
                let next = (self.successor(pair.0, d), other.successor(pair.1, d));
                if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                    e.insert(Some((pair, d)));
                    queue.push_back(next);
                }
            }
        }
        Ok(Equivalence::Equivalent)
    }

    /// True when reading a leading zero from the initial state stays put.
    pub fn has_leading_zero_loop(&self) -> bool {
        self.successor(self.initial, 0) == self.initial
    }

    /// Same shape up to a renumbering of states that preserves the initial
    /// state, transitions and outputs. Names are ignored.
    pub fn is_isomorphic(&self, other: &Dfao) -> bool {
        if self.alphabet_size != other.alphabet_size || self.state_count() != other.state_count() {
            return false;
        }
        let mut map = vec![usize::MAX; self.state_count()];
        let mut used = vec![false; other.state_count()];
        let mut stack = vec![(self.initial, other.initial)];
        while let Some((a, b)) = stack.pop() {
            if map[a] != usize::MAX {
                if map[a] != b {
                    return false;
                }
                continue;
            }
            if used[b] || self.outputs[a] != other.outputs[b] {
                return false;
            }
            map[a] = b;
            used[b] = true;
            for d in 0..self.alphabet_size as u8 {
                stack.push((self.successor(a, d), other.successor(b, d)));
            }
        }
        map.iter().all(|&m| m != usize::MAX)
    }
}

fn word_name(word: &[u8]) -> String {
    word.iter().map(|&d| char::from_digit(d as u32, 36).unwrap_or('?')).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Parity of the number of ones in the binary numeral (Thue-Morse).
    fn thue_morse() -> Dfao {
        Dfao::new(
            2,
            0,
            vec![vec![0, 1], vec![1, 0]],
            vec![Symbol::Single(0), Symbol::Single(1)],
            vec![Some(String::new()), Some("1".into())],
        )
        .unwrap()
    }

    /// Thue-Morse with redundant copies of both states.
    fn bloated_thue_morse() -> Dfao {
        Dfao::new(
            2,
            0,
            vec![vec![2, 1], vec![3, 0], vec![0, 3], vec![1, 2], vec![4, 4]],
            vec![Symbol::Single(0), Symbol::Single(1), Symbol::Single(0), Symbol::Single(1), Symbol::Single(2)],
            vec![None; 5],
        )
        .unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(Dfao::new(2, 0, vec![vec![0]], vec![Symbol::Single(0)], vec![None]).is_err());
        assert!(Dfao::new(2, 1, vec![vec![0, 0]], vec![Symbol::Single(0)], vec![None]).is_err());
        assert!(Dfao::new(2, 0, vec![vec![0, 1]], vec![Symbol::Single(0)], vec![None]).is_err());
        assert!(Dfao::new(2, 0, vec![vec![0, 0]], vec![Symbol::Single(5)], vec![None]).is_err());
        assert!(Dfao::new(
            2,
            0,
            vec![vec![0, 1], vec![1, 1]],
            vec![Symbol::Single(0), Symbol::Window([0, 0, 0, 0])],
            vec![None, None]
        )
        .is_err());
    }

    #[test]
    fn evaluation() {
        let tm = thue_morse();
        assert_eq!(tm.eval(&[]).unwrap(), Symbol::Single(0));
        assert_eq!(tm.eval(&[1, 1, 0]).unwrap(), Symbol::Single(0));
        assert_eq!(tm.eval(&[0, 0, 1, 1, 0]).unwrap(), tm.eval(&[1, 1, 0]).unwrap());
        assert_eq!(tm.eval(&[1, 2]), Err(DfaoError::BadDigit { digit: 2, position: 1, base: 2 }));
        for n in 0..2000u64 {
            assert_eq!(tm.eval_u64(n), Symbol::Single((n.count_ones() % 2) as u8));
            assert_eq!(tm.eval_big(&n.to_string()).unwrap(), tm.eval_u64(n));
        }
        assert!(matches!(tm.eval_big("12a"), Err(DfaoError::BadNumeral(_))));
        assert!(matches!(tm.eval_big(""), Err(DfaoError::BadNumeral(_))));
        assert!(tm.has_leading_zero_loop());
    }

    #[test]
    fn decimal_conversion() {
        assert_eq!(decimal_to_digits("0", 2).unwrap(), Vec::<u8>::new());
        assert_eq!(decimal_to_digits("000", 2).unwrap(), Vec::<u8>::new());
        assert_eq!(decimal_to_digits("463", 2).unwrap(), vec![1, 1, 1, 0, 0, 1, 1, 1, 1]);
        assert_eq!(decimal_to_digits("6", 2).unwrap(), vec![1, 1, 0]);
        assert_eq!(decimal_to_digits("17", 3).unwrap(), vec![1, 2, 2]);
        let big = format!("1{}", "0".repeat(40));
        let digits = decimal_to_digits(&big, 2).unwrap();
        // 10^40 = 2^40 * 5^40, so the numeral ends in exactly forty zeros
        assert_eq!(digits.iter().rev().take_while(|&&d| d == 0).count(), 40);
        assert_eq!(parse_digits("0110", 2).unwrap(), vec![0, 1, 1, 0]);
        assert_eq!(parse_digits("eps", 2).unwrap(), Vec::<u8>::new());
        assert!(parse_digits("012", 2).is_err());
    }

    #[test]
    fn projection() {
        let m = Dfao::new(
            2,
            0,
            vec![vec![0, 1], vec![1, 1]],
            vec![Symbol::Window([0, 0, 0, 4]), Symbol::Window([2, 1, 3, 3])],
            vec![Some(String::new()), Some("1".into())],
        )
        .unwrap();
        let p = m.project_output(2).unwrap();
        assert_eq!(p.output_kind(), OutputKind::Single);
        assert_eq!(p.output(0), Symbol::Single(0));
        assert_eq!(p.output(1), Symbol::Single(3));
        assert_eq!(p.project_output(2), Err(DfaoError::NotWindowKind));
        assert_eq!(m.project_output(4), Err(DfaoError::BadComponent(4)));
    }

    #[test]
    fn minimization_merges_and_is_idempotent() {
        let big = bloated_thue_morse();
        let min = big.minimize();
        assert_eq!(min.state_count(), 2);
        assert!(min.is_isomorphic(&thue_morse()));
        assert_eq!(min.name(0), Some(""));
        assert_eq!(min.name(1), Some("1"));
        assert!(big.equivalent(&min).unwrap().is_equivalent());
        assert!(min.minimize().is_isomorphic(&min));
        assert_eq!(min.minimize(), min);
    }

    #[test]
    fn equivalence_counterexample_is_shortlex_least() {
        let tm = thue_morse();
        assert!(tm.equivalent(&tm).unwrap().is_equivalent());
        let other = Dfao::new(
            2,
            0,
            vec![vec![0, 1], vec![1, 2], vec![2, 2]],
            vec![Symbol::Single(0), Symbol::Single(1), Symbol::Single(1)],
            vec![None; 3],
        )
        .unwrap();
        let brute = (0..8u32)
            .flat_map(|len| {
                (0..1u32 << len).map(move |v| (0..len).rev().map(|i| ((v >> i) & 1) as u8).collect::<Vec<u8>>())
            })
            .find(|w| tm.eval(w).unwrap() != other.eval(w).unwrap())
            .unwrap();
        assert_eq!(tm.equivalent(&other).unwrap(), Equivalence::Distinguished(brute));
        let window = Dfao::new(2, 0, vec![vec![0, 0]], vec![Symbol::Window([0; 4])], vec![None]).unwrap();
        assert!(matches!(tm.equivalent(&window), Err(DfaoError::KindMismatch(_))));
    }
}
