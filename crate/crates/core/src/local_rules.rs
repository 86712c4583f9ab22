//! Empirical window maps: `F(2a)` and `F(2a+1)` as functions of the
//! four values `F(a-2), F(a-1), F(a), F(a+1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::PrimInt;
use thiserror::Error;

use crate::seq_core::SequenceTable;

/// Four consecutive values `F(a-2..=a+1)`.
pub type Window = [u8; 4];

/// Smallest `a` for which the window maps are known to hold.
pub const RULE_THRESHOLD: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    fn symbol(self) -> char {
        match self {
            Parity::Even => 'g',
            Parity::Odd => 'h',
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error(
        "rule conflict for {} {}: a = {first} gives {first_image}, a = {second} gives {second_image}",
        parity.symbol(), WindowFmt(*window)
    )]
    RuleConflict { window: Window, parity: Parity, first: u64, first_image: u8, second: u64, second_image: u8 },
    #[error("window {} was never observed", WindowFmt(*.0))]
    OutsideDomain(Window),
    #[error("oracle ends at {hi}, index {needed} is required")]
    OracleTooShort { needed: i64, hi: i64 },
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("oracle value at {0} is not a small digit")]
    BadValue(i64),
}

pub(crate) struct WindowFmt(pub Window);

impl fmt::Display for WindowFmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Image {
    value: u8,
    witness: u64,
}

/// Partial maps `g` (even) and `h` (odd) over the windows actually observed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WindowRuleTable {
    even: BTreeMap<Window, Image>,
    odd: BTreeMap<Window, Image>,
    derivation_bound: u64,
}

/// Outcome of re-scanning the oracle against a frozen rule table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleVerification {
    pub checked_to: u64,
    pub checked: u64,
    pub violations: u64,
    /// Windows absent from the frozen domain, with the first `a` showing each.
    pub new_windows: BTreeMap<Window, u64>,
}

fn digit_at<T: PrimInt>(f: &SequenceTable<T>, n: i64) -> Result<u8, RuleError> {
    match f.get(n) {
        Some(v) => v.to_u8().filter(|&d| d <= 4).ok_or(RuleError::BadValue(n)),
        None => Err(RuleError::OracleTooShort { needed: n, hi: f.hi() }),
    }
}

pub(crate) fn window_at<T: PrimInt>(f: &SequenceTable<T>, a: i64) -> Result<Window, RuleError> {
    Ok([digit_at(f, a - 2)?, digit_at(f, a - 1)?, digit_at(f, a)?, digit_at(f, a + 1)?])
}

impl WindowRuleTable {
    pub fn domain(&self) -> impl Iterator<Item = &Window> {
        self.even.keys()
    }

    pub fn domain_len(&self) -> usize {
        self.even.len()
    }

    pub fn derivation_bound(&self) -> u64 {
        self.derivation_bound
    }

    pub fn contains(&self, window: &Window) -> bool {
        self.even.contains_key(window)
    }

    pub fn apply(&self, window: &Window, parity: Parity) -> Result<u8, RuleError> {
        let map = match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        };
        map.get(window).map(|img| img.value).ok_or(RuleError::OutsideDomain(*window))
    }

    fn record(&mut self, window: Window, parity: Parity, value: u8, a: u64) -> Result<(), RuleError> {
        let map = match parity {
            Parity::Even => &mut self.even,
            Parity::Odd => &mut self.odd,
        };
        match map.get(&window) {
            Some(img) if img.value != value => Err(RuleError::RuleConflict {
                window,
                parity,
                first: img.witness,
                first_image: img.value,
                second: a,
                second_image: value,
            }),
            Some(_) => Ok(()),
            None => {
                map.insert(window, Image { value, witness: a });
                Ok(())
            }
        }
    }

    /// `g <window> -> <v>` and `h <window> -> <v>` lines in lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (parity, map) in [(Parity::Even, &self.even), (Parity::Odd, &self.odd)] {
            for (w, img) in map {
                out.push_str(&format!("{} {} -> {}\n", parity.symbol(), WindowFmt(*w), img.value));
            }
        }
        out
    }
}

/// Records `window(a) -> F(2a)` and `window(a) -> F(2a+1)` for every `a` in
/// `a_min..=a_max`.
pub fn derive_rules<T: PrimInt>(f: &SequenceTable<T>, a_min: u64, a_max: u64) -> Result<WindowRuleTable, RuleError> {
    if a_min < RULE_THRESHOLD {
        return Err(RuleError::InvalidRange(format!("a_min = {a_min} must exceed 3")));
    }
    if a_max < a_min {
        return Err(RuleError::InvalidRange(format!("a_max = {a_max} is below a_min = {a_min}")));
    }
    let needed = 2 * a_max as i64 + 1;
    if !f.contains(needed) {
        return Err(RuleError::OracleTooShort { needed, hi: f.hi() });
    }
    let mut rules = WindowRuleTable { derivation_bound: a_max, ..Default::default() };
    for a in a_min..=a_max {
        let w = window_at(f, a as i64)?;
        rules.record(w, Parity::Even, digit_at(f, 2 * a as i64)?, a)?;
        rules.record(w, Parity::Odd, digit_at(f, 2 * a as i64 + 1)?, a)?;
    }
    Ok(rules)
}

pub fn apply_rule(rules: &WindowRuleTable, window: &Window, parity: Parity) -> Result<u8, RuleError> {
    rules.apply(window, parity)
}

/// Re-checks every `a` in `4..=a_max` against the frozen table.
pub fn verify_rules<T: PrimInt>(
    rules: &WindowRuleTable,
    f: &SequenceTable<T>,
    a_max: u64,
) -> Result<RuleVerification, RuleError> {
    let needed = 2 * a_max as i64 + 1;
    if !f.contains(needed) {
        return Err(RuleError::OracleTooShort { needed, hi: f.hi() });
    }
    let mut report = RuleVerification { checked_to: a_max, checked: 0, violations: 0, new_windows: BTreeMap::new() };
    for a in RULE_THRESHOLD..=a_max {
        let w = window_at(f, a as i64)?;
        let observed = [(Parity::Even, digit_at(f, 2 * a as i64)?), (Parity::Odd, digit_at(f, 2 * a as i64 + 1)?)];
        if !rules.contains(&w) {
            report.new_windows.entry(w).or_insert(a);
            continue;
        }
        for (parity, value) in observed {
            let map = match parity {
                Parity::Even => &rules.even,
                Parity::Odd => &rules.odd,
            };
            let img = map[&w];
            if img.value != value {
                return Err(RuleError::RuleConflict {
                    window: w,
                    parity,
                    first: img.witness,
                    first_image: img.value,
                    second: a,
                    second_image: value,
                });
            }
        }
        report.checked += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq_core::gen_f;

    fn oracle(a_max: usize) -> SequenceTable<u8> {
        gen_f::<u8>(a_max).unwrap()
    }

    #[test]
    fn small_windows_from_the_printed_prefix() {
        let f = oracle(2 * 20 + 2);
        let rules = derive_rules(&f, 4, 20).unwrap();
        assert_eq!(window_at(&f, 4).unwrap(), [1, 1, 1, 2]);
        assert_eq!(rules.apply(&[1, 1, 1, 2], Parity::Even), Ok(2));
        assert_eq!(rules.apply(&[1, 1, 1, 2], Parity::Odd), Ok(2));
        assert_eq!(window_at(&f, 5).unwrap(), [1, 1, 2, 2]);
        assert_eq!(apply_rule(&rules, &[1, 1, 2, 2], Parity::Even), Ok(1));
        assert_eq!(apply_rule(&rules, &[1, 1, 2, 2], Parity::Odd), Ok(3));
    }

    #[test]
    fn domain_and_never_seen_window() {
        let a_max = 1u64 << 20;
        let f = oracle(2 * a_max as usize + 2);
        let rules = derive_rules(&f, 4, a_max).unwrap();
        assert_eq!(rules.domain_len(), DOMAIN_AT_2_POW_20);
        assert_eq!(rules.apply(&[3, 3, 3, 3], Parity::Even), Err(RuleError::OutsideDomain([3, 3, 3, 3])));
        assert!(rules.domain().all(|w| w.iter().all(|d| (1..=3).contains(d))));
        let again = verify_rules(&rules, &f, a_max).unwrap();
        assert_eq!(again.violations, 0);
        assert!(again.new_windows.is_empty());
    }

    const DOMAIN_AT_2_POW_20: usize = 24;

    #[test]
    fn frozen_small_table_extends_without_conflict() {
        let f = oracle(2_000_002);
        let rules = derive_rules(&f, 4, 10_000).unwrap();
        let report = verify_rules(&rules, &f, 1_000_000).unwrap();
        assert_eq!(report.violations, 0);
        assert_eq!(report.checked_to, 1_000_000);
        assert_eq!(report.new_windows.len(), NEW_WINDOWS_AFTER_1E4);
    }

    const NEW_WINDOWS_AFTER_1E4: usize = 0;

    #[test]
    fn reconstruction() {
        let f = oracle(40_002);
        let rules = derive_rules(&f, 4, 20_000).unwrap();
        for a in 4..=10_000i64 {
            let w = window_at(&f, a).unwrap();
            assert_eq!(rules.apply(&w, Parity::Even).unwrap(), f.get(2 * a).unwrap());
            assert_eq!(rules.apply(&w, Parity::Odd).unwrap(), f.get(2 * a + 1).unwrap());
        }
    }

    #[test]
    fn conflicts_and_bad_ranges() {
        let mut f = oracle(100).values().to_vec();
        let f_ok = SequenceTable::new("F", 0, f.clone()).unwrap();
        let (first, second) = (4..=49i64)
            .flat_map(|a| (a + 1..=49).map(move |b| (a, b)))
            .find(|&(a, b)| window_at(&f_ok, a).unwrap() == window_at(&f_ok, b).unwrap())
            .expect("some window repeats below 50");
        f[2 * second as usize] = f[2 * second as usize] % 3 + 1;
        let bad = SequenceTable::new("F", 0, f).unwrap();
        match derive_rules(&bad, 4, 49) {
            Err(RuleError::RuleConflict { first: a, second: b, parity: Parity::Even, .. }) => {
                assert_eq!((a, b), (first as u64, second as u64));
            }
            other => panic!("expected a conflict, got {other:?}"),
        }
        assert!(matches!(derive_rules(&f_ok, 3, 10), Err(RuleError::InvalidRange(_))));
        assert!(matches!(derive_rules(&f_ok, 4, 60), Err(RuleError::OracleTooShort { .. })));
    }

    #[test]
    fn text_is_sorted() {
        let f = oracle(202);
        let rules = derive_rules(&f, 4, 100).unwrap();
        let text = rules.to_text();
        let lines: Vec<&str> = text.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
        assert!(lines.contains(&"g 1112 -> 2"));
        assert!(lines.contains(&"h 1122 -> 3"));
        assert_eq!(lines.len(), 2 * rules.domain_len());
    }
}
