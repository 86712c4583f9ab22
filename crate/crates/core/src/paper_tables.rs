//! Printed transition tables for the two automata, kept verbatim, and their
//! comparison against synthesized automata.
//!
//! A printed row is `name t0 t1 output`; names are access strings with `eps`
//! for ε. The comparison assigns every printed row to a state of the true
//! automaton and reports each disagreement. A disagreement is a typo candidate
//! when the true automaton pins down a single correction touching one field of
//! one row (or restores a single omitted row); anything else is unresolved.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::dfao::Dfao;

const TABLE_A: &str = include_str!("../data/table1.txt");
const TABLE_B: &str = include_str!("../data/table2.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrintedRow {
    pub name: String,
    pub t0: String,
    pub t1: String,
    pub output: String,
}

impl PrintedRow {
    fn new(name: &str, t0: &str, t1: &str, output: &str) -> Self {
        Self { name: name.into(), t0: t0.into(), t1: t1.into(), output: output.into() }
    }

    fn target(&self, digit: u8) -> &str {
        if digit == 0 {
            &self.t0
        } else {
            &self.t1
        }
    }
}

impl fmt::Display for PrintedRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.name, self.t0, self.t1, self.output)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrintedTable {
    pub title: String,
    pub claimed_state_count: usize,
    pub rows: Vec<PrintedRow>,
}

impl PrintedTable {
    /// Format: a `table <title>` line, a `claimed <count>` line, then one row per line.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let err = |line: usize, reason: &str| TableError::Parse { line, reason: reason.to_string() };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let title = match lines.next() {
            Some((_, l)) => l.strip_prefix("table ").ok_or_else(|| err(1, "expected `table <title>`"))?,
            None => return Err(err(1, "empty input")),
        };
        let claimed_state_count = match lines.next() {
            Some((_, l)) => l
                .strip_prefix("claimed ")
                .and_then(|c| c.parse().ok())
                .ok_or_else(|| err(2, "expected `claimed <count>`"))?,
            None => return Err(err(2, "missing claimed count")),
        };
        let mut rows = Vec::new();
        for (line, l) in lines {
            let fields: Vec<&str> = l.split(' ').collect();
            let [name, t0, t1, output] = fields[..] else {
                return Err(err(line, "expected `name t0 t1 output`"));
            };
            if [name, t0, t1, output].iter().any(|f| f.is_empty()) {
                return Err(err(line, "empty field"));
            }
            rows.push(PrintedRow::new(name, t0, t1, output));
        }
        Ok(Self { title: title.to_string(), claimed_state_count, rows })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("table {}\nclaimed {}\n", self.title, self.claimed_state_count);
        for r in &self.rows {
            out.push_str(&format!("{r}\n"));
        }
        out
    }

    pub fn rows_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = (usize, &'a PrintedRow)> + 'a {
        self.rows.iter().enumerate().filter(move |(_, r)| r.name == name)
    }
}

/// The printed table of the window automaton.
pub fn table1() -> PrintedTable {
    PrintedTable::parse(TABLE_A).expect("bundled table parses")
}

/// The printed table of the single-output automaton.
pub fn table2() -> PrintedTable {
    PrintedTable::parse(TABLE_B).expect("bundled table parses")
}

/// Raw text of a bundled table, for round-trip checks.
pub fn table_text(which: u8) -> Option<&'static str> {
    match which {
        1 => Some(TABLE_A),
        2 => Some(TABLE_B),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum FindingKind {
    /// The printed state count differs from the true one.
    CountMismatch {
        claimed: usize,
        truth: usize,
    },
    /// Row name used by more than one row, and this row is not the true one.
    DuplicateName {
        name: String,
    },
    /// Row name is not a state of the true automaton.
    UnknownName {
        name: String,
    },
    /// A target that no row defines.
    UndefinedTarget {
        digit: u8,
        target: String,
    },
    /// A target that is defined but differs from the true successor.
    WrongTarget {
        digit: u8,
        target: String,
    },
    WrongOutput {
        output: String,
    },
    /// A true state with no row.
    MissingRow {
        name: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Resolution {
    TypoCandidate { correction: String },
    Unresolved { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Finding {
    /// Zero-based index of the printed row, if the finding concerns one.
    pub row: Option<usize>,
    pub kind: FindingKind,
    pub resolution: Resolution,
}

impl Finding {
    pub fn is_typo_candidate(&self) -> bool {
        matches!(self.resolution, Resolution::TypoCandidate { .. })
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.row {
            write!(f, "row {}: ", r + 1)?;
        }
        match &self.kind {
            FindingKind::CountMismatch { claimed, truth } => {
                write!(f, "claims {claimed} states, the automaton has {truth}")?
            }
            FindingKind::DuplicateName { name } => write!(f, "name {name} is used by an earlier row")?,
            FindingKind::UnknownName { name } => write!(f, "name {name} is not a state")?,
            FindingKind::UndefinedTarget { digit, target } => {
                write!(f, "target {target} on {digit} is not defined by any row")?
            }
            FindingKind::WrongTarget { digit, target } => write!(f, "target {target} on {digit} is wrong")?,
            FindingKind::WrongOutput { output } => write!(f, "output {output} is wrong")?,
            FindingKind::MissingRow { name } => write!(f, "state {name} has no row")?,
        }
        match &self.resolution {
            Resolution::TypoCandidate { correction } => write!(f, "; typo candidate: {correction}"),
            Resolution::Unresolved { reason } => write!(f, "; unresolved: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub title: String,
    pub claimed: usize,
    pub printed_rows: usize,
    pub truth_states: usize,
    pub findings: Vec<Finding>,
}

impl TableReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn all_typo_candidates(&self) -> bool {
        self.findings.iter().all(Finding::is_typo_candidate)
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} rows printed, {} states claimed, {} states synthesized",
            self.title, self.printed_rows, self.claimed, self.truth_states
        )?;
        if self.findings.is_empty() {
            return writeln!(f, "  all rows match");
        }
        for finding in &self.findings {
            writeln!(f, "  {finding}")?;
        }
        Ok(())
    }
}

fn truth_rows(truth: &Dfao) -> BTreeMap<String, PrintedRow> {
    truth
        .access_strings()
        .into_iter()
        .map(|(s, _)| {
            let row = PrintedRow {
                name: truth.display_name(s),
                t0: truth.display_name(truth.successor(s, 0)),
                t1: truth.display_name(truth.successor(s, 1)),
                output: truth.output(s).to_string(),
            };
            (row.name.clone(), row)
        })
        .collect()
}

fn differing_fields(a: &PrintedRow, b: &PrintedRow) -> usize {
    [a.t0 != b.t0, a.t1 != b.t1, a.output != b.output].iter().filter(|&&d| d).count()
}

/// Compares a printed table with a binary automaton whose states are named by
/// access strings. Findings come out sorted by row, then kind; missing rows last.
pub fn diff_report(printed: &PrintedTable, truth: &Dfao) -> TableReport {
    let truth_map = truth_rows(truth);
    let order: Vec<String> = truth.access_strings().into_iter().map(|(s, _)| truth.display_name(s)).collect();
    let printed_names: BTreeSet<&str> = printed.rows.iter().map(|r| r.name.as_str()).collect();
    let mut findings = Vec::new();

    if printed.claimed_state_count != truth_map.len() {
        findings.push(Finding {
            row: None,
            kind: FindingKind::CountMismatch { claimed: printed.claimed_state_count, truth: truth_map.len() },
            resolution: Resolution::Unresolved { reason: "the synthesized automaton is minimal".into() },
        });
    }

    // Which truth state each printed row stands for. A row keeps its own name
    // when that name is a state and no earlier-or-better row claims it.
    let mut assigned: Vec<Option<String>> = vec![None; printed.rows.len()];
    let mut claimed: BTreeSet<String> = BTreeSet::new();
    for (name, truth_row) in &truth_map {
        let rows: Vec<usize> = printed.rows_named(name).map(|(i, _)| i).collect();
        let keeper = rows.iter().copied().find(|&i| printed.rows[i] == *truth_row).or(rows.first().copied());
        if let Some(i) = keeper {
            assigned[i] = Some(name.clone());
            claimed.insert(name.clone());
        }
    }
    let unclaimed: Vec<&PrintedRow> = truth_map.values().filter(|r| !claimed.contains(&r.name)).collect();
    for (i, row) in printed.rows.iter().enumerate() {
        if assigned[i].is_some() {
            continue;
        }
        let kind = if truth_map.contains_key(&row.name) {
            FindingKind::DuplicateName { name: row.name.clone() }
        } else {
            FindingKind::UnknownName { name: row.name.clone() }
        };
        let matches: Vec<&&PrintedRow> = unclaimed.iter().filter(|t| differing_fields(t, row) == 0).collect();
        let resolution = match matches.as_slice() {
            [only] => {
                assigned[i] = Some(only.name.clone());
                Resolution::TypoCandidate { correction: format!("rename {} to {}", row.name, only.name) }
            }
            [] => Resolution::Unresolved { reason: "no unrowed state has these targets and output".into() },
            many => Resolution::Unresolved {
                reason: format!("{} unrowed states have these targets and output", many.len()),
            },
        };
        findings.push(Finding { row: Some(i), kind, resolution });
    }
    let resolved: BTreeSet<&str> = assigned.iter().flatten().map(String::as_str).collect();

    for (i, row) in printed.rows.iter().enumerate() {
        let Some(name) = &assigned[i] else { continue };
        let want = &truth_map[name];
        // a renamed row already carries its one correction
        let renamed = *name != row.name;
        let diffs = differing_fields(row, want);
        let single = !renamed && diffs == 1;
        for digit in 0..2u8 {
            let (got, exp) = (row.target(digit), want.target(digit));
            if got == exp {
                continue;
            }
            let kind = if printed_names.contains(got) || resolved.contains(got) {
                FindingKind::WrongTarget { digit, target: got.to_string() }
            } else {
                FindingKind::UndefinedTarget { digit, target: got.to_string() }
            };
            findings.push(Finding { row: Some(i), kind, resolution: correction(single, got, exp) });
        }
        if row.output != want.output {
            findings.push(Finding {
                row: Some(i),
                kind: FindingKind::WrongOutput { output: row.output.clone() },
                resolution: correction(single, &row.output, &want.output),
            });
        }
    }

    for name in &order {
        if !resolved.contains(name.as_str()) {
            findings.push(Finding {
                row: None,
                kind: FindingKind::MissingRow { name: name.clone() },
                resolution: Resolution::TypoCandidate { correction: format!("add row {}", truth_map[name]) },
            });
        }
    }

    findings.sort_by_key(|f| match (&f.kind, f.row) {
        (FindingKind::MissingRow { .. }, _) => usize::MAX,
        (_, Some(r)) => r + 1,
        (_, None) => 0,
    });
    TableReport {
        title: printed.title.clone(),
        claimed: printed.claimed_state_count,
        printed_rows: printed.rows.len(),
        truth_states: truth_map.len(),
        findings,
    }
}

fn correction(single: bool, got: &str, want: &str) -> Resolution {
    if single {
        Resolution::TypoCandidate { correction: format!("{got} -> {want}") }
    } else {
        Resolution::Unresolved { reason: format!("row differs in several fields; expected {want}") }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dfao::Symbol;

    #[test]
    fn bundled_tables_round_trip() {
        for (which, t) in [(1, table1()), (2, table2())] {
            assert_eq!(t.to_text(), table_text(which).unwrap());
            assert_eq!(PrintedTable::parse(&t.to_text()).unwrap(), t);
        }
    }

    #[test]
    fn transcribed_rows() {
        let a = table1();
        assert_eq!(a.claimed_state_count, 33);
        assert_eq!(a.rows.len(), 33);
        assert_eq!(a.rows_named("1011").next().unwrap().1, &PrintedRow::new("1011", "10110", "10111", "2132"));
        assert_eq!(a.rows_named("10111").count(), 2);
        let b = table2();
        assert_eq!(b.claimed_state_count, 20);
        assert_eq!(b.rows.len(), 19);
        assert_eq!(b.rows[0], PrintedRow::new("eps", "eps", "1", "0"));
        assert!(b.rows_named("110").next().is_none());
    }

    #[test]
    fn parse_errors_carry_lines() {
        assert_eq!(PrintedTable::parse("").unwrap_err(), TableError::Parse { line: 1, reason: "empty input".into() });
        let bad = "table t\nclaimed 1\neps eps eps\n";
        assert!(matches!(PrintedTable::parse(bad), Err(TableError::Parse { line: 3, .. })));
        assert!(matches!(PrintedTable::parse("table t\nclaimed x\n"), Err(TableError::Parse { line: 2, .. })));
    }

    // eps -0-> eps, eps -1-> 1, 1 -> 10/11; outputs 0,1,2,3
    fn tiny() -> Dfao {
        Dfao::new(
            2,
            0,
            vec![vec![0, 1], vec![2, 3], vec![2, 3], vec![3, 3]],
            (0..4).map(Symbol::Single).collect(),
            ["", "1", "10", "11"].iter().map(|s| Some(s.to_string())).collect(),
        )
        .unwrap()
    }

    fn table(rows: &[&str], claimed: usize) -> PrintedTable {
        let mut text = format!("table tiny\nclaimed {claimed}\n");
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        PrintedTable::parse(&text).unwrap()
    }

    #[test]
    fn exact_table_has_no_findings() {
        let t = table(&["eps eps 1 0", "1 10 11 1", "10 10 11 2", "11 11 11 3"], 4);
        let r = diff_report(&t, &tiny());
        assert!(r.is_clean(), "{r}");
    }

    #[test]
    fn single_slips_are_typo_candidates() {
        let t = table(&["eps eps 1 0", "1 10 111 1", "11 10 11 2", "11 11 11 3"], 4);
        let r = diff_report(&t, &tiny());
        assert_eq!(r.findings.len(), 2, "{r}");
        assert!(r.all_typo_candidates());
        assert_eq!(r.findings[0].kind, FindingKind::UndefinedTarget { digit: 1, target: "111".into() });
        assert_eq!(r.findings[1].resolution, Resolution::TypoCandidate { correction: "rename 11 to 10".into() });
        assert_eq!(r.findings[1].row, Some(2));
    }

    #[test]
    fn omissions_and_multi_field_errors() {
        let t = table(&["eps eps 1 0", "1 11 10 4", "11 11 11 3"], 5);
        let r = diff_report(&t, &tiny());
        let kinds: Vec<&FindingKind> = r.findings.iter().map(|f| &f.kind).collect();
        assert!(matches!(kinds[0], FindingKind::CountMismatch { claimed: 5, truth: 4 }));
        assert!(matches!(kinds.last().unwrap(), FindingKind::MissingRow { name } if name == "10"));
        assert!(!r.all_typo_candidates());
        assert_eq!(r.findings.iter().filter(|f| f.row == Some(1)).count(), 3);
        assert_eq!(diff_report(&t, &tiny()), r);
    }
}
