mod common;

use common::pipeline;
use metafib::paper_tables::{diff_report, table1, table2, FindingKind, Resolution};

fn typo(correction: &str) -> Resolution {
    Resolution::TypoCandidate { correction: correction.into() }
}

#[test]
fn window_table_findings() {
    let r = diff_report(&table1(), &pipeline().windowed.dfao);
    let got: Vec<(Option<usize>, FindingKind, Resolution)> =
        r.findings.iter().map(|f| (f.row, f.kind.clone(), f.resolution.clone())).collect();
    assert_eq!(
        got,
        vec![
            (Some(20), FindingKind::DuplicateName { name: "10111".into() }, typo("rename 10111 to 11101")),
            (Some(25), FindingKind::UndefinedTarget { digit: 0, target: "110100".into() }, typo("110100 -> 1110100")),
            (Some(31), FindingKind::UndefinedTarget { digit: 0, target: "110100".into() }, typo("110100 -> 1110100")),
        ]
    );
    assert_eq!((r.claimed, r.truth_states, r.printed_rows), (33, 33, 33));
}

#[test]
fn single_output_table_findings() {
    let r = diff_report(&table2(), &pipeline().single);
    let got: Vec<(Option<usize>, FindingKind, Resolution)> =
        r.findings.iter().map(|f| (f.row, f.kind.clone(), f.resolution.clone())).collect();
    assert_eq!(
        got,
        vec![
            (Some(17), FindingKind::UnknownName { name: "110011".into() }, typo("rename 110011 to 1110011")),
            (None, FindingKind::MissingRow { name: "110".into() }, typo("add row 110 1100 1101 2")),
        ]
    );
    assert_eq!((r.claimed, r.truth_states, r.printed_rows), (20, 20, 19));
}

#[test]
fn corrected_tables_match_exactly() {
    let p = pipeline();
    let mut a = table1();
    a.rows[20].name = "11101".into();
    for row in [25, 31] {
        a.rows[row].t0 = "1110100".into();
    }
    assert!(diff_report(&a, &p.windowed.dfao).is_clean());

    let mut b = table2();
    b.rows[17].name = "1110011".into();
    let mut extra = b.rows[0].clone();
    (extra.name, extra.t0, extra.t1, extra.output) = ("110".into(), "1100".into(), "1101".into(), "2".into());
    b.rows.insert(6, extra);
    assert!(diff_report(&b, &p.single).is_clean());
}

#[test]
fn reports_are_stable() {
    let p = pipeline();
    let first = diff_report(&table1(), &p.windowed.dfao).to_string();
    assert_eq!(first, diff_report(&table1(), &p.windowed.dfao).to_string());
    assert!(first.starts_with("The automaton A: 33 rows printed"));
}
