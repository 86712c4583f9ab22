//! Line-oriented automaton format.
//!
//! ```text
//! dfao <state_count> <alphabet_size> <window|single>
//! initial <state_id>
//! state <id> <name> <output>
//! trans <from_id> <digit> <to_id>
//! ```
//!
//! Names are written `eps` for the empty string and `_` when absent. Lines
//! starting with `#` and blank lines are ignored when reading.

use std::fmt::Write as _;

use super::{Dfao, DfaoError, OutputKind, Symbol};

pub fn serialize(m: &Dfao) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dfao {} {} {}", m.state_count(), m.alphabet_size(), m.output_kind());
    let _ = writeln!(out, "initial {}", m.initial());
    for s in 0..m.state_count() {
        let name = match m.name(s) {
            None => "_".to_string(),
            Some("") => "eps".to_string(),
            Some(n) => n.to_string(),
        };
        let _ = writeln!(out, "state {s} {name} {}", m.output(s));
    }
    for s in 0..m.state_count() {
        for d in 0..m.alphabet_size() as u8 {
            let _ = writeln!(out, "trans {s} {d} {}", m.successor(s, d));
        }
    }
    out
}

fn err(line: usize, reason: impl Into<String>) -> DfaoError {
    DfaoError::Parse { line, reason: reason.into() }
}

fn number(tok: &str, line: usize, what: &str) -> Result<usize, DfaoError> {
    tok.parse().map_err(|_| err(line, format!("bad {what} `{tok}`")))
}

fn parse_output(tok: &str, kind: OutputKind, line: usize) -> Result<Symbol, DfaoError> {
    let digits: Option<Vec<u8>> = tok.chars().map(|c| c.to_digit(10).map(|d| d as u8)).collect();
    match (kind, digits.as_deref()) {
        (OutputKind::Window, Some(&[a, b, c, d])) => Ok(Symbol::Window([a, b, c, d])),
        (OutputKind::Single, Some(&[a])) => Ok(Symbol::Single(a)),
        _ => Err(err(line, format!("bad {kind} output `{tok}`"))),
    }
}

pub fn deserialize(text: &str) -> Result<Dfao, DfaoError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 || h[0] != "dfao" {
        return Err(err(hline, "expected `dfao <state_count> <alphabet_size> <window|single>`"));
    }
    let count = number(h[1], hline, "state count")?;
    let q = number(h[2], hline, "alphabet size")?;
    let kind = match h[3] {
        "window" => OutputKind::Window,
        "single" => OutputKind::Single,
        other => return Err(err(hline, format!("unknown output kind `{other}`"))),
    };
    if count == 0 || q < 2 {
        return Err(err(hline, "need at least one state and an alphabet of size >= 2"));
    }

    let (iline, init) = lines.next().ok_or_else(|| err(hline + 1, "missing `initial` line"))?;
    let initial = match init.split_whitespace().collect::<Vec<_>>()[..] {
        ["initial", id] => number(id, iline, "state id")?,
        _ => return Err(err(iline, "expected `initial <state_id>`")),
    };
    if initial >= count {
        return Err(err(iline, format!("initial state {initial} out of range")));
    }

    let mut outputs: Vec<Option<Symbol>> = vec![None; count];
    let mut names: Vec<Option<String>> = vec![None; count];
    let mut rows: Vec<Vec<Option<usize>>> = vec![vec![None; q]; count];
    let mut last_line = iline;
    for (line, l) in lines {
        last_line = line;
        match l.split_whitespace().collect::<Vec<_>>()[..] {
            ["state", id, name, out] => {
                let id = number(id, line, "state id")?;
                if id >= count {
                    return Err(err(line, format!("state {id} out of range")));
                }
                if outputs[id].is_some() {
                    return Err(err(line, format!("state {id} defined twice")));
                }
                outputs[id] = Some(parse_output(out, kind, line)?);
                names[id] = match name {
                    "_" => None,
                    "eps" => Some(String::new()),
                    n => Some(n.to_string()),
                };
            }
            ["trans", from, digit, to] => {
                let from = number(from, line, "state id")?;
                let digit = number(digit, line, "digit")?;
                let to = number(to, line, "state id")?;
                if from >= count || to >= count {
                    return Err(err(line, "transition endpoint out of range"));
                }
                if digit >= q {
                    return Err(err(line, format!("digit {digit} not below {q}")));
                }
                if rows[from][digit].replace(to).is_some() {
                    return Err(err(line, format!("transition ({from}, {digit}) defined twice")));
                }
            }
            _ => return Err(err(line, format!("unrecognised line `{l}`"))),
        }
    }

    let outputs = outputs
        .into_iter()
        .enumerate()
        .map(|(s, o)| o.ok_or_else(|| err(last_line, format!("state {s} never defined"))))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(s, row)| {
            row.into_iter()
                .enumerate()
                .map(|(d, t)| t.ok_or_else(|| err(last_line, format!("transition ({s}, {d}) missing"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Dfao::new(q, initial, rows, outputs, names).map_err(|e| err(last_line, e.to_string()))
}
