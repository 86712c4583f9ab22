//! Integer-sequence oracles: the V-sequence, its frequency sequence F, the
//! Hofstadter-Huber family `Q_{r,s}` and first differences.
//!
//! Every table is generic over its storage integer so that long F prefixes
//! can be held as `u8` while V and `Q_{r,s}` get 64-bit headroom.

use std::fmt::Write as _;

use num_traits::{PrimInt, Signed};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("sequence dies at n = {n}: recursion argument {arg} outside [1, {}]", n - 1)]
    DeadSequence { n: u64, arg: i64 },
    #[error("V is not a unit-step non-decreasing sequence at n = {n} (V(n-1) = {prev}, V(n) = {value})")]
    MonotonicityViolation { n: u64, prev: u64, value: u64 },
    #[error("value at n = {n} does not fit the table's storage type")]
    Overflow { n: u64 },
    #[error("invalid arguments: {0}")]
    InvalidArgument(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// Values of an integer sequence on the closed index range `lo..=hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable<T> {
    label: String,
    lo: i64,
    values: Vec<T>,
}

impl<T: PrimInt> SequenceTable<T> {
    pub fn new(label: impl Into<String>, lo: i64, values: Vec<T>) -> Result<Self, SeqError> {
        if values.is_empty() {
            return Err(SeqError::InvalidArgument("a table needs at least one value".into()));
        }
        Ok(Self { label: label.into(), lo, values })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= self.lo && n <= self.hi()
    }

    pub fn get(&self, n: i64) -> Option<T> {
        if self.contains(n) {
            Some(self.values[(n - self.lo) as usize])
        } else {
            None
        }
    }

    /// Iterates `(index, value)` pairs in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.lo + i as i64, v))
    }

    /// Restricts the table to `lo..=hi`, which must lie inside the stored range.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<Self, SeqError> {
        if lo > hi || !self.contains(lo) || !self.contains(hi) {
            return Err(SeqError::InvalidArgument(format!(
                "range {lo}..={hi} is not inside {}..={}",
                self.lo,
                self.hi()
            )));
        }
        let start = (lo - self.lo) as usize;
        let end = (hi - self.lo) as usize;
        Ok(Self { label: self.label.clone(), lo, values: self.values[start..=end].to_vec() })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Line-oriented text: `seq <label> <lo> <hi>` followed by one value per line.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 + self.values.len() * 3);
        let _ = writeln!(out, "seq {} {} {}", self.label, self.lo, self.hi());
        for v in &self.values {
            let _ = writeln!(out, "{}", v.to_i128().expect("primitive integers fit in i128"));
        }
        out
    }

    /// Parses the format written by [`SequenceTable::to_text`]. Lines starting
    /// with `#` and blank lines are skipped.
    pub fn from_text(text: &str) -> Result<Self, SeqError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(SeqError::Parse { line: 1, reason: "empty input".into() })?;
        let bad_header = || SeqError::Parse { line: hline, reason: "expected `seq <label> <lo> <hi>`".into() };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "seq" {
            return Err(bad_header());
        }
        let lo: i64 = fields[2].parse().map_err(|_| bad_header())?;
        let hi: i64 = fields[3].parse().map_err(|_| bad_header())?;
        if hi < lo {
            return Err(bad_header());
        }
        let mut values = Vec::with_capacity((hi - lo + 1) as usize);
        for (line, l) in lines {
            let v =
                T::from_str_radix(l, 10).map_err(|_| SeqError::Parse { line, reason: format!("bad value `{l}`") })?;
            values.push(v);
        }
        if values.len() as i64 != hi - lo + 1 {
            return Err(SeqError::Parse {
                line: text.lines().count(),
                reason: format!("header announces {} values, found {}", hi - lo + 1, values.len()),
            });
        }
        Self::new(fields[1], lo, values)
    }
}

/// `V(1..=n_max)`, i.e. `Q_{1,4}` with four initial ones.
pub fn gen_v<T: PrimInt>(n_max: usize) -> Result<SequenceTable<T>, SeqError> {
    if n_max < 4 {
        return Err(SeqError::InvalidArgument(format!("n_max = {n_max} must be at least 4")));
    }
    Ok(gen_qrs(1, 4, n_max)?.with_label("V"))
}

/// `Q_{r,s}(1..=n_max)` with the all-ones seed `Q(1..=s) = 1`.
pub fn gen_qrs<T: PrimInt>(r: usize, s: usize, n_max: usize) -> Result<SequenceTable<T>, SeqError> {
    if r < 1 || s <= r {
        return Err(SeqError::InvalidArgument(format!("need s > r >= 1, got r = {r}, s = {s}")));
    }
    if n_max < s {
        return Err(SeqError::InvalidArgument(format!("n_max = {n_max} is smaller than s = {s}")));
    }
    // values[i] holds Q(i + 1)
    let mut values: Vec<T> = vec![T::one(); s];
    values.reserve(n_max - s);
    for n in (s + 1)..=n_max {
        let at = |values: &Vec<T>, back: usize| -> Result<T, SeqError> {
            let q = values[n - back - 1].to_i64().ok_or(SeqError::Overflow { n: n as u64 })?;
            let arg = n as i64 - q;
            if arg < 1 || arg > n as i64 - 1 {
                return Err(SeqError::DeadSequence { n: n as u64, arg });
            }
            Ok(values[arg as usize - 1])
        };
        let x = at(&values, r)?;
        let y = at(&values, s)?;
        let v = x.checked_add(&y).ok_or(SeqError::Overflow { n: n as u64 })?;
        values.push(v);
    }
    SequenceTable::new(format!("Q{r},{s}"), 1, values)
}

/// Reads `V(m)` for non-decreasing `m` from the running frequency counts:
/// `V(m) = a` exactly when `F(1) + .. + F(a-1) < m <= F(1) + .. + F(a)`.
struct RunCursor {
    value: usize,
    before: u64,
}

impl RunCursor {
    fn new() -> Self {
        Self { value: 1, before: 0 }
    }

    fn read<T: PrimInt>(&mut self, m: u64, counts: &[T]) -> u64 {
        loop {
            let c = counts[self.value].to_u64().unwrap_or(0);
            if m <= self.before + c {
                return self.value as u64;
            }
            self.before += c;
            self.value += 1;
        }
    }
}

/// `F(0..=a_max)` with `F(0) = 0`, where `F(a)` counts the `n` with `V(n) = a`.
///
/// V is generated until it first reaches `a_max + 1`; only the frequency counts
/// are stored, and the two back-references of the recursion are served by
/// cursors over the run-length encoding of V built so far. Memory is one `T`
/// per frequency value.
pub fn gen_f<T: PrimInt>(a_max: usize) -> Result<SequenceTable<T>, SeqError> {
    if a_max < 1 {
        return Err(SeqError::InvalidArgument("a_max must be at least 1".into()));
    }
    let four = T::from(4).ok_or(SeqError::Overflow { n: 4 })?;
    let mut counts: Vec<T> = vec![T::zero(); a_max + 2];
    counts[1] = four;
    // ring[n % 4] holds V(n) for the last four n.
    let mut ring = [1u64; 4];
    let mut near = RunCursor::new();
    let mut far = RunCursor::new();
    let target = a_max as u64 + 1;
    let mut n: u64 = 5;
    loop {
        let prev = ring[((n - 1) % 4) as usize];
        let back4 = ring[(n % 4) as usize];
        let m1 = n - prev;
        let m2 = n.saturating_sub(back4);
        for (m, v) in [(m1, prev), (m2, back4)] {
            if m < 1 || m > n - 1 {
                return Err(SeqError::DeadSequence { n, arg: n as i64 - v as i64 });
            }
        }
        let value = near.read(m1, &counts) + far.read(m2, &counts);
        if value < prev || value > prev + 1 {
            return Err(SeqError::MonotonicityViolation { n, prev, value });
        }
        if value == target {
            break;
        }
        let slot = &mut counts[value as usize];
        *slot = slot.checked_add(&T::one()).ok_or(SeqError::Overflow { n })?;
        ring[(n % 4) as usize] = value;
        n += 1;
    }
    counts.truncate(a_max + 1);
    SequenceTable::new("F", 0, counts)
}

/// `D(n) = t(n+1) - t(n)` on `lo..=hi-1`, stored in a signed type.
pub fn first_difference<T: PrimInt, D: PrimInt + Signed>(t: &SequenceTable<T>) -> Result<SequenceTable<D>, SeqError> {
    if t.len() < 2 {
        return Err(SeqError::InvalidArgument("first difference needs at least two entries".into()));
    }
    let values = t
        .values()
        .windows(2)
        .zip(t.lo()..)
        .map(|(w, n)| {
            let wide = |v: T| v.to_i128().expect("primitive integers fit in i128");
            D::from(wide(w[1]) - wide(w[0])).ok_or(SeqError::Overflow { n: n as u64 })
        })
        .collect::<Result<Vec<D>, _>>()?;
    SequenceTable::new(format!("d{}", t.label()), t.lo(), values)
}
