use super::{Oracle, SynthesisError};
use crate::dfao::{Dfao, OutputKind, Symbol};
use crate::num::SeqValue;
use crate::seq_core::SequenceTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass {
        checked_to: u64,
    },
    /// Least `n` whose automaton output disagrees with the oracle.
    Mismatch {
        n: u64,
        expected: Symbol,
        got: Symbol,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

fn expected<T: SeqValue>(oracle: &Oracle<'_, T>, kind: OutputKind, n: u64) -> Result<Symbol, SynthesisError> {
    let n = n as i64;
    Ok(match kind {
        OutputKind::Window => Symbol::Window([oracle.at(n - 2)?, oracle.at(n - 1)?, oracle.at(n)?, oracle.at(n + 1)?]),
        OutputKind::Single => Symbol::Single(oracle.at(n)?),
    })
}

fn check_range<T: SeqValue>(
    m: &Dfao,
    oracle: &Oracle<'_, T>,
    range: std::ops::RangeInclusive<u64>,
) -> Result<Option<Verdict>, SynthesisError> {
    for n in range {
        let want = expected(oracle, m.output_kind(), n)?;
        let got = m.eval_u64(n);
        if got != want {
            return Ok(Some(Verdict::Mismatch { n, expected: want, got }));
        }
    }
    Ok(None)
}

/// Compares the automaton with the oracle on every `n` in `0..=n_max`: the
/// whole window `F(n-2..=n+1)` for window automata, `F(n)` otherwise.
pub fn cross_validate<T: SeqValue>(m: &Dfao, oracle: &SequenceTable<T>, n_max: u64) -> Result<Verdict, SynthesisError> {
    cross_validate_jobs(m, oracle, n_max, 1)
}

/// [`cross_validate`] over `jobs` disjoint index ranges checked concurrently;
/// the verdict names the least failing `n` across all ranges.
pub fn cross_validate_jobs<T: SeqValue>(
    m: &Dfao,
    oracle: &SequenceTable<T>,
    n_max: u64,
    jobs: usize,
) -> Result<Verdict, SynthesisError> {
    let lookup = Oracle::new(oracle);
    let reach = match m.output_kind() {
        OutputKind::Window => n_max as i64 + 1,
        OutputKind::Single => n_max as i64,
    };
    lookup.require(reach)?;
    let jobs = jobs.max(1) as u64;
    let chunk = (n_max + 1).div_ceil(jobs);
    let ranges: Vec<_> = (0..jobs)
        .map(|j| (j * chunk, ((j + 1) * chunk).min(n_max + 1)))
        .filter(|(lo, hi)| lo < hi)
        .map(|(lo, hi)| lo..=hi - 1)
        .collect();
    let results: Vec<Result<Option<Verdict>, SynthesisError>> = if ranges.len() == 1 {
        vec![check_range(m, &lookup, ranges[0].clone())]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|r| {
                    let r = r.clone();
                    let lookup = &lookup;
                    scope.spawn(move || check_range(m, lookup, r))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("validation worker panicked")).collect()
        })
    };
    for r in results {
        if let Some(v) = r? {
            return Ok(v);
        }
    }
    Ok(Verdict::Pass { checked_to: n_max })
}
