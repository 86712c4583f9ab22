//! Command-line front end. Exit codes: 0 success, 1 a check failed, 2 usage
//! or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dfao::{self, parse_digits, Dfao};
use crate::local_rules::{derive_rules, verify_rules, RULE_THRESHOLD};
use crate::paper_tables::{diff_report, table1, table2};
use crate::seq_core::{first_difference, gen_f, gen_qrs, gen_v, SeqError, SequenceTable};
use crate::synthesis::{
    automaton_kernel, certification_oracle_bound, certify_transitions, frequency_pipeline, kernel_probe, ProbeReport,
    SynthesisConfig, Verdict, DEFAULT_DEPTH, DEFAULT_HORIZON, DEFAULT_VALIDATE_TO, RULE_DERIVATION_BOUND,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const EXACT_KERNEL_DEPTH: u32 = 64;

#[derive(Debug, Parser)]
#[command(name = "metafib", version, about = "Frequency sequence of the V recursion and its automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Generated {
    /// V(1..=max)
    V,
    /// F(0..=max)
    F,
    /// V(n+1) - V(n) for n in 1..=max
    Vdiff,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Probed {
    F,
    Vdiff,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SynthTarget {
    /// Single output F(n)
    F,
    /// Window output F(n-2..=n+1)
    Window,
}

#[derive(Debug, Subcommand)]
enum RulesCommand {
    /// Derive the window maps over 4..=max.
    Derive {
        #[arg(long)]
        max: u64,
    },
    /// Derive over 4..=derive-to, then re-check against F up to max.
    Verify {
        #[arg(long, default_value_t = RULE_DERIVATION_BOUND)]
        derive_to: u64,
        #[arg(long)]
        max: u64,
    },
}

#[derive(Debug, Subcommand)]
enum TablesCommand {
    /// Compare the printed tables with freshly synthesized automata.
    Check {
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u32,
    },
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a sequence as `seq <label> <lo> <hi>` followed by its values.
    Gen {
        #[arg(value_enum)]
        sequence: Generated,
        #[arg(long)]
        max: usize,
        /// First index printed.
        #[arg(long)]
        from: Option<i64>,
    },
    /// Local window maps g and h.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// Print Q_{r,s}(1..=max) with the all-ones seed.
    Qrs {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        max: usize,
    },
    /// Evaluate an automaton on a non-negative integer.
    Eval {
        #[arg(long)]
        automaton: PathBuf,
        /// Decimal numeral, or a digit string in the automaton's base with --binary.
        #[arg(long)]
        n: String,
        #[arg(long)]
        binary: bool,
    },
    /// Export an automaton as Graphviz DOT.
    Dot {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discover, certify and validate the automata for F.
    Synthesize {
        #[arg(long, value_enum, default_value = "f")]
        target: SynthTarget,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: u32,
        #[arg(long, default_value_t = DEFAULT_VALIDATE_TO)]
        validate: u64,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also write the window automaton here.
        #[arg(long)]
        windowed: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Certify every transition of an automaton against F.
    Certify {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
        #[arg(long, default_value_t = DEFAULT_VALIDATE_TO)]
        validate: u64,
    },
    /// Printed transition tables.
    Tables {
        #[command(subcommand)]
        command: TablesCommand,
    },
    /// Count kernel subsequences of F or of the first difference of V.
    Probe {
        #[arg(long, value_enum)]
        sequence: Probed,
        #[arg(long, default_value_t = 2)]
        base: u64,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        #[arg(long, default_value_t = 4096)]
        prefix: usize,
        /// Also print the exact kernel of the sequence this automaton computes.
        #[arg(long)]
        automaton: Option<PathBuf>,
    },
}

/// A command outcome: exit code, or an error message with its exit code.
type Outcome = Result<i32, (i32, String)>;

fn usage<E: std::fmt::Display>(e: E) -> (i32, String) {
    (EXIT_USAGE, e.to_string())
}

fn failed<E: std::fmt::Display>(e: E) -> (i32, String) {
    (EXIT_CHECK_FAILED, e.to_string())
}

fn io(out: &mut dyn Write, text: &str) -> Result<(), (i32, String)> {
    out.write_all(text.as_bytes()).map_err(usage)
}

fn read_automaton(path: &Path) -> Result<Dfao, (i32, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    dfao::deserialize(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), (i32, String)> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn seq_error(e: SeqError) -> (i32, String) {
    match e {
        SeqError::InvalidArgument(_) | SeqError::Parse { .. } => usage(e),
        _ => failed(e),
    }
}

const READING: &str = "# reading: base-q digits, most significant first; leading zeros are ignored\n";
const F_CONVENTION: &str = "# F(0) = 0 and F(n) = 0 for n < 0\n";

fn print_table<T: num_traits::PrimInt>(
    out: &mut dyn Write,
    t: &SequenceTable<T>,
    from: Option<i64>,
) -> Result<(), (i32, String)> {
    let t = match from {
        Some(lo) => t.slice(lo, t.hi()).map_err(usage)?,
        None => t.clone(),
    };
    io(out, &t.to_text())
}

fn gen(out: &mut dyn Write, sequence: Generated, max: usize, from: Option<i64>) -> Outcome {
    match sequence {
        Generated::V => {
            io(out, "# V(n) = V(n - V(n-1)) + V(n - V(n-4)), V(1..=4) = 1\n")?;
            print_table(out, &gen_v::<u64>(max).map_err(seq_error)?, from)?;
        }
        Generated::F => {
            io(out, "# F(a) = #{n : V(n) = a}\n")?;
            io(out, F_CONVENTION)?;
            print_table(out, &gen_f::<u8>(max).map_err(seq_error)?, from)?;
        }
        Generated::Vdiff => {
            io(out, "# d(n) = V(n+1) - V(n)\n")?;
            let v = gen_v::<u64>(max + 1).map_err(seq_error)?;
            print_table(out, &first_difference::<u64, i64>(&v).map_err(seq_error)?, from)?;
        }
    }
    Ok(EXIT_OK)
}

fn rules(out: &mut dyn Write, command: RulesCommand) -> Outcome {
    match command {
        RulesCommand::Derive { max } => {
            let f = gen_f::<u8>(2 * max as usize + 1).map_err(seq_error)?;
            let rules = derive_rules(&f, RULE_THRESHOLD, max).map_err(|e| match e {
                crate::local_rules::RuleError::RuleConflict { .. } => failed(e),
                _ => usage(e),
            })?;
            io(out, &format!("# window (F(a-2), F(a-1), F(a), F(a+1)) for {RULE_THRESHOLD} <= a <= {max}\n"))?;
            io(out, "# g: F(2a), h: F(2a+1)\n")?;
            io(out, &format!("# domain size {}\n", rules.domain_len()))?;
            io(out, &rules.to_text())?;
            Ok(EXIT_OK)
        }
        RulesCommand::Verify { derive_to, max } => {
            let f = gen_f::<u8>(2 * derive_to.max(max) as usize + 1).map_err(seq_error)?;
            let rules = derive_rules(&f, RULE_THRESHOLD, derive_to).map_err(failed)?;
            let report = verify_rules(&rules, &f, max).map_err(usage)?;
            io(
                out,
                &format!(
                    "# derived over {RULE_THRESHOLD}..={derive_to}, domain size {}\nchecked {} values of a up to {}\nviolations {}\nnew windows {}\n",
                    rules.domain_len(),
                    report.checked,
                    report.checked_to,
                    report.violations,
                    report.new_windows.len()
                ),
            )?;
            Ok(if report.violations == 0 && report.new_windows.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

fn qrs(out: &mut dyn Write, r: usize, s: usize, max: usize) -> Outcome {
    io(out, &format!("# Q(n) = Q(n - Q(n-{r})) + Q(n - Q(n-{s}))\n# seed Q(1..={s}) = 1\n"))?;
    let t = gen_qrs::<u64>(r, s, max).map_err(seq_error)?;
    io(out, &t.to_text())?;
    Ok(EXIT_OK)
}

fn eval(out: &mut dyn Write, path: &Path, n: &str, binary: bool) -> Outcome {
    let m = read_automaton(path)?;
    let digits = if binary {
        parse_digits(n, m.alphabet_size()).map_err(usage)?
    } else {
        dfao::decimal_to_digits(n, m.alphabet_size()).map_err(usage)?
    };
    io(out, READING)?;
    io(out, &format!("{}\n", m.eval(&digits).map_err(usage)?))?;
    Ok(EXIT_OK)
}

fn dot(out: &mut dyn Write, path: &Path, target: Option<&Path>) -> Outcome {
    let text = dfao::to_dot(&read_automaton(path)?);
    match target {
        Some(p) => write_file(p, &text)?,
        None => io(out, &text)?,
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn synthesize(
    out: &mut dyn Write,
    target: SynthTarget,
    horizon: u32,
    validate: u64,
    depth: u32,
    path: &Path,
    dot_path: Option<&Path>,
    windowed_path: Option<&Path>,
    jobs: usize,
) -> Outcome {
    let cfg = SynthesisConfig::frequency().with_horizon(horizon).with_validate_to(validate).with_depth(depth);
    cfg.validate().map_err(usage)?;
    io(out, READING)?;
    io(out, F_CONVENTION)?;
    io(out, &format!("# horizon {horizon}, validation 0..={validate}, certification depth {depth}\n"))?;
    let p = frequency_pipeline(&cfg, jobs).map_err(failed)?;
    io(
        out,
        &format!(
            "# oracle F(0..={}), window maps over {}..={} ({} windows)\n",
            p.oracle.hi(),
            RULE_THRESHOLD,
            p.rules.derivation_bound(),
            p.rules.domain_len()
        ),
    )?;
    io(
        out,
        &format!(
            "window automaton: {} states, horizon {} after {} attempt(s)\n",
            p.windowed.dfao.state_count(),
            p.windowed.horizon,
            p.windowed.attempts
        ),
    )?;
    let failures = p.certificate.failures().count();
    io(
        out,
        &format!(
            "certification: {} transitions, {} failed, window maps checked to {} with {} violations\n",
            p.certificate.records.len(),
            failures,
            p.certificate.rules.checked_to,
            p.certificate.rules.violations
        ),
    )?;
    for r in p.certificate.failures() {
        io(out, &format!("{r}\n"))?;
    }
    io(out, &format!("single-output automaton: {} states\n", p.single.state_count()))?;
    io(out, &format!("validation: {}\n", verdict_line(&p.single_verdict)))?;
    let produced = match target {
        SynthTarget::F => &p.single,
        SynthTarget::Window => &p.windowed.dfao,
    };
    write_file(path, &dfao::serialize(produced))?;
    if let Some(d) = dot_path {
        write_file(d, &dfao::to_dot(produced))?;
    }
    if let Some(w) = windowed_path {
        write_file(w, &dfao::serialize(&p.windowed.dfao))?;
    }
    let ok = p.certificate.pass && p.single_verdict.is_pass();
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Pass { checked_to } => format!("PASS for every n <= {checked_to}"),
        Verdict::Mismatch { n, expected, got } => format!("FAIL at n = {n}: expected {expected}, got {got}"),
    }
}

fn certify(out: &mut dyn Write, path: &Path, depth: u32, validate: u64) -> Outcome {
    let m = read_automaton(path)?;
    if m.alphabet_size() != 2 {
        return Err(usage("F is certified in base 2 only"));
    }
    let bound = certification_oracle_bound(&m, depth).max(validate as i64 + 2).max(2 * RULE_THRESHOLD as i64 + 2);
    io(out, READING)?;
    io(out, F_CONVENTION)?;
    io(out, &format!("# depth {depth}, oracle F(0..={bound}), validation 0..={validate}\n"))?;
    let f = gen_f::<u8>(bound as usize).map_err(seq_error)?;
    let rules_to = RULE_DERIVATION_BOUND.min(((f.hi() - 1) / 2) as u64);
    let rules = derive_rules(&f, RULE_THRESHOLD, rules_to).map_err(failed)?;
    let report = certify_transitions(&m, &f, &rules, depth, validate).map_err(failed)?;
    for r in &report.records {
        io(out, &format!("{r}\n"))?;
    }
    io(
        out,
        &format!(
            "window maps: derived to {rules_to}, checked to {}, {} violations\nvalidation: {}\n",
            report.rules.checked_to,
            report.rules.violations,
            verdict_line(&report.validation)
        ),
    )?;
    let ok = report.pass && report.rules.violations == 0;
    io(out, if ok { "CERTIFIED\n" } else { "NOT CERTIFIED\n" })?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn tables(out: &mut dyn Write, command: TablesCommand) -> Outcome {
    let TablesCommand::Check { horizon } = command;
    let cfg = SynthesisConfig::frequency().with_horizon(horizon);
    cfg.validate().map_err(usage)?;
    io(out, &format!("# truth: synthesized at horizon {horizon}, validated to {}\n", cfg.validate_to))?;
    let p = frequency_pipeline(&cfg, 1).map_err(failed)?;
    if !p.certificate.pass || !p.single_verdict.is_pass() {
        return Err(failed("synthesized automata did not certify"));
    }
    let reports = [diff_report(&table1(), &p.windowed.dfao), diff_report(&table2(), &p.single)];
    for r in &reports {
        io(out, &r.to_string())?;
    }
    let ok = reports.iter().all(|r| r.all_typo_candidates());
    io(out, if ok { "every discrepancy is a typo candidate\n" } else { "unresolved discrepancies remain\n" })?;
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn print_probe(out: &mut dyn Write, label: &str, r: &ProbeReport) -> Result<(), (i32, String)> {
    io(out, &format!("# {label}: base {}, prefix {} terms, absolute indices\n", r.base, r.prefix))?;
    io(out, "exponent distinct new cumulative\n")?;
    for l in &r.levels {
        io(out, &format!("{} {} {} {}\n", l.exponent, l.distinct, l.new, l.cumulative))?;
    }
    io(out, &format!("kernel size {}, {}\n", r.kernel_size(), if r.stabilized() { "stabilized" } else { "growing" }))
}

fn probe(
    out: &mut dyn Write,
    sequence: Probed,
    base: u64,
    depth: u32,
    prefix: usize,
    automaton: Option<&Path>,
) -> Outcome {
    if base < 2 || prefix == 0 {
        return Err(usage("need base >= 2 and prefix >= 1"));
    }
    let hi = base
        .checked_pow(depth)
        .and_then(|t| t.checked_mul(prefix as u64))
        .filter(|&n| n <= 1 << 32)
        .ok_or_else(|| usage("base^depth * prefix is too large"))? as usize;
    let report = match sequence {
        Probed::F => {
            io(out, F_CONVENTION)?;
            kernel_probe(&gen_f::<u8>(hi).map_err(seq_error)?, base, depth, prefix)
        }
        Probed::Vdiff => {
            io(out, "# d(n) = V(n+1) - V(n), d(0) absent\n")?;
            let v = gen_v::<u32>(hi + 1).map_err(seq_error)?;
            kernel_probe(&first_difference::<u32, i8>(&v).map_err(seq_error)?, base, depth, prefix)
        }
    };
    print_probe(out, &format!("{sequence:?}").to_lowercase(), &report)?;
    if let Some(path) = automaton {
        let levels = automaton_kernel(&read_automaton(path)?, EXACT_KERNEL_DEPTH);
        let closed = levels.last().is_some_and(|l| l.new == 0);
        io(out, &format!("# exact kernel of {}, levels up to {EXACT_KERNEL_DEPTH}\n", path.display()))?;
        io(out, "exponent distinct new cumulative\n")?;
        for l in &levels {
            io(out, &format!("{} {} {} {}\n", l.exponent, l.distinct, l.new, l.cumulative))?;
        }
        let size = levels.last().map_or(0, |l| l.cumulative);
        io(out, &format!("exact kernel size {size}, {}\n", if closed { "closed" } else { "not closed" }))?;
    }
    Ok(EXIT_OK)
}

fn dispatch(out: &mut dyn Write, command: Command) -> Outcome {
    match command {
        Command::Gen { sequence, max, from } => gen(out, sequence, max, from),
        Command::Rules { command } => rules(out, command),
        Command::Qrs { r, s, max } => qrs(out, r, s, max),
        Command::Eval { automaton, n, binary } => eval(out, &automaton, &n, binary),
        Command::Dot { automaton, out: target } => dot(out, &automaton, target.as_deref()),
        Command::Synthesize { target, horizon, validate, depth, out: path, dot: d, windowed, jobs } => {
            synthesize(out, target, horizon, validate, depth, &path, d.as_deref(), windowed.as_deref(), jobs)
        }
        Command::Certify { automaton, depth, validate } => certify(out, &automaton, depth, validate),
        Command::Tables { command } => tables(out, command),
        Command::Probe { sequence, base, depth, prefix, automaton } => {
            probe(out, sequence, base, depth, prefix, automaton.as_deref())
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match dispatch(out, cli.command) {
        Ok(code) => code,
        Err((code, message)) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}
