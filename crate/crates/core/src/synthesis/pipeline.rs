use super::certify::{certification_oracle_bound, certify_transitions, CertificateReport};
use super::discover::{synthesize, Synthesis, Target};
use super::validate::{cross_validate_jobs, Verdict};
use super::{SynthesisConfig, SynthesisError};
use crate::dfao::Dfao;
use crate::local_rules::{derive_rules, WindowRuleTable, RULE_THRESHOLD};
use crate::seq_core::{gen_f, SequenceTable};

/// Upper end of the range the window maps are derived from.
pub const RULE_DERIVATION_BOUND: u64 = 1 << 20;

/// Everything produced on the way from the F oracle to the single-output automaton.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub oracle: SequenceTable<u8>,
    pub rules: WindowRuleTable,
    pub windowed: Synthesis,
    pub certificate: CertificateReport,
    /// Window automaton projected to `F(n)` and minimized.
    pub single: Dfao,
    pub single_verdict: Verdict,
}

fn oracle(hi: i64) -> Result<SequenceTable<u8>, SynthesisError> {
    gen_f::<u8>(hi as usize).map_err(|e| SynthesisError::InvalidConfig(e.to_string()))
}

/// F generated far enough for discovery, certification at `cfg.depth` and
/// validation to `cfg.validate_to`, grown on demand.
pub fn frequency_pipeline(cfg: &SynthesisConfig, jobs: usize) -> Result<Pipeline, SynthesisError> {
    let mut hi = (cfg.validate_to as i64 + 2).max(1 << 16);
    let (mut f, windowed) = loop {
        let f = oracle(hi)?;
        match synthesize(&f, cfg, Target::Window) {
            Ok(s) => break (f, s),
            Err(SynthesisError::OracleTooShort { needed, .. }) => hi = needed.max(2 * hi),
            Err(e) => return Err(e),
        }
    };
    let needed = certification_oracle_bound(&windowed.dfao, cfg.depth);
    if needed > f.hi() {
        f = oracle(needed)?;
    }
    let rules_to = RULE_DERIVATION_BOUND.min(((f.hi() - 1) / 2) as u64);
    let rules = derive_rules(&f, RULE_THRESHOLD, rules_to)?;
    let certificate = certify_transitions(&windowed.dfao, &f, &rules, cfg.depth, cfg.validate_to)?;
    let single = windowed.dfao.project_output(2)?.minimize();
    let single_verdict = cross_validate_jobs(&single, &f, cfg.validate_to, jobs)?;
    Ok(Pipeline { oracle: f, rules, windowed, certificate, single, single_verdict })
}
