#![allow(dead_code)]

use std::sync::OnceLock;

use metafib::synthesis::{frequency_pipeline, Pipeline};
use metafib::SynthesisConfig;

/// Default synthesis run, shared by every test in one binary.
pub fn pipeline() -> &'static Pipeline {
    static P: OnceLock<Pipeline> = OnceLock::new();
    P.get_or_init(|| frequency_pipeline(&SynthesisConfig::frequency(), 4).expect("default pipeline runs"))
}

pub fn bits(s: &str) -> Vec<u8> {
    metafib::dfao::parse_digits(s, 2).unwrap()
}
