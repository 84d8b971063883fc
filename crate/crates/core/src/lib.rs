//! Static state-field coverage for Java oracles and coverage-guided test
//! prioritization.

pub mod coverage;
pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod source;
