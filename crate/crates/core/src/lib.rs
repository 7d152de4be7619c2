//! Stratified experience replay.
//!
//! Replay memories ([`replay`]), tabular benchmark MDPs ([`envs`]), tabular
//! and DQN agents ([`agents`]), brute-force expected-update oracles
//! ([`oracle`]) and a seeded experiment harness ([`harness`]).

pub mod agents;
pub mod envs;
pub mod harness;
pub mod oracle;
pub mod replay;
