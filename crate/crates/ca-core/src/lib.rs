//! One-dimensional cellular automata over finite windows.

mod config;
mod rule;
pub mod text;

pub use config::{evolve, step, Boundary, Configuration, Diagram, Site};
pub use rule::{compose, compose_capped, Rule, DEFAULT_TABLE_CAP};

/// State id. Valid ids for a rule are `0..rule.state_count()`.
pub type State = u32;

#[derive(Debug, thiserror::Error)]
pub enum CaError {
    #[error("state {state} out of range for {state_count} states")]
    InvalidState { state: State, state_count: u32 },
    #[error("table of {needed} entries exceeds the limit of {cap}")]
    ResourceLimit { needed: u64, cap: u64 },
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
