//! A reversible Turing machine run backward inside the sparse grid.
//!
//! Column `i` of the grid and square `j` (counted from the top) give the
//! computation site on the top-left corner of the square when `j` is even,
//! and a shifting site when `j` is odd. The site `(i, 2t)` holds tape cell
//! `i - t` at machine time `t`, so the machine runs backward as the
//! automaton runs forward and time 0 sits on the common top row.

pub mod cell;
pub mod machine;
mod rule;
pub mod seed;
pub mod step;
pub mod trace;
pub mod verify;

pub use cell::{Cell, Ext, Head, Leg, Payload};
pub use rule::{build_embedded_rule, Codec, EmbeddedRule};
pub use seed::{embedded_seed, SeedPlan};
pub use trace::{extract_tm_trace, TmTrace, TraceEntry};
pub use verify::{verify_head_unique, verify_zones};

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("machine is not reversible: {0}")]
    Irreversible(rtm::Counterexample),
    #[error("machine too large for the packed alphabet")]
    TooLarge,
    #[error("cell cannot be encoded")]
    Unencodable,
    #[error("state id {0} is not part of the embedded alphabet")]
    AlphabetMismatch(ca_core::State),
    #[error("oracle of length {oracle} does not fit {columns} columns")]
    OracleTooLong { oracle: usize, columns: usize },
    #[error("at least one column is needed")]
    NoColumns,
    #[error("no time of the reference run fits {columns} columns; try more or fewer")]
    Unfit { columns: usize },
    #[error(transparent)]
    Machine(rtm::RtmError),
    #[error("t={time} x={cell}: {msg}")]
    Decode { time: i64, cell: i64, msg: String },
}
