//! Reversible Turing machines over a one-sided work tape and a read-only
//! 0/1 oracle tape.
//!
//! Reject is a halting state. A prefix of the oracle is rejected when the
//! machine reaches reject while its head stays on that prefix.

mod machine;
mod run;

pub use machine::{
    bundled, no11, parity, stay_put, Clash, Counterexample, Move, OracleRead, ReversibleTM, StateKind, Transition,
};
pub use run::{
    prefix_rejected, run, run_with_recheck, step_backward, step_forward, Direction, EffectiveClass, HaltCause,
    PrefixVerdict, RecheckReport, Snapshot, Trace,
};

#[derive(Debug, thiserror::Error)]
pub enum RtmError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("machine is not reversible: {0}")]
    Irreversible(Counterexample),
    #[error("oracle symbols must be 0 or 1")]
    BadOracle,
    #[error("recheck period must be positive")]
    ZeroPeriod,
}
