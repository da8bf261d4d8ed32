//! Self-vanishing grid of columns of squares built by a radius-1 automaton.

pub mod alphabet;
pub mod dynamics;
pub mod geometry;
mod rule;
pub mod seed;
pub mod state;

pub use alphabet::{Alphabet, KILLER, QUIESCENT};
pub use geometry::{corner_sites, Layout};
pub use rule::{build_grid_rule, canonical_seed, decode, grid, GridRule, GridView};
pub use state::{pair_ok, GridState, Zone};
pub mod render;
pub mod verify;

pub use verify::{classify_config, verify_distances, verify_squares, Classification, LemmaReport, Violation};

#[derive(Debug, thiserror::Error)]
pub enum GridError {
    #[error("state id {0} is not part of the grid alphabet")]
    AlphabetMismatch(ca_core::State),
}
