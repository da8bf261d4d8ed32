//! Preimages of finite words under a cellular automaton, orphans (words
//! without preimage under some iterate) and the finite-window languages
//! `L_k` that approximate the limit set.
//!
//! Everything is word-level: boundary conventions play no role.

mod dag;
mod index;
mod lang;
mod orphan;
pub mod word;

pub use index::{preimages_word, InverseIndex, Layers};
pub use lang::{balance_check, limit_language_window, BalanceReport, LengthBalance, WindowLanguage};
pub use orphan::{find_min_orphan, find_min_orphan_with, is_orphan, EngineKind, OrphanEngine};

#[derive(Debug, thiserror::Error)]
pub enum PreimageError {
    #[error("empty word")]
    EmptyWord,
    #[error("order must be positive")]
    ZeroOrder,
    #[error("bad word `{0}`")]
    BadWord(String),
    #[error("inverse index for {states} states and radius {radius} is too large")]
    TooLarge { states: u32, radius: usize },
    #[error("too many words of length {len} over {state_count} states")]
    EnumerationTooLarge { state_count: u32, len: usize },
    #[error(transparent)]
    Ca(#[from] ca_core::CaError),
}
