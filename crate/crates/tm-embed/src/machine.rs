use rtm::{Move, ReversibleTM, StateKind};

use crate::EmbedError;

/// Backward view of a reversible machine as dense lookup tables.
#[derive(Clone, Debug)]
pub struct Backward {
    pub states: usize,
    pub symbols: usize,
    /// Indexed by `(state, written symbol)`: previous state, symbol read and
    /// the oracle bit it required, if any.
    back: Vec<Option<(u8, u8, Option<u8>)>>,
    into: Vec<Option<Move>>,
    reject: Vec<bool>,
}

impl Backward {
    pub fn new(tm: &ReversibleTM) -> Result<Backward, EmbedError> {
        tm.check_reversibility().map_err(EmbedError::Irreversible)?;
        let states = tm.state_count();
        let symbols = tm.work_symbols.len();
        if states > 250 || symbols > 250 {
            return Err(EmbedError::TooLarge);
        }
        let mut back = vec![None; states * symbols];
        for q in 0..states {
            for w in 0..symbols {
                back[q * symbols + w] = tm.backward_transition(q, w).map(|t| {
                    let bit = match t.oracle {
                        rtm::OracleRead::Any => None,
                        rtm::OracleRead::Bit(b) => Some(b),
                    };
                    (t.from as u8, t.read as u8, bit)
                });
            }
        }
        let into = (0..states).map(|q| tm.move_into(q)).collect();
        let reject = tm.state_kinds.iter().map(|&k| k == StateKind::Reject).collect();
        Ok(Backward { states, symbols, back, into, reject })
    }

    pub fn back(&self, state: u8, written: u8) -> Option<(u8, u8, Option<u8>)> {
        self.back[state as usize * self.symbols + written as usize]
    }

    pub fn move_into(&self, state: u8) -> Option<Move> {
        self.into[state as usize]
    }

    pub fn is_reject(&self, state: u8) -> bool {
        self.reject[state as usize]
    }
}
