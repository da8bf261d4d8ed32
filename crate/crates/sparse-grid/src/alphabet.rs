//! Enumerated grid alphabet.

use crate::state::*;

/// (s4, s3, s2, r4) phase tuples allowed in one cell.
pub const STARTER_COMBOS: &[(Option<u8>, Option<u8>, Option<u8>, Option<u8>)] = &[
    (None, None, None, Some(0)),
    (None, None, None, Some(1)),
    (None, None, None, Some(2)),
    (None, None, None, Some(3)),
    (None, None, Some(0), None),
    (None, None, Some(1), None),
    (None, Some(0), None, None),
    (None, Some(0), None, Some(0)),
    (None, Some(0), None, Some(1)),
    (None, Some(0), None, Some(2)),
    (None, Some(0), None, Some(3)),
    (None, Some(0), Some(1), None),
    (None, Some(1), None, None),
    (None, Some(1), None, Some(0)),
    (None, Some(1), None, Some(1)),
    (None, Some(1), None, Some(2)),
    (None, Some(1), None, Some(3)),
    (None, Some(2), None, None),
    (None, Some(2), None, Some(0)),
    (None, Some(2), None, Some(1)),
    (None, Some(2), None, Some(2)),
    (None, Some(2), None, Some(3)),
    (Some(0), None, None, None),
    (Some(1), None, None, None),
    (Some(2), None, None, None),
    (Some(2), None, Some(0), None),
    (Some(3), None, None, None),
    (Some(3), None, None, Some(3)),
    (Some(3), Some(0), None, None),
];

use std::collections::HashMap;

use ca_core::State;

/// Id of the quiescent state.
pub const QUIESCENT: State = 0;
/// Id of the killer state.
pub const KILLER: State = 1;

/// Bijection between valid grid states and state ids.
#[derive(Clone, Debug)]
pub struct Alphabet {
    states: Vec<GridState>,
    ids: HashMap<GridState, State>,
}

impl Alphabet {
    pub fn grid() -> Alphabet {
        let states = all_states();
        let ids = states.iter().enumerate().map(|(i, s)| (*s, i as State)).collect();
        Alphabet { states, ids }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn id(&self, s: &GridState) -> Option<State> {
        self.ids.get(s).copied()
    }

    pub fn state(&self, id: State) -> Option<GridState> {
        self.states.get(id as usize).copied()
    }

    pub fn states(&self) -> &[GridState] {
        &self.states
    }
}

fn marks() -> Vec<Mark> {
    let mut v = vec![Mark::None, Mark::Start];
    for z in Zig::BOTH {
        v.push(Mark::Bounce(z));
        v.push(Mark::Last(z));
    }
    v
}

fn all_states() -> Vec<GridState> {
    let mut out = vec![GridState::Quiescent, GridState::Killer];
    let bools = [false, true];
    let mut diags = vec![None];
    for dir in [Dir::Sw, Dir::Se] {
        for id in Zig::BOTH {
            for last in bools {
                diags.push(Some(Diag { dir, id, last }));
            }
        }
    }
    for parity in 0..2 {
        for a_left in bools {
            for b_left in bools {
                for cnt_left in bools {
                    for &diag in &diags {
                        for counting in bools {
                            out.push(GridState::Interior(Interior { parity, a_left, b_left, cnt_left, diag, counting }));
                        }
                    }
                }
            }
        }
    }
    let mut stages: Vec<Stage> = (0..=4).map(Stage::Fresh).collect();
    stages.extend([Stage::Awaiting, Stage::Launch1, Stage::Launch2, Stage::Mature]);
    for stage in stages {
        for left in marks() {
            for right in marks() {
                for counting in bools {
                    out.push(GridState::Line(Line { stage, left, right, counting }));
                }
            }
        }
    }
    for parity in 0..2 {
        for &(s4, s3, s2, r4) in STARTER_COMBOS {
            out.push(GridState::Starters(Starters { parity, s4, s3, s2, r4 }));
        }
    }
    out.retain(|s| s.is_valid());
    out
}
