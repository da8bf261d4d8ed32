use std::sync::OnceLock;

use ca_core::{Boundary, Configuration, Rule, State};

use crate::alphabet::{Alphabet, KILLER, QUIESCENT};
use crate::dynamics;
use crate::seed::seed_states;
use crate::state::{pair_ok, GridState};

/// Maps state ids of some rule to the grid layer they carry.
pub trait GridView: Sync {
    fn grid_state(&self, id: State) -> Option<GridState>;
}

impl GridView for Alphabet {
    fn grid_state(&self, id: State) -> Option<GridState> {
        self.state(id)
    }
}

#[derive(Clone, Debug)]
pub struct GridRule {
    pub rule: Rule,
    pub alphabet: Alphabet,
}

impl GridRule {
    pub fn encode(&self, row: &[GridState]) -> Vec<State> {
        row.iter().map(|s| self.alphabet.id(s).expect("state in alphabet")).collect()
    }
}

/// Builds the dense radius-1 table over the enumerated alphabet.
pub fn build_grid_rule() -> GridRule {
    let alphabet = Alphabet::grid();
    let n = alphabet.len();
    let states = alphabet.states();
    let ok: Vec<bool> = (0..n * n).map(|i| pair_ok(&states[i / n], &states[i % n])).collect();
    let mut table = vec![KILLER; n * n * n];
    for l in 0..n {
        for c in 0..n {
            if !ok[l * n + c] {
                continue;
            }
            for r in 0..n {
                if !ok[c * n + r] {
                    continue;
                }
                let out = dynamics::next(&states[l], &states[c], &states[r]);
                // outputs outside the alphabet only arise from inconsistent contexts
                table[(l * n + c) * n + r] = alphabet.id(&out).unwrap_or(KILLER);
            }
        }
    }
    let rule = Rule::from_table(n as u32, 1, table).expect("table has the right size");
    GridRule { rule, alphabet }
}

/// Shared instance of [`build_grid_rule`].
pub fn grid() -> &'static GridRule {
    static GRID: OnceLock<GridRule> = OnceLock::new();
    GRID.get_or_init(build_grid_rule)
}

/// Row just after the creation of the leftmost seeded column, with
/// `columns` columns to be built. Cells outside the window are quiescent.
pub fn canonical_seed(columns: usize) -> Configuration {
    let g = grid();
    let (origin, row) = seed_states(columns);
    Configuration::new(g.encode(&row), Boundary::Quiescent(QUIESCENT), origin)
}

/// Decodes a configuration through `view`; unknown ids decode to `None`.
pub fn decode(view: &dyn GridView, config: &Configuration) -> Vec<Option<GridState>> {
    config.cells.iter().map(|&s| view.grid_state(s)).collect()
}
