use std::sync::Arc;

use ca_core::{Rule, State};
use rtm::ReversibleTM;
use sparse_grid::{grid, GridState, GridView, Zone};

use crate::cell::{Cell, Ext, Head, Leg, Payload, MAX_DORMANT};
use crate::machine::Backward;
use crate::step::next_over;
use crate::EmbedError;

const LEGS: u64 = Leg::ALL.len() as u64 + 1;
const DORMANCY: u64 = MAX_DORMANT as u64 + 2;

/// Mixed-radix packing of [`Cell`] into state ids. Id 0 is the quiescent
/// state and id 1 the killer, as in the grid alphabet.
#[derive(Clone, Debug)]
pub struct Codec {
    base: u64,
    slots: u64,
    heads: u64,
    states: u64,
    symbols: u64,
}

fn leg_code(leg: Leg) -> u64 {
    Leg::ALL.iter().position(|&l| l == leg).map_or(LEGS - 1, |p| p as u64)
}

fn leg_of(code: u64) -> Leg {
    Leg::ALL.get(code as usize).copied().unwrap_or(Leg::Parked)
}

impl Codec {
    pub fn new(m: &Backward) -> Result<Codec, EmbedError> {
        let base = grid().alphabet.len() as u64;
        let (states, symbols) = (m.states as u64, m.symbols as u64);
        let slots = 2 * symbols + 1;
        let heads = states * LEGS * DORMANCY + 1;
        let codec = Codec { base, slots, heads, states, symbols };
        match codec.count() {
            Some(n) if n <= u32::MAX as u64 => Ok(codec),
            _ => Err(EmbedError::TooLarge),
        }
    }

    fn ext_count(&self) -> Option<u64> {
        self.slots.checked_mul(self.slots)?.checked_mul(self.heads)?.checked_mul(12)
    }

    fn count(&self) -> Option<u64> {
        self.ext_count()?.checked_mul(self.base)
    }

    pub fn state_count(&self) -> u32 {
        self.count().expect("checked at construction") as u32
    }

    fn slot(&self, p: Option<Payload>) -> Option<u64> {
        match p {
            None => Some(0),
            Some(p) if p.oracle < 2 && (p.work as u64) < self.symbols => Some(1 + 2 * p.work as u64 + p.oracle as u64),
            _ => None,
        }
    }

    fn unslot(&self, code: u64) -> Option<Payload> {
        (code > 0).then(|| Payload { oracle: ((code - 1) % 2) as u8, work: ((code - 1) / 2) as u8 })
    }

    fn head(&self, h: Option<Head>) -> Option<u64> {
        let Some(h) = h else { return Some(0) };
        let dorm = match h.dormant {
            None => 0,
            Some(d) if d <= MAX_DORMANT => d as u64 + 1,
            Some(_) => return None,
        };
        ((h.state as u64) < self.states).then(|| 1 + ((h.state as u64 * LEGS + leg_code(h.leg)) * DORMANCY + dorm))
    }

    fn unhead(&self, code: u64) -> Option<Head> {
        (code > 0).then(|| {
            let c = code - 1;
            let dorm = c % DORMANCY;
            let leg = leg_of((c / DORMANCY) % LEGS);
            let state = (c / DORMANCY / LEGS) as u8;
            Head { state, leg, dormant: (dorm > 0).then(|| (dorm - 1) as u8) }
        })
    }

    pub fn encode(&self, cell: &Cell) -> Option<State> {
        let base = grid().alphabet.id(&cell.base)? as u64;
        let e = &cell.ext;
        let zone = match e.zone {
            Zone::LeftOfHead | Zone::Plain => 0,
            Zone::RightOfHead => 1,
            Zone::Unreachable => 2,
        };
        let mut code = self.slot(e.a)?;
        code = code * self.slots + self.slot(e.b)?;
        code = code * self.heads + self.head(e.head)?;
        code = ((code * 3 + zone) * 2 + e.fa as u64) * 2 + e.fb as u64;
        Some((code * self.base + base) as State)
    }

    /// Inverse of [`Codec::encode`]; `None` for ids that are out of range or
    /// do not describe a consistent cell.
    pub fn decode(&self, id: State) -> Option<Cell> {
        let id = id as u64;
        if id >= self.count()? {
            return None;
        }
        let base = grid().alphabet.state((id % self.base) as State)?;
        let mut code = id / self.base;
        let fb = code % 2 == 1;
        code /= 2;
        let fa = code % 2 == 1;
        code /= 2;
        let zone_code = code % 3;
        code /= 3;
        let head = self.unhead(code % self.heads);
        code /= self.heads;
        let b = self.unslot(code % self.slots);
        let a = self.unslot(code / self.slots);
        let zone = if base.is_construction() && !matches!(base, GridState::Starters(_)) {
            [Zone::LeftOfHead, Zone::RightOfHead, Zone::Unreachable][zone_code as usize]
        } else if zone_code == 0 {
            Zone::Plain
        } else {
            return None;
        };
        let cell = Cell { base, ext: Ext { a, b, head, zone, fa, fb } };
        let known = head.is_none_or(|h| (h.state as u64) < self.states);
        (known && cell.is_consistent()).then_some(cell)
    }
}

/// The grid automaton extended with a backward machine layer.
#[derive(Clone)]
pub struct EmbeddedRule {
    pub rule: Rule,
    pub tm: ReversibleTM,
    pub machine: Arc<Backward>,
    pub codec: Arc<Codec>,
}

impl std::fmt::Debug for EmbeddedRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EmbeddedRule").field("rule", &self.rule).finish_non_exhaustive()
    }
}

impl EmbeddedRule {
    pub fn encode(&self, cell: &Cell) -> Option<State> {
        self.codec.encode(cell)
    }

    pub fn decode(&self, id: State) -> Option<Cell> {
        self.codec.decode(id)
    }

    pub fn encode_row(&self, row: &[Cell]) -> Result<Vec<State>, EmbedError> {
        row.iter().map(|c| self.encode(c).ok_or(EmbedError::Unencodable)).collect()
    }

    pub fn decode_row(&self, ids: &[State]) -> Result<Vec<Cell>, EmbedError> {
        ids.iter().map(|&s| self.decode(s).ok_or(EmbedError::AlphabetMismatch(s))).collect()
    }
}

impl GridView for EmbeddedRule {
    fn grid_state(&self, id: State) -> Option<GridState> {
        self.decode(id).map(|c| c.base)
    }
}

/// Builds the embedded rule for a reversible machine. The rule is evaluated
/// on demand: the alphabet is far too large for a table.
pub fn build_embedded_rule(tm: &ReversibleTM) -> Result<EmbeddedRule, EmbedError> {
    let machine = Arc::new(Backward::new(tm)?);
    let codec = Arc::new(Codec::new(&machine)?);
    let (m, c) = (machine.clone(), codec.clone());
    let killer = sparse_grid::KILLER;
    let rule = Rule::from_fn(codec.state_count(), 1, move |nb| {
        let g = grid();
        let (Some(l), Some(x), Some(r)) = (c.decode(nb[0]), c.decode(nb[1]), c.decode(nb[2])) else {
            return killer;
        };
        let base_ids = [nb[0], nb[1], nb[2]].map(|s| (s as u64 % c.base) as State);
        let base = g.alphabet.state(g.rule.apply_unchecked(&base_ids)).unwrap_or(GridState::Killer);
        let out = next_over(&m, &l, &x, &r, base);
        c.encode(&out).unwrap_or(killer)
    });
    Ok(EmbeddedRule { rule, tm: tm.clone(), machine, codec })
}
