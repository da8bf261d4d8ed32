//! Cells of the embedding: a grid state plus the machine layer on top of it.
//!
//! Tape cells travel as payloads. On a line, `a` holds a payload rising to
//! the next computation site and `b` one waiting for the next departure of
//! diagonal `B` towards the left. On an interior cell `a` is a payload
//! riding a leftward diagonal. On a quiescent cell `a` is a feed: a payload
//! entering from the right of the outermost line.

use sparse_grid::state::{Diag, Dir, GridState};
use sparse_grid::Zone;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Payload {
    pub oracle: u8,
    pub work: u8,
}

/// Where a head is on its way between two computation sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Leg {
    /// On a line, passing one shifting site before the computation site.
    RiseSkip,
    /// On a line, up to the next computation site.
    Rise,
    /// On a line, waiting for diagonal `B` to leave on the left. With
    /// `then_any` a second hop follows the landing.
    WaitB { then_any: bool },
    RideB { then_any: bool },
    /// On a line, waiting for any diagonal to leave on the left.
    WaitAny,
    RideAny,
    /// No transition enters the state: the head stays where it is.
    Parked,
}

impl Leg {
    pub const ALL: [Leg; 8] = [
        Leg::RiseSkip,
        Leg::Rise,
        Leg::WaitB { then_any: false },
        Leg::WaitB { then_any: true },
        Leg::RideB { then_any: false },
        Leg::RideB { then_any: true },
        Leg::WaitAny,
        Leg::RideAny,
    ];

    pub fn rides(self) -> bool {
        matches!(self, Leg::RideB { .. } | Leg::RideAny)
    }
}

/// Largest countdown a dormant head can carry.
pub const MAX_DORMANT: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Head {
    pub state: u8,
    pub leg: Leg,
    /// Computation sites still to pass before the head wakes up. A dormant
    /// head follows the stay-put route and does not touch the tape.
    pub dormant: Option<u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ext {
    pub a: Option<Payload>,
    pub b: Option<Payload>,
    pub head: Option<Head>,
    pub zone: Zone,
    /// Line: the diagonal that just arrived on the right starts the boundary.
    /// Interior: low bit of the boundary stage.
    pub fa: bool,
    /// Line: the diagonal that just arrived on the left is the boundary.
    /// Interior: high bit of the boundary stage.
    pub fb: bool,
}

impl Ext {
    pub const EMPTY: Ext = Ext { a: None, b: None, head: None, zone: Zone::Plain, fa: false, fb: false };

    pub fn colored(zone: Zone) -> Ext {
        Ext { zone, ..Ext::EMPTY }
    }

    /// Boundary stage of an interior diagonal: 1 and 3 travel left, 2 right.
    pub fn stage(&self) -> u8 {
        self.fa as u8 | (self.fb as u8) << 1
    }

    pub fn set_stage(&mut self, s: u8) {
        self.fa = s & 1 == 1;
        self.fb = s & 2 == 2;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub base: GridState,
    pub ext: Ext,
}

impl Cell {
    pub const QUIESCENT: Cell = Cell { base: GridState::Quiescent, ext: Ext::EMPTY };
    pub const KILLER: Cell = Cell { base: GridState::Killer, ext: Ext::EMPTY };

    pub fn plain(base: GridState) -> Cell {
        let zone = if base.is_construction() && !matches!(base, GridState::Starters(_)) {
            Zone::LeftOfHead
        } else {
            Zone::Plain
        };
        Cell { base, ext: Ext::colored(zone) }
    }

    pub fn se(&self) -> bool {
        matches!(self.base.diagonal(), Some(Diag { dir: Dir::Se, .. }))
    }

    /// Payload-carrying signals in the cell.
    pub fn transports(&self) -> usize {
        self.ext.a.is_some() as usize + self.ext.b.is_some() as usize
    }

    /// Whether the extension layer fits the grid state underneath.
    pub fn is_consistent(&self) -> bool {
        let e = &self.ext;
        match self.base {
            GridState::Killer | GridState::Starters(_) => *e == Ext::EMPTY,
            GridState::Quiescent => {
                e.b.is_none()
                    && e.zone == Zone::Plain
                    && !e.fa
                    && !e.fb
                    && (e.head.is_none() || e.a.is_some())
                    && e.head.is_none_or(|h| h.dormant.is_some() && h.leg == Leg::WaitB { then_any: false })
            }
            GridState::Line(_) => e.zone != Zone::Plain && e.head.is_none_or(|h| !h.leg.rides()),
            GridState::Interior(i) => {
                let se = self.se();
                let stage_ok = match e.stage() {
                    0 => true,
                    2 => matches!(i.diag, Some(Diag { dir: Dir::Sw, .. })),
                    _ => se,
                };
                e.zone != Zone::Plain
                    && e.b.is_none()
                    && (se || (e.a.is_none() && e.head.is_none()))
                    && e.head.is_none_or(|h| h.leg.rides())
                    && stage_ok
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sparse_grid::state::Interior;

    fn interior(diag: Option<Diag>) -> GridState {
        GridState::Interior(Interior { parity: 0, a_left: false, b_left: false, cnt_left: false, diag, counting: false })
    }

    #[test]
    fn plain_cells_are_consistent() {
        assert!(Cell::QUIESCENT.is_consistent());
        assert!(Cell::KILLER.is_consistent());
        assert!(Cell::plain(interior(None)).is_consistent());
    }

    #[test]
    fn payloads_only_ride_leftward_diagonals() {
        let p = Some(Payload { oracle: 1, work: 0 });
        let sw = Diag { dir: Dir::Sw, id: sparse_grid::state::Zig::A, last: false };
        let se = Diag { dir: Dir::Se, ..sw };
        let mut c = Cell::plain(interior(Some(sw)));
        c.ext.a = p;
        assert!(!c.is_consistent());
        c.base = interior(Some(se));
        assert!(c.is_consistent());
        c.ext.b = p;
        assert!(!c.is_consistent());
    }

    #[test]
    fn stage_bits() {
        let mut e = Ext::EMPTY;
        for s in 0..4 {
            e.set_stage(s);
            assert_eq!(e.stage(), s);
        }
    }
}
