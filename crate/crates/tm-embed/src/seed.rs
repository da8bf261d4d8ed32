use ca_core::{Boundary, Configuration};
use rtm::{run, Direction, ReversibleTM, Snapshot};
use sparse_grid::geometry::{line_x, width};
use sparse_grid::seed::{seed_states, MARGIN};
use sparse_grid::state::GridState;
use sparse_grid::{Layout, Zone};

use crate::cell::{Cell, Head, Leg, Payload, MAX_DORMANT};
use crate::rule::EmbeddedRule;
use crate::EmbedError;

/// What the seed encodes: the reference run up to `t_end`, frozen there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedPlan {
    pub columns: usize,
    /// Oracle padded with zeros to one bit per column.
    pub oracle: Vec<u8>,
    /// Forward snapshots `0..=t_end` of the reference run.
    pub reference: Vec<Snapshot>,
    pub t_end: usize,
    /// Computation sites the head passes asleep before `t_end`.
    pub dormant: u8,
}

impl SeedPlan {
    pub fn new(tm: &ReversibleTM, oracle: &[u8], columns: usize) -> Result<SeedPlan, EmbedError> {
        if columns == 0 {
            return Err(EmbedError::NoColumns);
        }
        if oracle.len() > columns {
            return Err(EmbedError::OracleTooLong { oracle: oracle.len(), columns });
        }
        let mut padded = oracle.to_vec();
        padded.resize(columns, 0);
        let trace = run(tm, &padded, &Snapshot::initial(tm, &[]), columns, Direction::Forward)
            .map_err(EmbedError::Machine)?;
        let last = columns - 1;
        let mut best = None;
        for (t, s) in trace.snapshots.iter().enumerate() {
            let reach = s.head + t;
            if reach > last {
                break;
            }
            if last - reach <= MAX_DORMANT as usize {
                best = Some((t, (last - reach) as u8));
            }
        }
        let (t_end, dormant) = best.ok_or(EmbedError::Unfit { columns })?;
        let mut reference = trace.snapshots;
        reference.truncate(t_end + 1);
        Ok(SeedPlan { columns, oracle: padded, reference, t_end, dormant })
    }

    /// Contents of tape cell `c` when it enters the diagram.
    pub fn payload(&self, c: usize) -> Payload {
        let t = (self.columns - c).min(self.t_end);
        Payload { oracle: self.oracle[c], work: self.reference[t].symbol(c) as u8 }
    }

    pub fn head_cell(&self) -> usize {
        self.reference[self.t_end].head
    }

    fn head(&self, leg: Leg) -> Head {
        Head { state: self.reference[self.t_end].state as u8, leg, dormant: Some(self.dormant) }
    }
}

/// Seed row as cells, with the cell index of its first entry. Tape cell 0
/// rides the first diagonal of the seeded column; every other cell arrives
/// as a feed from the right, timed to leave the outer line together with
/// diagonal `B`.
pub fn seed_cells(plan: &SeedPlan) -> (i64, Vec<Cell>) {
    let n = plan.columns;
    let (origin, states) = seed_states(n);
    let mut cells: Vec<Cell> = states.into_iter().map(Cell::plain).collect();
    let top = Layout { columns: n }.top_row();
    let outer = line_x(n);
    let arrival = |c: usize| top - 2 * (n - c) as i64 * width(n - 1);
    let right_end = if n > 1 { outer + arrival(n - 1) } else { outer };
    cells.resize((right_end + MARGIN - origin + 1) as usize, Cell::QUIESCENT);
    let at = |x: i64| (x - origin) as usize;
    let h = plan.head_cell();
    let first = &mut cells[at(outer - 1)];
    first.ext.a = Some(plan.payload(0));
    if h == 0 {
        first.ext.head = Some(plan.head(Leg::RideB { then_any: false }));
        cells[at(outer)].ext.zone = Zone::RightOfHead;
    }
    for c in 1..n {
        let feed = &mut cells[at(outer + arrival(c))];
        feed.ext.a = Some(plan.payload(c));
        if c == h {
            feed.ext.head = Some(plan.head(Leg::WaitB { then_any: false }));
        }
    }
    debug_assert!(cells.iter().all(|c| c.is_consistent()));
    debug_assert!(matches!(cells[at(outer)].base, GridState::Line(_)));
    (origin, cells)
}

/// Canonical grid seed carrying the machine frozen at the last time the
/// window can hold, with a dormant head that wakes up there.
pub fn embedded_seed(er: &EmbeddedRule, oracle: &[u8], columns: usize) -> Result<Configuration, EmbedError> {
    let plan = SeedPlan::new(&er.tm, oracle, columns)?;
    let (origin, cells) = seed_cells(&plan);
    Ok(Configuration::new(er.encode_row(&cells)?, Boundary::Quiescent(sparse_grid::QUIESCENT), origin))
}
