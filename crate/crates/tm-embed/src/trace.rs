use std::collections::BTreeMap;
use std::fmt::Write as _;

use ca_core::Diagram;
use rtm::{ReversibleTM, Snapshot};
use sparse_grid::state::{GridState, Mark, Zig};

use crate::cell::{Cell, Payload};
use crate::rule::EmbeddedRule;
use crate::EmbedError;

/// Machine configuration read at the computation sites of one machine time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub t: usize,
    /// Lattice column of the head's computation site.
    pub column: usize,
    /// Tape cell under the head.
    pub head: usize,
    pub state: usize,
    /// Cells `0..` as far as the diagram shows them at this time.
    pub tape: Vec<Payload>,
}

/// Entries for machine times `0, 1, ...` without gaps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TmTrace {
    pub entries: Vec<TraceEntry>,
}

/// Column index of a line at `x`, if `x` is on the lattice.
pub fn column_of_line(x: i64) -> Option<usize> {
    if x < 0 {
        return None;
    }
    let i = ((x + 1) as f64).sqrt().round() as i64 - 1;
    (i >= 0 && i * (i + 2) == x).then_some(i as usize)
}

/// Distance from the line at `idx` to the counting signal of the column on
/// its right, which is the index of the square whose top-left corner the
/// line is at.
pub fn square_index(row: &[Cell], idx: usize) -> Option<usize> {
    if row[idx].base.counting() {
        return Some(0);
    }
    for (k, cell) in row.iter().enumerate().skip(idx + 1) {
        match cell.base {
            GridState::Interior(i) if i.counting => return Some(k - idx),
            GridState::Interior(_) => {}
            _ => return None,
        }
    }
    None
}

/// Whether the line cell is a computation site this row.
pub fn at_computation_site(cell: &Cell) -> bool {
    matches!(cell.base, GridState::Line(l) if matches!(l.right, Mark::Bounce(Zig::A) | Mark::Last(Zig::A)))
}

type Rows<'a> = &'a [(i64, Vec<Cell>)];

/// Reads the trace from decoded rows, each with the cell index of its first
/// entry.
pub fn extract_from_cells(rows: Rows) -> Result<TmTrace, EmbedError> {
    let mut tape: BTreeMap<usize, BTreeMap<usize, Payload>> = BTreeMap::new();
    let mut heads: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for (time, (origin, row)) in rows.iter().enumerate() {
        let fail = |idx: usize, msg: &str| EmbedError::Decode {
            time: time as i64,
            cell: origin + idx as i64,
            msg: msg.to_string(),
        };
        for (idx, cell) in row.iter().enumerate() {
            if !at_computation_site(cell) {
                continue;
            }
            let i = column_of_line(origin + idx as i64).ok_or_else(|| fail(idx, "line off the lattice"))?;
            let j = square_index(row, idx).ok_or_else(|| fail(idx, "no counting signal"))?;
            if j % 2 == 1 || j / 2 > i {
                return Err(fail(idx, "computation site at an odd or negative cell"));
            }
            let (t, c) = (j / 2, i - j / 2);
            let p = cell.ext.b.ok_or_else(|| fail(idx, "computation site without tape cell"))?;
            if tape.entry(t).or_default().insert(c, p).is_some() {
                return Err(fail(idx, "tape cell read twice"));
            }
            if let Some(h) = cell.ext.head.filter(|h| h.dormant.is_none()) {
                if heads.insert(t, (i, c, h.state as usize)).is_some() {
                    return Err(fail(idx, "two heads at one time"));
                }
            }
        }
    }
    let mut entries = Vec::new();
    for t in 0.. {
        let Some(&(column, head, state)) = heads.get(&t) else { break };
        let tape = tape.get(&t).map(|m| (0..).map_while(|k| m.get(&k).copied()).collect()).unwrap_or_default();
        entries.push(TraceEntry { t, column, head, state, tape });
    }
    Ok(TmTrace { entries })
}

pub fn extract_tm_trace(er: &EmbeddedRule, diagram: &Diagram) -> Result<TmTrace, EmbedError> {
    let rows: Vec<(i64, Vec<Cell>)> =
        diagram.rows.iter().map(|r| Ok((r.origin, er.decode_row(&r.cells)?))).collect::<Result<_, EmbedError>>()?;
    extract_from_cells(&rows)
}

impl TmTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// First time at which the trace disagrees with `snapshots` (indexed by
    /// time) on state, head or any visible work cell.
    pub fn first_mismatch(&self, snapshots: &[Snapshot]) -> Option<usize> {
        self.entries.iter().find_map(|e| {
            let s = snapshots.get(e.t)?;
            let same = s.state == e.state
                && s.head == e.head
                && e.tape.iter().enumerate().all(|(c, p)| s.symbol(c) == p.work as usize);
            (!same).then_some(e.t)
        })
    }

    /// One line per time: `t,i,state,tape` with tape cells as `work/oracle`.
    pub fn to_csv(&self, tm: &ReversibleTM) -> String {
        let mut out = String::from("t,i,state,tape\n");
        for e in &self.entries {
            let tape: Vec<String> =
                e.tape.iter().map(|p| format!("{}/{}", tm.work_symbols[p.work as usize], p.oracle)).collect();
            let _ = writeln!(out, "{},{},{},{}", e.t, e.column, tm.state_names[e.state], tape.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_lines() {
        let found: Vec<usize> = (-3..40).filter_map(column_of_line).collect();
        assert_eq!(found, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(column_of_line(24), Some(4));
        assert_eq!(column_of_line(25), None);
    }

    #[test]
    fn empty_rows_give_an_empty_trace() {
        assert!(extract_from_cells(&[]).unwrap().is_empty());
        assert!(extract_from_cells(&[(0, vec![Cell::QUIESCENT; 4])]).unwrap().is_empty());
    }
}
