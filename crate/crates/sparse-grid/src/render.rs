//! Text and image exports of grid diagrams.
//!
//! Colour map used by [`grid_color`]:
//!
//! | state                      | RGB           |
//! |----------------------------|---------------|
//! | quiescent                  | 255 255 255   |
//! | killer                     | 220 20 20     |
//! | vertical line              | 0 0 0         |
//! | rightward diagonal         | 30 80 220     |
//! | leftward diagonal          | 20 160 60     |
//! | counting signal            | 240 140 0     |
//! | interior, parity 0 / 1     | 225 225 225 / 200 200 200 |
//! | starter signals            | 150 60 190    |

use std::io::{self, Write};

use ca_core::{Boundary, Diagram, State};

use crate::state::*;

pub fn grid_color(s: &GridState) -> [u8; 3] {
    match s {
        GridState::Quiescent => [255, 255, 255],
        GridState::Killer => [220, 20, 20],
        GridState::Line(_) => [0, 0, 0],
        GridState::Interior(i) => match i.diag {
            Some(Diag { dir: Dir::Sw, .. }) => [30, 80, 220],
            Some(Diag { dir: Dir::Se, .. }) => [20, 160, 60],
            None if i.counting => [240, 140, 0],
            None if i.parity == 0 => [225, 225, 225],
            None => [200, 200, 200],
        },
        GridState::Starters(_) => [150, 60, 190],
    }
}

fn extent(d: &Diagram) -> (i64, i64) {
    let lo = d.rows.iter().map(|r| r.origin).min().unwrap_or(0);
    let hi = d.rows.iter().map(|r| r.end()).max().unwrap_or(0);
    (lo, hi)
}

fn cell(row: &ca_core::Configuration, x: i64) -> State {
    if x >= row.origin && x < row.end() {
        return row.get(x);
    }
    match row.boundary {
        Boundary::Quiescent(q) => q,
        Boundary::Cyclic => row.get(x),
    }
}

/// Plain PPM (P3), one pixel per cell and one row per time step.
pub fn write_ppm<W: Write>(d: &Diagram, color: impl Fn(State) -> [u8; 3], out: &mut W) -> io::Result<()> {
    let (lo, hi) = extent(d);
    writeln!(out, "P3\n{} {}\n255", hi - lo, d.rows.len())?;
    for row in &d.rows {
        let px: Vec<String> = (lo..hi)
            .map(|x| {
                let [r, g, b] = color(cell(row, x));
                format!("{r} {g} {b}")
            })
            .collect();
        writeln!(out, "{}", px.join(" "))?;
    }
    Ok(())
}

/// State ids, comma separated, one line per time step over the common extent.
pub fn write_csv<W: Write>(d: &Diagram, out: &mut W) -> io::Result<()> {
    let (lo, hi) = extent(d);
    for row in &d.rows {
        let ids: Vec<String> = (lo..hi).map(|x| cell(row, x).to_string()).collect();
        writeln!(out, "{}", ids.join(","))?;
    }
    Ok(())
}

/// Allowed adjacent pairs as `left right` id lines.
pub fn write_whitelist<W: Write>(out: &mut W) -> io::Result<()> {
    let a = &crate::grid().alphabet;
    for (i, x) in a.states().iter().enumerate() {
        for (j, y) in a.states().iter().enumerate() {
            if *x != GridState::Killer && *y != GridState::Killer && pair_ok(x, y) {
                writeln!(out, "{i} {j}")?;
            }
        }
    }
    Ok(())
}
