use std::fmt;
use std::sync::OnceLock;

use ca_core::{Configuration, Diagram, Site, State};
use preimage::InverseIndex;

use crate::alphabet::KILLER;
use crate::rule::{grid, GridView};
use crate::state::*;
use crate::GridError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub site: Site,
    pub code: &'static str,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} x={} {}: {}", self.site.time, self.site.cell, self.code, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub violations: Vec<Violation>,
    pub checked_cells: usize,
}

impl LemmaReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: LemmaReport) {
        self.violations.extend(other.violations);
        self.checked_cells += other.checked_cells;
    }

    fn push(&mut self, x: i64, t: i64, code: &'static str, message: impl Into<String>) {
        self.violations.push(Violation { site: Site::new(x, t), code, message: message.into() });
    }
}

fn decode_row(view: &dyn GridView, config: &Configuration) -> Result<Vec<GridState>, GridError> {
    config.cells.iter().map(|&s| view.grid_state(s).ok_or(GridError::AlphabetMismatch(s))).collect()
}

fn lines_of(row: &[GridState]) -> Vec<usize> {
    row.iter().enumerate().filter(|(_, s)| s.vertical()).map(|(i, _)| i).collect()
}

/// Columns of squares: each segment between consecutive lines must hold a
/// consistent interior.
pub fn verify_squares(diagram: &Diagram) -> Result<LemmaReport, GridError> {
    verify_squares_with(&grid().alphabet, diagram)
}

pub fn verify_squares_with(view: &dyn GridView, diagram: &Diagram) -> Result<LemmaReport, GridError> {
    let mut report = LemmaReport::default();
    for (t, config) in diagram.rows.iter().enumerate() {
        let row = decode_row(view, config)?;
        check_row(&row, config.origin, t as i64, &mut report);
    }
    Ok(report)
}

fn check_row(row: &[GridState], origin: i64, t: i64, report: &mut LemmaReport) {
    report.checked_cells += row.len();
    let x_of = |i: usize| origin + i as i64;
    for (i, s) in row.iter().enumerate() {
        if *s == GridState::Killer {
            report.push(x_of(i), t, "killer", "killer cell");
        }
    }
    let lines = lines_of(row);
    let outside = |i: usize| lines.first().is_none_or(|&a| i < a) || lines.last().is_none_or(|&b| i > b);
    for (i, s) in row.iter().enumerate() {
        if matches!(s, GridState::Interior(_)) && outside(i) {
            report.push(x_of(i), t, "stray-interior", "interior cell outside any column");
        }
    }
    for w in lines.windows(2) {
        check_segment(row, w[0], w[1], origin, t, report);
    }
}

fn check_segment(row: &[GridState], a: usize, b: usize, origin: i64, t: i64, report: &mut LemmaReport) {
    let x_of = |i: usize| origin + i as i64;
    if !(b - a - 1).is_multiple_of(2) {
        report.push(x_of(a), t, "odd-width", format!("{} interior cells", b - a - 1));
    }
    // parity is reported per cell; adjacency checks below see corrected parities
    let mut fixed: Vec<GridState> = row[a..=b].to_vec();
    for (k, s) in fixed.iter_mut().enumerate().take(b - a).skip(1) {
        match s {
            GridState::Interior(i) => {
                let want = ((k - 1) % 2) as u8;
                if i.parity != want {
                    report.push(x_of(a + k), t, "parity", format!("parity {} where {want} is required", i.parity));
                    i.parity = want;
                }
            }
            GridState::Starters(_) => report.push(x_of(a + k), t, "stray-signal", "starter inside a column"),
            _ => {}
        }
    }
    for k in 0..fixed.len() - 1 {
        let (p, q) = (&fixed[k], &fixed[k + 1]);
        if matches!(p, GridState::Starters(_)) || matches!(q, GridState::Starters(_)) {
            continue;
        }
        if !pair_ok(p, q) {
            report.push(x_of(a + k + 1), t, "colors", format!("{p:?} cannot precede {q:?}"));
        }
    }
    let interior = &fixed[1..fixed.len() - 1];
    if interior.iter().all(|s| *s == GridState::Quiescent) {
        return;
    }
    let (GridState::Line(left), GridState::Line(right)) = (fixed[0], fixed[fixed.len() - 1]) else { unreachable!() };
    let mut sw = matches!(left.right, Mark::Bounce(_) | Mark::Start) as usize;
    let mut se = matches!(right.left, Mark::Bounce(_) | Mark::Start) as usize;
    let mut counting = left.counting as usize;
    for s in interior {
        if let GridState::Interior(i) = s {
            match i.diag {
                Some(Diag { dir: Dir::Sw, .. }) => sw += 1,
                Some(Diag { dir: Dir::Se, .. }) => se += 1,
                None => {}
            }
            counting += i.counting as usize;
        }
    }
    let last_rows = matches!(left.right, Mark::Last(_)) || matches!(right.left, Mark::Last(_));
    if !last_rows && (sw != 1 || se != 1) {
        report.push(x_of(a), t, "diagonal-count", format!("{sw} rightward and {se} leftward diagonals"));
    }
    if counting != 1 {
        report.push(x_of(a), t, "counting-count", format!("{counting} counting signals"));
    }
}

/// Lines at consecutive gaps `k1`, `k2` need `k2 = k1 + 2`.
pub fn verify_distances(config: &Configuration) -> Result<LemmaReport, GridError> {
    verify_distances_with(&grid().alphabet, config)
}

pub fn verify_distances_with(view: &dyn GridView, config: &Configuration) -> Result<LemmaReport, GridError> {
    let row = decode_row(view, config)?;
    let lines = lines_of(&row);
    let mut report = LemmaReport { violations: Vec::new(), checked_cells: row.len() };
    for w in lines.windows(3) {
        let (k1, k2) = (w[1] - w[0], w[2] - w[1]);
        if k2 != k1 + 2 {
            report.push(config.origin + w[1] as i64, 0, "distance", format!("gaps {k1} then {k2}"));
        }
    }
    Ok(report)
}

/// Rows at which the line at cell `x` carries a diagonal of the column on
/// its right (top-left corners of that column).
pub fn measured_corners(view: &dyn GridView, diagram: &Diagram, x: i64) -> Result<Vec<i64>, GridError> {
    line_events(view, diagram, x, |l| l.right)
}

/// Same for the column on the left of the line (top-right corners).
pub fn measured_right_corners(view: &dyn GridView, diagram: &Diagram, x: i64) -> Result<Vec<i64>, GridError> {
    line_events(view, diagram, x, |l| l.left)
}

fn line_events(view: &dyn GridView, diagram: &Diagram, x: i64, side: fn(&Line) -> Mark) -> Result<Vec<i64>, GridError> {
    let mut rows = Vec::new();
    for (t, config) in diagram.rows.iter().enumerate() {
        let s = config.get(x);
        let g = view.grid_state(s).ok_or(GridError::AlphabetMismatch(s))?;
        if let GridState::Line(l) = g {
            if side(&l) != Mark::None {
                rows.push(t as i64);
            }
        }
    }
    Ok(rows)
}

/// Squares of the column whose left line sits at cell `x`: arrivals on that
/// line over the whole diagram.
pub fn count_squares(view: &dyn GridView, diagram: &Diagram, x: i64) -> Result<usize, GridError> {
    let mut n = 0;
    for config in &diagram.rows {
        let s = config.get(x);
        if let Some(GridState::Line(l)) = view.grid_state(s) {
            n += matches!(l.right, Mark::Bounce(_) | Mark::Last(_)) as usize;
        }
    }
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Number of lines in the window.
    FiniteLines(usize),
    CanonicalGridRow,
    RightTailOfGrid,
    /// The two cells starting at this index have no preimage.
    Rejected { at: i64 },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::FiniteLines(n) => write!(f, "finite-lines ({n})"),
            Classification::CanonicalGridRow => write!(f, "canonical-grid-row"),
            Classification::RightTailOfGrid => write!(f, "right-tail-of-grid"),
            Classification::Rejected { at } => write!(f, "rejected (orphan at {at})"),
        }
    }
}

fn grid_index() -> &'static InverseIndex {
    static INDEX: OnceLock<InverseIndex> = OnceLock::new();
    INDEX.get_or_init(|| {
        InverseIndex::build_filtered(&grid().rule, |y| y != KILLER).expect("grid table fits the index cap")
    })
}

/// Word over the grid rule without killer cells that has no preimage.
pub fn is_grid_orphan(w: &[State]) -> bool {
    !w.contains(&KILLER) && grid_index().count_preimages(w) == 0
}

/// Places the window in the trichotomy of line configurations, unless some
/// adjacent pair is already an orphan.
pub fn classify_config(config: &Configuration) -> Result<Classification, GridError> {
    let g = grid();
    let row = decode_row(&g.alphabet, config)?;
    for (i, w) in config.cells.windows(2).enumerate() {
        if !pair_ok(&row[i], &row[i + 1]) && is_grid_orphan(w) {
            return Ok(Classification::Rejected { at: config.origin + i as i64 });
        }
    }
    let lines = lines_of(&row);
    let gaps: Vec<usize> = lines.windows(2).map(|w| w[1] - w[0]).collect();
    let progression = gaps.windows(2).all(|w| w[1] == w[0] + 2);
    Ok(match gaps.first() {
        Some(3) if progression => Classification::CanonicalGridRow,
        Some(_) if progression && gaps.len() >= 2 => Classification::RightTailOfGrid,
        _ => Classification::FiniteLines(lines.len()),
    })
}
