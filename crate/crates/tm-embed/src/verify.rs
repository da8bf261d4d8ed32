use ca_core::{Configuration, Diagram, Site};
use sparse_grid::state::{GridState, Mark};
use sparse_grid::{LemmaReport, Violation, Zone};

use crate::cell::Cell;
use crate::rule::EmbeddedRule;
use crate::trace::{column_of_line, square_index};
use crate::EmbedError;

fn flag(report: &mut LemmaReport, x: i64, t: i64, code: &'static str, message: String) {
    report.violations.push(Violation { site: Site::new(x, t), code, message });
}

fn rank(z: Zone) -> Option<u8> {
    match z {
        Zone::LeftOfHead => Some(0),
        Zone::RightOfHead => Some(1),
        Zone::Unreachable => Some(2),
        Zone::Plain => None,
    }
}

fn zone_order(t: i64, origin: i64, row: &[Cell], report: &mut LemmaReport) {
    let mut top = 0;
    for (k, c) in row.iter().enumerate() {
        let Some(r) = rank(c.ext.zone) else { continue };
        if r < top {
            flag(report, origin + k as i64, t, "zone-order", format!("{:?} right of a later zone", c.ext.zone));
        }
        top = top.max(r);
    }
}

fn heads(t: i64, origin: i64, row: &[Cell], report: &mut LemmaReport) {
    let found: Vec<usize> = (0..row.len()).filter(|&k| row[k].ext.head.is_some()).collect();
    if found.len() > 1 {
        flag(report, origin + found[1] as i64, t, "head-count", format!("{} heads in one row", found.len()));
    }
    if found.is_empty() {
        if let Some(k) = row.iter().position(|c| c.ext.zone == Zone::RightOfHead) {
            flag(report, origin + k as i64, t, "head-count", "right-of-head zone without a head".into());
        }
    }
}

/// At most one head per row, and exactly one once a right-of-head zone
/// exists; zone order is checked as well.
pub fn verify_head_unique(er: &EmbeddedRule, config: &Configuration) -> Result<LemmaReport, EmbedError> {
    let row = er.decode_row(&config.cells)?;
    let mut report = LemmaReport { checked_cells: row.len(), ..Default::default() };
    zone_order(0, config.origin, &row, &mut report);
    heads(0, config.origin, &row, &mut report);
    Ok(report)
}

fn boundary_edge(t: i64, origin: i64, row: &[Cell], report: &mut LemmaReport) {
    let Some(u) = row.iter().position(|c| c.ext.zone == Zone::Unreachable) else { return };
    if u == 0 || !matches!(row[u].base, GridState::Interior(_)) {
        return;
    }
    let left = &row[u - 1];
    let painter = left.se() && left.ext.stage() == 3;
    if left.base.is_construction() && !painter {
        flag(report, origin + u as i64 - 1, t, "boundary", "unreachable zone edge without its signal".into());
    }
}

fn boundary_sites(t: i64, prev: &(i64, Vec<Cell>), cur: &(i64, Vec<Cell>), report: &mut LemmaReport) {
    let (origin, row) = (cur.0, &cur.1);
    for (k, c) in row.iter().enumerate() {
        let GridState::Line(l) = c.base else { continue };
        if c.ext.zone != Zone::Unreachable || matches!(l.right, Mark::None | Mark::Start) {
            continue;
        }
        let x = origin + k as i64;
        let before = usize::try_from(x - prev.0).ok().and_then(|p| prev.1.get(p));
        if before.is_none_or(|b| b.ext.zone == Zone::Unreachable) {
            continue;
        }
        if let (Some(i), Some(j)) = (column_of_line(x), square_index(row, k)) {
            if j > i {
                flag(report, x, t, "boundary-site", format!("boundary reaches column {i} at square {j}"));
            }
        }
    }
}

/// Zone order in every row, the unreachable-zone edge carried by its
/// signal, and the squares where the edge lands on a line.
pub fn verify_zones(er: &EmbeddedRule, diagram: &Diagram) -> Result<LemmaReport, EmbedError> {
    let rows: Vec<(i64, Vec<Cell>)> =
        diagram.rows.iter().map(|r| Ok((r.origin, er.decode_row(&r.cells)?))).collect::<Result<_, EmbedError>>()?;
    Ok(verify_zone_rows(&rows))
}

pub fn verify_zone_rows(rows: &[(i64, Vec<Cell>)]) -> LemmaReport {
    let mut report = LemmaReport::default();
    for (t, cur) in rows.iter().enumerate() {
        let t = t as i64;
        report.checked_cells += cur.1.len();
        zone_order(t, cur.0, &cur.1, &mut report);
        boundary_edge(t, cur.0, &cur.1, &mut report);
        if t > 0 {
            boundary_sites(t, &rows[t as usize - 1], cur, &mut report);
        }
    }
    report
}
