use ca_core::{evolve, step, Boundary, Configuration, Diagram};
use sparse_grid::geometry::{line_x, squares, Layout};
use sparse_grid::state::*;
use sparse_grid::verify::{count_squares, is_grid_orphan, measured_corners, measured_right_corners};
use sparse_grid::{canonical_seed, classify_config, grid, verify_distances, verify_squares, Classification, QUIESCENT};

fn canonical(columns: usize) -> Diagram {
    let steps = Layout { columns }.top_row() as usize + 3;
    evolve(&grid().rule, &canonical_seed(columns), steps).unwrap()
}

fn row_of(states: &[GridState]) -> Configuration {
    Configuration::new(grid().encode(states), Boundary::Quiescent(QUIESCENT), 0)
}

fn mature() -> GridState {
    GridState::Line(Line { stage: Stage::Mature, left: Mark::None, right: Mark::None, counting: false })
}

#[test]
fn canonical_diagrams_are_clean() {
    for columns in 1..=4 {
        let d = canonical(columns);
        let r = verify_squares(&d).unwrap();
        assert!(r.is_clean(), "{columns}: {:?}", &r.violations[..r.violations.len().min(3)]);
        for row in &d.rows {
            assert!(verify_distances(row).unwrap().is_clean());
        }
    }
}

#[test]
fn column_square_counts() {
    let d = canonical(4);
    for i in 0..4 {
        assert_eq!(count_squares(&grid().alphabet, &d, line_x(i)).unwrap(), squares(i), "column {i}");
    }
}

#[test]
fn corners_follow_the_layout() {
    let columns = 4;
    let lay = Layout { columns };
    let d = canonical(columns);
    for i in 0..columns {
        let mut want: Vec<i64> = (0..=squares(i)).map(|j| lay.corner_sites(i, j).0.time).filter(|&t| t >= 0).collect();
        want.sort();
        assert_eq!(measured_corners(&grid().alphabet, &d, line_x(i)).unwrap(), want, "left {i}");
        // the right line also meets every other column it bounds
        let right = measured_right_corners(&grid().alphabet, &d, line_x(i + 1)).unwrap();
        assert_eq!(right, want, "right {i}");
    }
}

#[test]
fn lines_vanish_after_the_top() {
    let d = canonical(3);
    let top = Layout { columns: 3 }.top_row() as usize;
    assert!(d.rows[top].cells.iter().any(|&s| grid().alphabet.state(s).unwrap().vertical()));
    assert!(d.rows[top + 1].cells.iter().all(|&s| s == QUIESCENT));
}

#[test]
fn flipped_parity_is_reported_and_fatal() {
    let d = canonical(3);
    let t = 30;
    let mut row = d.rows[t].clone();
    let x = row
        .cells
        .iter()
        .position(|&s| matches!(grid().alphabet.state(s), Some(GridState::Interior(i)) if i.diag.is_none()))
        .unwrap();
    let GridState::Interior(mut cell) = grid().alphabet.state(row.cells[x]).unwrap() else { unreachable!() };
    cell.parity ^= 1;
    row.cells[x] = grid().alphabet.id(&GridState::Interior(cell)).unwrap();
    let r = verify_squares(&Diagram { rows: vec![row.clone()] }).unwrap();
    assert_eq!(r.violations.len(), 1, "{:?}", r.violations);
    assert_eq!(r.violations[0].code, "parity");
    assert_eq!(r.violations[0].site.cell, row.origin + x as i64);
    let next = step(&grid().rule, &row).unwrap();
    assert!(next.cells.contains(&sparse_grid::KILLER));
}

#[test]
fn quiescent_diagram_is_clean() {
    let q = Configuration::new(vec![QUIESCENT; 12], Boundary::Quiescent(QUIESCENT), 0);
    let d = evolve(&grid().rule, &q, 3).unwrap();
    assert!(verify_squares(&d).unwrap().is_clean());
    assert_eq!(classify_config(&q).unwrap(), Classification::FiniteLines(0));
}

#[test]
fn distances() {
    let q = GridState::Quiescent;
    let mut five_five = vec![q; 12];
    for x in [0, 5, 10] {
        five_five[x] = mature();
    }
    assert_eq!(verify_distances(&row_of(&five_five)).unwrap().violations.len(), 1);
    let mut two = vec![q; 8];
    two[1] = mature();
    two[6] = mature();
    assert!(verify_distances(&row_of(&two)).unwrap().is_clean());
}

#[test]
fn classification() {
    let d = canonical(3);
    let full = &d.rows[Layout { columns: 3 }.top_row() as usize - 2];
    assert_eq!(classify_config(full).unwrap(), Classification::CanonicalGridRow);
    let early = &d.rows[d.rows.len() / 3];
    assert_ne!(classify_config(early).unwrap(), Classification::Rejected { at: 0 });

    let q = GridState::Quiescent;
    let bad = GridState::Interior(Interior { parity: 1, a_left: false, b_left: false, cnt_left: false, diag: None, counting: false });
    let row = row_of(&[q, mature(), bad, q, q, q, mature(), q]);
    assert!(is_grid_orphan(&row.cells[1..3]));
    assert_eq!(classify_config(&row).unwrap(), Classification::Rejected { at: 1 });
}
