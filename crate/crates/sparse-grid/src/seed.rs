use crate::geometry::line_x;
use crate::state::*;

/// Cells left of `X_0` and right of the last line kept in the window.
pub const MARGIN: i64 = 2;

/// The row just after the creation of column `columns - 1`, as states, and
/// the cell index of its first entry.
pub fn seed_states(columns: usize) -> (i64, Vec<GridState>) {
    assert!(columns > 0, "at least one column");
    let n = columns;
    let (left, right) = (line_x(n - 1), line_x(n));
    let origin = -MARGIN;
    let mut cells = vec![GridState::Quiescent; (right + MARGIN - origin + 1) as usize];
    let mut put = |x: i64, s: GridState| cells[(x - origin) as usize] = s;
    put(left, GridState::Line(Line { stage: Stage::Fresh(1), left: Mark::None, right: Mark::None, counting: false }));
    put(
        left + 1,
        GridState::Interior(Interior {
            parity: 0,
            a_left: false,
            b_left: false,
            cnt_left: false,
            diag: Some(Diag { dir: Dir::Sw, id: Zig::A, last: false }),
            counting: false,
        }),
    );
    put(
        right - 1,
        GridState::Interior(Interior {
            parity: 1,
            a_left: true,
            b_left: false,
            cnt_left: false,
            diag: Some(Diag { dir: Dir::Se, id: Zig::B, last: false }),
            counting: true,
        }),
    );
    put(right, GridState::Line(Line { stage: Stage::Mature, left: Mark::None, right: Mark::None, counting: false }));
    (origin, cells)
}

/// Steps a row of states with quiescent cells outside the window.
pub fn step_states(row: &[GridState]) -> Vec<GridState> {
    let q = GridState::Quiescent;
    (0..row.len())
        .map(|x| {
            let l = if x == 0 { &q } else { &row[x - 1] };
            let r = row.get(x + 1).unwrap_or(&q);
            crate::dynamics::next(l, &row[x], r)
        })
        .collect()
}
