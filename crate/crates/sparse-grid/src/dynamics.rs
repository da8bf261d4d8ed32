use crate::state::*;

/// Phase given to a +1/4 starter born from a -1/2 and -1/4 collision.
pub const R4_BIRTH_PHASE: u8 = 3;
/// Phase of the -1/4 starter when it is emitted.
pub const S4_BIRTH_PHASE: u8 = 3;

/// One step of the grid dynamics for the middle cell.
pub fn next(l: &GridState, c: &GridState, r: &GridState) -> GridState {
    use GridState::*;
    if matches!(l, Killer) || matches!(c, Killer) || matches!(r, Killer) {
        return Killer;
    }
    if !pair_ok(l, c) || !pair_ok(c, r) {
        return Killer;
    }
    let out = match c {
        Quiescent => from_quiescent(l, r),
        Line(x) => line_next(l, x, r),
        Interior(x) => interior_next(l, x, r),
        Starters(x) => starters_next(l, x, r),
        Killer => unreachable!(),
    };
    out.unwrap_or(Killer)
}

/// Diagonal entering the cell right of `l`. `c` is the receiving cell.
fn from_left(l: &GridState, c: &GridState) -> Option<Diag> {
    match l {
        GridState::Interior(i) => i.diag.filter(|d| d.dir == Dir::Sw),
        GridState::Line(x) => match x.right {
            Mark::Bounce(id) => Some(Diag { dir: Dir::Sw, id, last: c.counting() }),
            Mark::Start => Some(Diag { dir: Dir::Sw, id: Zig::A, last: false }),
            _ => None,
        },
        _ => None,
    }
}

fn from_right(r: &GridState, c: &GridState) -> Option<Diag> {
    match r {
        GridState::Interior(i) => i.diag.filter(|d| d.dir == Dir::Se).map(|d| {
            let crossing_last = matches!(c.diagonal(), Some(Diag { dir: Dir::Sw, last: true, .. }));
            Diag { last: d.last || crossing_last, ..d }
        }),
        GridState::Line(x) => match x.left {
            Mark::Bounce(id) => Some(Diag { dir: Dir::Se, id, last: false }),
            Mark::Start => Some(Diag { dir: Dir::Se, id: Zig::B, last: false }),
            _ => None,
        },
        _ => None,
    }
}

fn starts_counting(r: &GridState) -> bool {
    matches!(r, GridState::Line(x) if x.left == Mark::Start)
}

/// Counting signal that leaves `cell` to the left this step.
fn counting_leaves(cell: &GridState) -> bool {
    matches!(cell, GridState::Interior(i) if i.counting && matches!(i.diag, Some(Diag { dir: Dir::Sw, .. })))
}

fn from_quiescent(l: &GridState, r: &GridState) -> Option<GridState> {
    let c = GridState::Quiescent;
    let dl = from_left(l, &c);
    let dr = from_right(r, &c);
    let sl = starters_in_from_left(l);
    let sr = starters_in_from_right(r);
    let arrivals = dl.is_some() as u8 + dr.is_some() as u8 + (sl.is_some() || sr.is_some()) as u8;
    if arrivals > 1 {
        return None;
    }
    if let Some(d) = dl {
        let mut cell = match l {
            GridState::Interior(i) => Interior {
                parity: 1 - i.parity,
                a_left: i.a_left,
                b_left: i.b_left,
                cnt_left: i.cnt_left || i.counting,
                diag: None,
                counting: false,
            },
            _ => Interior { parity: 0, a_left: false, b_left: false, cnt_left: false, diag: None, counting: false },
        };
        cell.set_left(d.id, false);
        cell.diag = Some(d);
        return Some(GridState::Interior(cell));
    }
    if let Some(d) = dr {
        let mut cell = match r {
            GridState::Interior(i) => Interior {
                parity: 1 - i.parity,
                a_left: i.a_left,
                b_left: i.b_left,
                cnt_left: i.cnt_left,
                diag: None,
                counting: false,
            },
            _ => Interior {
                parity: 1,
                a_left: true,
                b_left: false,
                cnt_left: false,
                diag: None,
                counting: starts_counting(r),
            },
        };
        cell.set_left(d.id, false);
        cell.diag = Some(d);
        return Some(GridState::Interior(cell));
    }
    let mut s = Starters { parity: starter_parity(l, r)?, ..Starters::EMPTY };
    merge(&mut s, sl)?;
    merge(&mut s, sr)?;
    Some(if s.is_empty() { GridState::Quiescent } else { GridState::Starters(s) })
}

fn starter_parity(l: &GridState, r: &GridState) -> Option<u8> {
    match (l, r) {
        (_, GridState::Line(_)) => Some(1),
        (_, GridState::Starters(s)) => Some(1 - s.parity),
        (GridState::Starters(s), _) => Some(1 - s.parity),
        _ => Some(0),
    }
}

/// Signals entering from the left neighbour.
fn starters_in_from_left(l: &GridState) -> Option<Starters> {
    match l {
        GridState::Starters(s) if s.r4 == Some(3) && !collides(s) => {
            Some(Starters { r4: Some(0), ..Starters::EMPTY })
        }
        _ => None,
    }
}

fn collides(s: &Starters) -> bool {
    s.s3.is_some() && s.s4.is_some()
}

/// Signals entering from the right neighbour, including emission by a line.
fn starters_in_from_right(r: &GridState) -> Option<Starters> {
    match r {
        GridState::Starters(s) if !collides(s) => {
            let mut out = Starters::EMPTY;
            if s.s4 == Some(3) {
                out.s4 = Some(0);
            }
            if s.s3 == Some(2) {
                out.s3 = Some(0);
            }
            if s.s2 == Some(1) && s.s4.is_none() {
                out.s2 = Some(0);
            }
            (!out.is_empty()).then_some(out)
        }
        GridState::Line(x) => match x.stage {
            Stage::Fresh(4) => Some(Starters { s4: Some(S4_BIRTH_PHASE), ..Starters::EMPTY }),
            Stage::Launch1 => Some(Starters { s2: Some(0), ..Starters::EMPTY }),
            Stage::Launch2 => Some(Starters { s3: Some(0), ..Starters::EMPTY }),
            _ => None,
        },
        _ => None,
    }
}

fn merge(into: &mut Starters, add: Option<Starters>) -> Option<()> {
    let Some(a) = add else { return Some(()) };
    fn put(slot: &mut Option<u8>, v: Option<u8>) -> Option<()> {
        match (slot.is_some(), v) {
            (true, Some(_)) => None,
            (_, Some(p)) => {
                *slot = Some(p);
                Some(())
            }
            (_, None) => Some(()),
        }
    }
    put(&mut into.s4, a.s4)?;
    put(&mut into.s3, a.s3)?;
    put(&mut into.s2, a.s2)?;
    put(&mut into.r4, a.r4)
}

fn starters_next(l: &GridState, s: &Starters, r: &GridState) -> Option<GridState> {
    let sl = starters_in_from_left(l);
    let sr = starters_in_from_right(r);
    if collides(s) {
        if s.s2.is_some() || s.r4.is_some() || sl.is_some() || sr.is_some() {
            return None;
        }
        return Some(GridState::Line(Line {
            stage: Stage::Fresh(0),
            left: Mark::None,
            right: Mark::Start,
            counting: false,
        }));
    }
    let mut out = Starters { parity: s.parity, ..Starters::EMPTY };
    out.s4 = s.s4.filter(|&p| p < 3).map(|p| p + 1);
    out.s3 = s.s3.filter(|&p| p < 2).map(|p| p + 1);
    out.r4 = s.r4.filter(|&p| p < 3).map(|p| p + 1);
    if s.s4.is_some() && s.s2.is_some() {
        if s.r4.is_some() {
            return None;
        }
        out.r4 = Some(R4_BIRTH_PHASE);
    } else {
        out.s2 = s.s2.filter(|&p| p < 1).map(|p| p + 1);
    }
    merge(&mut out, sl)?;
    merge(&mut out, sr)?;
    Some(if out.is_empty() { GridState::Quiescent } else { GridState::Starters(out) })
}

fn line_next(l: &GridState, x: &Line, r: &GridState) -> Option<GridState> {
    let left_last = matches!(x.left, Mark::Last(_));
    let right_last = matches!(x.right, Mark::Last(_));
    if left_last || right_last {
        let left_ok = left_last || (x.left == Mark::None && !matches!(l, GridState::Interior(_)));
        let right_ok = right_last || (x.right == Mark::None && !matches!(r, GridState::Interior(_)));
        return (left_ok && right_ok).then_some(GridState::Quiescent);
    }
    let right = match r {
        GridState::Interior(i) => match i.diag {
            Some(Diag { dir: Dir::Se, id, last }) => {
                if last {
                    Mark::Last(id)
                } else {
                    Mark::Bounce(id)
                }
            }
            _ => Mark::None,
        },
        _ => Mark::None,
    };
    let left = match l {
        GridState::Interior(i) => match i.diag {
            Some(Diag { dir: Dir::Sw, id, last }) => {
                if last {
                    Mark::Last(id)
                } else {
                    Mark::Bounce(id)
                }
            }
            _ => Mark::None,
        },
        GridState::Starters(s) if s.r4 == Some(3) => Mark::Start,
        _ => Mark::None,
    };
    let corner = matches!(right, Mark::Bounce(_));
    let stage = match x.stage {
        Stage::Fresh(a) if corner => {
            if a <= 2 {
                Stage::Mature
            } else {
                Stage::Launch1
            }
        }
        Stage::Fresh(a) if a < 4 => Stage::Fresh(a + 1),
        Stage::Fresh(_) => Stage::Awaiting,
        Stage::Awaiting if corner => Stage::Launch1,
        Stage::Awaiting => Stage::Awaiting,
        Stage::Launch1 => Stage::Launch2,
        Stage::Launch2 | Stage::Mature => Stage::Mature,
    };
    let counting = x.counting || counting_leaves(r);
    Some(GridState::Line(Line { stage, left, right, counting }))
}

fn interior_next(l: &GridState, x: &Interior, r: &GridState) -> Option<GridState> {
    let c = GridState::Interior(*x);
    if let Some(d) = x.diag.filter(|d| d.last) {
        let other_left = x.left_of(d.id.other());
        let cleared = match d.dir {
            Dir::Sw => other_left,
            Dir::Se => !other_left,
        };
        if cleared {
            return Some(GridState::Quiescent);
        }
    }
    let dl = from_left(l, &c);
    let dr = from_right(r, &c);
    if dl.is_some() && dr.is_some() {
        return None;
    }
    if matches!(l, GridState::Line(y) if y.right == Mark::Start) || starts_counting(r) {
        return None;
    }
    let incoming = dl.or(dr);
    let mut out = *x;
    out.diag = incoming;
    for id in Zig::BOTH {
        let v = if incoming.is_some_and(|d| d.id == id) {
            false
        } else if let Some(d) = x.diag.filter(|d| d.id == id) {
            d.dir == Dir::Se
        } else {
            x.left_of(id)
        };
        out.set_left(id, v);
    }
    let leaves = counting_leaves(&c);
    let arrives = counting_leaves(r);
    out.counting = arrives || (x.counting && !leaves);
    out.cnt_left = !out.counting && (x.cnt_left || (x.counting && leaves));
    Some(GridState::Interior(out))
}

/// Starter combinations that occur in canonical evolutions.
pub fn starter_combo_ok(s: &Starters) -> bool {
    let key = (s.s4, s.s3, s.s2, s.r4);
    crate::alphabet::STARTER_COMBOS.contains(&key)
}
