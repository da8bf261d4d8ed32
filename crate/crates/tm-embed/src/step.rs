use rtm::Move;
use sparse_grid::dynamics;
use sparse_grid::state::{Dir, GridState, Interior, Line, Mark, Zig};
use sparse_grid::Zone;

use crate::cell::{Cell, Ext, Head, Leg, Payload};
use crate::machine::Backward;

/// One step of the embedding for the middle cell.
pub fn next(m: &Backward, l: &Cell, c: &Cell, r: &Cell) -> Cell {
    let base = dynamics::next(&l.base, &c.base, &r.base);
    next_over(m, l, c, r, base)
}

/// Same as [`next`] with the grid layer already computed.
pub fn next_over(m: &Backward, l: &Cell, c: &Cell, r: &Cell, base: GridState) -> Cell {
    if ![l, c, r].iter().all(|x| x.is_consistent()) {
        return Cell::KILLER;
    }
    let out = match base {
        GridState::Killer => None,
        GridState::Quiescent => Some(quiescent_next(r)),
        GridState::Starters(_) => feed(r).is_none().then_some(Cell { base, ext: Ext::EMPTY }),
        GridState::Line(x) => line_next(m, l, c, r, x),
        GridState::Interior(x) => interior_next(l, c, r, x),
    };
    out.unwrap_or(Cell::KILLER)
}

fn feed(cell: &Cell) -> Option<(Payload, Option<Head>)> {
    match cell.base {
        GridState::Quiescent => cell.ext.a.map(|p| (p, cell.ext.head)),
        _ => None,
    }
}

fn quiescent_next(r: &Cell) -> Cell {
    match feed(r) {
        Some((p, head)) => Cell { base: GridState::Quiescent, ext: Ext { a: Some(p), head, ..Ext::EMPTY } },
        None => Cell::QUIESCENT,
    }
}

/// Leg a head takes after its state was entered with the given move.
pub fn route(m: &Backward, state: u8) -> Leg {
    match m.move_into(state) {
        Some(Move::L) => Leg::RiseSkip,
        Some(Move::S) => Leg::WaitB { then_any: false },
        Some(Move::R) => Leg::WaitB { then_any: true },
        None => Leg::Parked,
    }
}

/// A head reaching a computation site whose tape cell is `cell`: one
/// backward step, or one tick of a dormant head.
fn arrive(m: &Backward, h: Head, cell: &mut Option<Payload>) -> Option<Head> {
    let p = cell.as_mut()?;
    match h.dormant {
        Some(0) => (!m.is_reject(h.state)).then(|| Head { leg: route(m, h.state), dormant: None, ..h }),
        Some(d) => Some(Head { leg: Leg::WaitB { then_any: false }, dormant: Some(d - 1), ..h }),
        None => {
            let (from, read, bit) = m.back(h.state, p.work)?;
            if bit.is_some_and(|b| b != p.oracle) {
                return None;
            }
            p.work = read;
            Some(Head { state: from, leg: route(m, from), dormant: None })
        }
    }
}

fn departs_b(mark: Mark) -> bool {
    matches!(mark, Mark::Bounce(Zig::B) | Mark::Start)
}

fn departs_any(mark: Mark) -> bool {
    matches!(mark, Mark::Bounce(_) | Mark::Start)
}

fn line_next(m: &Backward, l: &Cell, c: &Cell, r: &Cell, x: Line) -> Option<Cell> {
    let base = GridState::Line(x);
    let GridState::Line(old) = c.base else {
        return feed(r).is_none().then_some(Cell { base, ext: Ext::colored(Zone::LeftOfHead) });
    };
    let ce = c.ext;
    let (mut rise, mut wait, mut head) = (ce.a, ce.b, ce.head);
    let mut zone = ce.zone;
    if departs_b(old.left) {
        wait = None;
    }
    let mut head_left = false;
    if let Some(h) = head {
        let leaves = match h.leg {
            Leg::WaitB { .. } => departs_b(old.left),
            Leg::WaitAny => departs_any(old.left),
            _ => false,
        };
        if leaves {
            head = None;
            head_left = true;
        }
    }
    let arrival = match x.right {
        Mark::Bounce(z) | Mark::Last(z) => Some(z),
        _ => None,
    };
    let (in_payload, in_head) = if arrival.is_some() { (r.ext.a, r.ext.head) } else { (None, None) };
    match arrival {
        Some(Zig::B) => {
            if let Some(p) = in_payload {
                if rise.is_some() {
                    return None;
                }
                rise = Some(p);
            }
            if let Some(h) = head {
                match h.leg {
                    Leg::RiseSkip => head = Some(Head { leg: Leg::Rise, ..h }),
                    Leg::Rise => return None,
                    _ => {}
                }
            }
            if let Some(h) = in_head {
                if head.is_some() {
                    return None;
                }
                let leg = match h.leg {
                    Leg::RideB { then_any: false } | Leg::RideAny => Leg::Rise,
                    Leg::RideB { then_any: true } => Leg::WaitAny,
                    _ => return None,
                };
                head = Some(Head { leg, ..h });
            }
        }
        Some(Zig::A) => {
            if in_payload.is_some() {
                return None;
            }
            if let Some(p) = rise.take() {
                if wait.is_some() {
                    return None;
                }
                wait = Some(p);
            }
            let mut arrived = None;
            if let Some(h) = head {
                match h.leg {
                    Leg::Rise => {
                        arrived = Some(h);
                        head = None;
                    }
                    Leg::RiseSkip => return None,
                    _ => {}
                }
            }
            if let Some(h) = in_head {
                if h.leg != Leg::RideAny || arrived.is_some() {
                    return None;
                }
                arrived = Some(h);
            }
            if let Some(h) = arrived {
                if head.is_some() {
                    return None;
                }
                head = Some(arrive(m, h, &mut wait)?);
            }
        }
        None => {}
    }
    if let Some((p, fh)) = feed(r) {
        if wait.is_some() {
            return None;
        }
        wait = Some(p);
        if let Some(h) = fh {
            if head.is_some() {
                return None;
            }
            head = Some(h);
        }
    }
    let fa = arrival.is_some() && r.ext.stage() == 1;
    let left_arrival = matches!(x.left, Mark::Bounce(_) | Mark::Last(_));
    let fb = left_arrival && l.ext.stage() == 2;
    if (arrival.is_some() && r.ext.stage() == 3) || fb {
        zone = Zone::Unreachable;
    } else if head_left && zone != Zone::Unreachable {
        zone = Zone::RightOfHead;
    }
    Some(Cell { base, ext: Ext { a: rise, b: wait, head, zone, fa, fb } })
}

fn interior_next(l: &Cell, c: &Cell, r: &Cell, x: Interior) -> Option<Cell> {
    if feed(r).is_some() {
        return None;
    }
    let dir = x.diag.map(|d| d.dir);
    let mut zone = match c.base {
        GridState::Interior(_) => {
            let mut z = c.ext.zone;
            if c.ext.head.is_some() && z != Zone::Unreachable {
                z = Zone::RightOfHead;
            }
            if c.se() && c.ext.stage() == 3 {
                z = Zone::Unreachable;
            }
            z
        }
        GridState::Quiescent if c.ext.a.is_none() => match dir {
            Some(Dir::Sw) => l.ext.zone,
            Some(Dir::Se) => r.ext.zone,
            None => return None,
        },
        _ => return None,
    };
    if zone == Zone::Plain {
        zone = Zone::LeftOfHead;
    }
    let mut ext = Ext::colored(zone);
    match (dir, r.base, l.base) {
        (Some(Dir::Se), GridState::Interior(_), _) => {
            ext.a = r.ext.a;
            ext.head = r.ext.head;
            let detect = r.base.counting() && matches!(c.base.diagonal(), Some(d) if d.dir == Dir::Sw);
            ext.set_stage(if detect && r.ext.stage() == 0 { 1 } else { r.ext.stage() });
        }
        (Some(Dir::Se), GridState::Line(y), _) => {
            if departs_b(y.left) {
                ext.a = r.ext.b;
            }
            ext.head = r.ext.head.and_then(|h| match h.leg {
                Leg::WaitB { then_any } if departs_b(y.left) => Some(Head { leg: Leg::RideB { then_any }, ..h }),
                Leg::WaitAny if departs_any(y.left) => Some(Head { leg: Leg::RideAny, ..h }),
                _ => None,
            });
            ext.set_stage(if r.ext.fb { 3 } else { 0 });
        }
        (Some(Dir::Sw), _, GridState::Interior(_)) => ext.set_stage(l.ext.stage()),
        (Some(Dir::Sw), _, GridState::Line(_)) => ext.set_stage(if l.ext.fa { 2 } else { 0 }),
        _ => {}
    }
    Some(Cell { base: GridState::Interior(x), ext })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{seed_cells, SeedPlan};

    fn step_row(m: &Backward, row: &[Cell]) -> Vec<Cell> {
        let q = Cell::QUIESCENT;
        (0..row.len())
            .map(|x| next(m, if x == 0 { &q } else { &row[x - 1] }, &row[x], row.get(x + 1).unwrap_or(&q)))
            .collect()
    }

    fn rows(name: &str, oracle: &[u8], columns: usize) -> (Backward, Vec<Vec<Cell>>) {
        let tm = rtm::bundled(name).unwrap();
        let m = Backward::new(&tm).unwrap();
        let plan = SeedPlan::new(&tm, oracle, columns).unwrap();
        let mut out = vec![seed_cells(&plan).1];
        let top = sparse_grid::Layout { columns }.top_row();
        for _ in 0..top {
            let next = step_row(&m, out.last().unwrap());
            out.push(next);
        }
        (m, out)
    }

    fn arrivals(rows: &[Vec<Cell>], zig: Zig) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for t in 0..rows.len() - 1 {
            for k in 0..rows[t].len() - 1 {
                let arrives = matches!(rows[t + 1][k].base, GridState::Line(l)
                    if matches!(l.right, Mark::Bounce(z) | Mark::Last(z) if z == zig));
                if arrives && matches!(rows[t][k].base, GridState::Line(_)) {
                    v.push((t, k));
                }
            }
        }
        v
    }

    #[test]
    fn canonical_run_never_holds_more_than_two_payloads() {
        let (_, rows) = rows("no11", &[0, 1, 0], 6);
        assert!(rows.iter().flatten().all(|c| c.transports() <= 2 && c.base != GridState::Killer));
    }

    #[test]
    fn a_third_payload_ignites() {
        let (m, rows) = rows("stayput", &[1], 4);
        let p = Payload { oracle: 0, work: 0 };
        let mut hits = 0;
        for (t, k) in arrivals(&rows, Zig::B) {
            if rows[t][k + 1].ext.a.is_none() {
                continue;
            }
            let mut c = rows[t][k];
            c.ext.a = Some(p);
            c.ext.b = Some(p);
            assert_eq!(next(&m, &rows[t][k - 1], &c, &rows[t][k + 1]), Cell::KILLER);
            hits += 1;
        }
        assert!(hits > 3);
    }

    #[test]
    fn undefined_backward_step_ignites() {
        let (m, rows) = rows("no11", &[0, 0, 0], 6);
        let mut hits = 0;
        for (t, k) in arrivals(&rows, Zig::A) {
            if rows[t + 1][k].ext.head.is_none_or(|h| h.dormant.is_some()) {
                continue;
            }
            let Some(mut p) = rows[t][k].ext.a else { continue };
            let Some(incoming) = [rows[t][k].ext.head, rows[t][k + 1].ext.head]
                .into_iter()
                .flatten()
                .find(|h| matches!(h.leg, Leg::Rise | Leg::RideAny) && h.dormant.is_none())
                .map(|h| h.state)
            else {
                continue;
            };
            let Some(w) = (0..m.symbols as u8).find(|&w| m.back(incoming, w).is_none()) else { continue };
            p.work = w;
            let mut c = rows[t][k];
            c.ext.a = Some(p);
            assert_eq!(next(&m, &rows[t][k - 1], &c, &rows[t][k + 1]), Cell::KILLER);
            hits += 1;
        }
        assert!(hits > 0);
    }
}
