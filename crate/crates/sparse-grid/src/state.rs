//! Cell states of the grid automaton.
//!
//! A column is bounded by two vertical lines and crossed by two zigzag
//! diagonals `A` and `B` that bounce between the lines and meet them at the
//! same time, carving the column into squares. A counting signal moves one
//! cell left each time the rightward diagonal passes it; when it reaches the
//! left line the column erases itself. Starter signals travelling through
//! quiescent space build the next column on the left.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Zig {
    A,
    B,
}

impl Zig {
    pub fn other(self) -> Zig {
        match self {
            Zig::A => Zig::B,
            Zig::B => Zig::A,
        }
    }

    pub const BOTH: [Zig; 2] = [Zig::A, Zig::B];
}

/// `Sw` travels right (speed 1), `Se` travels left (speed -1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Sw,
    Se,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diag {
    pub dir: Dir,
    pub id: Zig,
    /// Set during the last square of a column.
    pub last: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interior {
    pub parity: u8,
    /// Zig `A` is strictly left of this cell; the left line counts as left.
    pub a_left: bool,
    pub b_left: bool,
    pub cnt_left: bool,
    pub diag: Option<Diag>,
    pub counting: bool,
}

impl Interior {
    pub fn left_of(&self, id: Zig) -> bool {
        match id {
            Zig::A => self.a_left,
            Zig::B => self.b_left,
        }
    }

    pub fn set_left(&mut self, id: Zig, v: bool) {
        match id {
            Zig::A => self.a_left = v,
            Zig::B => self.b_left = v,
        }
    }

    pub fn holds(&self, id: Zig) -> bool {
        self.diag.is_some_and(|d| d.id == id)
    }
}

/// Event seen by a line on one of its sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    None,
    /// A diagonal arrived and leaves again next step.
    Bounce(Zig),
    /// First diagonal of a new column leaves next step.
    Start,
    /// A last-square diagonal arrived; the line vanishes next step.
    Last(Zig),
}

impl Mark {
    /// Zig present on the line on this side.
    pub fn zig(self, start_id: Zig) -> Option<Zig> {
        match self {
            Mark::None => None,
            Mark::Bounce(z) | Mark::Last(z) => Some(z),
            Mark::Start => Some(start_id),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    /// Age in steps since creation, up to 4.
    Fresh(u8),
    Awaiting,
    /// First corner reached; the -1/2 starter leaves next step.
    Launch1,
    /// The -1/3 starter leaves next step.
    Launch2,
    Mature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub stage: Stage,
    pub left: Mark,
    pub right: Mark,
    /// Counting signal of the column on the right has arrived.
    pub counting: bool,
}

/// Starter signals sharing a cell, each with its phase counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Starters {
    pub parity: u8,
    /// Speed -1/4.
    pub s4: Option<u8>,
    /// Speed -1/3.
    pub s3: Option<u8>,
    /// Speed -1/2.
    pub s2: Option<u8>,
    /// Speed +1/4.
    pub r4: Option<u8>,
}

impl Starters {
    pub const EMPTY: Starters = Starters { parity: 0, s4: None, s3: None, s2: None, r4: None };

    pub fn is_empty(&self) -> bool {
        self.s4.is_none() && self.s3.is_none() && self.s2.is_none() && self.r4.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridState {
    Quiescent,
    Killer,
    Line(Line),
    Interior(Interior),
    Starters(Starters),
}

/// Background colour; only the embedding layer uses colours other than `Plain`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Zone {
    LeftOfHead,
    RightOfHead,
    Unreachable,
    Plain,
}

impl GridState {
    pub fn is_construction(&self) -> bool {
        !matches!(self, GridState::Quiescent | GridState::Killer)
    }

    pub fn vertical(&self) -> bool {
        matches!(self, GridState::Line(_))
    }

    pub fn diagonal(&self) -> Option<Diag> {
        match self {
            GridState::Interior(i) => i.diag,
            _ => None,
        }
    }

    pub fn counting(&self) -> bool {
        match self {
            GridState::Interior(i) => i.counting,
            GridState::Line(l) => l.counting,
            _ => false,
        }
    }

    /// Absent on lines, quiescent and killer cells.
    pub fn parity(&self) -> Option<u8> {
        match self {
            GridState::Interior(i) => Some(i.parity),
            GridState::Starters(s) => Some(s.parity),
            _ => None,
        }
    }

    /// Checks the constraints that involve a single cell.
    pub fn is_valid(&self) -> bool {
        match self {
            GridState::Quiescent | GridState::Killer => true,
            GridState::Interior(i) => {
                i.parity < 2
                    && !(i.counting && i.cnt_left)
                    && Zig::BOTH.iter().all(|&z| !(i.holds(z) && i.left_of(z)))
            }
            GridState::Line(l) => line_valid(l),
            GridState::Starters(s) => s.parity < 2 && !s.is_empty() && crate::dynamics::starter_combo_ok(s),
        }
    }
}

fn line_valid(l: &Line) -> bool {
    let fresh_like = !matches!(l.stage, Stage::Mature);
    match l.stage {
        Stage::Fresh(a) if a > 4 => return false,
        Stage::Fresh(0) => return l.right == Mark::Start && l.left == Mark::None && !l.counting,
        _ => {}
    }
    if l.right == Mark::Start {
        return false;
    }
    if fresh_like {
        // no column on the left yet, and the first corner only happens at launch
        let right_ok = match l.stage {
            Stage::Launch1 => l.right == Mark::Bounce(Zig::B),
            _ => l.right == Mark::None,
        };
        return right_ok && l.left == Mark::None && !l.counting;
    }
    // the counting signal only rides the line during the last square
    if l.counting && !matches!(l.right, Mark::None | Mark::Last(Zig::A)) {
        return false;
    }
    if !l.counting && matches!(l.right, Mark::Last(_)) {
        return false;
    }
    !matches!(l.left, Mark::Last(Zig::A)) && !matches!(l.right, Mark::Last(Zig::B))
}

/// Whether `a` may sit immediately left of `b` in a well-formed configuration.
pub fn pair_ok(a: &GridState, b: &GridState) -> bool {
    use GridState::*;
    match (a, b) {
        (Killer, _) | (_, Killer) => true,
        (Quiescent, Quiescent) => true,
        (Quiescent, Interior(i)) => {
            matches!(i.diag, Some(Diag { dir: Dir::Se, last: false, .. }) | Some(Diag { dir: Dir::Sw, last: true, .. }))
        }
        (Interior(i), Quiescent) => {
            matches!(i.diag, Some(Diag { dir: Dir::Sw, last: false, .. }) | Some(Diag { dir: Dir::Se, last: true, .. }))
        }
        (Interior(x), Interior(y)) => interior_pair_ok(x, y),
        (Line(l), Interior(i)) => {
            i.parity == 0
                && l.right != Mark::Start
                && i.cnt_left == l.counting
                && Zig::BOTH.iter().all(|&z| i.left_of(z) == (l.right.zig(Zig::A) == Some(z)))
        }
        (Interior(i), Line(l)) => {
            i.parity == 1
                && l.stage == Stage::Mature
                && l.left != Mark::Start
                && (i.cnt_left || i.counting)
                && Zig::BOTH.iter().all(|&z| (i.left_of(z) || i.holds(z)) != (l.left.zig(Zig::B) == Some(z)))
        }
        (Line(l), Quiescent) => match l.right {
            Mark::None => !l.counting,
            Mark::Start | Mark::Last(_) => true,
            Mark::Bounce(_) => false,
        },
        (Quiescent, Line(l)) | (Starters(_), Line(l)) => {
            let side_ok = matches!(l.left, Mark::None | Mark::Start | Mark::Last(_));
            let parity_ok = match a {
                Starters(s) => s.parity == 1 && !matches!(l.left, Mark::Last(_)),
                _ => true,
            };
            side_ok && parity_ok
        }
        (Starters(_), Quiescent) | (Quiescent, Starters(_)) => true,
        (Starters(x), Starters(y)) => x.parity != y.parity,
        (Line(_), Line(_)) | (Line(_), Starters(_)) => false,
        (Starters(_), Interior(_)) | (Interior(_), Starters(_)) => false,
    }
}

fn interior_pair_ok(x: &Interior, y: &Interior) -> bool {
    if x.parity == y.parity {
        return false;
    }
    match (x.diag, y.diag) {
        (Some(d), Some(e)) if d.dir == e.dir => return false,
        _ => {}
    }
    let chain = Zig::BOTH.iter().all(|&z| y.left_of(z) == (x.left_of(z) || x.holds(z)));
    chain && y.cnt_left == (x.cnt_left || x.counting)
}

impl fmt::Display for GridState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridState::Quiescent => write!(f, "."),
            GridState::Killer => write!(f, "X"),
            GridState::Line(_) => write!(f, "|"),
            GridState::Interior(i) => match i.diag {
                Some(Diag { dir: Dir::Sw, .. }) => write!(f, "/"),
                Some(Diag { dir: Dir::Se, .. }) => write!(f, "\\"),
                None if i.counting => write!(f, "c"),
                None => write!(f, "{}", i.parity),
            },
            GridState::Starters(_) => write!(f, "*"),
        }
    }
}
