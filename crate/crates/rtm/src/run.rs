use crate::machine::{Move, ReversibleTM, StateKind};
use crate::RtmError;

/// Machine state, head cell and work tape (trailing blanks trimmed).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Snapshot {
    pub state: usize,
    pub head: usize,
    pub work: Vec<usize>,
}

impl Snapshot {
    pub fn initial(tm: &ReversibleTM, work: &[usize]) -> Snapshot {
        let mut s = Snapshot { state: tm.initial, head: 0, work: work.to_vec() };
        s.trim();
        s
    }

    pub fn symbol(&self, cell: usize) -> usize {
        self.work.get(cell).copied().unwrap_or(0)
    }

    fn set(&mut self, cell: usize, sym: usize) {
        if cell >= self.work.len() {
            self.work.resize(cell + 1, 0);
        }
        self.work[cell] = sym;
        self.trim();
    }

    fn trim(&mut self) {
        while self.work.last() == Some(&0) {
            self.work.pop();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltCause {
    Accept,
    Reject,
    /// The head stands beyond the supplied oracle prefix.
    OffOracle,
    /// A left move from cell 0.
    OffTapeLeft,
    /// No forward transition applies.
    Stuck,
    /// Backward only: no transition leads to the current snapshot.
    NoPredecessor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub snapshots: Vec<Snapshot>,
    /// Set when the run stopped before the requested number of steps.
    pub halt: Option<HaltCause>,
}

impl Trace {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("trace is never empty")
    }

    pub fn steps(&self) -> usize {
        self.snapshots.len() - 1
    }
}

pub fn step_forward(tm: &ReversibleTM, oracle: &[u8], s: &Snapshot) -> Result<Snapshot, HaltCause> {
    match tm.state_kinds[s.state] {
        StateKind::Accept => return Err(HaltCause::Accept),
        StateKind::Reject => return Err(HaltCause::Reject),
        StateKind::Normal => {}
    }
    let bit = *oracle.get(s.head).ok_or(HaltCause::OffOracle)?;
    let t = tm.forward_transition(s.state, s.symbol(s.head), bit).ok_or(HaltCause::Stuck)?;
    if t.mv == Move::L && s.head == 0 {
        return Err(HaltCause::OffTapeLeft);
    }
    let mut next = s.clone();
    next.set(s.head, t.write);
    next.state = t.to;
    next.head = (s.head as i64 + t.mv.delta()) as usize;
    Ok(next)
}

pub fn step_backward(tm: &ReversibleTM, oracle: &[u8], s: &Snapshot) -> Result<Snapshot, HaltCause> {
    let mv = tm.move_into(s.state).ok_or(HaltCause::NoPredecessor)?;
    let prev = s.head as i64 - mv.delta();
    if prev < 0 {
        return Err(HaltCause::NoPredecessor);
    }
    let prev = prev as usize;
    let t = tm.backward_transition(s.state, s.symbol(prev)).ok_or(HaltCause::NoPredecessor)?;
    match oracle.get(prev) {
        Some(&bit) if t.oracle.matches(bit) => {}
        _ => return Err(HaltCause::NoPredecessor),
    }
    let mut out = s.clone();
    out.set(prev, t.read);
    out.state = t.from;
    out.head = prev;
    Ok(out)
}

/// Runs up to `steps` steps from `start`. Backward runs need a reversible machine.
pub fn run(
    tm: &ReversibleTM,
    oracle: &[u8],
    start: &Snapshot,
    steps: usize,
    direction: Direction,
) -> Result<Trace, RtmError> {
    if oracle.iter().any(|&b| b > 1) {
        return Err(RtmError::BadOracle);
    }
    if direction == Direction::Backward {
        tm.check_reversibility().map_err(RtmError::Irreversible)?;
    }
    let mut snapshots = vec![start.clone()];
    let mut halt = None;
    for _ in 0..steps {
        let cur = snapshots.last().unwrap();
        let next = match direction {
            Direction::Forward => step_forward(tm, oracle, cur),
            Direction::Backward => step_backward(tm, oracle, cur),
        };
        match next {
            Ok(n) => snapshots.push(n),
            Err(cause) => {
                halt = Some(cause);
                break;
            }
        }
    }
    Ok(Trace { snapshots, halt })
}

/// The effectively closed set of oracle words no prefix of which is rejected.
#[derive(Clone, Debug)]
pub struct EffectiveClass {
    pub machine: ReversibleTM,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixVerdict {
    Rejected,
    NotRejectedWithinBudget,
}

pub fn prefix_rejected(class: &EffectiveClass, prefix: &[u8], budget: usize) -> PrefixVerdict {
    let tm = &class.machine;
    let mut s = Snapshot::initial(tm, &[]);
    for _ in 0..=budget {
        if tm.state_kinds[s.state] == StateKind::Reject {
            return PrefixVerdict::Rejected;
        }
        match step_forward(tm, prefix, &s) {
            Ok(n) => s = n,
            Err(_) => break,
        }
    }
    PrefixVerdict::NotRejectedWithinBudget
}

/// Outcome of a run with periodic rewinding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecheckReport {
    pub trace: Trace,
    pub rechecks: usize,
    /// Forward time at which a rewind or replay disagreed with the record.
    pub mismatch: Option<usize>,
}

/// Every `period` forward steps, rewinds to time 0 by backward steps and
/// replays, comparing each snapshot with the recorded run.
pub fn run_with_recheck(
    tm: &ReversibleTM,
    oracle: &[u8],
    start: &Snapshot,
    steps: usize,
    period: usize,
) -> Result<RecheckReport, RtmError> {
    if period == 0 {
        return Err(RtmError::ZeroPeriod);
    }
    tm.check_reversibility().map_err(RtmError::Irreversible)?;
    let mut trace = Trace { snapshots: vec![start.clone()], halt: None };
    let mut rechecks = 0;
    for t in 1..=steps {
        match step_forward(tm, oracle, trace.last()) {
            Ok(n) => trace.snapshots.push(n),
            Err(cause) => {
                trace.halt = Some(cause);
                break;
            }
        }
        if t % period == 0 {
            rechecks += 1;
            let mut cur = trace.last().clone();
            for back in (0..t).rev() {
                match step_backward(tm, oracle, &cur) {
                    Ok(p) if p == trace.snapshots[back] => cur = p,
                    _ => return Ok(RecheckReport { trace, rechecks, mismatch: Some(back) }),
                }
            }
            for fwd in 1..=t {
                match step_forward(tm, oracle, &cur) {
                    Ok(n) if n == trace.snapshots[fwd] => cur = n,
                    _ => return Ok(RecheckReport { trace, rechecks, mismatch: Some(fwd) }),
                }
            }
        }
    }
    Ok(RecheckReport { trace, rechecks, mismatch: None })
}
