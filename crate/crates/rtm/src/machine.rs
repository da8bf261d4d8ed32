use std::collections::HashMap;
use std::fmt;

use crate::RtmError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    S,
    R,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::L => -1,
            Move::S => 0,
            Move::R => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleRead {
    Any,
    Bit(u8),
}

impl OracleRead {
    pub fn matches(self, bit: u8) -> bool {
        match self {
            OracleRead::Any => true,
            OracleRead::Bit(b) => b == bit,
        }
    }

    fn overlaps(self, other: OracleRead) -> bool {
        match (self, other) {
            (OracleRead::Bit(a), OracleRead::Bit(b)) => a == b,
            _ => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateKind {
    Normal,
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub read: usize,
    pub oracle: OracleRead,
    pub to: usize,
    pub write: usize,
    pub mv: Move,
}

/// States and work symbols are referred to by index; work symbol 0 is the blank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibleTM {
    pub state_names: Vec<String>,
    pub state_kinds: Vec<StateKind>,
    pub initial: usize,
    pub work_symbols: Vec<String>,
    pub transitions: Vec<Transition>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clash {
    /// Both apply to the same (state, work symbol, oracle bit).
    Forward,
    /// Same (state', written symbol, move).
    Backward,
    /// Same target state reached with different moves.
    MixedMoves,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub clash: Clash,
    pub first: Transition,
    pub second: Transition,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} clash between {:?} and {:?}", self.clash, self.first, self.second)
    }
}

impl ReversibleTM {
    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.work_symbols.iter().position(|n| n == name)
    }

    pub fn is_halting(&self, q: usize) -> bool {
        self.state_kinds[q] != StateKind::Normal
    }

    pub fn forward_transition(&self, q: usize, read: usize, oracle: u8) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.from == q && t.read == read && t.oracle.matches(oracle))
    }

    /// The move shared by every transition entering `q`.
    pub fn move_into(&self, q: usize) -> Option<Move> {
        self.transitions.iter().find(|t| t.to == q).map(|t| t.mv)
    }

    pub fn backward_transition(&self, q: usize, written: usize) -> Option<&Transition> {
        self.transitions.iter().find(|t| t.to == q && t.write == written)
    }

    /// Checks forward determinism and backward determinism. The backward
    /// direction needs both an injective `(state', written, move)` and a single
    /// move per target state, so the previous head position is known.
    pub fn check_reversibility(&self) -> Result<(), Counterexample> {
        let ts = &self.transitions;
        for (i, a) in ts.iter().enumerate() {
            for b in &ts[i + 1..] {
                let clash = if a.from == b.from && a.read == b.read && a.oracle.overlaps(b.oracle) {
                    Some(Clash::Forward)
                } else if a.to == b.to && a.write == b.write && a.mv == b.mv {
                    Some(Clash::Backward)
                } else if a.to == b.to && a.mv != b.mv {
                    Some(Clash::MixedMoves)
                } else {
                    None
                };
                if let Some(clash) = clash {
                    return Err(Counterexample { clash, first: *a, second: *b });
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<ReversibleTM, RtmError> {
        parse(text)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("rtm\n");
        s.push_str(&format!("blank {}\n", self.work_symbols[0]));
        for (i, name) in self.state_names.iter().enumerate() {
            let mut tags = Vec::new();
            if i == self.initial {
                tags.push("initial");
            }
            match self.state_kinds[i] {
                StateKind::Accept => tags.push("accept"),
                StateKind::Reject => tags.push("reject"),
                StateKind::Normal => {}
            }
            s.push_str(&format!("state {name}{}{}\n", if tags.is_empty() { "" } else { " " }, tags.join(" ")));
        }
        for t in &self.transitions {
            let o = match t.oracle {
                OracleRead::Any => "-".to_string(),
                OracleRead::Bit(b) => b.to_string(),
            };
            s.push_str(&format!(
                "t {} {} {o} -> {} {} {:?}\n",
                self.state_names[t.from], self.work_symbols[t.read], self.state_names[t.to], self.work_symbols[t.write], t.mv
            ));
        }
        s
    }
}

fn parse(text: &str) -> Result<ReversibleTM, RtmError> {
    let err = |line: usize, msg: &str| RtmError::Parse { line, msg: msg.to_string() };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, "rtm")) => {}
        Some((l, _)) => return Err(err(l, "expected `rtm` header")),
        None => return Err(err(1, "empty machine file")),
    }
    let mut names = Vec::new();
    let mut kinds = Vec::new();
    let mut initial = None;
    let mut blank: Option<String> = None;
    let mut raw = Vec::new();
    for (l, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["blank", sym] => {
                if blank.is_some() {
                    return Err(err(l, "blank declared twice"));
                }
                blank = Some(sym.to_string());
            }
            ["state", name, tags @ ..] => {
                if names.iter().any(|n: &String| n == name) {
                    return Err(err(l, "duplicate state"));
                }
                let mut kind = StateKind::Normal;
                for tag in tags {
                    match *tag {
                        "initial" if initial.is_none() => initial = Some(names.len()),
                        "initial" => return Err(err(l, "second initial state")),
                        "accept" => kind = StateKind::Accept,
                        "reject" => kind = StateKind::Reject,
                        _ => return Err(err(l, "unknown state tag")),
                    }
                }
                names.push(name.to_string());
                kinds.push(kind);
            }
            ["t", q, w, o, "->", q2, w2, m] => raw.push((l, *q, *w, *o, *q2, *w2, *m)),
            _ => return Err(err(l, "unrecognised line")),
        }
    }
    let initial = initial.ok_or_else(|| err(0, "no initial state"))?;
    let mut symbols = vec![blank.unwrap_or_else(|| "b".to_string())];
    let mut sym_ids: HashMap<String, usize> = HashMap::from([(symbols[0].clone(), 0)]);
    let mut intern = |s: &str| -> usize {
        if let Some(&i) = sym_ids.get(s) {
            return i;
        }
        symbols.push(s.to_string());
        sym_ids.insert(s.to_string(), symbols.len() - 1);
        symbols.len() - 1
    };
    let state = |l: usize, s: &str| names.iter().position(|n| n == s).ok_or_else(|| err(l, "unknown state"));
    let mut transitions = Vec::new();
    for (l, q, w, o, q2, w2, m) in raw {
        let oracle = match o {
            "-" => OracleRead::Any,
            "0" => OracleRead::Bit(0),
            "1" => OracleRead::Bit(1),
            _ => return Err(err(l, "oracle symbol must be 0, 1 or -")),
        };
        let mv = match m {
            "L" => Move::L,
            "S" => Move::S,
            "R" => Move::R,
            _ => return Err(err(l, "move must be L, S or R")),
        };
        transitions.push(Transition {
            from: state(l, q)?,
            read: intern(w),
            oracle,
            to: state(l, q2)?,
            write: intern(w2),
            mv,
        });
    }
    Ok(ReversibleTM { state_names: names, state_kinds: kinds, initial, work_symbols: symbols, transitions })
}

pub fn no11() -> ReversibleTM {
    parse(include_str!("../machines/no11.rtm")).expect("bundled machine parses")
}

pub fn parity() -> ReversibleTM {
    parse(include_str!("../machines/parity.rtm")).expect("bundled machine parses")
}

pub fn stay_put() -> ReversibleTM {
    parse(include_str!("../machines/stayput.rtm")).expect("bundled machine parses")
}

/// Bundled machines by name.
pub fn bundled(name: &str) -> Option<ReversibleTM> {
    match name {
        "no11" => Some(no11()),
        "parity" => Some(parity()),
        "stayput" => Some(stay_put()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(transitions: &str) -> ReversibleTM {
        parse(&format!("rtm\nstate q0 initial\nstate q1\n{transitions}")).unwrap()
    }

    #[test]
    fn single_transition_is_reversible() {
        assert!(one("t q0 b - -> q0 b R\n").check_reversibility().is_ok());
    }

    #[test]
    fn direct_clash() {
        let m = one("t q0 b 0 -> q1 0 R\nt q1 b 0 -> q1 0 R\n");
        let c = m.check_reversibility().unwrap_err();
        assert_eq!(c.clash, Clash::Backward);
        assert_eq!((c.first.from, c.second.from), (0, 1));
    }

    #[test]
    fn forward_overlap_with_wildcard() {
        let m = one("t q0 b - -> q1 x R\nt q0 b 1 -> q0 y R\n");
        assert_eq!(m.check_reversibility().unwrap_err().clash, Clash::Forward);
    }

    #[test]
    fn mixed_moves_into_one_state() {
        let m = one("t q0 b 0 -> q1 x R\nt q0 b 1 -> q1 y L\n");
        assert_eq!(m.check_reversibility().unwrap_err().clash, Clash::MixedMoves);
    }

    #[test]
    fn bundled_machines_are_reversible() {
        for name in ["no11", "parity", "stayput"] {
            let m = bundled(name).unwrap();
            assert!(m.check_reversibility().is_ok(), "{name}");
            assert!(m.transitions.len() <= 20);
        }
    }

    #[test]
    fn text_roundtrip() {
        let m = no11();
        assert_eq!(parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn parse_errors() {
        assert!(parse("").is_err());
        assert!(parse("tm\n").is_err());
        assert!(parse("rtm\nstate a\n").is_err());
        assert!(parse("rtm\nstate a initial\nt a b 2 -> a b S\n").is_err());
        assert!(parse("rtm\nstate a initial\nt a b 0 -> c b S\n").is_err());
    }
}
