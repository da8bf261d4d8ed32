//! Line-oriented text formats for rules and configurations.
//!
//! Rule: header `ca <states> <radius>` followed by one `n.. -> out` line per
//! neighbourhood, or the single line `elementary <n>`. Blank lines and lines
//! starting with `#` are ignored.
//!
//! Configuration: `cfg quiescent:<q> <origin>` or `cfg cyclic <origin>`,
//! then one line of state ids.

use std::io::Write;

use crate::{Boundary, CaError, Configuration, Rule, State};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn perr(line: usize, msg: impl Into<String>) -> CaError {
    CaError::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T, CaError> {
    tok.parse().map_err(|_| perr(line, format!("bad number `{tok}`")))
}

pub fn parse_rule(text: &str) -> Result<Rule, CaError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty rule file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    match toks.as_slice() {
        ["elementary", n] => {
            let n: u8 = num(n, hl)?;
            if let Some((l, _)) = lines.next() {
                return Err(perr(l, "unexpected content after elementary header"));
            }
            Ok(Rule::elementary(n))
        }
        ["ca", q, r] => {
            let q: u32 = num(q, hl)?;
            let r: usize = num(r, hl)?;
            if q == 0 || r == 0 {
                return Err(perr(hl, "state count and radius must be positive"));
            }
            let probe = Rule::from_fn(q, r, |_| 0);
            let size = probe.checked_size(crate::DEFAULT_TABLE_CAP)?;
            let mut table: Vec<Option<State>> = vec![None; size as usize];
            for (l, body) in lines {
                let (lhs, rhs) = body.split_once("->").ok_or_else(|| perr(l, "missing `->`"))?;
                let nb = lhs.split_whitespace().map(|t| num::<State>(t, l)).collect::<Result<Vec<_>, _>>()?;
                if nb.len() != 2 * r + 1 {
                    return Err(perr(l, format!("expected {} states before `->`", 2 * r + 1)));
                }
                if nb.iter().any(|&s| s >= q) {
                    return Err(perr(l, "state id out of range"));
                }
                let out: State = num(rhs.trim(), l)?;
                if out >= q {
                    return Err(perr(l, "output state out of range"));
                }
                let slot = &mut table[probe.index_of(&nb)];
                if slot.is_some_and(|prev| prev != out) {
                    return Err(perr(l, "conflicting entry for neighbourhood"));
                }
                *slot = Some(out);
            }
            if let Some(i) = table.iter().position(Option::is_none) {
                return Err(perr(0, format!("neighbourhood {:?} unspecified", probe.neighborhood_at(i as u64))));
            }
            Rule::from_table(q, r, table.into_iter().map(Option::unwrap).collect())
        }
        _ => Err(perr(hl, "expected `ca <states> <radius>` or `elementary <n>`")),
    }
}

/// Writes the full table, refusing rules with more than `cap` neighbourhoods.
pub fn write_rule<W: Write>(rule: &Rule, out: &mut W, cap: u64) -> Result<(), CaError> {
    let size = rule.checked_size(cap)?;
    writeln!(out, "ca {} {}", rule.state_count(), rule.radius())?;
    let mut line = String::new();
    for i in 0..size {
        let nb = rule.neighborhood_at(i);
        line.clear();
        for s in &nb {
            line.push_str(&s.to_string());
            line.push(' ');
        }
        line.push_str("-> ");
        line.push_str(&rule.apply_unchecked(&nb).to_string());
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<Configuration, CaError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty configuration file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let (boundary, origin) = match toks.as_slice() {
        ["cfg", b, o] => {
            let boundary = match b.split_once(':') {
                Some(("quiescent", q)) => Boundary::Quiescent(num(q, hl)?),
                None if *b == "cyclic" => Boundary::Cyclic,
                _ => return Err(perr(hl, format!("bad boundary `{b}`"))),
            };
            (boundary, num::<i64>(o, hl)?)
        }
        _ => return Err(perr(hl, "expected `cfg <boundary> <origin>`")),
    };
    let cells = match lines.next() {
        Some((l, body)) => body.split_whitespace().map(|t| num::<State>(t, l)).collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    if let Some((l, _)) = lines.next() {
        return Err(perr(l, "configuration must be a single line of ids"));
    }
    Ok(Configuration { cells, boundary, origin })
}

pub fn write_config(config: &Configuration) -> String {
    let b = match config.boundary {
        Boundary::Quiescent(q) => format!("quiescent:{q}"),
        Boundary::Cyclic => "cyclic".to_string(),
    };
    let ids: Vec<String> = config.cells.iter().map(|s| s.to_string()).collect();
    format!("cfg {b} {}\n{}\n", config.origin, ids.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_header() {
        let r = parse_rule("# comment\nelementary 110\n").unwrap();
        assert_eq!(r.table(), Rule::elementary(110).table());
    }

    #[test]
    fn table_text_roundtrip() {
        let r = Rule::elementary(30);
        let mut buf = Vec::new();
        write_rule(&r, &mut buf, 1 << 10).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("ca 2 1\n0 0 0 -> 0\n"));
        assert_eq!(parse_rule(&text).unwrap().table(), r.table());
    }

    #[test]
    fn missing_neighbourhood_is_error() {
        let text = "ca 2 1\n0 0 0 -> 0\n";
        assert!(matches!(parse_rule(text), Err(CaError::Parse { .. })));
    }

    #[test]
    fn write_refuses_over_cap() {
        let mut sink = Vec::new();
        let err = write_rule(&Rule::identity(100), &mut sink, 1000).unwrap_err();
        assert!(matches!(err, CaError::ResourceLimit { needed: 1_000_000, cap: 1000 }));
        assert!(sink.is_empty());
    }

    #[test]
    fn config_text() {
        let c = parse_config("cfg quiescent:0 -3\n0 1 1 0\n").unwrap();
        assert_eq!(c.origin, -3);
        assert_eq!(c.boundary, Boundary::Quiescent(0));
        assert_eq!(c.cells, vec![0, 1, 1, 0]);
        assert_eq!(parse_config(&write_config(&c)).unwrap(), c);
        assert_eq!(parse_config("cfg cyclic 0\n1\n").unwrap().boundary, Boundary::Cyclic);
        assert!(parse_config("cfg sideways 0\n1\n").is_err());
        assert!(parse_config("").is_err());
    }
}
