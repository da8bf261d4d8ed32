use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ca_core::{Boundary, Configuration, Diagram, Rule, State};
use flate2::read::GzDecoder;
use rtm::ReversibleTM;
use sparse_grid::render::grid_color;
use sparse_grid::{GridRule, GridState, Zone};
use tm_embed::EmbeddedRule;

/// Bad input from the user: unreadable file contents, malformed words and
/// the like. Mapped to exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn bad_input(msg: impl fmt::Display) -> anyhow::Error {
    InputError(msg.to_string()).into()
}

/// Reads a text file, transparently inflating `.gz`.
pub fn read_text(path: &Path) -> Result<String> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut text = String::new();
    if path.extension().is_some_and(|e| e == "gz") {
        GzDecoder::new(file).read_to_string(&mut text)
    } else {
        { file }.read_to_string(&mut text)
    }
    .with_context(|| format!("reading {}", path.display()))?;
    Ok(text)
}

/// A bundled machine name or a machine file. Files must be reversible.
pub fn load_machine(spec: &str) -> Result<ReversibleTM> {
    if let Some(tm) = rtm::bundled(spec) {
        return Ok(tm);
    }
    let text = read_text(Path::new(spec))?;
    let tm = ReversibleTM::parse(&text).map_err(|e| bad_input(format!("{spec}: {e}")))?;
    tm.check_reversibility()
        .map_err(|e| bad_input(format!("{spec}: machine is not reversible: {e}")))?;
    Ok(tm)
}

pub enum Loaded {
    Plain(Rule),
    Grid(&'static GridRule),
    Embed(Box<EmbeddedRule>),
}

impl Loaded {
    pub fn rule(&self) -> &Rule {
        match self {
            Loaded::Plain(r) => r,
            Loaded::Grid(g) => &g.rule,
            Loaded::Embed(e) => &e.rule,
        }
    }

    /// Pixel colour of a state id. Grid states use the grid palette; the
    /// embedding marks heads magenta and darkens the unreachable zone;
    /// other rules go from white (0) to black (last state).
    pub fn color(&self, s: State) -> [u8; 3] {
        match self {
            Loaded::Plain(r) => {
                let n = r.state_count().max(2) - 1;
                let v = 255 - (255 * s.min(n) / n) as u8;
                [v, v, v]
            }
            Loaded::Grid(g) => g.alphabet.state(s).map_or([0, 0, 0], |g| grid_color(&g)),
            Loaded::Embed(e) => match e.decode(s) {
                None => [0, 0, 0],
                Some(c) if c.ext.head.is_some() => [200, 0, 200],
                Some(c) => {
                    let [r, g, b] = grid_color(&c.base);
                    if c.ext.zone == Zone::Unreachable && !matches!(c.base, GridState::Line(_)) {
                        [r / 2 + 40, g / 2 + 40, b / 2 + 40]
                    } else {
                        [r, g, b]
                    }
                }
            },
        }
    }
}

pub fn parse_word(text: &str) -> Result<Vec<State>> {
    preimage::word::parse_word(text).map_err(bad_input)
}

pub fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(bad_input(format!("oracle `{text}` is not a 0/1 word"))),
        })
        .collect()
}

pub fn parse_rule_file(path: &Path) -> Result<Rule> {
    let text = read_text(path)?;
    ca_core::text::parse_rule(&text).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

pub fn parse_config_file(path: &Path) -> Result<Configuration> {
    let text = read_text(path)?;
    ca_core::text::parse_config(&text).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

/// Diagram CSV as written by `simulate`: one row of ids per line, all rows
/// over the same extent starting at `origin`.
pub fn parse_diagram(text: &str, origin: i64, q: State) -> Result<Diagram> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cells = line
            .split(',')
            .map(|t| t.trim().parse::<State>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad_input(format!("diagram line {}: {e}", i + 1)))?;
        if rows.first().is_some_and(|r: &Configuration| r.cells.len() != cells.len()) {
            return Err(bad_input(format!("diagram line {}: row width differs", i + 1)));
        }
        rows.push(Configuration::new(cells, Boundary::Quiescent(q), origin));
    }
    if rows.is_empty() {
        bail!(InputError("empty diagram".into()));
    }
    Ok(Diagram { rows })
}
