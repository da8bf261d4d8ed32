use crate::{CaError, Rule, State};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Every cell outside the window holds `q`.
    Quiescent(State),
    /// The window wraps around.
    Cyclic,
}

/// Finite window onto a configuration. `origin` is the cell index of `cells[0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub cells: Vec<State>,
    pub boundary: Boundary,
    pub origin: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub cell: i64,
    pub time: i64,
}

impl Site {
    pub fn new(cell: i64, time: i64) -> Site {
        Site { cell, time }
    }
}

impl Configuration {
    pub fn new(cells: Vec<State>, boundary: Boundary, origin: i64) -> Configuration {
        Configuration { cells, boundary, origin }
    }

    pub fn quiescent(cells: Vec<State>, q: State) -> Configuration {
        Configuration { cells, boundary: Boundary::Quiescent(q), origin: 0 }
    }

    pub fn cyclic(cells: Vec<State>) -> Configuration {
        Configuration { cells, boundary: Boundary::Cyclic, origin: 0 }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// State at absolute cell index `x`.
    pub fn get(&self, x: i64) -> State {
        let n = self.cells.len() as i64;
        let i = x - self.origin;
        match self.boundary {
            _ if (0..n).contains(&i) => self.cells[i as usize],
            Boundary::Quiescent(q) => q,
            Boundary::Cyclic => self.cells[i.rem_euclid(n) as usize],
        }
    }

    /// Absolute index one past the last cell.
    pub fn end(&self) -> i64 {
        self.origin + self.cells.len() as i64
    }

    pub fn validate(&self, rule: &Rule) -> Result<(), CaError> {
        if let Boundary::Quiescent(q) = self.boundary {
            rule.check_state(q)?;
        }
        self.cells.iter().try_for_each(|&s| rule.check_state(s))
    }

    /// Cyclic rotation: the result satisfies `out.cells[i] == cells[i + k]`.
    pub fn rotate(&self, k: i64) -> Configuration {
        let n = self.cells.len();
        let mut cells = self.cells.clone();
        if n > 0 {
            cells.rotate_left(k.rem_euclid(n as i64) as usize);
        }
        Configuration { cells, ..*self }
    }
}

/// Rows of a run; row `t` is the `t`-th successor of row 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Diagram {
    pub rows: Vec<Configuration>,
}

impl Diagram {
    pub fn get(&self, site: Site) -> Option<State> {
        let row = self.rows.get(usize::try_from(site.time).ok()?)?;
        Some(row.get(site.cell))
    }

    pub fn last(&self) -> Option<&Configuration> {
        self.rows.last()
    }
}

/// One synchronous update.
///
/// Cyclic windows keep their size. A quiescent window keeps its extent when
/// `q` is a fixed point of the rule; otherwise it widens by `r` on each side
/// and the boundary becomes the image of the all-`q` neighbourhood.
pub fn step(rule: &Rule, config: &Configuration) -> Result<Configuration, CaError> {
    config.validate(rule)?;
    Ok(step_unchecked(rule, config))
}

pub(crate) fn step_unchecked(rule: &Rule, config: &Configuration) -> Configuration {
    let r = rule.radius() as i64;
    let n = config.cells.len();
    match config.boundary {
        Boundary::Cyclic => {
            if n == 0 {
                return config.clone();
            }
            let mut nb = vec![0; rule.width()];
            let cells = (0..n as i64)
                .map(|i| {
                    for (k, slot) in nb.iter_mut().enumerate() {
                        *slot = config.cells[(i + k as i64 - r).rem_euclid(n as i64) as usize];
                    }
                    rule.apply_unchecked(&nb)
                })
                .collect();
            Configuration { cells, ..*config }
        }
        Boundary::Quiescent(q) => {
            let outside = rule.apply_unchecked(&vec![q; rule.width()]);
            let grow = if outside == q { 0 } else { r };
            let mut padded = Vec::with_capacity(n + 4 * r as usize);
            padded.extend(std::iter::repeat_n(q, (grow + r) as usize));
            padded.extend_from_slice(&config.cells);
            padded.extend(std::iter::repeat_n(q, (grow + r) as usize));
            let cells = padded.windows(rule.width()).map(|nb| rule.apply_unchecked(nb)).collect();
            Configuration { cells, boundary: Boundary::Quiescent(outside), origin: config.origin - grow }
        }
    }
}

pub fn evolve(rule: &Rule, config: &Configuration, t: usize) -> Result<Diagram, CaError> {
    config.validate(rule)?;
    let mut rows = Vec::with_capacity(t + 1);
    rows.push(config.clone());
    for _ in 0..t {
        let next = step_unchecked(rule, rows.last().unwrap());
        rows.push(next);
    }
    Ok(Diagram { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<State> {
        s.bytes().map(|b| (b - b'0') as State).collect()
    }

    #[test]
    fn rule_90_two_steps() {
        let d = evolve(&Rule::elementary(90), &Configuration::quiescent(bits("00100"), 0), 2).unwrap();
        let rows: Vec<_> = d.rows.iter().map(|c| c.cells.clone()).collect();
        assert_eq!(rows, vec![bits("00100"), bits("01010"), bits("10001")]);
    }

    #[test]
    fn rule_128_cyclic_ones() {
        let c = step(&Rule::elementary(128), &Configuration::cyclic(bits("111"))).unwrap();
        assert_eq!(c.cells, bits("111"));
    }

    #[test]
    fn zero_steps_single_row() {
        let c = Configuration::quiescent(bits("0110"), 0);
        let d = evolve(&Rule::elementary(54), &c, 0).unwrap();
        assert_eq!(d.rows, vec![c]);
    }

    #[test]
    fn rule_0_clears() {
        let d = evolve(&Rule::elementary(0), &Configuration::cyclic(bits("1011")), 1).unwrap();
        assert_eq!(d.rows[1].cells, bits("0000"));
    }

    #[test]
    fn identity_keeps_config() {
        let c = Configuration::new(vec![2, 0, 1], Boundary::Quiescent(1), -4);
        assert_eq!(step(&Rule::identity(3), &c).unwrap(), c);
    }

    #[test]
    fn non_fixed_quiescent_widens() {
        // rule 1 maps 000 to 1
        let c = Configuration::quiescent(bits("010"), 0);
        let next = step(&Rule::elementary(1), &c).unwrap();
        assert_eq!(next.origin, -1);
        assert_eq!(next.cells.len(), 5);
        assert_eq!(next.boundary, Boundary::Quiescent(1));
        assert_eq!(next.cells, bits("10001"));
    }

    #[test]
    fn rejects_bad_boundary_state() {
        let c = Configuration::new(vec![0], Boundary::Quiescent(5), 0);
        assert!(step(&Rule::elementary(90), &c).is_err());
    }

    #[test]
    fn diagram_site_lookup() {
        let d = evolve(&Rule::elementary(90), &Configuration::quiescent(bits("00100"), 0), 2).unwrap();
        assert_eq!(d.get(Site::new(0, 2)), Some(1));
        assert_eq!(d.get(Site::new(-7, 1)), Some(0));
        assert_eq!(d.get(Site::new(0, 3)), None);
    }
}
