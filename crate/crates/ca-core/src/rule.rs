use std::fmt;
use std::sync::Arc;

use crate::{CaError, State};

/// Largest neighbourhood table that will be materialised (entries).
pub const DEFAULT_TABLE_CAP: u64 = 1 << 26;

type LocalFn = dyn Fn(&[State]) -> State + Send + Sync;

#[derive(Clone)]
enum Delta {
    Table(Arc<[State]>),
    Local(Arc<LocalFn>),
}

/// A local rule `(Q, r, delta)` on state ids `0..state_count`.
///
/// Neighbourhoods are indexed in base `|Q|` with the leftmost cell most
/// significant, so for elementary rules the index of `(a, b, c)` is `4a+2b+c`.
#[derive(Clone)]
pub struct Rule {
    state_count: u32,
    radius: usize,
    delta: Delta,
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rule")
            .field("state_count", &self.state_count)
            .field("radius", &self.radius)
            .field("tabulated", &self.is_tabulated())
            .finish()
    }
}

impl Rule {
    /// Dense table rule. The table must have `state_count^(2r+1)` entries.
    pub fn from_table(state_count: u32, radius: usize, table: Vec<State>) -> Result<Rule, CaError> {
        if state_count == 0 || radius == 0 {
            return Err(CaError::InvalidRule("state count and radius must be positive".into()));
        }
        let need = table_size(state_count, radius)
            .ok_or(CaError::ResourceLimit { needed: u64::MAX, cap: DEFAULT_TABLE_CAP })?;
        if table.len() as u64 != need {
            return Err(CaError::InvalidRule(format!(
                "table has {} entries, expected {need}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&s| s >= state_count) {
            return Err(CaError::InvalidState { state: bad, state_count });
        }
        Ok(Rule { state_count, radius, delta: Delta::Table(table.into()) })
    }

    /// Rule given by a function of the neighbourhood. The function must be
    /// total on valid ids and return ids below `state_count`.
    pub fn from_fn<F>(state_count: u32, radius: usize, f: F) -> Rule
    where
        F: Fn(&[State]) -> State + Send + Sync + 'static,
    {
        assert!(state_count > 0 && radius > 0);
        Rule { state_count, radius, delta: Delta::Local(Arc::new(f)) }
    }

    pub fn elementary(number: u8) -> Rule {
        let table = (0..8).map(|i| ((number >> i) & 1) as State).collect();
        Rule::from_table(2, 1, table).expect("elementary table is well formed")
    }

    /// Radius-1 rule that copies the centre cell.
    pub fn identity(state_count: u32) -> Rule {
        Rule::from_fn(state_count, 1, |nb| nb[1])
    }

    pub fn state_count(&self) -> u32 {
        self.state_count
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn width(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn is_tabulated(&self) -> bool {
        matches!(self.delta, Delta::Table(_))
    }

    pub fn table(&self) -> Option<&[State]> {
        match &self.delta {
            Delta::Table(t) => Some(t),
            Delta::Local(_) => None,
        }
    }

    /// Number of neighbourhoods, if it fits in a u64.
    pub fn neighborhood_count(&self) -> Option<u64> {
        table_size(self.state_count, self.radius)
    }

    pub fn apply_local(&self, nb: &[State]) -> Result<State, CaError> {
        if nb.len() != self.width() {
            return Err(CaError::InvalidRule(format!(
                "neighbourhood of length {}, expected {}",
                nb.len(),
                self.width()
            )));
        }
        if let Some(&bad) = nb.iter().find(|&&s| s >= self.state_count) {
            return Err(CaError::InvalidState { state: bad, state_count: self.state_count });
        }
        Ok(self.apply_unchecked(nb))
    }

    /// No bounds checks on the ids; `nb` must have length `2r+1`.
    #[inline]
    pub fn apply_unchecked(&self, nb: &[State]) -> State {
        match &self.delta {
            Delta::Table(t) => t[self.index_of(nb)],
            Delta::Local(f) => f(nb),
        }
    }

    #[inline]
    pub fn index_of(&self, nb: &[State]) -> usize {
        let q = self.state_count as usize;
        nb.iter().fold(0usize, |acc, &s| acc * q + s as usize)
    }

    /// Inverse of [`Rule::index_of`].
    pub fn neighborhood_at(&self, mut index: u64) -> Vec<State> {
        let q = self.state_count as u64;
        let mut nb = vec![0; self.width()];
        for slot in nb.iter_mut().rev() {
            *slot = (index % q) as State;
            index /= q;
        }
        nb
    }

    /// Materialise the rule as a dense table, refusing above `cap` entries.
    pub fn tabulate(&self, cap: u64) -> Result<Rule, CaError> {
        if let Delta::Table(_) = self.delta {
            return Ok(self.clone());
        }
        let need = self.checked_size(cap)?;
        let table = (0..need).map(|i| self.apply_unchecked(&self.neighborhood_at(i))).collect();
        Rule::from_table(self.state_count, self.radius, table)
    }

    pub(crate) fn checked_size(&self, cap: u64) -> Result<u64, CaError> {
        match self.neighborhood_count() {
            Some(n) if n <= cap => Ok(n),
            Some(n) => Err(CaError::ResourceLimit { needed: n, cap }),
            None => Err(CaError::ResourceLimit { needed: u64::MAX, cap }),
        }
    }

    pub fn check_state(&self, s: State) -> Result<(), CaError> {
        if s < self.state_count {
            Ok(())
        } else {
            Err(CaError::InvalidState { state: s, state_count: self.state_count })
        }
    }
}

fn table_size(state_count: u32, radius: usize) -> Option<u64> {
    let w = u32::try_from(2 * radius + 1).ok()?;
    (state_count as u64).checked_pow(w)
}

/// The rule of the `n`-th iterate, as an explicit table of radius `n*r`.
pub fn compose(rule: &Rule, n: usize) -> Result<Rule, CaError> {
    compose_capped(rule, n, DEFAULT_TABLE_CAP)
}

pub fn compose_capped(rule: &Rule, n: usize, cap: u64) -> Result<Rule, CaError> {
    if n == 0 {
        return Err(CaError::InvalidRule("composition order must be positive".into()));
    }
    if n == 1 {
        return rule.tabulate(cap);
    }
    let out = Rule { state_count: rule.state_count, radius: rule.radius * n, delta: rule.delta.clone() };
    let need = out.checked_size(cap)?;
    let w = rule.width();
    let mut table = Vec::with_capacity(need as usize);
    let mut buf = Vec::new();
    for i in 0..need {
        let mut word = out.neighborhood_at(i);
        for _ in 0..n {
            buf.clear();
            buf.extend(word.windows(w).map(|nb| rule.apply_unchecked(nb)));
            std::mem::swap(&mut word, &mut buf);
        }
        debug_assert_eq!(word.len(), 1);
        table.push(word[0]);
    }
    Rule::from_table(rule.state_count, rule.radius * n, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_bits() {
        assert_eq!(Rule::elementary(0).apply_local(&[1, 0, 1]).unwrap(), 0);
        assert_eq!(Rule::elementary(110).apply_local(&[1, 1, 0]).unwrap(), 1);
        assert_eq!(Rule::elementary(110).apply_local(&[1, 1, 1]).unwrap(), 0);
    }

    #[test]
    fn out_of_range_state() {
        let err = Rule::elementary(90).apply_local(&[0, 2, 0]).unwrap_err();
        assert!(matches!(err, CaError::InvalidState { state: 2, state_count: 2 }));
    }

    #[test]
    fn index_roundtrip() {
        let r = Rule::identity(5);
        for i in 0..125 {
            assert_eq!(r.index_of(&r.neighborhood_at(i)) as u64, i);
        }
    }

    #[test]
    fn compose_one_is_same_table() {
        let r = Rule::elementary(30);
        assert_eq!(compose(&r, 1).unwrap().table(), r.table());
    }

    #[test]
    fn compose_rule_128_is_and_of_five() {
        let r2 = compose(&Rule::elementary(128), 2).unwrap();
        assert_eq!(r2.radius(), 2);
        for i in 0..32u64 {
            let nb = r2.neighborhood_at(i);
            let expect = if i == 31 { 1 } else { 0 };
            assert_eq!(r2.apply_local(&nb).unwrap(), expect, "{nb:?}");
        }
    }

    #[test]
    fn compose_rule_90_centre() {
        let r2 = compose(&Rule::elementary(90), 2).unwrap();
        assert_eq!(r2.apply_local(&[0, 0, 1, 0, 0]).unwrap(), 0);
        assert_eq!(r2.apply_local(&[1, 0, 0, 0, 0]).unwrap(), 1);
    }

    #[test]
    fn compose_respects_cap() {
        let r = Rule::identity(16);
        assert!(matches!(compose_capped(&r, 3, 1 << 20), Err(CaError::ResourceLimit { .. })));
    }

    #[test]
    fn tabulate_functional() {
        let r = Rule::from_fn(3, 1, |nb| (nb[0] + nb[2]) % 3).tabulate(DEFAULT_TABLE_CAP).unwrap();
        assert_eq!(r.apply_local(&[2, 0, 2]).unwrap(), 1);
    }
}
