use std::collections::BTreeSet;
use std::fmt;

use ca_core::{Rule, State};
use rayon::prelude::*;

use crate::index::InverseIndex;
use crate::orphan::OrphanEngine;
use crate::word::{format_word, words_of_length};
use crate::PreimageError;

/// Words of one length that survive `depth` backward steps (the set L_k).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowLanguage {
    pub length: usize,
    pub depth: usize,
    pub words: BTreeSet<Vec<State>>,
}

impl WindowLanguage {
    pub fn is_subset(&self, other: &WindowLanguage) -> bool {
        self.words.is_subset(&other.words)
    }
}

pub fn limit_language_window(rule: &Rule, length: usize, depth: usize) -> Result<WindowLanguage, PreimageError> {
    if length == 0 {
        return Err(PreimageError::EmptyWord);
    }
    let all = words_of_length(rule.state_count(), length)?;
    let words = if depth == 0 {
        all.into_iter().collect()
    } else {
        let engine = OrphanEngine::auto(rule, depth)?;
        all.into_par_iter().filter(|w| !engine.is_orphan(w)).collect::<Vec<_>>().into_iter().collect()
    };
    Ok(WindowLanguage { length, depth, words })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthBalance {
    pub length: usize,
    /// Offending word: the first orphan in numeric order if there is one,
    /// otherwise the first word whose preimage count is off.
    pub violator: Option<(Vec<State>, u128)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceReport {
    pub state_count: u32,
    pub expected: u128,
    pub lengths: Vec<LengthBalance>,
}

impl BalanceReport {
    pub fn is_balanced(&self) -> bool {
        self.lengths.iter().all(|l| l.violator.is_none())
    }

    pub fn first_violator(&self) -> Option<&(Vec<State>, u128)> {
        self.lengths.iter().find_map(|l| l.violator.as_ref())
    }
}

impl fmt::Display for BalanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lengths {
            match &l.violator {
                None => writeln!(f, "length {}: balanced", l.length)?,
                Some((w, k)) => {
                    writeln!(f, "length {}: violator={} count={k}", l.length, format_word(w, self.state_count))?
                }
            }
        }
        Ok(())
    }
}

/// Checks, length by length, that every word has exactly `|Q|^(2r)` preimages.
pub fn balance_check(rule: &Rule, max_len: usize) -> Result<BalanceReport, PreimageError> {
    let index = InverseIndex::build(rule)?;
    let expected = (rule.state_count() as u128).pow(2 * rule.radius() as u32);
    let mut lengths = Vec::with_capacity(max_len);
    for length in 1..=max_len {
        let words = words_of_length(rule.state_count(), length)?;
        let counts: Vec<u128> = words.par_iter().map(|w| index.count_preimages(w)).collect();
        let pick = counts.iter().position(|&c| c == 0).or_else(|| counts.iter().position(|&c| c != expected));
        let violator = pick.map(|i| (words[i].clone(), counts[i]));
        lengths.push(LengthBalance { length, violator });
    }
    Ok(BalanceReport { state_count: rule.state_count(), expected, lengths })
}
