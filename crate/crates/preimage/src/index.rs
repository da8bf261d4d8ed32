use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;

use ca_core::{Rule, State};

use crate::PreimageError;

/// Neighbourhoods grouped by output and by their leading `2r` cells.
///
/// An overlap is a word of length `2r` packed in base `|Q|`.
pub struct InverseIndex {
    q: u64,
    r: usize,
    modulus: u64,
    by_output: HashMap<State, HashMap<u64, Vec<State>>>,
}

impl InverseIndex {
    pub fn build(rule: &Rule) -> Result<InverseIndex, PreimageError> {
        Self::build_filtered(rule, |_| true)
    }

    /// Only outputs accepted by `keep` are indexed; words containing any other
    /// state are then reported as having no preimage.
    pub fn build_filtered(rule: &Rule, keep: impl Fn(State) -> bool) -> Result<InverseIndex, PreimageError> {
        let size = rule.neighborhood_count().filter(|&n| n <= ca_core::DEFAULT_TABLE_CAP).ok_or(
            PreimageError::TooLarge { states: rule.state_count(), radius: rule.radius() },
        )?;
        let q = rule.state_count() as u64;
        let w = rule.width();
        let mut by_output: HashMap<State, HashMap<u64, Vec<State>>> = HashMap::new();
        let mut nb = vec![0; w];
        for i in 0..size {
            // odometer over neighbourhoods in index order
            if i > 0 {
                for slot in nb.iter_mut().rev() {
                    *slot += 1;
                    if (*slot as u64) < q {
                        break;
                    }
                    *slot = 0;
                }
            }
            let y = rule.apply_unchecked(&nb);
            if !keep(y) {
                continue;
            }
            let overlap = nb[..w - 1].iter().fold(0u64, |acc, &s| acc * q + s as u64);
            by_output.entry(y).or_default().entry(overlap).or_default().push(nb[w - 1]);
        }
        Ok(InverseIndex { q, r: rule.radius(), modulus: q.pow(2 * rule.radius() as u32), by_output })
    }

    pub fn radius(&self) -> usize {
        self.r
    }

    pub(crate) fn state_count(&self) -> u64 {
        self.q
    }

    /// Last cells completing `overlap` into a neighbourhood that maps to `y`.
    pub(crate) fn extensions(&self, y: State, overlap: u64) -> &[State] {
        self.by_output.get(&y).and_then(|m| m.get(&overlap)).map_or(&[], |v| v.as_slice())
    }

    /// Overlaps that start some neighbourhood mapping to `y`.
    pub(crate) fn overlaps(&self, y: State) -> impl Iterator<Item = u64> + '_ {
        self.by_output.get(&y).into_iter().flat_map(|m| m.keys().copied())
    }

    pub(crate) fn shift(&self, overlap: u64, s: State) -> u64 {
        self.push(overlap, s)
    }

    fn push(&self, overlap: u64, s: State) -> u64 {
        (overlap * self.q + s as u64) % self.modulus
    }

    fn unpack(&self, mut overlap: u64) -> Vec<State> {
        let mut out = vec![0; 2 * self.r];
        for slot in out.iter_mut().rev() {
            *slot = (overlap % self.q) as State;
            overlap /= self.q;
        }
        out
    }

    /// Forward layers of the de Bruijn search, pruned backward to the
    /// overlaps that lie on a complete path.
    pub fn layers(&self, w: &[State]) -> Layers {
        let mut layers: Vec<HashMap<u64, Vec<(u64, State)>>> = Vec::with_capacity(w.len() + 1);
        let Some(first) = w.first().and_then(|y| self.by_output.get(y)) else {
            return Layers { nodes: Vec::new() };
        };
        layers.push(first.keys().map(|&o| (o, Vec::new())).collect());
        for &y in w {
            let Some(ext) = self.by_output.get(&y) else {
                return Layers { nodes: Vec::new() };
            };
            let mut next: HashMap<u64, Vec<(u64, State)>> = HashMap::new();
            for &o in layers.last().unwrap().keys() {
                if let Some(syms) = ext.get(&o) {
                    for &s in syms {
                        next.entry(self.push(o, s)).or_default().push((o, s));
                    }
                }
            }
            if next.is_empty() {
                return Layers { nodes: Vec::new() };
            }
            layers.push(next);
        }
        // backward pruning
        for i in (1..layers.len()).rev() {
            let alive: std::collections::HashSet<u64> =
                layers[i].values().flat_map(|ps| ps.iter().map(|p| p.0)).collect();
            layers[i - 1].retain(|o, _| alive.contains(o));
        }
        let nodes = layers
            .into_iter()
            .map(|m| {
                let mut v: Vec<(u64, Vec<(u64, State)>)> = m.into_iter().collect();
                v.sort_unstable_by_key(|e| e.0);
                for e in v.iter_mut() {
                    e.1.sort_unstable();
                }
                v
            })
            .collect();
        Layers { nodes }
    }

    pub fn preimages(&self, w: &[State]) -> BTreeSet<Vec<State>> {
        let mut out = BTreeSet::new();
        let _ = self.for_each_preimage(w, &mut |u| {
            out.insert(u.to_vec());
            ControlFlow::<()>::Continue(())
        });
        out
    }

    pub fn count_preimages(&self, w: &[State]) -> u128 {
        let layers = self.layers(w);
        if layers.is_empty() {
            return 0;
        }
        let mut counts: HashMap<u64, u128> = layers.nodes[0].iter().map(|(o, _)| (*o, 1)).collect();
        for layer in &layers.nodes[1..] {
            counts = layer
                .iter()
                .map(|(o, parents)| (*o, parents.iter().map(|(p, _)| counts.get(p).copied().unwrap_or(0)).sum()))
                .collect();
        }
        counts.values().sum()
    }

    /// Calls `f` on every preimage of `w`, in no particular order, until it
    /// breaks.
    pub fn for_each_preimage<B>(
        &self,
        w: &[State],
        f: &mut dyn FnMut(&[State]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let layers = self.layers(w);
        if layers.is_empty() {
            return ControlFlow::Continue(());
        }
        let n = layers.nodes.len() - 1;
        let mut word = vec![0; w.len() + 2 * self.r];
        for (o, _) in &layers.nodes[n] {
            self.walk_back(&layers, n, *o, &mut word, f)?;
        }
        ControlFlow::Continue(())
    }

    fn walk_back<B>(
        &self,
        layers: &Layers,
        i: usize,
        o: u64,
        word: &mut Vec<State>,
        f: &mut dyn FnMut(&[State]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if i == 0 {
            word[..2 * self.r].copy_from_slice(&self.unpack(o));
            return f(word);
        }
        let layer = &layers.nodes[i];
        let idx = layer.binary_search_by_key(&o, |e| e.0).expect("node on a pruned path");
        for &(p, s) in &layer[idx].1 {
            word[2 * self.r + i - 1] = s;
            self.walk_back(layers, i - 1, p, word, f)?;
        }
        ControlFlow::Continue(())
    }
}

/// Pruned layered graph; empty iff the word has no preimage.
pub struct Layers {
    nodes: Vec<Vec<(u64, Vec<(u64, State)>)>>,
}

impl Layers {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// All words `u` of length `|w| + 2r` whose image is `w`.
pub fn preimages_word(rule: &Rule, w: &[State]) -> Result<BTreeSet<Vec<State>>, PreimageError> {
    check_word(rule, w)?;
    Ok(InverseIndex::build(rule)?.preimages(w))
}

pub(crate) fn check_word(rule: &Rule, w: &[State]) -> Result<(), PreimageError> {
    if w.is_empty() {
        return Err(PreimageError::EmptyWord);
    }
    for &s in w {
        rule.check_state(s)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    fn set(words: &[&str]) -> BTreeSet<Vec<State>> {
        words.iter().map(|w| parse_word(w).unwrap()).collect()
    }

    #[test]
    fn identity_centre_projection() {
        let got = preimages_word(&Rule::identity(2), &[1]).unwrap();
        assert_eq!(got, set(&["010", "011", "110", "111"]));
    }

    #[test]
    fn rule_90_zero() {
        let got = preimages_word(&Rule::elementary(90), &[0]).unwrap();
        assert_eq!(got, set(&["000", "010", "101", "111"]));
    }

    #[test]
    fn rule_128_has_no_preimage_of_101() {
        assert!(preimages_word(&Rule::elementary(128), &[1, 0, 1]).unwrap().is_empty());
    }

    #[test]
    fn counts_match_enumeration() {
        let idx = InverseIndex::build(&Rule::elementary(30)).unwrap();
        let w = parse_word("0110").unwrap();
        assert_eq!(idx.count_preimages(&w), idx.preimages(&w).len() as u128);
    }

    #[test]
    fn empty_word_rejected() {
        assert!(matches!(preimages_word(&Rule::elementary(90), &[]), Err(PreimageError::EmptyWord)));
    }
}
