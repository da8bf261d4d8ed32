//! Sets of words of one length as pruned layered graphs.

use std::collections::{HashMap, HashSet};

use ca_core::State;

use crate::index::InverseIndex;

/// Layer `m` holds the nodes reached after `m` symbols; every node lies on a
/// path from the single root to the last layer.
pub(crate) struct WordDag {
    layers: Vec<Vec<Vec<(State, u32)>>>,
}

impl WordDag {
    pub fn word(w: &[State]) -> WordDag {
        let mut layers: Vec<Vec<Vec<(State, u32)>>> = w.iter().map(|&y| vec![vec![(y, 0)]]).collect();
        layers.push(vec![Vec::new()]);
        WordDag { layers }
    }

    pub fn is_empty(&self) -> bool {
        self.layers[0].is_empty()
    }

    /// Some word on a path, if any.
    pub fn any_word(&self) -> Option<Vec<State>> {
        let mut node = 0usize;
        let mut out = Vec::with_capacity(self.layers.len() - 1);
        for layer in &self.layers[..self.layers.len() - 1] {
            let &(s, next) = layer.get(node)?.first()?;
            out.push(s);
            node = next as usize;
        }
        Some(out)
    }

    /// All words `u` with `F(u)` on a path of `self`, pruned.
    pub fn preimages(&self, index: &InverseIndex) -> WordDag {
        let q = index.state_count();
        let r2 = 2 * index.radius();
        let len = self.layers.len() - 1;
        // first 2r cells: only prefixes of overlaps that start an admissible first neighbourhood
        let mut starts: HashSet<u64> = HashSet::new();
        for &(y, _) in self.layers[0].first().map_or(&[][..], |v| v.as_slice()) {
            starts.extend(index.overlaps(y));
        }
        let prefix_ok: Vec<HashSet<u64>> = (0..=r2)
            .map(|l| starts.iter().map(|&o| o / q.pow((r2 - l) as u32)).collect())
            .collect();
        let mut keys: Vec<Vec<(u32, u64)>> = vec![vec![(0, 0)]];
        let mut layers: Vec<Vec<Vec<(State, u32)>>> = Vec::with_capacity(len + r2 + 1);
        for m in 0..len + r2 {
            let mut ids: HashMap<(u32, u64), u32> = HashMap::new();
            let mut next_keys = Vec::new();
            let mut edges = Vec::with_capacity(keys[m].len());
            for &(d, win) in &keys[m] {
                let mut out = Vec::new();
                let mut add = |s: State, key: (u32, u64), out: &mut Vec<(State, u32)>| {
                    let id = *ids.entry(key).or_insert_with(|| {
                        next_keys.push(key);
                        next_keys.len() as u32 - 1
                    });
                    out.push((s, id));
                };
                if m < r2 {
                    for s in 0..q {
                        let w2 = win * q + s;
                        if prefix_ok[m + 1].contains(&w2) {
                            add(s as State, (d, w2), &mut out);
                        }
                    }
                } else {
                    for &(y, d2) in &self.layers[m - r2][d as usize] {
                        for &s in index.extensions(y, win) {
                            add(s, (d2, index.shift(win, s)), &mut out);
                        }
                    }
                }
                edges.push(out);
            }
            layers.push(edges);
            keys.push(next_keys);
        }
        layers.push(vec![Vec::new(); keys[len + r2].len()]);
        prune(layers)
    }
}

fn prune(mut layers: Vec<Vec<Vec<(State, u32)>>>) -> WordDag {
    let n = layers.len();
    let mut alive: Vec<bool> = vec![true; layers[n - 1].len()];
    let mut remap: Vec<Vec<u32>> = vec![Vec::new(); n];
    remap[n - 1] = (0..alive.len() as u32).collect();
    for m in (0..n - 1).rev() {
        let mut next_alive = vec![false; layers[m].len()];
        for (i, out) in layers[m].iter_mut().enumerate() {
            out.retain(|&(_, t)| alive[t as usize]);
            for e in out.iter_mut() {
                e.1 = remap[m + 1][e.1 as usize];
            }
            next_alive[i] = !out.is_empty();
        }
        let mut k = 0;
        remap[m] = next_alive
            .iter()
            .map(|&a| {
                let id = k;
                k += a as u32;
                id
            })
            .collect();
        let mut idx = 0;
        layers[m].retain(|_| {
            let keep = next_alive[idx];
            idx += 1;
            keep
        });
        alive = next_alive;
    }
    WordDag { layers }
}
