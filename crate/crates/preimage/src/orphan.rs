use std::ops::ControlFlow;

use ca_core::{compose_capped, Rule, State, DEFAULT_TABLE_CAP};
use rayon::prelude::*;

use crate::dag::WordDag;
use crate::index::{check_word, InverseIndex};
use crate::word::words_of_length;
use crate::PreimageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    /// Order-1 check on the explicit table of the `n`-th iterate.
    Composed,
    /// Preimage sets of the word under one iterate at a time, kept as
    /// layered graphs over overlap states.
    Iterative,
}

/// Answers "is `w` an orphan of order `n`" for a fixed rule and order.
pub struct OrphanEngine {
    kind: EngineKind,
    order: usize,
    index: InverseIndex,
}

impl OrphanEngine {
    pub fn new(rule: &Rule, order: usize, kind: EngineKind) -> Result<OrphanEngine, PreimageError> {
        if order == 0 {
            return Err(PreimageError::ZeroOrder);
        }
        let index = match kind {
            EngineKind::Composed => InverseIndex::build(&compose_capped(rule, order, DEFAULT_TABLE_CAP)?)?,
            EngineKind::Iterative => InverseIndex::build(rule)?,
        };
        Ok(OrphanEngine { kind, order, index })
    }

    /// Composed when the iterate's table fits under the cap, iterative otherwise.
    pub fn auto(rule: &Rule, order: usize) -> Result<OrphanEngine, PreimageError> {
        Self::new(rule, order, Self::pick(rule, order))
    }

    pub fn pick(rule: &Rule, order: usize) -> EngineKind {
        let w = 2 * rule.radius() * order + 1;
        match (rule.state_count() as u64).checked_pow(w as u32) {
            Some(n) if n <= DEFAULT_TABLE_CAP => EngineKind::Composed,
            _ => EngineKind::Iterative,
        }
    }

    /// Iterative engine over a prebuilt index.
    pub fn from_index(index: InverseIndex, order: usize) -> OrphanEngine {
        OrphanEngine { kind: EngineKind::Iterative, order, index }
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_orphan(&self, w: &[State]) -> bool {
        self.witness(w).is_none()
    }

    /// A word `u` with `F^n(u) = w`, if any.
    pub fn witness(&self, w: &[State]) -> Option<Vec<State>> {
        match self.kind {
            EngineKind::Composed => first_preimage(&self.index, w),
            EngineKind::Iterative => {
                let mut dag = WordDag::word(w);
                for _ in 0..self.order {
                    dag = dag.preimages(&self.index);
                    if dag.is_empty() {
                        return None;
                    }
                }
                dag.any_word()
            }
        }
    }
}

fn first_preimage(index: &InverseIndex, w: &[State]) -> Option<Vec<State>> {
    match index.for_each_preimage(w, &mut |u| ControlFlow::Break(u.to_vec())) {
        ControlFlow::Break(u) => Some(u),
        ControlFlow::Continue(()) => None,
    }
}

pub fn is_orphan(rule: &Rule, w: &[State], order: usize) -> Result<bool, PreimageError> {
    check_word(rule, w)?;
    Ok(OrphanEngine::auto(rule, order)?.is_orphan(w))
}

/// Shortest orphan of the given order, smallest in numeric order among
/// those of that length.
pub fn find_min_orphan(rule: &Rule, max_len: usize, order: usize) -> Result<Option<Vec<State>>, PreimageError> {
    let engine = OrphanEngine::auto(rule, order)?;
    find_min_orphan_with(&engine, rule.state_count(), max_len)
}

pub fn find_min_orphan_with(
    engine: &OrphanEngine,
    state_count: u32,
    max_len: usize,
) -> Result<Option<Vec<State>>, PreimageError> {
    for len in 1..=max_len {
        let words = words_of_length(state_count, len)?;
        // find_first keeps the answer independent of scheduling
        if let Some(w) = words.into_par_iter().find_first(|w| engine.is_orphan(w)) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
