//! State shift potentials.
//!
//! In a trimmed length-preserving transducer every initial run reaching `p` has the same shift
//! `s_p`. Propagating transition shifts breadth-first from the initial states either produces
//! such a potential or exhibits a conflict, and a conflict is exactly a failure of length
//! preservation.

use std::collections::VecDeque;

use crate::error::EngineError;
use crate::nft::{Nft, Run, StateId};
use crate::normalize::is_trim;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShiftConflict {
    /// Two initial runs reach `state` with different shifts.
    Diverging { state: StateId, first: Run, second: Run },
    /// An accepting run ends with a non-zero shift.
    NonzeroFinal { state: StateId, run: Run },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftAssignment {
    /// `s_p` for each state; on conflict, the value first assigned during propagation.
    pub per_state: Vec<i64>,
    pub consistent: bool,
    pub conflict: Option<ShiftConflict>,
}

impl ShiftAssignment {
    pub fn shift(&self, q: StateId) -> i64 {
        self.per_state[q]
    }

    /// Largest `|s_p|`.
    pub fn max_abs(&self) -> u64 {
        self.per_state.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0)
    }

    /// For an inconsistent assignment, an accepting run whose input and output lengths differ.
    pub fn unbalanced_accepting_run(&self, t: &Nft) -> Option<Run> {
        match self.conflict.as_ref()? {
            ShiftConflict::NonzeroFinal { run, .. } => Some(run.clone()),
            ShiftConflict::Diverging { state, first, second } => {
                let tail = path_to_final(t, *state)?;
                // The two completions differ in shift, so at least one is non-zero.
                [first, second]
                    .into_iter()
                    .map(|r| r.concat(&tail))
                    .find(|r| r.shift(t) != 0)
            }
        }
    }
}

/// Shortest run from `from` to some final state, by BFS in transition order.
pub(crate) fn path_to_final(t: &Nft, from: StateId) -> Option<Run> {
    let n = t.num_states();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(q) = queue.pop_front() {
        if t.is_final(q) {
            let mut path = Vec::new();
            let mut cur = q;
            while cur != from {
                let i = parent[cur].expect("BFS parent");
                path.push(i);
                cur = t.transition(i).src;
            }
            path.reverse();
            return Some(Run(path));
        }
        for &i in t.outgoing(q) {
            let d = t.transition(i).dst;
            if !seen[d] {
                seen[d] = true;
                parent[d] = Some(i);
                queue.push_back(d);
            }
        }
    }
    None
}

fn tree_path(t: &Nft, parent: &[Option<usize>], mut q: StateId) -> Run {
    let mut path = Vec::new();
    while let Some(i) = parent[q] {
        path.push(i);
        q = t.transition(i).src;
    }
    path.reverse();
    Run(path)
}

/// Propagates shifts from the initial states. Requires a trimmed transducer.
pub fn shift_assignment(t: &Nft) -> Result<ShiftAssignment, EngineError> {
    if !is_trim(t) {
        return Err(EngineError::NotTrimmed);
    }
    let n = t.num_states();
    let mut value: Vec<Option<i64>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut queue = VecDeque::new();
    for q in t.initials() {
        value[q] = Some(0);
        queue.push_back(q);
    }
    let mut conflict = None;
    'bfs: while let Some(q) = queue.pop_front() {
        let sq = value[q].expect("queued states have a value");
        for &i in t.outgoing(q) {
            let tr = t.transition(i);
            let s = sq + tr.shift();
            match value[tr.dst] {
                None => {
                    value[tr.dst] = Some(s);
                    parent[tr.dst] = Some(i);
                    queue.push_back(tr.dst);
                }
                Some(existing) if existing != s => {
                    let mut second = tree_path(t, &parent, q);
                    second.0.push(i);
                    conflict = Some(ShiftConflict::Diverging {
                        state: tr.dst,
                        first: tree_path(t, &parent, tr.dst),
                        second,
                    });
                    break 'bfs;
                }
                Some(_) => {}
            }
        }
    }
    let per_state: Vec<i64> = value.iter().map(|v| v.unwrap_or(0)).collect();
    if conflict.is_none() {
        conflict = t.finals().find(|&f| per_state[f] != 0).map(|f| ShiftConflict::NonzeroFinal {
            state: f,
            run: tree_path(t, &parent, f),
        });
    }
    Ok(ShiftAssignment { per_state, consistent: conflict.is_none(), conflict })
}
