//! Comparing two transducers reduces to the deviation of one, and back.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;

use crate::deviation;
use crate::error::EngineError;
use crate::nft::{Nft, NftBuilder, StateId};
use crate::normalize::{add_eps_self_loops, atomize, fresh_name, trim};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CompareMode {
    Bounded,
    Threshold(BigUint),
    Exact(BigUint),
}

/// Transducer `Z` with `R_Z = {(u, v) | ∃x: (x, u) ∈ R_t1 ∧ (x, v) ∈ R_t2}`.
///
/// Both sides are made input-atomic and given `(ε, ε)` self-loops, so that the synchronous
/// product on the shared input letter (or on `ε`) can simulate any interleaving of the two
/// runs. Only pairs reachable from the initial pair are built and the result is trimmed.
pub fn comparison_to_deviation(t1: &Nft, t2: &Nft) -> Nft {
    let a = add_eps_self_loops(&atomize(t1));
    let b = add_eps_self_loops(&atomize(t2));
    let mut builder = NftBuilder::new(format!("{}x{}", a.name(), b.name()).trim().to_string());
    builder.letters(a.alphabet().iter().chain(b.alphabet()).copied());
    let mut taken = HashSet::new();
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |builder: &mut NftBuilder, q: StateId, p: StateId, queue: &mut VecDeque<(StateId, StateId)>| {
        *ids.entry((q, p)).or_insert_with(|| {
            let id = builder.add_state(fresh_name(&mut taken, &format!("<{},{}>", a.state_name(q), b.state_name(p))));
            builder.set_initial(id, a.is_initial(q) && b.is_initial(p));
            builder.set_final(id, a.is_final(q) && b.is_final(p));
            queue.push_back((q, p));
            id
        })
    };
    for q in a.initials() {
        for p in b.initials() {
            intern(&mut builder, q, p, &mut queue);
        }
    }
    while let Some((q, p)) = queue.pop_front() {
        let src = intern(&mut builder, q, p, &mut queue);
        for &i in a.outgoing(q) {
            let x = a.transition(i);
            for &j in b.outgoing(p) {
                let y = b.transition(j);
                if x.input != y.input {
                    continue;
                }
                let dst = intern(&mut builder, x.dst, y.dst, &mut queue);
                builder.add_transition(src, x.output.clone(), y.output.clone(), dst);
            }
        }
    }
    trim(&builder.build().expect("product of valid transducers is valid"))
}

/// `(t1, t2)` where `t1` is the identity on the domain of `t` and `t2 = t`. Their comparison
/// distance equals the deviation of `t`.
pub fn deviation_to_comparison(t: &Nft) -> (Nft, Nft) {
    let mut builder = t.to_builder();
    let transitions = t
        .transitions()
        .iter()
        .map(|tr| {
            let mut tr = tr.clone();
            tr.output = tr.input.clone();
            tr
        })
        .collect();
    builder.set_transitions(transitions);
    (builder.build().expect("relabelled transducer is valid"), t.clone())
}

/// Decides the comparison problem through the product construction. Domains are assumed equal.
pub fn compare(t1: &Nft, t2: &Nft, mode: &CompareMode, max_configs: usize) -> Result<bool, EngineError> {
    let z = comparison_to_deviation(t1, t2);
    match mode {
        CompareMode::Bounded => deviation::is_bounded(&z, max_configs),
        CompareMode::Threshold(k) => deviation::threshold(&z, k, max_configs),
        CompareMode::Exact(k) => deviation::exact(&z, k, max_configs),
    }
}
