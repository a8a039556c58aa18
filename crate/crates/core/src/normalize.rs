//! Relation-preserving rewrites (trimming, input-atomic form, `(ε, ε)` self-loops) and the
//! two ways of combining transducers used by the gadget constructions.

use std::collections::{HashSet, VecDeque};

use crate::nft::{Nft, NftBuilder, StateId, Transition};
use crate::word::Word;

/// Result of [`trim_with_map`]: the trimmed transducer plus the index correspondences needed to
/// report runs of the trimmed transducer in terms of the original one.
#[derive(Clone, Debug)]
pub struct Trimmed {
    pub nft: Nft,
    /// `state_map[old] = Some(new)` for surviving states.
    pub state_map: Vec<Option<StateId>>,
    /// `transition_origin[new] = old`.
    pub transition_origin: Vec<usize>,
    /// `state_origin[new] = old`.
    pub state_origin: Vec<StateId>,
}

fn bfs(n: usize, seeds: impl Iterator<Item = StateId>, next: impl Fn(StateId) -> Vec<StateId>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(q) = queue.pop_front() {
        for r in next(q) {
            if !seen[r] {
                seen[r] = true;
                queue.push_back(r);
            }
        }
    }
    seen
}

/// States reachable from an initial state.
pub fn accessible(t: &Nft) -> Vec<bool> {
    bfs(t.num_states(), t.initials(), |q| {
        t.outgoing(q).iter().map(|&i| t.transition(i).dst).collect()
    })
}

/// States from which a final state is reachable.
pub fn coaccessible(t: &Nft) -> Vec<bool> {
    bfs(t.num_states(), t.finals(), |q| {
        t.incoming(q).iter().map(|&i| t.transition(i).src).collect()
    })
}

pub fn is_trim(t: &Nft) -> bool {
    let a = accessible(t);
    let c = coaccessible(t);
    (0..t.num_states()).all(|q| a[q] && c[q])
}

pub fn trim(t: &Nft) -> Nft {
    trim_with_map(t).nft
}

pub fn trim_with_map(t: &Nft) -> Trimmed {
    let acc = accessible(t);
    let coacc = coaccessible(t);
    let mut builder = NftBuilder::new(t.name());
    builder.set_alphabet(t.alphabet().to_vec());
    let mut state_map = vec![None; t.num_states()];
    let mut state_origin = Vec::new();
    for q in 0..t.num_states() {
        if acc[q] && coacc[q] {
            let id = builder.add_state(t.state_name(q));
            builder.set_initial(id, t.is_initial(q)).set_final(id, t.is_final(q));
            state_map[q] = Some(id);
            state_origin.push(q);
        }
    }
    let mut transition_origin = Vec::new();
    for (i, tr) in t.transitions().iter().enumerate() {
        if let (Some(src), Some(dst)) = (state_map[tr.src], state_map[tr.dst]) {
            builder.add_transition(src, tr.input.clone(), tr.output.clone(), dst);
            transition_origin.push(i);
        }
    }
    let nft = builder.build().expect("sub-transducer of a valid transducer is valid");
    Trimmed { nft, state_map, transition_origin, state_origin }
}

/// Appends `'` until `base` is not in `taken`, then records it.
pub(crate) fn fresh_name(taken: &mut HashSet<String>, base: &str) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    taken.insert(name.clone());
    name
}

/// Equivalent transducer whose transitions read at most one letter. A transition reading
/// `u = u1…uk` with `k > 1` becomes the chain `(p, u1, v, m1)(m1, u2, ε, m2)…(m_{k-1}, uk, ε, q)`
/// through fresh states named `_t{index}_{offset}`.
pub fn atomize(t: &Nft) -> Nft {
    let mut builder = t.to_builder();
    let mut taken: HashSet<String> = t.state_names().iter().cloned().collect();
    let mut transitions = Vec::with_capacity(t.transitions().len());
    for (i, tr) in t.transitions().iter().enumerate() {
        if tr.input.len() <= 1 {
            transitions.push(tr.clone());
            continue;
        }
        let letters = tr.input.letters();
        let mut prev = tr.src;
        for (k, &letter) in letters.iter().enumerate() {
            let next = if k + 1 == letters.len() {
                tr.dst
            } else {
                builder.add_state(fresh_name(&mut taken, &format!("_t{i}_{}", k + 1)))
            };
            let output = if k == 0 { tr.output.clone() } else { Word::empty() };
            transitions.push(Transition::new(prev, Word::from_letters(vec![letter]), output, next));
            prev = next;
        }
    }
    builder.set_transitions(transitions);
    builder.build().expect("atomized transducer is valid")
}

/// Adds `(q, ε, ε, q)` to every state that lacks one.
pub fn add_eps_self_loops(t: &Nft) -> Nft {
    let mut builder = t.to_builder();
    for q in 0..t.num_states() {
        let lp = Transition::new(q, "", "", q);
        if !builder.has_transition(&lp) {
            builder.push_transition(lp);
        }
    }
    builder.build().expect("adding self-loops keeps the transducer valid")
}

/// Copies the states and transitions of `b` into `builder`, renaming clashing names, and
/// returns the id each state of `b` received. `merge` pins selected states of `b` onto
/// existing ids instead of creating new ones.
fn append_disjoint(
    builder: &mut NftBuilder,
    taken: &mut HashSet<String>,
    b: &Nft,
    merge: impl Fn(StateId) -> Option<StateId>,
) -> Vec<StateId> {
    builder.letters(b.alphabet().iter().copied());
    let ids: Vec<StateId> = (0..b.num_states())
        .map(|q| merge(q).unwrap_or_else(|| builder.add_state(fresh_name(taken, b.state_name(q)))))
        .collect();
    for tr in b.transitions() {
        builder.add_transition(ids[tr.src], tr.input.clone(), tr.output.clone(), ids[tr.dst]);
    }
    ids
}

fn unique<I: Iterator<Item = StateId>>(mut it: I) -> Option<StateId> {
    let first = it.next()?;
    it.next().is_none().then_some(first)
}

/// Transducer for the pairwise concatenation `R_a · R_b`.
///
/// When `a` has a single final state without outgoing transitions and `b` a single initial
/// state without incoming ones, the two are merged. Otherwise every final state of `a` is
/// bridged to every initial state of `b` by an `(ε, ε)` transition.
pub fn concat(a: &Nft, b: &Nft) -> Nft {
    let mut builder = a.to_builder();
    for q in 0..a.num_states() {
        builder.set_final(q, false);
    }
    let mut taken: HashSet<String> = a.state_names().iter().cloned().collect();
    let a_final = unique(a.finals()).filter(|&f| a.outgoing(f).is_empty());
    let b_initial = unique(b.initials()).filter(|&i| b.incoming(i).is_empty());

    match (a_final, b_initial) {
        (Some(f), Some(i)) => {
            let ids = append_disjoint(&mut builder, &mut taken, b, |q| (q == i).then_some(f));
            for q in b.finals() {
                builder.set_final(ids[q], true);
            }
        }
        _ => {
            let ids = append_disjoint(&mut builder, &mut taken, b, |_| None);
            for q in b.finals() {
                builder.set_final(ids[q], true);
            }
            for f in a.finals() {
                for i in b.initials() {
                    builder.add_transition(f, "", "", ids[i]);
                }
            }
        }
    }
    builder.build().expect("concatenation of valid transducers is valid")
}

/// Disjoint union; recognizes `R_a ∪ R_b`.
pub fn union(a: &Nft, b: &Nft) -> Nft {
    let mut builder = a.to_builder();
    let mut taken: HashSet<String> = a.state_names().iter().cloned().collect();
    let ids = append_disjoint(&mut builder, &mut taken, b, |_| None);
    for (q, &id) in ids.iter().enumerate() {
        builder.set_initial(id, b.is_initial(q)).set_final(id, b.is_final(q));
    }
    builder.build().expect("union of valid transducers is valid")
}
