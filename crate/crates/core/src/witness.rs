//! Bounded witness searches.
//!
//! Each search looks for a short run exhibiting a violation: an accepting run or a cycle that
//! changes length, a cycle whose input and output disagree under the state's alignment, or an
//! accepting run with more than `k` mismatches. The length bounds make a failed search a proof
//! that no violation exists at all, so these procedures decide the same questions as the
//! deviation engine by an independent route.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::deviation::Bounds;
use crate::error::EngineError;
use crate::nft::{run_words, Nft, Run, StateId};
use crate::normalize::is_trim;
use crate::shift::{shift_assignment, ShiftAssignment};

/// Breadth-first search over abstract nodes with parent pointers. Returns the shortest run
/// (as transition indices) from a start node to a node satisfying `accept`, never taking more
/// than `max_depth` transitions. `expand` lists `(transition, successor)` pairs.
fn bfs_run<K, S, E, A>(starts: S, max_depth: usize, expand: E, accept: A) -> Option<(Run, K)>
where
    K: Clone + Eq + Hash,
    S: IntoIterator<Item = K>,
    E: Fn(&K) -> Vec<(usize, K)>,
    A: Fn(&K, usize) -> bool,
{
    let mut parent: HashMap<K, Option<(K, usize)>> = HashMap::new();
    let mut queue = VecDeque::new();
    for s in starts {
        if !parent.contains_key(&s) {
            parent.insert(s.clone(), None);
            queue.push_back((s, 0usize));
        }
    }
    while let Some((node, depth)) = queue.pop_front() {
        if depth == max_depth {
            continue;
        }
        for (i, next) in expand(&node) {
            if parent.contains_key(&next) {
                continue;
            }
            parent.insert(next.clone(), Some((node.clone(), i)));
            if accept(&next, depth + 1) {
                let mut path = Vec::new();
                let mut cur = next.clone();
                while let Some(Some((p, i))) = parent.get(&cur) {
                    path.push(*i);
                    cur = p.clone();
                }
                path.reverse();
                return Some((Run(path), next));
            }
            queue.push_back((next, depth + 1));
        }
    }
    None
}

fn shift_successors(t: &Nft, &(q, s): &(StateId, i64)) -> Vec<(usize, (StateId, i64))> {
    t.outgoing(q).iter().map(|&i| (i, (t.transition(i).dst, s + t.transition(i).shift()))).collect()
}

/// An accepting run of at most `|Q|` transitions whose input and output lengths differ.
pub fn find_short_unbalanced_accepting_run(t: &Nft) -> Option<Run> {
    let starts: Vec<(StateId, i64)> = t.initials().map(|q| (q, 0)).collect();
    // The empty run is balanced, so starting nodes never need to be accepted themselves.
    bfs_run(starts, t.num_states(), |n| shift_successors(t, n), |&(q, s), _| t.is_final(q) && s != 0)
        .map(|(run, _)| run)
}

/// A cycle of at most `|Q|` transitions with non-zero shift, with the state it starts from.
pub fn find_short_unbalanced_cycle(t: &Nft) -> Option<(StateId, Run)> {
    (0..t.num_states()).find_map(|p| {
        bfs_run([(p, 0i64)], t.num_states(), |n| shift_successors(t, n), |&(q, s), _| q == p && s != 0)
            .map(|(run, _)| (p, run))
    })
}

/// Progress towards an input position `i` and output position `j = i + s_p` with `u_i ≠ v_j`.
/// `rem` counts the letters still to be produced on the other side before the partner position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Capture {
    Free,
    WaitOut { letter: char, rem: i64 },
    WaitIn { letter: char, rem: i64 },
    Hit,
}

/// Next capture states after taking a transition reading `inp` and writing `out` from a state
/// with shift `s_q`, relative to the cycle's start `p`. Inside a cycle from `p`, input position
/// `ℓ_r + a` is aligned with output position `ℓ_w + s_q + a`.
fn capture_steps(capture: &Capture, s_q: i64, inp: &[char], out: &[char]) -> Vec<Capture> {
    let (ni, no) = (inp.len() as i64, out.len() as i64);
    match capture {
        Capture::Hit => vec![Capture::Hit],
        Capture::WaitOut { letter, rem } => {
            if *rem <= no {
                if out[(*rem - 1) as usize] != *letter {
                    vec![Capture::Hit]
                } else {
                    vec![]
                }
            } else {
                vec![Capture::WaitOut { letter: *letter, rem: rem - no }]
            }
        }
        Capture::WaitIn { letter, rem } => {
            if *rem <= ni {
                if inp[(*rem - 1) as usize] != *letter {
                    vec![Capture::Hit]
                } else {
                    vec![]
                }
            } else {
                vec![Capture::WaitIn { letter: *letter, rem: rem - ni }]
            }
        }
        Capture::Free => {
            let mut next = vec![Capture::Free];
            for a in 1..=ni {
                let offset = s_q + a;
                let letter = inp[(a - 1) as usize];
                if offset > no {
                    next.push(Capture::WaitOut { letter, rem: offset - no });
                } else if offset >= 1 && out[(offset - 1) as usize] != letter {
                    next.push(Capture::Hit);
                }
            }
            for b in 1..=no {
                let offset = b - s_q;
                if offset > ni {
                    next.push(Capture::WaitIn { letter: out[(b - 1) as usize], rem: offset - ni });
                }
            }
            next.dedup();
            next
        }
    }
}

/// A cycle at some state `p` over `(u, v)` with positions `i`, `j` (1-based) such that
/// `j − i = s_p` and `u_i ≠ v_j`. Only cycles of at most `2|Q| + 2·smax·|Q|²` transitions are
/// searched, which suffices: if none is found, every cycle `(u, v)` at `p` has `u` conjugate to
/// `v` by `s_p`.
pub fn find_nonconjugate_cycle(
    t: &Nft,
    s: &ShiftAssignment,
) -> Result<Option<(StateId, Run, usize, usize)>, EngineError> {
    if !is_trim(t) {
        return Err(EngineError::NotTrimmed);
    }
    if !s.consistent || s.per_state.len() != t.num_states() {
        return Err(EngineError::Precondition("find_nonconjugate_cycle needs a length-preserving transducer"));
    }
    let limit = Bounds::of(t).conjugacy_witness as usize;
    for p in 0..t.num_states() {
        let expand = |(q, c): &(StateId, Capture)| {
            let mut out = Vec::new();
            for &i in t.outgoing(*q) {
                let tr = t.transition(i);
                for next in capture_steps(c, s.shift(*q), &tr.input, &tr.output) {
                    out.push((i, (tr.dst, next)));
                }
            }
            out
        };
        let found = bfs_run([(p, Capture::Free)], limit, expand, |(q, c), _| *q == p && *c == Capture::Hit);
        if let Some((run, _)) = found {
            let (u, v) = run_words(t, &run).expect("search produces valid runs");
            let sp = s.shift(p);
            let (i, j) = (1..=u.len() as i64)
                .map(|i| (i, i + sp))
                .find(|&(i, j)| j >= 1 && j <= v.len() as i64 && u[(i - 1) as usize] != v[(j - 1) as usize])
                .expect("the capture bookkeeping guarantees a misaligned pair");
            return Ok(Some((p, run, i as usize, j as usize)));
        }
    }
    Ok(None)
}

/// Unmatched letters of the longer side. `None` marks a letter whose value is not followed;
/// tracked letters are those guessed to produce a mismatch once their partner arrives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Pending {
    input_ahead: bool,
    letters: Vec<Option<char>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ThresholdNode {
    state: StateId,
    pending: Pending,
    mismatches: u64,
}

fn threshold_steps(node: &ThresholdNode, inp: &[char], out: &[char], goal: u64) -> Vec<(Pending, u64)> {
    let side = |ahead: bool, fresh: &[char]| -> Vec<(Option<char>, bool)> {
        let mut v: Vec<(Option<char>, bool)> = Vec::new();
        if node.pending.input_ahead == ahead {
            v.extend(node.pending.letters.iter().map(|&c| (c, true)));
        }
        v.extend(fresh.iter().map(|&c| (Some(c), false)));
        v
    };
    let ins = side(true, inp);
    let outs = side(false, out);
    let aligned = ins.len().min(outs.len());
    let mut mismatches = node.mismatches;
    for k in 0..aligned {
        let ((a, a_old), (b, b_old)) = (ins[k], outs[k]);
        match (a, b) {
            (Some(x), Some(y)) if x != y => mismatches += 1,
            // A tracked letter was guessed to mismatch; a match refutes the guess.
            (Some(_), Some(_)) if a_old || b_old => return vec![],
            _ => {}
        }
    }
    let mismatches = mismatches.min(goal);
    let (rest, input_ahead) = if ins.len() > aligned { (&ins[aligned..], true) } else { (&outs[aligned..], false) };
    let tracked_old = rest.iter().filter(|(c, old)| *old && c.is_some()).count() as u64;
    let fresh: Vec<usize> = (0..rest.len()).filter(|&k| !rest[k].1).collect();
    let capacity = goal.saturating_sub(mismatches + tracked_old);
    let mut result = Vec::new();
    for mask in 0u32..(1u32 << fresh.len()) {
        if u64::from(mask.count_ones()) > capacity {
            continue;
        }
        let mut letters: Vec<Option<char>> = rest.iter().map(|&(c, _)| c).collect();
        for (bit, &k) in fresh.iter().enumerate() {
            if mask >> bit & 1 == 0 {
                letters[k] = None;
            }
        }
        result.push((Pending { input_ahead: input_ahead || letters.is_empty(), letters }, mismatches));
    }
    result
}

/// An accepting run of at most `8·max(smax, 1)·|Q|³` transitions over `(u, v)` with
/// `d(u, v) > k`.
///
/// Positions are matched as the run progresses. Letters that wait in the lag for their partner
/// are either followed, as a guess that they will mismatch, or forgotten; at most `k + 1`
/// mismatches are ever needed. When `k` is at least the quadratic bound `B` no bounded
/// transducer can exceed it, and the answer is `None` without searching.
pub fn find_threshold_witness(t: &Nft, k: u64) -> Result<Option<Run>, EngineError> {
    let shifts = shift_assignment(t)?;
    if !shifts.consistent {
        return Err(EngineError::Precondition("find_threshold_witness needs a length-preserving transducer"));
    }
    let bounds = Bounds::of(t);
    if k >= bounds.deviation {
        return Ok(None);
    }
    let q = t.num_states() as u64;
    let smax = crate::nft::stats(t).smax.max(1);
    let limit = (8 * smax * q * q * q) as usize;
    let goal = k + 1;
    let starts: Vec<ThresholdNode> = t
        .initials()
        .map(|state| ThresholdNode { state, pending: Pending { input_ahead: true, letters: vec![] }, mismatches: 0 })
        .collect();
    let expand = |node: &ThresholdNode| {
        let mut out = Vec::new();
        for &i in t.outgoing(node.state) {
            let tr = t.transition(i);
            for (pending, mismatches) in threshold_steps(node, &tr.input, &tr.output, goal) {
                out.push((i, ThresholdNode { state: tr.dst, pending, mismatches }));
            }
        }
        out
    };
    let accept =
        |n: &ThresholdNode, _: usize| t.is_final(n.state) && n.pending.letters.is_empty() && n.mismatches >= goal;
    Ok(bfs_run(starts, limit, expand, accept).map(|(run, _)| run))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{gen_3sat, gen_family, gen_reach_bounded, CnfFormula, Digraph};
    use crate::nft::NftBuilder;
    use crate::normalize::trim;
    use crate::word::{hamming_distance, ExtNat};

    fn build(edges: &[(&str, &str, &str, &str)], initial: &str, finals: &[&str]) -> Nft {
        let mut b = NftBuilder::new("w");
        b.letters(['a', 'b']);
        let mut names: Vec<String> = Vec::new();
        let mut id = |b: &mut NftBuilder, n: &str| match names.iter().position(|x| x == n) {
            Some(i) => i,
            None => {
                names.push(n.to_string());
                b.add_state(n)
            }
        };
        let i = id(&mut b, initial);
        b.set_initial(i, true);
        let mut trans = Vec::new();
        for (p, u, v, q) in edges {
            trans.push((id(&mut b, p), *u, *v, id(&mut b, q)));
        }
        for f in finals {
            let f = id(&mut b, f);
            b.set_final(f, true);
        }
        for (p, u, v, q) in trans {
            b.add_transition(p, u, v, q);
        }
        b.build().unwrap()
    }

    fn identity() -> Nft {
        build(&[("p", "a", "a", "p"), ("p", "b", "b", "p")], "p", &["p"])
    }

    #[test]
    fn unbalanced_runs() {
        assert_eq!(find_short_unbalanced_accepting_run(&identity()), None);
        let del = build(&[("i", "a", "", "f")], "i", &["f"]);
        assert_eq!(find_short_unbalanced_accepting_run(&del), Some(Run(vec![0])));
        let t4 = gen_family(4).unwrap().nft;
        assert_eq!(find_short_unbalanced_accepting_run(&t4), None);
        assert_eq!(find_short_unbalanced_cycle(&t4), None);
    }

    #[test]
    fn unbalanced_cycles() {
        let t = build(&[("i", "a", "a", "p"), ("p", "a", "", "p"), ("p", "b", "b", "f")], "i", &["f"]);
        let (p, run) = find_short_unbalanced_cycle(&t).unwrap();
        assert_eq!(t.state_name(p), "p");
        assert_eq!(run, Run(vec![1]));
        let line = build(&[("i", "", "a", "m"), ("m", "", "b", "f")], "i", &["f"]);
        assert_eq!(find_short_unbalanced_cycle(&line), None);
    }

    #[test]
    fn nonconjugate_cycle_in_reachability_gadget() {
        let g = Digraph { vertex_count: 2, edges: vec![(0, 1)], s: 0, t: 1 };
        let t = trim(&gen_reach_bounded(&g).unwrap().nft);
        let s = shift_assignment(&t).unwrap();
        let (p, run, i, j) = find_nonconjugate_cycle(&t, &s).unwrap().unwrap();
        assert_eq!(run.source(&t), Some(p));
        assert_eq!(run.target(&t), Some(p));
        let (u, v) = run_words(&t, &run).unwrap();
        assert_ne!(u[i - 1], v[j - 1]);
        assert!(run.0.iter().any(|&k| t.transition(k).output[..] == ['b']));
    }

    #[test]
    fn conjugate_cycles_are_not_reported() {
        let t4 = gen_family(4).unwrap().nft;
        let s = shift_assignment(&t4).unwrap();
        assert_eq!(find_nonconjugate_cycle(&t4, &s).unwrap(), None);
        let id = identity();
        assert_eq!(find_nonconjugate_cycle(&id, &shift_assignment(&id).unwrap()).unwrap(), None);
    }

    #[test]
    fn nonconjugate_cycle_across_the_lag() {
        // s_p = 1: the loop reads 'a' while writing 'b', so each letter meets a different one.
        let t = build(&[("i", "a", "", "p"), ("p", "a", "b", "p"), ("p", "", "a", "f")], "i", &["f"]);
        let s = shift_assignment(&t).unwrap();
        let (_, run, i, j) = find_nonconjugate_cycle(&t, &s).unwrap().unwrap();
        assert_eq!(j, i + 1);
        let (u, v) = run_words(&t, &run).unwrap();
        assert_ne!(u[i - 1], v[j - 1]);
    }

    #[test]
    fn nonconjugate_needs_length_preservation() {
        let del = build(&[("i", "a", "", "f")], "i", &["f"]);
        let s = shift_assignment(&del).unwrap();
        assert!(matches!(find_nonconjugate_cycle(&del, &s), Err(EngineError::Precondition(_))));
    }

    #[test]
    fn threshold_witness_on_family_four() {
        let t4 = gen_family(4).unwrap().nft;
        let run = find_threshold_witness(&t4, 9).unwrap().unwrap();
        assert!(run.is_accepting(&t4));
        let (u, v) = run_words(&t4, &run).unwrap();
        assert_eq!(hamming_distance(&u, &v), ExtNat::Finite(10));
        assert_eq!(find_threshold_witness(&t4, 10).unwrap(), None);
    }

    #[test]
    fn threshold_witness_encodes_a_satisfying_valuation() {
        let f = CnfFormula::new(2, vec![[1, 2, 2], [-1, -1, 2]]).unwrap();
        let t = trim(&gen_3sat(&f).unwrap().nft);
        let k = f.gadget_word_len() - 1;
        let run = find_threshold_witness(&t, k).unwrap().unwrap();
        let (u, v) = run_words(&t, &run).unwrap();
        assert_eq!(hamming_distance(&u, &v), ExtNat::Finite(k + 1));
        let valuation: Vec<bool> = u[..2].iter().map(|&c| c == '1').collect();
        assert!(f.evaluate(&valuation));
    }

    #[test]
    fn threshold_witness_beyond_quadratic_bound_is_none() {
        let t4 = gen_family(4).unwrap().nft;
        assert_eq!(find_threshold_witness(&t4, 1_000).unwrap(), None);
    }
}
