//! Brute-force ground truth: explicit run enumeration, bounded relation and domain listing,
//! exhaustive SAT.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::deviation::Bounds;
use crate::gadgets::CnfFormula;
use crate::nft::{run_words, stats, Nft, Run, StateId};
use crate::normalize::trim;
use crate::shift::path_to_final;
use crate::word::{hamming_distance, ExtNat, Word};

pub const MAX_SAT_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle scale exceeded: {num_vars} variables (limit {MAX_SAT_VARS})")]
    ScaleExceeded { num_vars: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Largest distance over the accepting runs examined.
    pub max_seen: ExtNat,
    /// Some branch was cut by a limit, so `max_seen` is only a lower bound.
    pub saturated: bool,
    /// A run attaining `max_seen`.
    pub witness: Option<Run>,
}

/// Default enumeration depths: `4·B` transitions and `2·lmax` letters per transition.
pub fn default_limits(t: &Nft) -> (usize, usize) {
    let tr = trim(t);
    let run_len = (4 * Bounds::of(&tr).deviation) as usize;
    (run_len, 2 * run_len * stats(&tr).lmax as usize)
}

/// Aligned prefix of `(u, v)` compared so far, and the unmatched tail of the longer word.
fn split_lag(u: &[char], v: &[char]) -> (u64, bool, Vec<char>) {
    let aligned = u.len().min(v.len());
    let mismatches = u[..aligned].iter().zip(&v[..aligned]).filter(|(a, b)| a != b).count() as u64;
    if u.len() >= v.len() {
        (mismatches, true, u[aligned..].to_vec())
    } else {
        (mismatches, false, v[aligned..].to_vec())
    }
}

type Config = (StateId, bool, Vec<char>);

struct Search<'a> {
    t: &'a Nft,
    max_run_len: usize,
    max_pair_len: usize,
    /// Configurations on the current run, with the aligned mismatch count when first reached.
    on_path: HashMap<Config, (usize, u64)>,
    run: Vec<usize>,
    u: Vec<char>,
    v: Vec<char>,
    best: ExtNat,
    witness: Option<Run>,
    saturated: bool,
    done: bool,
}

impl Search<'_> {
    fn record(&mut self, run: Vec<usize>, d: ExtNat) {
        let better = match &self.witness {
            None => true,
            Some(w) => d > self.best || (d == self.best && run.len() < w.len()),
        };
        if better {
            self.best = d;
            self.witness = Some(Run(run));
        }
        if d == ExtNat::Infinite {
            self.done = true;
        }
    }

    /// A repeated configuration whose loop gained mismatches: repeat the loop until the
    /// distance exceeds `target`, finish the run, and verify it directly.
    fn pump(&mut self, start: usize, closing: usize, target: u64, gain: u64) {
        let q = self.t.transition(closing).dst;
        let Some(tail) = path_to_final(self.t, q) else { return };
        let mut cycle = self.run[start..].to_vec();
        cycle.push(closing);
        let times = (target / gain + 1) as usize;
        let mut run = self.run[..start].to_vec();
        for _ in 0..times {
            run.extend_from_slice(&cycle);
        }
        run.extend_from_slice(&tail.0);
        let run = Run(run);
        let (u, v) = run_words(self.t, &run).expect("pumped run is well formed");
        let d = hamming_distance(&u, &v);
        if d > ExtNat::Finite(target) {
            self.saturated = true;
            self.record(run.0, d);
            self.done = true;
        }
    }

    fn dfs(&mut self, q: StateId, pump_target: u64) {
        if self.t.is_final(q) {
            let d = hamming_distance(&self.u, &self.v);
            self.record(self.run.clone(), d);
            if self.done {
                return;
            }
        }
        for &i in self.t.outgoing(q) {
            let tr = self.t.transition(i);
            if self.run.len() >= self.max_run_len
                || self.u.len() + self.v.len() + tr.length() > self.max_pair_len
            {
                self.saturated = true;
                continue;
            }
            self.u.extend_from_slice(&tr.input);
            self.v.extend_from_slice(&tr.output);
            let (m, input_ahead, lag) = split_lag(&self.u, &self.v);
            let key = (tr.dst, input_ahead, lag);
            match self.on_path.get(&key) {
                Some(&(start, m0)) => {
                    if m > m0 {
                        self.pump(start, i, pump_target, m - m0);
                    }
                }
                None => {
                    self.on_path.insert(key.clone(), (self.run.len() + 1, m));
                    self.run.push(i);
                    self.dfs(tr.dst, pump_target);
                    self.run.pop();
                    self.on_path.remove(&key);
                }
            }
            self.u.truncate(self.u.len() - tr.input.len());
            self.v.truncate(self.v.len() - tr.output.len());
            if self.done {
                return;
            }
        }
    }
}

/// Largest `d(u, v)` over accepting runs of at most `max_run_len` transitions with
/// `|u| + |v| ≤ max_pair_len`.
///
/// A run that comes back to the same state with the same unmatched letters and no new
/// mismatch is not extended: cutting that loop out gives an accepting run with the same
/// distance. When such a loop does add mismatches it is repeated until the distance exceeds
/// the size bound `B`, the resulting run is checked directly, and the search stops with
/// `saturated = true`.
pub fn brute_force_deviation(t: &Nft, max_run_len: usize, max_pair_len: usize) -> OracleResult {
    let pump_target = Bounds::of(&trim(t)).deviation;

    let mut search = Search {
        t,
        max_run_len,
        max_pair_len,
        on_path: HashMap::new(),
        run: Vec::new(),
        u: Vec::new(),
        v: Vec::new(),
        best: ExtNat::Finite(0),
        witness: None,
        saturated: false,
        done: false,
    };
    for q in t.initials() {
        let key = (q, true, Vec::new());
        search.on_path.insert(key.clone(), (0, 0));
        search.dfs(q, pump_target);
        search.on_path.remove(&key);
        if search.done {
            break;
        }
    }
    OracleResult { max_seen: search.best, saturated: search.saturated, witness: search.witness }
}

/// All `(u, v) ∈ R_t` with `|u|, |v| ≤ max_word_len`.
pub fn enumerate_relation(t: &Nft, max_word_len: usize) -> BTreeSet<(Word, Word)> {
    let mut seen: HashSet<(StateId, Word, Word)> = HashSet::new();
    let mut queue = VecDeque::new();
    for q in t.initials() {
        let start = (q, Word::empty(), Word::empty());
        if seen.insert(start.clone()) {
            queue.push_back(start);
        }
    }
    let mut out = BTreeSet::new();
    while let Some((q, u, v)) = queue.pop_front() {
        if t.is_final(q) {
            out.insert((u.clone(), v.clone()));
        }
        for &i in t.outgoing(q) {
            let tr = t.transition(i);
            if u.len() + tr.input.len() > max_word_len || v.len() + tr.output.len() > max_word_len {
                continue;
            }
            let next = (tr.dst, u.concat(&tr.input), v.concat(&tr.output));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    out
}

/// Inputs of length at most `max_word_len` that have some image under `t`.
pub fn enumerate_domain(t: &Nft, max_word_len: usize) -> BTreeSet<Word> {
    let mut seen: HashSet<(StateId, Word)> = HashSet::new();
    let mut queue = VecDeque::new();
    for q in t.initials() {
        if seen.insert((q, Word::empty())) {
            queue.push_back((q, Word::empty()));
        }
    }
    let mut out = BTreeSet::new();
    while let Some((q, u)) = queue.pop_front() {
        if t.is_final(q) {
            out.insert(u.clone());
        }
        for &i in t.outgoing(q) {
            let tr = t.transition(i);
            if u.len() + tr.input.len() > max_word_len {
                continue;
            }
            let next = (tr.dst, u.concat(&tr.input));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    out
}

pub fn domains_equal_upto(t1: &Nft, t2: &Nft, max_word_len: usize) -> bool {
    enumerate_domain(t1, max_word_len) == enumerate_domain(t2, max_word_len)
}

/// Images of every input of length at most `max_input_len`, keeping outputs up to
/// `max_output_len`. The flag is `true` when some output was dropped for being too long.
pub fn images_upto(t: &Nft, max_input_len: usize, max_output_len: usize) -> (BTreeMap<Word, BTreeSet<Word>>, bool) {
    let mut seen: HashSet<(StateId, Word, Word)> = HashSet::new();
    let mut queue = VecDeque::new();
    for q in t.initials() {
        let start = (q, Word::empty(), Word::empty());
        if seen.insert(start.clone()) {
            queue.push_back(start);
        }
    }
    let mut images: BTreeMap<Word, BTreeSet<Word>> = BTreeMap::new();
    let mut truncated = false;
    while let Some((q, u, v)) = queue.pop_front() {
        if t.is_final(q) {
            images.entry(u.clone()).or_default().insert(v.clone());
        }
        for &i in t.outgoing(q) {
            let tr = t.transition(i);
            if u.len() + tr.input.len() > max_input_len {
                continue;
            }
            if v.len() + tr.output.len() > max_output_len {
                truncated = true;
                continue;
            }
            let next = (tr.dst, u.concat(&tr.input), v.concat(&tr.output));
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    (images, truncated)
}

/// `sup d(v1, v2)` over `(x, v1) ∈ R_t1`, `(x, v2) ∈ R_t2` with `|x| ≤ max_input_len`, plus
/// whether some output was cut at `max_output_len`.
pub fn comparison_distance_upto(t1: &Nft, t2: &Nft, max_input_len: usize, max_output_len: usize) -> (ExtNat, bool) {
    let (a, cut_a) = images_upto(t1, max_input_len, max_output_len);
    let (b, cut_b) = images_upto(t2, max_input_len, max_output_len);
    let mut best = ExtNat::Finite(0);
    for (x, outs1) in &a {
        let Some(outs2) = b.get(x) else { continue };
        for v1 in outs1 {
            for v2 in outs2 {
                best = best.max(hamming_distance(v1, v2));
            }
        }
    }
    (best, cut_a || cut_b)
}

/// A satisfying valuation (`valuation[k-1]` is `x_k`), found by trying all `2^n`.
pub fn sat_brute_force(f: &CnfFormula) -> Result<Option<Vec<bool>>, OracleError> {
    let n = f.num_vars();
    if n > MAX_SAT_VARS {
        return Err(OracleError::ScaleExceeded { num_vars: n });
    }
    for mask in 0u32..(1u32 << n) {
        let valuation: Vec<bool> = (0..n).map(|k| mask >> k & 1 == 1).collect();
        if f.evaluate(&valuation) {
            return Ok(Some(valuation));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::gen_family;
    use crate::nft::NftBuilder;

    fn single(input: &str, output: &str) -> Nft {
        let mut b = NftBuilder::new("s");
        b.letters(['a', 'b']);
        let i = b.add_state("i");
        let f = b.add_state("f");
        b.set_initial(i, true).set_final(f, true);
        b.add_transition(i, input, output, f);
        b.build().unwrap()
    }

    fn identity(letter: char) -> Nft {
        let mut b = NftBuilder::new("id");
        b.letters([letter]);
        let p = b.add_state("p");
        b.set_initial(p, true).set_final(p, true);
        b.add_transition(p, letter.to_string(), letter.to_string(), p);
        b.build().unwrap()
    }

    #[test]
    fn family_four_worked_example() {
        let t = gen_family(4).unwrap().nft;
        let r = brute_force_deviation(&t, 24, 48);
        assert_eq!(r.max_seen, ExtNat::Finite(10));
        assert!(!r.saturated);
        let (u, v) = run_words(&t, &r.witness.unwrap()).unwrap();
        assert_eq!((u.to_string(), v.to_string()), ("1001110000".into(), "0110001111".into()));
    }

    #[test]
    fn unbalanced_pair_is_infinite() {
        let r = brute_force_deviation(&single("a", ""), 4, 8);
        assert_eq!(r.max_seen, ExtNat::Infinite);
    }

    #[test]
    fn empty_relation_is_vacuous() {
        let mut b = NftBuilder::new("e");
        b.letter('a');
        let p = b.add_state("p");
        b.set_initial(p, true);
        let t = b.build().unwrap();
        let r = brute_force_deviation(&t, 10, 10);
        assert_eq!(r, OracleResult { max_seen: ExtNat::Finite(0), saturated: false, witness: None });
        assert!(enumerate_relation(&t, 3).is_empty());
    }

    #[test]
    fn mismatch_loop_is_pumped_past_the_bound() {
        let mut b = NftBuilder::new("loop");
        b.letters(['a', 'b']);
        let p = b.add_state("p");
        b.set_initial(p, true).set_final(p, true);
        b.add_transition(p, "a", "b", p);
        let t = b.build().unwrap();
        let (run_len, pair_len) = default_limits(&t);
        let r = brute_force_deviation(&t, run_len, pair_len);
        // B = (0 + 2 + 2) * 1
        assert!(r.max_seen > ExtNat::Finite(4));
        let (u, v) = run_words(&t, &r.witness.unwrap()).unwrap();
        assert_eq!(hamming_distance(&u, &v), r.max_seen);
    }

    #[test]
    fn identity_relation_enumeration() {
        let rel = enumerate_relation(&identity('a'), 2);
        let expected: BTreeSet<(Word, Word)> =
            ["", "a", "aa"].iter().map(|w| (Word::from(*w), Word::from(*w))).collect();
        assert_eq!(rel, expected);
    }

    #[test]
    fn domain_comparison() {
        assert!(!domains_equal_upto(&identity('a'), &identity('b'), 1));
        let t = gen_family(3).unwrap().nft;
        assert!(domains_equal_upto(&t, &trim(&t), 6));
    }

    #[test]
    fn comparison_distance_of_flipped_letter() {
        let (d, cut) = comparison_distance_upto(&single("a", "a"), &single("a", "b"), 6, 12);
        assert_eq!(d, ExtNat::Finite(1));
        assert!(!cut);
    }

    #[test]
    fn sat_examples() {
        let f = CnfFormula::new(1, vec![[1, 1, 1]]).unwrap();
        assert_eq!(sat_brute_force(&f).unwrap(), Some(vec![true]));
        let f = CnfFormula::new(1, vec![[1, 1, 1], [-1, -1, -1]]).unwrap();
        assert_eq!(sat_brute_force(&f).unwrap(), None);
        let f = CnfFormula::new(25, vec![]).unwrap();
        assert_eq!(sat_brute_force(&f), Err(OracleError::ScaleExceeded { num_vars: 25 }));
    }
}
