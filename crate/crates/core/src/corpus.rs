//! Seeded random instances for differential testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gadgets::{CnfFormula, Digraph};
use crate::nft::{Nft, NftBuilder, StateId};
use crate::normalize::trim;
use crate::word::Word;

pub const LETTERS: [char; 2] = ['a', 'b'];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Word {
    (0..len).map(|_| *LETTERS.choose(rng).expect("non-empty alphabet")).collect()
}

/// Input and output lengths with `|in| + |out| ≤ 2`, biased towards one letter each way.
fn random_lengths(rng: &mut impl Rng) -> (usize, usize) {
    const OTHERS: [(usize, usize); 5] = [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2)];
    if rng.gen_bool(0.6) {
        (1, 1)
    } else {
        *OTHERS.choose(rng).expect("non-empty")
    }
}

/// A trimmed transducer over `{a, b}` with at most 5 states, at most 8 transitions and
/// `lmax ≤ 2`. The relation is never empty.
pub fn random_nft(rng: &mut impl Rng, name: &str) -> Nft {
    loop {
        let n = rng.gen_range(1..=5usize);
        let mut b = NftBuilder::new(name);
        b.letters(LETTERS);
        let states: Vec<StateId> = (0..n).map(|i| b.add_state(format!("q{i}"))).collect();
        b.set_initial(states[0], true);
        for &q in &states[1..] {
            if rng.gen_bool(0.15) {
                b.set_initial(q, true);
            }
        }
        for &q in &states {
            if rng.gen_bool(0.35) {
                b.set_final(q, true);
            }
        }
        let last = *states.last().expect("at least one state");
        b.set_final(last, true);
        for _ in 0..rng.gen_range(1..=8) {
            let (li, lo) = random_lengths(rng);
            let src = *states.choose(rng).expect("states");
            let dst = *states.choose(rng).expect("states");
            b.add_transition(src, random_word(rng, li), random_word(rng, lo), dst);
        }
        let t = trim(&b.build().expect("random transducer is valid"));
        if t.num_states() > 0 {
            return t;
        }
    }
}

/// `count` random transducers named `r{seed}_{i}`.
pub fn random_corpus(seed: u64, count: usize) -> Vec<Nft> {
    let mut rng = rng(seed);
    (0..count).map(|i| random_nft(&mut rng, &format!("r{seed}_{i}"))).collect()
}

/// Digraph with 1 to 12 vertices; each ordered pair is an edge with probability drawn from
/// `[0.05, 0.4]`.
pub fn random_digraph(rng: &mut impl Rng) -> Digraph {
    let vertex_count = rng.gen_range(1..=12usize);
    let density = rng.gen_range(0.05..=0.4);
    let mut edges = Vec::new();
    for u in 0..vertex_count {
        for v in 0..vertex_count {
            if u != v && rng.gen_bool(density) {
                edges.push((u, v));
            }
        }
    }
    let s = rng.gen_range(0..vertex_count);
    let t = rng.gen_range(0..vertex_count);
    Digraph { vertex_count, edges, s, t }
}

/// 3-CNF with `1..=max_vars` variables and `1..=max_clauses` clauses.
pub fn random_cnf(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let literal = |rng: &mut dyn rand::RngCore| {
        let v = rng.gen_range(1..=n as i32);
        if rng.gen_bool(0.5) {
            v
        } else {
            -v
        }
    };
    let clauses = (0..m).map(|_| [literal(rng), literal(rng), literal(rng)]).collect();
    CnfFormula::new(n, clauses).expect("literals are in range")
}

/// Two transducers on the same input skeleton (so with equal domains) and independent
/// outputs. Transitions read one or two letters; about half of the skeletons are acyclic.
pub fn random_domain_pair(rng: &mut impl Rng, name: &str) -> (Nft, Nft) {
    loop {
        let n = rng.gen_range(1..=4usize);
        let acyclic = rng.gen_bool(0.5);
        let mut skeleton = Vec::new();
        for _ in 0..rng.gen_range(1..=6) {
            let (src, dst) = if acyclic && n > 1 {
                let a = rng.gen_range(0..n - 1);
                (a, rng.gen_range(a + 1..n))
            } else {
                (rng.gen_range(0..n), rng.gen_range(0..n))
            };
            let len = rng.gen_range(1..=2);
            skeleton.push((src, random_word(rng, len), dst));
        }
        let finals: Vec<bool> = (0..n).map(|q| q == n - 1 || rng.gen_bool(0.3)).collect();
        let side = |suffix: &str, rng: &mut dyn rand::RngCore| {
            let mut b = NftBuilder::new(format!("{name}{suffix}"));
            b.letters(LETTERS);
            let states: Vec<StateId> = (0..n).map(|i| b.add_state(format!("q{i}"))).collect();
            b.set_initial(states[0], true);
            for (q, &f) in finals.iter().enumerate() {
                b.set_final(states[q], f);
            }
            for (src, input, dst) in &skeleton {
                let len = rng.gen_range(0..=2);
                b.add_transition(states[*src], input.clone(), random_word(rng, len), states[*dst]);
                if rng.gen_bool(0.2) {
                    let len = rng.gen_range(0..=2);
                    b.add_transition(states[*src], input.clone(), random_word(rng, len), states[*dst]);
                }
            }
            b.build().expect("random transducer is valid")
        };
        let t1 = side("a", rng);
        let t2 = side("b", rng);
        if trim(&t1).num_states() > 0 {
            return (t1, t2);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize_nft;
    use crate::nft::stats;
    use crate::normalize::is_trim;
    use crate::oracle::domains_equal_upto;

    #[test]
    fn corpus_respects_size_limits() {
        for t in random_corpus(7, 200) {
            assert!(is_trim(&t));
            assert!(t.num_states() >= 1 && t.num_states() <= 5);
            assert!(t.transitions().len() <= 8);
            assert!(stats(&t).lmax <= 2);
            assert_eq!(t.alphabet(), &LETTERS);
        }
    }

    #[test]
    fn corpus_is_deterministic() {
        let a: Vec<String> = random_corpus(3, 20).iter().map(serialize_nft).collect();
        let b: Vec<String> = random_corpus(3, 20).iter().map(serialize_nft).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn digraphs_and_formulas_are_well_formed() {
        let mut r = rng(11);
        for _ in 0..100 {
            let g = random_digraph(&mut r);
            g.validate().unwrap();
            assert!(g.vertex_count <= 12);
            let f = random_cnf(&mut r, 5, 6);
            assert!(f.num_vars() <= 5 && f.clauses().len() <= 6);
        }
    }

    #[test]
    fn domain_pairs_share_domains() {
        let mut r = rng(5);
        for i in 0..30 {
            let (t1, t2) = random_domain_pair(&mut r, &format!("d{i}"));
            assert!(domains_equal_upto(&t1, &t2, 6));
        }
    }
}
