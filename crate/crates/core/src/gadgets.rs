//! Instance generators for the hardness constructions and the quadratic family, each paired
//! with its expected answer.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::nft::{Nft, NftBuilder, StateId, Transition};
use crate::normalize::{concat, union};
use crate::oracle::{sat_brute_force, OracleError};
use crate::word::{ExtNat, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("family parameter must be at least 2, got {0}")]
    FamilyTooSmall(usize),
    #[error("threshold parameter must be at least 1")]
    ZeroThreshold,
    #[error("literal {literal} out of range for {num_vars} variables")]
    LiteralOutOfRange { literal: i32, num_vars: usize },
    #[error("formula needs at least one variable")]
    NoVariables,
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
    pub s: usize,
    pub t: usize,
}

impl Digraph {
    pub fn validate(&self) -> Result<(), GadgetError> {
        let check = |v: usize| {
            if v < self.vertex_count {
                Ok(())
            } else {
                Err(GadgetError::VertexOutOfRange { vertex: v, vertex_count: self.vertex_count })
            }
        };
        check(self.s)?;
        check(self.t)?;
        self.edges.iter().try_for_each(|&(u, v)| check(u).and_then(|_| check(v)))
    }

    /// Whether `t` is reachable from `s`; the empty path counts.
    pub fn reaches(&self) -> bool {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([self.s]);
        seen[self.s] = true;
        while let Some(u) = queue.pop_front() {
            if u == self.t {
                return true;
            }
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        false
    }
}

/// Conjunction of 3-literal clauses. Literal `k` is `x_k`, literal `-k` is `¬x_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self, GadgetError> {
        if num_vars == 0 {
            return Err(GadgetError::NoVariables);
        }
        for &literal in clauses.iter().flatten() {
            if literal == 0 || literal.unsigned_abs() as usize > num_vars {
                return Err(GadgetError::LiteralOutOfRange { literal, num_vars });
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    pub fn evaluate(&self, valuation: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&l| valuation[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// Length of each word accepted by the 3-SAT gadget, `n·(m+1)`.
    pub fn gadget_word_len(&self) -> u64 {
        self.num_vars as u64 * (self.clauses.len() as u64 + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Bounded,
    Threshold(u64),
    Exact(u64),
}

/// What a correct decision procedure must answer on an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTruth {
    pub check: Check,
    pub expected: bool,
    /// The exact deviation when the construction pins it down.
    pub deviation: Option<ExtNat>,
}

impl fmt::Display for GroundTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.check {
            Check::Bounded => write!(f, "check=bounded")?,
            Check::Threshold(k) => write!(f, "check=threshold k={k}")?,
            Check::Exact(k) => write!(f, "check=exact k={k}")?,
        }
        write!(f, " expected={}", self.expected)?;
        if let Some(d) = self.deviation {
            write!(f, " deviation={d}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct GadgetInstance {
    pub nft: Nft,
    pub truth: GroundTruth,
    pub provenance: String,
}

const BITS: [char; 2] = ['0', '1'];

fn bit(b: u64) -> char {
    BITS[(b % 2) as usize]
}

fn negate(c: char) -> char {
    if c == '0' {
        '1'
    } else {
        '0'
    }
}

/// The family `T_n` whose deviation `n(n+1)/2` is quadratic in its size.
///
/// It recognizes `(c_1^{k_1+1}…c_n^{k_n+1}, c_1^{k_1}…c_n^{k_n}·c̄_n^n)` with `c_i = i mod 2`.
pub fn gen_family(n: usize) -> Result<GadgetInstance, GadgetError> {
    if n < 2 {
        return Err(GadgetError::FamilyTooSmall(n));
    }
    let mut b = NftBuilder::new(format!("family{n}"));
    b.letters(BITS);
    let p: Vec<StateId> = (1..=n).map(|i| b.add_state(format!("p{i}"))).collect();
    let q: Vec<StateId> = (1..=n).map(|i| b.add_state(format!("q{i}"))).collect();
    b.set_initial(p[0], true).set_final(q[n - 1], true);
    let c = |i: usize| bit(i as u64).to_string();
    for i in 1..=n {
        b.add_transition(p[i - 1], c(i), c(i), p[i - 1]);
        if i < n {
            b.add_transition(p[i - 1], c(i), "", p[i]);
        }
    }
    let flipped = negate(bit(n as u64)).to_string();
    b.add_transition(p[n - 1], c(n), flipped.as_str(), q[0]);
    for j in 1..n {
        b.add_transition(q[j - 1], "", flipped.as_str(), q[j]);
    }
    let value = (n * (n + 1) / 2) as u64;
    Ok(GadgetInstance {
        nft: b.build().expect("family transducer is valid"),
        truth: GroundTruth { check: Check::Exact(value), expected: true, deviation: Some(ExtNat::Finite(value)) },
        provenance: format!("family n={n}"),
    })
}

/// Graph states plus `qi`, `qf` over `{a, b}`: every path `qi → v → … → w → qf` copies `a`s.
fn reach_skeleton(g: &Digraph, name: &str) -> Result<(NftBuilder, Vec<StateId>, StateId, StateId), GadgetError> {
    g.validate()?;
    let mut b = NftBuilder::new(name);
    b.letters(['a', 'b']);
    let qi = b.add_state("qi");
    let qf = b.add_state("qf");
    let v: Vec<StateId> = (0..g.vertex_count).map(|i| b.add_state(format!("v{i}"))).collect();
    b.set_initial(qi, true).set_final(qf, true);
    for &x in &v {
        b.add_transition(qi, "a", "a", x);
        b.add_transition(x, "a", "a", qf);
    }
    for &(x, y) in &g.edges {
        let tr = Transition::new(v[x], "a", "a", v[y]);
        if !b.has_transition(&tr) {
            b.push_transition(tr);
        }
    }
    Ok((b, v, qi, qf))
}

fn graph_provenance(kind: &str, g: &Digraph) -> String {
    format!("{kind} vertices={} edges={} s={} t={}", g.vertex_count, g.edges.len(), g.s, g.t)
}

/// Bounded deviation iff `t` is unreachable from `s`. The extra transition `(t, a, b, s)`
/// closes every `s → t` path into a mismatching cycle.
pub fn gen_reach_bounded(g: &Digraph) -> Result<GadgetInstance, GadgetError> {
    let (mut b, v, _, _) = reach_skeleton(g, "reach")?;
    b.add_transition(v[g.t], "a", "b", v[g.s]);
    let reachable = g.reaches();
    Ok(GadgetInstance {
        nft: b.build().expect("reachability gadget is valid"),
        truth: GroundTruth {
            check: Check::Bounded,
            expected: !reachable,
            deviation: Some(if reachable { ExtNat::Infinite } else { ExtNat::Finite(1) }),
        },
        provenance: graph_provenance("reach", g),
    })
}

/// Deviation `k` if `t` is unreachable from `s`, `k + 1` otherwise.
pub fn gen_reach_threshold(g: &Digraph, k: usize) -> Result<GadgetInstance, GadgetError> {
    if k == 0 {
        return Err(GadgetError::ZeroThreshold);
    }
    let (mut b, v, qi, qf) = reach_skeleton(g, "reach-k")?;
    b.add_transition(qi, "a".repeat(k).as_str(), "b".repeat(k).as_str(), v[g.s]);
    b.add_transition(v[g.t], "a", "b", qf);
    let reachable = g.reaches();
    let value = k as u64 + u64::from(reachable);
    Ok(GadgetInstance {
        nft: b.build().expect("reachability gadget is valid"),
        truth: GroundTruth {
            check: Check::Threshold(k as u64),
            expected: !reachable,
            deviation: Some(ExtNat::Finite(value)),
        },
        provenance: format!("{} k={k}", graph_provenance("reach-k", g)),
    })
}

/// Line of `n + 1` states `{prefix}0 … {prefix}n`; each step reads (or writes, per `reading`)
/// one bit and writes (reads) nothing.
fn boundary_gadget(n: usize, prefix: &str, reading: bool) -> Nft {
    let mut b = NftBuilder::new(prefix);
    b.letters(BITS);
    let s: Vec<StateId> = (0..=n).map(|j| b.add_state(format!("{prefix}{j}"))).collect();
    b.set_initial(s[0], true).set_final(s[n], true);
    for j in 0..n {
        for c in BITS {
            let w = c.to_string();
            let (input, output) = if reading { (w.as_str(), "") } else { ("", w.as_str()) };
            b.add_transition(s[j], input, output, s[j + 1]);
        }
    }
    b.build().expect("boundary gadget is valid")
}

/// Reads a valuation satisfying the clause and writes its bitwise negation.
fn clause_gadget(n: usize, index: usize, clause: &[i32; 3]) -> Nft {
    let mut b = NftBuilder::new(format!("c{index}"));
    b.letters(BITS);
    let top: Vec<StateId> = (0..=n).map(|j| b.add_state(format!("c{index}_{j}t"))).collect();
    let bot: Vec<StateId> = (0..=n).map(|j| b.add_state(format!("c{index}_{j}f"))).collect();
    b.set_initial(bot[0], true).set_final(top[n], true);
    for layer in [&top, &bot] {
        for j in 0..n {
            for c in BITS {
                b.add_transition(layer[j], c.to_string(), negate(c).to_string(), layer[j + 1]);
            }
        }
    }
    for &literal in clause {
        let k = literal.unsigned_abs() as usize;
        let (read, write) = if literal > 0 { ("1", "0") } else { ("0", "1") };
        let tr = Transition::new(bot[k - 1], read, write, top[k]);
        if !b.has_transition(&tr) {
            b.push_transition(tr);
        }
    }
    b.build().expect("clause gadget is valid")
}

/// Untrimmed chain `T_init · T_1 · … · T_m · T_final` with `(2n+1)(m+1)` states.
fn sat_transducer(f: &CnfFormula) -> Nft {
    let n = f.num_vars();
    let mut t = boundary_gadget(n, "i", false);
    for (i, clause) in f.clauses().iter().enumerate() {
        t = concat(&t, &clause_gadget(n, i + 1, clause));
    }
    concat(&t, &boundary_gadget(n, "e", true)).renamed("3sat")
}

/// `dev > n(m+1) − 1` iff `f` is satisfiable, in which case the deviation is `n(m+1)`.
pub fn gen_3sat(f: &CnfFormula) -> Result<GadgetInstance, GadgetError> {
    let satisfiable = sat_brute_force(f)?.is_some();
    let len = f.gadget_word_len();
    Ok(GadgetInstance {
        nft: sat_transducer(f),
        truth: GroundTruth {
            check: Check::Threshold(len - 1),
            expected: !satisfiable,
            deviation: satisfiable.then_some(ExtNat::Finite(len)),
        },
        provenance: format!("3sat n={} m={}", f.num_vars(), f.clauses().len()),
    })
}

/// `S = T_1^{k_2} · (T_2 ∪ T_3)` whose deviation is exactly `k_1k_2 + k_2 − 1` iff `f1` is
/// satisfiable and `f2` is not. Here `k_i = n_i(m_i + 1)` is the word length of `T_i`.
pub fn gen_sat_unsat(f1: &CnfFormula, f2: &CnfFormula) -> Result<GadgetInstance, GadgetError> {
    let sat1 = sat_brute_force(f1)?.is_some();
    let sat2 = sat_brute_force(f2)?.is_some();
    let k1 = f1.gadget_word_len();
    let k2 = f2.gadget_word_len();
    let t1 = sat_transducer(f1);
    let mut left = t1.clone();
    for _ in 1..k2 {
        left = concat(&left, &t1);
    }
    let mut b = NftBuilder::new("pad");
    b.letters(BITS);
    let x = b.add_state("x0");
    let y = b.add_state("x1");
    b.set_initial(x, true).set_final(y, true);
    let len = (k2 - 1) as usize;
    b.add_transition(x, Word::from("0").repeat(len), Word::from("1").repeat(len), y);
    let t3 = b.build().expect("padding transducer is valid");
    let nft = concat(&left, &union(&sat_transducer(f2), &t3)).renamed("sat-unsat");

    let target = k1 * k2 + k2 - 1;
    let deviation = match (sat1, sat2) {
        (true, true) => Some(ExtNat::Finite(k1 * k2 + k2)),
        (true, false) => Some(ExtNat::Finite(target)),
        (false, _) => None,
    };
    Ok(GadgetInstance {
        nft,
        truth: GroundTruth { check: Check::Exact(target), expected: sat1 && !sat2, deviation },
        provenance: format!("sat-unsat k1={k1} k2={k2}"),
    })
}
