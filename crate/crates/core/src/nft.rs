//! Transducers, runs over them, and the size measures used by the deviation bounds.
//!
//! States are dense indices `0..n` into the transducer's state table. Every state also carries
//! a name, which is what the text format shows; names are unique within one [`Nft`].

use std::collections::HashSet;

use thiserror::Error;

use crate::format;
use crate::word::Word;

pub type StateId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NftError {
    #[error("duplicate state name '{0}'")]
    DuplicateState(String),
    #[error("invalid state name '{0}'")]
    InvalidStateName(String),
    #[error("invalid transducer name '{0}'")]
    InvalidName(String),
    #[error("invalid letter {0:?}")]
    InvalidLetter(char),
    #[error("duplicate letter {0:?} in alphabet")]
    DuplicateLetter(char),
    #[error("state {0} does not exist")]
    UnknownState(StateId),
    #[error("letter {letter:?} of transition {transition} is not in the alphabet")]
    LetterNotInAlphabet { transition: usize, letter: char },
    #[error("not a run: transition index {0} is out of range")]
    TransitionOutOfRange(usize),
    #[error("not a run: transition at run position {0} does not start where the previous one ends")]
    BrokenChain(usize),
    #[error("position {position} is outside 1..={len}")]
    PositionOutOfRange { position: usize, len: usize },
}

/// `(src, input, output, dst)`. Either word may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: StateId,
    pub input: Word,
    pub output: Word,
    pub dst: StateId,
}

impl Transition {
    pub fn new(src: StateId, input: impl Into<Word>, output: impl Into<Word>, dst: StateId) -> Self {
        Transition { src, input: input.into(), output: output.into(), dst }
    }

    /// `|input| - |output|`.
    pub fn shift(&self) -> i64 {
        self.input.len() as i64 - self.output.len() as i64
    }

    /// `|input| + |output|`.
    pub fn length(&self) -> usize {
        self.input.len() + self.output.len()
    }

    pub fn is_epsilon(&self) -> bool {
        self.input.is_empty() && self.output.is_empty()
    }
}

/// A non-deterministic finite transducer over a single alphabet shared by inputs and outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nft {
    name: String,
    alphabet: Vec<char>,
    states: Vec<String>,
    initial: Vec<bool>,
    accepting: Vec<bool>,
    transitions: Vec<Transition>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

impl Nft {
    pub fn builder(name: impl Into<String>) -> NftBuilder {
        NftBuilder::new(name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.initial[q]
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn initials(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.initial[q])
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, index: usize) -> &Transition {
        &self.transitions[index]
    }

    /// Indices of transitions leaving `q`, in declaration order.
    pub fn outgoing(&self, q: StateId) -> &[usize] {
        &self.outgoing[q]
    }

    /// Indices of transitions entering `q`, in declaration order.
    pub fn incoming(&self, q: StateId) -> &[usize] {
        &self.incoming[q]
    }

    /// Copy of this transducer with a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Nft {
        let mut out = self.clone();
        out.name = name.into();
        out
    }

    /// Rebuilds the transducer from parts. Used by transformations that keep the state table
    /// but change the transition list.
    pub fn to_builder(&self) -> NftBuilder {
        NftBuilder {
            name: self.name.clone(),
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
            transitions: self.transitions.clone(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct NftBuilder {
    name: String,
    alphabet: Vec<char>,
    states: Vec<String>,
    initial: Vec<bool>,
    accepting: Vec<bool>,
    transitions: Vec<Transition>,
}

impl NftBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        NftBuilder { name: name.into(), ..Default::default() }
    }

    /// Adds `letter` unless it is already present.
    pub fn letter(&mut self, letter: char) -> &mut Self {
        if !self.alphabet.contains(&letter) {
            self.alphabet.push(letter);
        }
        self
    }

    pub fn letters(&mut self, letters: impl IntoIterator<Item = char>) -> &mut Self {
        for l in letters {
            self.letter(l);
        }
        self
    }

    /// Sets the alphabet verbatim; duplicates are reported by [`NftBuilder::build`].
    pub fn set_alphabet(&mut self, letters: Vec<char>) -> &mut Self {
        self.alphabet = letters;
        self
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> StateId {
        self.states.push(name.into());
        self.initial.push(false);
        self.accepting.push(false);
        self.states.len() - 1
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn set_initial(&mut self, q: StateId, value: bool) -> &mut Self {
        self.initial[q] = value;
        self
    }

    pub fn set_final(&mut self, q: StateId, value: bool) -> &mut Self {
        self.accepting[q] = value;
        self
    }

    pub fn is_initial(&self, q: StateId) -> bool {
        self.initial[q]
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn add_transition(
        &mut self,
        src: StateId,
        input: impl Into<Word>,
        output: impl Into<Word>,
        dst: StateId,
    ) -> usize {
        self.transitions.push(Transition::new(src, input, output, dst));
        self.transitions.len() - 1
    }

    pub fn push_transition(&mut self, t: Transition) -> usize {
        self.transitions.push(t);
        self.transitions.len() - 1
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn set_transitions(&mut self, transitions: Vec<Transition>) -> &mut Self {
        self.transitions = transitions;
        self
    }

    pub fn has_transition(&self, t: &Transition) -> bool {
        self.transitions.contains(t)
    }

    /// Validates every structural invariant and freezes the transducer.
    pub fn build(self) -> Result<Nft, NftError> {
        if !valid_nft_name(&self.name) {
            return Err(NftError::InvalidName(self.name));
        }
        let mut seen = HashSet::new();
        for &l in &self.alphabet {
            if !valid_letter(l) {
                return Err(NftError::InvalidLetter(l));
            }
            if !seen.insert(l) {
                return Err(NftError::DuplicateLetter(l));
            }
        }
        let mut names = HashSet::new();
        for name in &self.states {
            if !valid_state_name(name) {
                return Err(NftError::InvalidStateName(name.clone()));
            }
            if !names.insert(name.as_str()) {
                return Err(NftError::DuplicateState(name.clone()));
            }
        }
        let n = self.states.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        for (i, t) in self.transitions.iter().enumerate() {
            for q in [t.src, t.dst] {
                if q >= n {
                    return Err(NftError::UnknownState(q));
                }
            }
            if let Some(&letter) = t.input.iter().chain(t.output.iter()).find(|l| !seen.contains(*l)) {
                return Err(NftError::LetterNotInAlphabet { transition: i, letter });
            }
            outgoing[t.src].push(i);
            incoming[t.dst].push(i);
        }
        Ok(Nft {
            name: self.name,
            alphabet: self.alphabet,
            states: self.states,
            initial: self.initial,
            accepting: self.accepting,
            transitions: self.transitions,
            outgoing,
            incoming,
        })
    }
}

/// Letters are single printable characters; `-` stands for the empty word in the text format.
pub fn valid_letter(c: char) -> bool {
    !c.is_whitespace() && !c.is_control() && c != '-' && c != '#'
}

/// Transducer names may contain inner spaces but no comment marker or line breaks.
pub fn valid_nft_name(name: &str) -> bool {
    name.trim() == name && !name.chars().any(|c| c.is_control() || c == '#')
}

pub fn valid_state_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c.is_control() || c == '#')
}

/// A sequence of transition indices. The empty run is allowed and reads `(ε, ε)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Run(pub Vec<usize>);

impl Run {
    pub fn empty() -> Self {
        Run(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Run) -> Run {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Run(v)
    }

    pub fn repeat(&self, times: usize) -> Run {
        Run(self.0.repeat(times))
    }

    /// Checks chaining and index ranges.
    pub fn validate(&self, t: &Nft) -> Result<(), NftError> {
        let mut prev: Option<StateId> = None;
        for (pos, &i) in self.0.iter().enumerate() {
            let tr = t.transitions.get(i).ok_or(NftError::TransitionOutOfRange(i))?;
            if prev.is_some_and(|p| p != tr.src) {
                return Err(NftError::BrokenChain(pos + 1));
            }
            prev = Some(tr.dst);
        }
        Ok(())
    }

    pub fn source(&self, t: &Nft) -> Option<StateId> {
        self.0.first().map(|&i| t.transitions[i].src)
    }

    pub fn target(&self, t: &Nft) -> Option<StateId> {
        self.0.last().map(|&i| t.transitions[i].dst)
    }

    /// Valid, starts in an initial state and ends in a final one. The empty run is accepting
    /// iff some state is both initial and final.
    pub fn is_accepting(&self, t: &Nft) -> bool {
        if self.validate(t).is_err() {
            return false;
        }
        match (self.source(t), self.target(t)) {
            (Some(s), Some(f)) => t.is_initial(s) && t.is_final(f),
            _ => (0..t.num_states()).any(|q| t.is_initial(q) && t.is_final(q)),
        }
    }

    /// Sum of the transition shifts.
    pub fn shift(&self, t: &Nft) -> i64 {
        self.0.iter().map(|&i| t.transitions[i].shift()).sum()
    }
}

/// Input and output words read along `run`.
pub fn run_words(t: &Nft, run: &Run) -> Result<(Word, Word), NftError> {
    run.validate(t)?;
    let mut u = Word::empty();
    let mut v = Word::empty();
    for &i in run.indices() {
        u.extend_from(&t.transitions[i].input);
        v.extend_from(&t.transitions[i].output);
    }
    Ok((u, v))
}

/// Maps from word positions to the run position of the transition that reads (resp. writes)
/// them. Everything is 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionMaps {
    inn: Vec<usize>,
    out: Vec<usize>,
}

impl PositionMaps {
    /// Run position of the transition reading input letter `i`.
    pub fn inn(&self, i: usize) -> Result<usize, NftError> {
        lookup(&self.inn, i)
    }

    /// Run position of the transition writing output letter `j`.
    pub fn out(&self, j: usize) -> Result<usize, NftError> {
        lookup(&self.out, j)
    }

    pub fn input_len(&self) -> usize {
        self.inn.len()
    }

    pub fn output_len(&self) -> usize {
        self.out.len()
    }
}

fn lookup(map: &[usize], position: usize) -> Result<usize, NftError> {
    if position == 0 || position > map.len() {
        return Err(NftError::PositionOutOfRange { position, len: map.len() });
    }
    Ok(map[position - 1])
}

pub fn run_position_maps(t: &Nft, run: &Run) -> Result<PositionMaps, NftError> {
    run.validate(t)?;
    let mut inn = Vec::new();
    let mut out = Vec::new();
    for (pos, &i) in run.indices().iter().enumerate() {
        let tr = &t.transitions[i];
        inn.extend(std::iter::repeat_n(pos + 1, tr.input.len()));
        out.extend(std::iter::repeat_n(pos + 1, tr.output.len()));
    }
    Ok(PositionMaps { inn, out })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NftStats {
    pub num_states: usize,
    /// Largest `|shift|` of a single transition.
    pub smax: u64,
    /// Largest `|input| + |output|` of a single transition.
    pub lmax: u64,
    /// Byte length of the canonical serialization.
    pub repr_size: u64,
}

pub fn stats(t: &Nft) -> NftStats {
    let smax = t.transitions.iter().map(|tr| tr.shift().unsigned_abs()).max().unwrap_or(0);
    let lmax = t.transitions.iter().map(|tr| tr.length() as u64).max().unwrap_or(0);
    NftStats {
        num_states: t.num_states(),
        smax,
        lmax,
        repr_size: format::serialize_nft(t).len() as u64,
    }
}
