//! Line-oriented text formats: transducers, edge-list digraphs and DIMACS CNF.
//!
//! Transducer files look like
//!
//! ```text
//! nft example
//! alphabet a b
//! state p initial
//! state q final
//! trans p q ab -      # reads "ab", writes the empty word
//! end
//! ```
//!
//! `#` starts a comment anywhere on a line. States must be declared before the transitions
//! that use them. The serializer emits exactly this layout, one space between tokens, with
//! states and transitions in declaration order; its byte length is the size measure used for
//! the shift bound.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::gadgets::{CnfFormula, Digraph};
use crate::nft::{Nft, NftBuilder, NftError};
use crate::word::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: undeclared state '{name}'")]
    UndeclaredState { line: usize, name: String },
    #[error("line {line}: letter {letter:?} is not in the alphabet")]
    LetterNotInAlphabet { line: usize, letter: char },
    #[error("line {line}: letter token '{token}' must be a single character")]
    MultiCharLetter { line: usize, token: String },
    #[error("line {line}: duplicate state '{name}'")]
    DuplicateState { line: usize, name: String },
    #[error("{0}")]
    Invalid(#[from] NftError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Yields `(line number, tokens)` for every non-blank line with comments stripped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub fn parse_nft(text: &str) -> Result<Nft, FormatError> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines.next().ok_or_else(|| syntax(1, "empty input, expected 'nft NAME'"))?;
    let name = match first.strip_prefix("nft") {
        Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => rest.trim(),
        _ => return Err(syntax(first_no, "expected 'nft NAME'")),
    };
    let mut builder = NftBuilder::new(name);
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut alphabet: Option<Vec<char>> = None;
    let mut ended = false;

    for (no, line) in lines {
        if ended {
            return Err(syntax(no, "content after 'end'"));
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap_or("");
        let rest: Vec<&str> = tokens.collect();
        match keyword {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(syntax(no, "alphabet declared twice"));
                }
                if !ids.is_empty() {
                    return Err(syntax(no, "alphabet must precede state declarations"));
                }
                let mut letters = Vec::new();
                for tok in rest {
                    let mut chars = tok.chars();
                    let (Some(c), None) = (chars.next(), chars.next()) else {
                        return Err(FormatError::MultiCharLetter { line: no, token: tok.to_string() });
                    };
                    if c == '-' {
                        return Err(syntax(no, "'-' is reserved for the empty word"));
                    }
                    if letters.contains(&c) {
                        return Err(syntax(no, format!("duplicate letter '{c}'")));
                    }
                    letters.push(c);
                }
                builder.set_alphabet(letters.clone());
                alphabet = Some(letters);
            }
            "state" => {
                if alphabet.is_none() {
                    return Err(syntax(no, "expected 'alphabet' before states"));
                }
                let Some((&state_name, flags)) = rest.split_first() else {
                    return Err(syntax(no, "expected 'state NAME [initial] [final]'"));
                };
                if ids.contains_key(state_name) {
                    return Err(FormatError::DuplicateState { line: no, name: state_name.to_string() });
                }
                let q = builder.add_state(state_name);
                ids.insert(state_name.to_string(), q);
                for &flag in flags {
                    match flag {
                        "initial" => builder.set_initial(q, true),
                        "final" => builder.set_final(q, true),
                        other => return Err(syntax(no, format!("unknown state flag '{other}'"))),
                    };
                }
            }
            "trans" => {
                let Some(letters) = &alphabet else {
                    return Err(syntax(no, "expected 'alphabet' before transitions"));
                };
                let [src, dst, input, output] = rest[..] else {
                    return Err(syntax(no, "expected 'trans SRC DST IN OUT'"));
                };
                let lookup = |name: &str| {
                    ids.get(name)
                        .copied()
                        .ok_or_else(|| FormatError::UndeclaredState { line: no, name: name.to_string() })
                };
                let (src, dst) = (lookup(src)?, lookup(dst)?);
                let input = parse_word(input, letters, no)?;
                let output = parse_word(output, letters, no)?;
                builder.add_transition(src, input, output, dst);
            }
            "end" => {
                if !rest.is_empty() {
                    return Err(syntax(no, "unexpected tokens after 'end'"));
                }
                ended = true;
            }
            "nft" => return Err(syntax(no, "nested 'nft' header")),
            other => return Err(syntax(no, format!("unknown directive '{other}'"))),
        }
    }
    if alphabet.is_none() {
        return Err(syntax(first_no, "missing 'alphabet' line"));
    }
    if !ended {
        return Err(syntax(text.lines().count().max(1), "missing 'end'"));
    }
    Ok(builder.build()?)
}

fn parse_word(token: &str, alphabet: &[char], line: usize) -> Result<Word, FormatError> {
    if token == "-" {
        return Ok(Word::empty());
    }
    token
        .chars()
        .map(|c| {
            if alphabet.contains(&c) {
                Ok(c)
            } else {
                Err(FormatError::LetterNotInAlphabet { line, letter: c })
            }
        })
        .collect()
}

fn word_token(w: &Word) -> String {
    if w.is_empty() {
        "-".to_string()
    } else {
        w.to_string()
    }
}

pub fn serialize_nft(t: &Nft) -> String {
    let mut out = String::new();
    if t.name().is_empty() {
        out.push_str("nft\n");
    } else {
        let _ = writeln!(out, "nft {}", t.name());
    }
    out.push_str("alphabet");
    for c in t.alphabet() {
        let _ = write!(out, " {c}");
    }
    out.push('\n');
    for q in 0..t.num_states() {
        let _ = write!(out, "state {}", t.state_name(q));
        if t.is_initial(q) {
            out.push_str(" initial");
        }
        if t.is_final(q) {
            out.push_str(" final");
        }
        out.push('\n');
    }
    for tr in t.transitions() {
        let _ = writeln!(
            out,
            "trans {} {} {} {}",
            t.state_name(tr.src),
            t.state_name(tr.dst),
            word_token(&tr.input),
            word_token(&tr.output)
        );
    }
    out.push_str("end\n");
    out
}

/// Splits on newlines and `;` so that one-line inputs such as `4; 0 1; s=0; t=3` parse too.
fn digraph_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().flat_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        line.split(';').map(str::trim).filter(|s| !s.is_empty()).map(move |s| (i + 1, s))
    })
}

pub fn parse_digraph(text: &str) -> Result<Digraph, FormatError> {
    let mut lines = digraph_lines(text);
    let (no, first) = lines.next().ok_or_else(|| syntax(1, "empty input, expected vertex count"))?;
    let vertex_count: usize =
        first.parse().map_err(|_| syntax(no, format!("expected vertex count, found '{first}'")))?;
    let mut edges = Vec::new();
    let mut s = None;
    let mut t = None;
    for (no, line) in lines {
        let vertex = |v: &str| -> Result<usize, FormatError> {
            let v: usize = v.trim().parse().map_err(|_| syntax(no, format!("bad vertex '{v}'")))?;
            if v >= vertex_count {
                return Err(syntax(no, format!("vertex {v} out of range 0..{vertex_count}")));
            }
            Ok(v)
        };
        if let Some(v) = line.strip_prefix("s=") {
            s = Some(vertex(v)?);
        } else if let Some(v) = line.strip_prefix("t=") {
            t = Some(vertex(v)?);
        } else {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = parts[..] else {
                return Err(syntax(no, format!("expected edge 'u v', found '{line}'")));
            };
            edges.push((vertex(a)?, vertex(b)?));
        }
    }
    let last = text.lines().count().max(1);
    let s = s.ok_or_else(|| syntax(last, "missing 's=' line"))?;
    let t = t.ok_or_else(|| syntax(last, "missing 't=' line"))?;
    Ok(Digraph { vertex_count, edges, s, t })
}

pub fn serialize_digraph(g: &Digraph) -> String {
    let mut out = format!("{}\n", g.vertex_count);
    for (u, v) in &g.edges {
        let _ = writeln!(out, "{u} {v}");
    }
    let _ = writeln!(out, "s={}", g.s);
    let _ = writeln!(out, "t={}", g.t);
    out
}

/// DIMACS CNF restricted to clauses of exactly three literals.
pub fn parse_cnf(text: &str) -> Result<CnfFormula, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut current_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(syntax(no, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let ["p", "cnf", vars, count] = parts[..] else {
                return Err(syntax(no, "expected 'p cnf VARS CLAUSES'"));
            };
            let vars = vars.parse().map_err(|_| syntax(no, "bad variable count"))?;
            let count = count.parse().map_err(|_| syntax(no, "bad clause count"))?;
            header = Some((vars, count));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(syntax(no, "clause before 'p cnf' line"));
        };
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| syntax(no, format!("bad literal '{tok}'")))?;
            if current.is_empty() {
                current_line = no;
            }
            if lit == 0 {
                let [a, b, c] = current[..] else {
                    return Err(syntax(
                        current_line,
                        format!("clause has {} literals, expected exactly 3", current.len()),
                    ));
                };
                clauses.push([a, b, c]);
                current.clear();
            } else {
                if lit.unsigned_abs() as usize > num_vars {
                    return Err(syntax(no, format!("literal {lit} exceeds variable count {num_vars}")));
                }
                current.push(lit);
            }
        }
    }
    let last = text.lines().count().max(1);
    if !current.is_empty() {
        return Err(syntax(current_line, "unterminated clause (missing 0)"));
    }
    let (num_vars, count) = header.ok_or_else(|| syntax(last, "missing 'p cnf' line"))?;
    if count != clauses.len() {
        return Err(syntax(last, format!("header declares {count} clauses, found {}", clauses.len())));
    }
    CnfFormula::new(num_vars, clauses).map_err(|e| syntax(last, e.to_string()))
}

pub fn serialize_cnf(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars(), f.clauses().len());
    for [a, b, c] in f.clauses() {
        let _ = writeln!(out, "{a} {b} {c} 0");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nft::Transition;

    const SAMPLE: &str = "\
# a comment line
nft sample
alphabet a b
state p initial
state q final   # trailing comment
trans p q - a
trans q q ab b
end
";

    #[test]
    fn parses_sample() {
        let t = parse_nft(SAMPLE).unwrap();
        assert_eq!(t.name(), "sample");
        assert_eq!(t.alphabet(), &['a', 'b']);
        assert_eq!(t.transitions()[0], Transition::new(0, "", "a", 1));
        assert_eq!(t.transitions()[1], Transition::new(1, "ab", "b", 1));
        assert!(t.is_initial(0) && t.is_final(1) && !t.is_final(0));
    }

    #[test]
    fn serialization_round_trips() {
        let t = parse_nft(SAMPLE).unwrap();
        let text = serialize_nft(&t);
        assert_eq!(parse_nft(&text).unwrap(), t);
        assert_eq!(serialize_nft(&parse_nft(&text).unwrap()), text);
    }

    fn err(text: &str) -> FormatError {
        parse_nft(text).unwrap_err()
    }

    #[test]
    fn rejects_malformed_files() {
        assert!(matches!(
            err("nft x\nalphabet a\nstate p\nstate p\nend\n"),
            FormatError::DuplicateState { line: 4, .. }
        ));
        assert!(matches!(
            err("nft x\nalphabet a\nstate p\ntrans p r a a\nend\n"),
            FormatError::UndeclaredState { line: 4, .. }
        ));
        assert!(matches!(
            err("nft x\nalphabet a\nstate p\ntrans p p b a\nend\n"),
            FormatError::LetterNotInAlphabet { line: 4, letter: 'b' }
        ));
        assert!(matches!(err("nft x\nalphabet ab\nend\n"), FormatError::MultiCharLetter { line: 2, .. }));
        assert!(matches!(err("nft x\nalphabet a\nstate p\n"), FormatError::Syntax { .. }));
        assert!(matches!(err("nft x\nalphabet a\nstate p\ntrans p p a\nend\n"), FormatError::Syntax { line: 4, .. }));
        assert!(matches!(err("nft x\nalphabet a\nend\nstate p\n"), FormatError::Syntax { line: 4, .. }));
        assert!(matches!(err("alphabet a\nend\n"), FormatError::Syntax { line: 1, .. }));
    }

    #[test]
    fn parses_digraph_with_semicolons() {
        let g = parse_digraph("4; 0 1; 1 2; s=0; t=3").unwrap();
        assert_eq!(g.vertex_count, 4);
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
        assert_eq!((g.s, g.t), (0, 3));
        assert_eq!(parse_digraph(&serialize_digraph(&g)).unwrap(), g);
        assert!(parse_digraph("2\n0 5\ns=0\nt=1\n").is_err());
        assert!(parse_digraph("2\n0 1\ns=0\n").is_err());
    }

    #[test]
    fn parses_cnf() {
        let f = parse_cnf("c trivial\np cnf 1 1\n1 1 1 0\n").unwrap();
        assert_eq!(f.num_vars(), 1);
        assert_eq!(f.clauses(), &[[1, 1, 1]]);
        let f2 = parse_cnf("p cnf 3 2\n1 -2\n 3 0 -1 -1 -3 0\n").unwrap();
        assert_eq!(f2.clauses(), &[[1, -2, 3], [-1, -1, -3]]);
        assert_eq!(parse_cnf(&serialize_cnf(&f2)).unwrap(), f2);
    }

    #[test]
    fn rejects_short_clauses() {
        let e = parse_cnf("p cnf 2 1\n1 2 0\n").unwrap_err();
        assert!(e.to_string().contains("expected exactly 3"));
        assert!(parse_cnf("p cnf 1 1\n1 2 1 0\n").is_err());
        assert!(parse_cnf("p cnf 1 2\n1 1 1 0\n").is_err());
    }
}
