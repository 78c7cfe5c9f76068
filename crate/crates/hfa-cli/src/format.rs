//! The line-oriented automaton text format.
//!
//! ```text
//! # words with an even number of a's
//! kind dfa
//! alphabet a b
//! state {}
//! state {{}}
//! init {}
//! final {}
//! trans {} a {{}}
//! trans {} b {}
//! trans {{}} a {}
//! trans {{}} b {{}}
//! ```
//!
//! Directives: `kind dfa|nfa` (first), `alphabet` (single-character symbols,
//! once, before any `trans`), then any number of `state`, `init`, `final`,
//! `trans <from> <symbol> <to>`, and — for NFAs — `eps <from> <to>` lines.
//! State literals use the brace syntax of HF sets or `#n` for the set with
//! code `n`. A `#` not followed by a digit starts a comment. DFAs need
//! exactly one `init` and at most one `trans` per state and symbol; NFA
//! `trans` lines accumulate targets.
//!
//! Parsing checks only the format; whether the machine satisfies the
//! automaton axioms is a separate question answered by validation, so
//! ill-formed machines (say, a final state that was never declared) can be
//! read and diagnosed.

use std::collections::BTreeSet;
use std::fmt;

use hfa::{Alphabet, Dfa, Hf, Nfa, Symbol};

/// A parsed automaton of either kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Automaton {
    Dfa(Dfa),
    Nfa(Nfa),
}

impl Automaton {
    pub fn state_count(&self) -> usize {
        match self {
            Automaton::Dfa(d) => d.states.len(),
            Automaton::Nfa(n) => n.states.len(),
        }
    }
}

/// Format error, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// Strips a comment: `#` opens one unless immediately followed by a digit
/// (that is the code shorthand `#n`).
fn strip_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'#' && !matches!(bytes.get(i + 1), Some(d) if d.is_ascii_digit()) {
            return &line[..i];
        }
    }
    line
}

struct Builder {
    kind: String,
    alphabet: Option<Alphabet>,
    states: BTreeSet<Hf>,
    init: Vec<Hf>,
    finals: BTreeSet<Hf>,
    dfa_trans: Vec<(Hf, Symbol, Hf)>,
    nfa_trans: Vec<(Hf, Symbol, Hf)>,
    eps: BTreeSet<(Hf, Hf)>,
}

pub fn parse_automaton(text: &str) -> Result<Automaton, ParseError> {
    let mut builder: Option<Builder> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let directive = tokens[0];
        if builder.is_none() {
            if directive != "kind" {
                return Err(err(line_no, "expected 'kind dfa' or 'kind nfa' first"));
            }
            match tokens.get(1) {
                Some(&"dfa") | Some(&"nfa") if tokens.len() == 2 => {
                    builder = Some(Builder {
                        kind: tokens[1].to_string(),
                        alphabet: None,
                        states: BTreeSet::new(),
                        init: Vec::new(),
                        finals: BTreeSet::new(),
                        dfa_trans: Vec::new(),
                        nfa_trans: Vec::new(),
                        eps: BTreeSet::new(),
                    });
                    continue;
                }
                _ => return Err(err(line_no, "kind must be 'dfa' or 'nfa'")),
            }
        }
        let b = builder.as_mut().unwrap();
        match directive {
            "kind" => return Err(err(line_no, "duplicate 'kind' directive")),
            "alphabet" => {
                if b.alphabet.is_some() {
                    return Err(err(line_no, "duplicate 'alphabet' directive"));
                }
                if tokens.len() < 2 {
                    return Err(err(line_no, "alphabet needs at least one symbol"));
                }
                let mut chars = Vec::new();
                for t in &tokens[1..] {
                    let mut cs = t.chars();
                    let c = cs.next().unwrap();
                    if cs.next().is_some() {
                        return Err(err(line_no, format!("symbol '{t}' must be one character")));
                    }
                    chars.push(c);
                }
                b.alphabet = Some(
                    Alphabet::new(chars).map_err(|e| err(line_no, e.to_string()))?,
                );
            }
            "state" | "init" | "final" => {
                if tokens.len() != 2 {
                    return Err(err(line_no, format!("'{directive}' takes one state literal")));
                }
                let value = parse_state(tokens[1], line_no)?;
                match directive {
                    "state" => {
                        b.states.insert(value);
                    }
                    "init" => b.init.push(value),
                    _ => {
                        b.finals.insert(value);
                    }
                }
            }
            "trans" => {
                if tokens.len() != 4 {
                    return Err(err(line_no, "'trans' takes: from symbol to"));
                }
                let alphabet = b
                    .alphabet
                    .as_ref()
                    .ok_or_else(|| err(line_no, "'alphabet' must come before 'trans'"))?;
                let from = parse_state(tokens[1], line_no)?;
                let mut cs = tokens[2].chars();
                let c = cs.next().unwrap();
                if cs.next().is_some() {
                    return Err(err(line_no, format!("symbol '{}' must be one character", tokens[2])));
                }
                let symbol = alphabet
                    .symbol_of(c)
                    .ok_or_else(|| err(line_no, format!("symbol '{c}' is not in the alphabet")))?;
                let to = parse_state(tokens[3], line_no)?;
                if b.kind == "dfa" {
                    if b
                        .dfa_trans
                        .iter()
                        .any(|(f, x, t)| *f == from && *x == symbol && *t != to)
                    {
                        return Err(err(
                            line_no,
                            format!("conflicting transition from {from} on '{c}'"),
                        ));
                    }
                    b.dfa_trans.push((from, symbol, to));
                } else {
                    b.nfa_trans.push((from, symbol, to));
                }
            }
            "eps" => {
                if b.kind != "nfa" {
                    return Err(err(line_no, "'eps' is only allowed in NFAs"));
                }
                if tokens.len() != 3 {
                    return Err(err(line_no, "'eps' takes: from to"));
                }
                let from = parse_state(tokens[1], line_no)?;
                let to = parse_state(tokens[2], line_no)?;
                b.eps.insert((from, to));
            }
            other => return Err(err(line_no, format!("unknown directive '{other}'"))),
        }
    }

    let b = builder.ok_or_else(|| err(1, "empty input; expected 'kind dfa' or 'kind nfa'"))?;
    let last = text.lines().count().max(1);
    let alphabet = b
        .alphabet
        .ok_or_else(|| err(last, "missing 'alphabet' directive"))?;
    if b.kind == "dfa" {
        if b.init.len() != 1 {
            return Err(err(
                last,
                format!("a dfa needs exactly one 'init' line, found {}", b.init.len()),
            ));
        }
        let mut nxt: std::collections::BTreeMap<Hf, std::collections::BTreeMap<Symbol, Hf>> =
            Default::default();
        for (from, symbol, to) in b.dfa_trans {
            nxt.entry(from).or_default().insert(symbol, to);
        }
        Ok(Automaton::Dfa(Dfa {
            alphabet,
            states: b.states,
            init: b.init.into_iter().next().unwrap(),
            finals: b.finals,
            nxt,
        }))
    } else {
        let mut nxt: std::collections::BTreeMap<
            Hf,
            std::collections::BTreeMap<Symbol, BTreeSet<Hf>>,
        > = Default::default();
        for (from, symbol, to) in b.nfa_trans {
            nxt.entry(from)
                .or_default()
                .entry(symbol)
                .or_default()
                .insert(to);
        }
        Ok(Automaton::Nfa(Nfa {
            alphabet,
            states: b.states,
            init: b.init.into_iter().collect(),
            finals: b.finals,
            nxt,
            eps: b.eps,
        }))
    }
}

fn parse_state(token: &str, line: usize) -> Result<Hf, ParseError> {
    Hf::parse(token).map_err(|e| err(line, format!("bad state literal '{token}': {e}")))
}

fn render_alphabet(alphabet: &Alphabet) -> String {
    let chars: Vec<String> = alphabet
        .symbols()
        .map(|s| alphabet.char_of(s).unwrap().to_string())
        .collect();
    format!("alphabet {}", chars.join(" "))
}

pub fn render_dfa(d: &Dfa) -> String {
    let mut out = String::from("kind dfa\n");
    out.push_str(&render_alphabet(&d.alphabet));
    out.push('\n');
    for q in &d.states {
        out.push_str(&format!("state {q}\n"));
    }
    out.push_str(&format!("init {}\n", d.init));
    for q in &d.finals {
        out.push_str(&format!("final {q}\n"));
    }
    for (q, row) in &d.nxt {
        for (&x, t) in row {
            let c = d.alphabet.char_of(x).unwrap_or('?');
            out.push_str(&format!("trans {q} {c} {t}\n"));
        }
    }
    out
}

pub fn render_nfa(n: &Nfa) -> String {
    let mut out = String::from("kind nfa\n");
    out.push_str(&render_alphabet(&n.alphabet));
    out.push('\n');
    for q in &n.states {
        out.push_str(&format!("state {q}\n"));
    }
    for q in &n.init {
        out.push_str(&format!("init {q}\n"));
    }
    for q in &n.finals {
        out.push_str(&format!("final {q}\n"));
    }
    for (q, row) in &n.nxt {
        for (&x, targets) in row {
            let c = n.alphabet.char_of(x).unwrap_or('?');
            for t in targets {
                out.push_str(&format!("trans {q} {c} {t}\n"));
            }
        }
    }
    for (from, to) in &n.eps {
        out.push_str(&format!("eps {from} {to}\n"));
    }
    out
}

pub fn render(a: &Automaton) -> String {
    match a {
        Automaton::Dfa(d) => render_dfa(d),
        Automaton::Nfa(n) => render_nfa(n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hfa::samples;

    #[test]
    fn example_file_parses() {
        let text = "\
# words with an even number of a's
kind dfa
alphabet a b
state {}
state {{}}
init {}
final {}
trans {} a {{}}
trans {} b {}
trans {{}} a {}
trans {{}} b {{}}
";
        let parsed = parse_automaton(text).unwrap();
        assert_eq!(parsed, Automaton::Dfa(samples::even_as()));
    }

    #[test]
    fn round_trip_samples() {
        for automaton in [
            Automaton::Dfa(samples::even_as()),
            Automaton::Dfa(samples::cloned_sink()),
            Automaton::Dfa(samples::exactly_ab()),
            Automaton::Nfa(samples::a_plus()),
            Automaton::Nfa(
                hfa::concatenation(&samples::even_as(), &samples::ends_b()).unwrap(),
            ),
        ] {
            let text = render(&automaton);
            assert_eq!(parse_automaton(&text).unwrap(), automaton, "{text}");
        }
    }

    #[test]
    fn code_shorthand_and_comments() {
        let text = "kind dfa\nalphabet a\nstate #0  # the empty set\nstate #1\ninit #0\ntrans #0 a #1\ntrans #1 a #1\n";
        let Automaton::Dfa(d) = parse_automaton(text).unwrap() else {
            panic!()
        };
        assert!(d.states.contains(&Hf::empty()));
        assert!(d.validate().is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(parse_automaton("state {}\n").unwrap_err().line, 1);
        assert_eq!(
            parse_automaton("kind dfa\nalphabet a\nstate {\n").unwrap_err().line,
            3
        );
        assert_eq!(
            parse_automaton("kind dfa\nalphabet a\nwat {}\n").unwrap_err().line,
            3
        );
        // Conflicting DFA transitions are rejected at parse time.
        let text = "kind dfa\nalphabet a\nstate {}\ninit {}\ntrans {} a {}\ntrans {} a #1\n";
        assert_eq!(parse_automaton(text).unwrap_err().line, 6);
        // eps in a DFA file.
        let text = "kind dfa\nalphabet a\nstate {}\ninit {}\neps {} {}\n";
        assert_eq!(parse_automaton(text).unwrap_err().line, 5);
    }

    #[test]
    fn undeclared_references_parse_but_do_not_validate() {
        let text = "kind dfa\nalphabet a\nstate {}\ninit {}\nfinal #5\ntrans {} a {}\n";
        let Automaton::Dfa(d) = parse_automaton(text).unwrap() else {
            panic!()
        };
        assert!(!d.validate().is_empty());
    }
}
