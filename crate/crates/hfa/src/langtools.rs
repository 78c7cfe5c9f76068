//! Language-level tooling: bounded word enumeration, exact equivalence
//! checking with distinguishing words, and a small regular-expression
//! front-end that drives the closure constructions.
//!
//! Bounded enumeration is the universal oracle here: language-level claims
//! about the constructions are checked by comparing accepted word sets up to
//! a length bound. Equivalence, by contrast, is exact — decided through
//! product emptiness — so the two methods can cross-validate each other.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::automata::{Alphabet, AutomataError, Dfa, Nfa, Symbol, Word};
use crate::constructions::{
    complement, concatenation, determinize, intersection, kleene_star, union, PowersetMode,
};
use crate::hfset::Hf;
use crate::minimize::{accessible_states, brzozowski};
use crate::samples;

/// All words of length at most `max_len`, in length-lexicographic order.
pub fn words_upto(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let symbols: Vec<Symbol> = alphabet.symbols().collect();
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * symbols.len());
        for w in &frontier {
            for &s in &symbols {
                let mut longer = w.clone();
                longer.push(s);
                next.push(longer);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The accepted words of length at most `max_len`, in length-lexicographic
/// order.
pub fn dfa_language_upto(m: &Dfa, max_len: usize) -> Result<Vec<Word>, AutomataError> {
    words_upto(&m.alphabet, max_len)
        .into_iter()
        .filter_map(|w| match m.accepts(&w) {
            Ok(true) => Some(Ok(w)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// NFA counterpart of [`dfa_language_upto`].
pub fn nfa_language_upto(n: &Nfa, max_len: usize) -> Result<Vec<Word>, AutomataError> {
    words_upto(&n.alphabet, max_len)
        .into_iter()
        .filter_map(|w| match n.accepts(&w) {
            Ok(true) => Some(Ok(w)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

fn has_accessible_final(m: &Dfa) -> Result<bool, AutomataError> {
    let reachable = accessible_states(m)?;
    Ok(reachable.intersection(&m.finals).next().is_some())
}

/// Exact language equivalence, decided by emptiness of both difference
/// products: `L(a) = L(b)` iff neither `a ∩ b̄` nor `ā ∩ b` reaches a final
/// state.
pub fn equivalent(a: &Dfa, b: &Dfa) -> Result<bool, AutomataError> {
    let a_minus_b = intersection(a, &complement(b)?)?;
    let b_minus_a = intersection(&complement(a)?, b)?;
    Ok(!has_accessible_final(&a_minus_b)? && !has_accessible_final(&b_minus_a)?)
}

/// The length-lexicographically least word accepted by exactly one of the
/// two machines, or `None` when the languages coincide. Breadth-first search
/// over the pair graph, independent of [`equivalent`]'s product construction.
pub fn distinguishing_word(a: &Dfa, b: &Dfa) -> Result<Option<Word>, AutomataError> {
    if a.alphabet != b.alphabet {
        return Err(AutomataError::AlphabetMismatch);
    }
    a.require_valid()?;
    b.require_valid()?;
    let start = (a.init.clone(), b.init.clone());
    let mut seen: BTreeSet<(Hf, Hf)> = BTreeSet::from([start.clone()]);
    let mut queue: VecDeque<((Hf, Hf), Word)> = VecDeque::from([(start, Vec::new())]);
    while let Some(((p, q), word)) = queue.pop_front() {
        if a.finals.contains(&p) != b.finals.contains(&q) {
            return Ok(Some(word));
        }
        for x in a.alphabet.symbols() {
            let next = (a.nxt[&p][&x].clone(), b.nxt[&q][&x].clone());
            if seen.insert(next.clone()) {
                let mut longer = word.clone();
                longer.push(x);
                queue.push_back((next, longer));
            }
        }
    }
    Ok(None)
}

/// Regular expression syntax tree. Alternation and concatenation are
/// binary; unparenthesized runs associate to the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regex {
    /// The empty language, written `∅` or `empty`.
    Empty,
    /// The empty word, written `ε` or `eps`.
    Epsilon,
    Lit(Symbol),
    Concat(Box<Regex>, Box<Regex>),
    Alt(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    /// Fully parenthesized rendering; parsing it back yields the same tree.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        match self {
            Regex::Empty => "∅".to_string(),
            Regex::Epsilon => "ε".to_string(),
            Regex::Lit(s) => alphabet.char_of(*s).unwrap_or('?').to_string(),
            Regex::Concat(l, r) => {
                format!("({}{})", l.render(alphabet), r.render(alphabet))
            }
            Regex::Alt(l, r) => {
                format!("({}|{})", l.render(alphabet), r.render(alphabet))
            }
            Regex::Star(r) => format!("{}*", r.render(alphabet)),
        }
    }
}

/// Error from [`parse_regex`], with the byte offset of the problem.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("offset {offset}: {message}")]
pub struct RegexParseError {
    pub offset: usize,
    pub message: String,
}

struct RegexParser<'a> {
    input: &'a str,
    pos: usize,
    alphabet: &'a Alphabet,
}

/// Parses the grammar
///
/// ```text
/// alt  := cat ('|' cat)*
/// cat  := rep+
/// rep  := atom '*'*
/// atom := symbol | '(' alt ')' | 'ε' | 'eps' | '∅' | 'empty'
/// ```
///
/// Star binds tightest, then concatenation, then alternation. The ASCII
/// keywords `eps` and `empty` take precedence over reading their characters
/// as symbols.
pub fn parse_regex(input: &str, alphabet: &Alphabet) -> Result<Regex, RegexParseError> {
    let mut p = RegexParser {
        input,
        pos: 0,
        alphabet,
    };
    let r = p.alt()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(r)
}

impl<'a> RegexParser<'a> {
    fn err(&self, message: impl Into<String>) -> RegexParseError {
        RegexParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn alt(&mut self) -> Result<Regex, RegexParseError> {
        let mut acc = self.cat()?;
        loop {
            self.skip_ws();
            if self.eat("|") {
                let rhs = self.cat()?;
                acc = Regex::Alt(Box::new(acc), Box::new(rhs));
            } else {
                return Ok(acc);
            }
        }
    }

    fn cat(&mut self) -> Result<Regex, RegexParseError> {
        let mut acc = self.rep()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c != '|' && c != ')' => {
                    let rhs = self.rep()?;
                    acc = Regex::Concat(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn rep(&mut self) -> Result<Regex, RegexParseError> {
        let mut acc = self.atom()?;
        loop {
            self.skip_ws();
            if self.eat("*") {
                acc = Regex::Star(Box::new(acc));
            } else {
                return Ok(acc);
            }
        }
    }

    fn atom(&mut self) -> Result<Regex, RegexParseError> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.alt()?;
            self.skip_ws();
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            return Ok(inner);
        }
        if self.eat("ε") || self.eat("eps") {
            return Ok(Regex::Epsilon);
        }
        if self.eat("∅") || self.eat("empty") {
            return Ok(Regex::Empty);
        }
        match self.peek() {
            Some(c) => match self.alphabet.symbol_of(c) {
                Some(s) => {
                    self.pos += c.len_utf8();
                    Ok(Regex::Lit(s))
                }
                None => Err(self.err(format!("{c:?} is not in the alphabet"))),
            },
            None => Err(self.err("expected an expression")),
        }
    }
}

/// Reference matcher: decides membership directly on the syntax tree by
/// trying every split. Exponential, but independent of the automaton
/// pipeline, which is the point — it is the oracle the compiled DFA is
/// checked against.
pub fn regex_matches(r: &Regex, word: &[Symbol]) -> bool {
    match r {
        Regex::Empty => false,
        Regex::Epsilon => word.is_empty(),
        Regex::Lit(s) => word == [*s],
        Regex::Alt(l, rr) => regex_matches(l, word) || regex_matches(rr, word),
        Regex::Concat(l, rr) => (0..=word.len())
            .any(|i| regex_matches(l, &word[..i]) && regex_matches(rr, &word[i..])),
        Regex::Star(inner) => {
            word.is_empty()
                || (1..=word.len()).any(|i| {
                    regex_matches(inner, &word[..i]) && regex_matches(r, &word[i..])
                })
        }
    }
}

/// Compiles a regex to the canonical minimal DFA for its language.
///
/// Structural recursion over the tree: literals, `ε`, and `∅` become little
/// chain DFAs; alternation goes through the product union; concatenation and
/// star build their ε-NFAs and determinize. Intermediate machines are cut to
/// their accessible parts to keep products small; the final result is
/// minimized with [`brzozowski`].
pub fn compile_regex(r: &Regex, alphabet: &Alphabet) -> Result<Dfa, AutomataError> {
    let raw = compile_node(r, alphabet)?;
    brzozowski(&raw)
}

fn compile_node(r: &Regex, alphabet: &Alphabet) -> Result<Dfa, AutomataError> {
    use crate::minimize::accessible_dfa;
    match r {
        Regex::Empty => Ok(samples::empty_language(alphabet)),
        Regex::Epsilon => Ok(samples::exact_word(alphabet, &[])),
        Regex::Lit(s) => Ok(samples::exact_word(alphabet, &[*s])),
        Regex::Alt(l, rr) => {
            let a = compile_node(l, alphabet)?;
            let b = compile_node(rr, alphabet)?;
            accessible_dfa(&union(&a, &b)?)
        }
        Regex::Concat(l, rr) => {
            let a = compile_node(l, alphabet)?;
            let b = compile_node(rr, alphabet)?;
            accessible_dfa(&determinize(
                &concatenation(&a, &b)?,
                PowersetMode::default(),
            )?)
        }
        Regex::Star(inner) => {
            let a = compile_node(inner, alphabet)?;
            accessible_dfa(&determinize(&kleene_star(&a)?, PowersetMode::default())?)
        }
    }
}

/// Renders a word for messages; the empty word becomes `ε`.
pub fn display_word(alphabet: &Alphabet, word: &[Symbol]) -> String {
    alphabet.render_word(word)
}

impl fmt::Display for Regex {
    /// Display uses `?` for literals without an alphabet; prefer
    /// [`Regex::render`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Empty => write!(f, "∅"),
            Regex::Epsilon => write!(f, "ε"),
            Regex::Lit(s) => write!(f, "{s}"),
            Regex::Concat(l, r) => write!(f, "({l}{r})"),
            Regex::Alt(l, r) => write!(f, "({l}|{r})"),
            Regex::Star(r) => write!(f, "{r}*"),
        }
    }
}
