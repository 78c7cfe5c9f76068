//! Deterministic and ε-nondeterministic finite automata over HF states.
//!
//! A [`Dfa`] is an alphabet, a finite set of [`Hf`] states, a single initial
//! state, a final-state set, and a transition table that must be total on
//! states × alphabet. An [`Nfa`] has sets of initial states and of transition
//! targets plus an ε-relation; ε-edges may mention arbitrary HF values, the
//! run semantics confines them to actual states.
//!
//! Well-formedness is a checked judgment, not a construction-time guarantee:
//! [`Dfa::validate`]/[`Nfa::validate`] report each broken axiom with a
//! witness, so malformed machines (say, read from a file) can be diagnosed
//! rather than rejected opaquely.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::hfset::Hf;

/// A symbol, identified by its index into the owning [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub usize);

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s{}", self.0)
    }
}

/// A word: a finite sequence of symbols.
pub type Word = Vec<Symbol>;

/// An ordered set of distinct display characters; symbol `i` renders as the
/// `i`-th character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    chars: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(chars: I) -> Result<Alphabet, AutomataError> {
        let chars: Vec<char> = chars.into_iter().collect();
        let mut seen = BTreeSet::new();
        for &c in &chars {
            if !seen.insert(c) {
                return Err(AutomataError::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { chars })
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// All symbols in order.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.chars.len()).map(Symbol)
    }

    pub fn char_of(&self, s: Symbol) -> Option<char> {
        self.chars.get(s.0).copied()
    }

    pub fn symbol_of(&self, c: char) -> Option<Symbol> {
        self.chars.iter().position(|&x| x == c).map(Symbol)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.0 < self.chars.len()
    }

    /// Parses a word, one character per symbol.
    pub fn parse_word(&self, text: &str) -> Result<Word, AutomataError> {
        text.chars()
            .map(|c| self.symbol_of(c).ok_or(AutomataError::CharNotInAlphabet(c)))
            .collect()
    }

    /// Renders a word; the empty word renders as `ε`.
    pub fn render_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.iter()
            .map(|&s| self.char_of(s).unwrap_or('?'))
            .collect()
    }
}

/// Errors from running or combining automata.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomataError {
    #[error("duplicate alphabet symbol {0:?}")]
    DuplicateSymbol(char),
    #[error("character {0:?} is not in the alphabet")]
    CharNotInAlphabet(char),
    #[error("symbol {symbol} is outside the alphabet of size {alphabet_len}")]
    SymbolOutOfRange { symbol: Symbol, alphabet_len: usize },
    #[error("{0} is not a state of the automaton")]
    UnknownState(Hf),
    #[error("{0} is not accessible from the initial state")]
    InaccessibleState(Hf),
    #[error("missing transition from {from} on {symbol}")]
    MissingTransition { from: Hf, symbol: Symbol },
    #[error("the two automata have different alphabets")]
    AlphabetMismatch,
    #[error("automaton fails validation: {}", render_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("full powerset over {states} states exceeds the supported limit of {limit}")]
    PowersetTooLarge { states: usize, limit: usize },
}

fn render_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A broken well-formedness axiom, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyAlphabet,
    InitNotInStates(Hf),
    FinalNotInStates(Hf),
    /// A state × symbol slot with no transition (DFA totality).
    MissingTransition { from: Hf, symbol: Symbol },
    /// A transition leaving the state set.
    TargetNotInStates { from: Hf, symbol: Symbol, target: Hf },
    /// The table mentions a source that is not a state.
    TransitionFromUnknownState(Hf),
    /// The table uses a symbol index outside the alphabet.
    SymbolOutOfRange { from: Hf, symbol: Symbol },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyAlphabet => write!(f, "alphabet is empty"),
            Violation::InitNotInStates(q) => {
                write!(f, "initial state {q} is not in the state set")
            }
            Violation::FinalNotInStates(q) => {
                write!(f, "final state {q} is not in the state set")
            }
            Violation::MissingTransition { from, symbol } => {
                write!(f, "no transition from {from} on {symbol}")
            }
            Violation::TargetNotInStates { from, symbol, target } => {
                write!(
                    f,
                    "transition from {from} on {symbol} leads to {target} outside the state set"
                )
            }
            Violation::TransitionFromUnknownState(q) => {
                write!(f, "transition table mentions {q}, which is not a state")
            }
            Violation::SymbolOutOfRange { from, symbol } => {
                write!(f, "transition from {from} uses {symbol} outside the alphabet")
            }
        }
    }
}

/// A deterministic finite automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: Alphabet,
    pub states: BTreeSet<Hf>,
    pub init: Hf,
    pub finals: BTreeSet<Hf>,
    /// `nxt[q][x]` is the successor of `q` on symbol `x`.
    pub nxt: BTreeMap<Hf, BTreeMap<Symbol, Hf>>,
}

impl Dfa {
    /// Builds a DFA with the transition table given as a function of
    /// state × symbol.
    pub fn from_fn<F>(
        alphabet: Alphabet,
        states: BTreeSet<Hf>,
        init: Hf,
        finals: BTreeSet<Hf>,
        mut next: F,
    ) -> Dfa
    where
        F: FnMut(&Hf, Symbol) -> Hf,
    {
        let mut nxt = BTreeMap::new();
        for q in &states {
            let mut row = BTreeMap::new();
            for x in alphabet.symbols() {
                row.insert(x, next(q, x));
            }
            nxt.insert(q.clone(), row);
        }
        Dfa {
            alphabet,
            states,
            init,
            finals,
            nxt,
        }
    }

    /// Checks the well-formedness axioms; an empty report means the machine
    /// is a DFA proper.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.alphabet.is_empty() {
            out.push(Violation::EmptyAlphabet);
        }
        if !self.states.contains(&self.init) {
            out.push(Violation::InitNotInStates(self.init.clone()));
        }
        for q in &self.finals {
            if !self.states.contains(q) {
                out.push(Violation::FinalNotInStates(q.clone()));
            }
        }
        for q in &self.states {
            let row = self.nxt.get(q);
            for x in self.alphabet.symbols() {
                match row.and_then(|r| r.get(&x)) {
                    None => out.push(Violation::MissingTransition {
                        from: q.clone(),
                        symbol: x,
                    }),
                    Some(t) if !self.states.contains(t) => {
                        out.push(Violation::TargetNotInStates {
                            from: q.clone(),
                            symbol: x,
                            target: t.clone(),
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        for (q, row) in &self.nxt {
            if !self.states.contains(q) {
                out.push(Violation::TransitionFromUnknownState(q.clone()));
            }
            for x in row.keys() {
                if !self.alphabet.contains(*x) {
                    out.push(Violation::SymbolOutOfRange {
                        from: q.clone(),
                        symbol: *x,
                    });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Errors with the violation list unless the machine is well-formed.
    pub fn require_valid(&self) -> Result<(), AutomataError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(AutomataError::Invalid(v))
        }
    }

    /// Single transition step.
    pub fn next(&self, q: &Hf, x: Symbol) -> Result<&Hf, AutomataError> {
        if !self.alphabet.contains(x) {
            return Err(AutomataError::SymbolOutOfRange {
                symbol: x,
                alphabet_len: self.alphabet.len(),
            });
        }
        if !self.states.contains(q) {
            return Err(AutomataError::UnknownState(q.clone()));
        }
        self.nxt
            .get(q)
            .and_then(|row| row.get(&x))
            .ok_or(AutomataError::MissingTransition {
                from: q.clone(),
                symbol: x,
            })
    }

    /// Runs the machine from `q` over `word`: the left fold of the
    /// transition function, so the run over `uv` equals the run over `v`
    /// started where `u` ended.
    pub fn run_from(&self, q: &Hf, word: &[Symbol]) -> Result<Hf, AutomataError> {
        if !self.states.contains(q) {
            return Err(AutomataError::UnknownState(q.clone()));
        }
        let mut cur = q;
        for &x in word {
            cur = self.next(cur, x)?;
        }
        Ok(cur.clone())
    }

    /// Runs from the initial state.
    pub fn run(&self, word: &[Symbol]) -> Result<Hf, AutomataError> {
        self.run_from(&self.init.clone(), word)
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomataError> {
        Ok(self.finals.contains(&self.run(word)?))
    }

    /// The full state sequence of a run from the initial state, one entry
    /// per prefix of `word`.
    pub fn trace(&self, word: &[Symbol]) -> Result<Vec<Hf>, AutomataError> {
        let mut out = vec![self.init.clone()];
        for &x in word {
            let cur = out.last().unwrap();
            out.push(self.next(cur, x)?.clone());
        }
        Ok(out)
    }

    /// Do `u` and `v` drive the machine from the initial state to the same
    /// state? This relation is a right-invariant equivalence of finite index.
    pub fn reaches_same_state(&self, u: &[Symbol], v: &[Symbol]) -> Result<bool, AutomataError> {
        Ok(self.run(u)? == self.run(v)?)
    }

    /// Embeds the DFA as an NFA with singleton transitions and no ε-edges.
    pub fn to_nfa(&self) -> Nfa {
        let mut nxt = BTreeMap::new();
        for (q, row) in &self.nxt {
            let mut new_row = BTreeMap::new();
            for (&x, t) in row {
                new_row.insert(x, BTreeSet::from([t.clone()]));
            }
            nxt.insert(q.clone(), new_row);
        }
        Nfa {
            alphabet: self.alphabet.clone(),
            states: self.states.clone(),
            init: BTreeSet::from([self.init.clone()]),
            finals: self.finals.clone(),
            nxt,
            eps: BTreeSet::new(),
        }
    }
}

/// A nondeterministic finite automaton with ε-transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    pub alphabet: Alphabet,
    pub states: BTreeSet<Hf>,
    pub init: BTreeSet<Hf>,
    pub finals: BTreeSet<Hf>,
    /// `nxt[q][x]` is the target set of `q` on `x`; absent entries mean ∅.
    pub nxt: BTreeMap<Hf, BTreeMap<Symbol, BTreeSet<Hf>>>,
    /// The ε-edge relation. Deliberately unrestricted: pairs may mention
    /// non-states, which the run semantics simply never enters.
    pub eps: BTreeSet<(Hf, Hf)>,
}

impl Nfa {
    /// Well-formedness axioms. ε-edges are not checked against the state
    /// set; they are allowed to mention arbitrary values.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.alphabet.is_empty() {
            out.push(Violation::EmptyAlphabet);
        }
        for q in &self.init {
            if !self.states.contains(q) {
                out.push(Violation::InitNotInStates(q.clone()));
            }
        }
        for q in &self.finals {
            if !self.states.contains(q) {
                out.push(Violation::FinalNotInStates(q.clone()));
            }
        }
        for (q, row) in &self.nxt {
            if !self.states.contains(q) {
                out.push(Violation::TransitionFromUnknownState(q.clone()));
                continue;
            }
            for (&x, targets) in row {
                if !self.alphabet.contains(x) {
                    out.push(Violation::SymbolOutOfRange {
                        from: q.clone(),
                        symbol: x,
                    });
                }
                for t in targets {
                    if !self.states.contains(t) {
                        out.push(Violation::TargetNotInStates {
                            from: q.clone(),
                            symbol: x,
                            target: t.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn require_valid(&self) -> Result<(), AutomataError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(AutomataError::Invalid(v))
        }
    }

    /// Target set of one state on one symbol (∅ when absent).
    pub fn targets(&self, q: &Hf, x: Symbol) -> BTreeSet<Hf> {
        self.nxt
            .get(q)
            .and_then(|row| row.get(&x))
            .cloned()
            .unwrap_or_default()
    }

    /// The reflexive-transitive ε-closure of `set`, confined to machine
    /// states. Members of `set` that are not states still propagate along
    /// ε-edges but do not appear in the result. Idempotent and monotone.
    pub fn eps_closure(&self, set: &BTreeSet<Hf>) -> BTreeSet<Hf> {
        let mut adjacency: BTreeMap<&Hf, Vec<&Hf>> = BTreeMap::new();
        for (from, to) in &self.eps {
            adjacency.entry(from).or_default().push(to);
        }
        let mut visited: BTreeSet<Hf> = set.clone();
        let mut work: Vec<Hf> = set.iter().cloned().collect();
        while let Some(q) = work.pop() {
            if let Some(succs) = adjacency.get(&q) {
                for &t in succs {
                    if visited.insert(t.clone()) {
                        work.push(t.clone());
                    }
                }
            }
        }
        visited.intersection(&self.states).cloned().collect()
    }

    /// Runs from a state set: the ε-closure is taken before every symbol
    /// step and once more at the end, so the result is always ε-closed and
    /// within the state set.
    pub fn run_from(
        &self,
        set: &BTreeSet<Hf>,
        word: &[Symbol],
    ) -> Result<BTreeSet<Hf>, AutomataError> {
        let mut cur = set.clone();
        for &x in word {
            if !self.alphabet.contains(x) {
                return Err(AutomataError::SymbolOutOfRange {
                    symbol: x,
                    alphabet_len: self.alphabet.len(),
                });
            }
            let mut stepped = BTreeSet::new();
            for q in self.eps_closure(&cur) {
                stepped.extend(self.targets(&q, x));
            }
            cur = stepped;
        }
        Ok(self.eps_closure(&cur))
    }

    pub fn run(&self, word: &[Symbol]) -> Result<BTreeSet<Hf>, AutomataError> {
        self.run_from(&self.init.clone(), word)
    }

    pub fn accepts(&self, word: &[Symbol]) -> Result<bool, AutomataError> {
        let reached = self.run(word)?;
        Ok(reached.intersection(&self.finals).next().is_some())
    }

    /// The sequence of ε-closed state sets reached after each prefix.
    pub fn trace(&self, word: &[Symbol]) -> Result<Vec<BTreeSet<Hf>>, AutomataError> {
        let mut out = vec![self.eps_closure(&self.init)];
        for &x in word {
            if !self.alphabet.contains(x) {
                return Err(AutomataError::SymbolOutOfRange {
                    symbol: x,
                    alphabet_len: self.alphabet.len(),
                });
            }
            let cur = out.last().unwrap();
            let mut stepped = BTreeSet::new();
            for q in cur {
                stepped.extend(self.targets(q, x));
            }
            out.push(self.eps_closure(&stepped));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    fn w(m: &Dfa, text: &str) -> Word {
        m.alphabet.parse_word(text).unwrap()
    }

    #[test]
    fn even_as_is_valid_and_runs_as_expected() {
        let m = samples::even_as();
        assert!(m.validate().is_empty());
        assert_eq!(m.run(&w(&m, "")).unwrap(), m.init);
        assert_eq!(m.run(&w(&m, "aa")).unwrap(), Hf::ord_of(0));
        assert_eq!(m.run(&w(&m, "ab")).unwrap(), Hf::ord_of(1));
        assert!(m.accepts(&w(&m, "")).unwrap());
        assert!(!m.accepts(&w(&m, "a")).unwrap());
        assert!(m.accepts(&w(&m, "baab")).unwrap());
    }

    #[test]
    fn validation_reports_witnesses() {
        let mut m = samples::even_as();
        m.finals = BTreeSet::from([Hf::ord_of(5)]);
        let violations = m.validate();
        assert!(violations.contains(&Violation::FinalNotInStates(Hf::ord_of(5))));

        let mut m = samples::even_as();
        let a = m.alphabet.symbol_of('a').unwrap();
        m.nxt
            .get_mut(&Hf::ord_of(1))
            .unwrap()
            .insert(a, Hf::ord_of(9));
        let violations = m.validate();
        assert!(violations.contains(&Violation::TargetNotInStates {
            from: Hf::ord_of(1),
            symbol: a,
            target: Hf::ord_of(9),
        }));
    }

    #[test]
    fn missing_transition_is_reported() {
        let mut m = samples::even_as();
        let b = m.alphabet.symbol_of('b').unwrap();
        m.nxt.get_mut(&Hf::ord_of(0)).unwrap().remove(&b);
        assert!(m.validate().contains(&Violation::MissingTransition {
            from: Hf::ord_of(0),
            symbol: b,
        }));
    }

    #[test]
    fn same_state_relation() {
        let m = samples::even_as();
        assert!(m.reaches_same_state(&w(&m, ""), &w(&m, "aa")).unwrap());
        assert!(m.reaches_same_state(&w(&m, "ba"), &w(&m, "ba")).unwrap());
        assert!(!m.reaches_same_state(&w(&m, "a"), &w(&m, "b")).unwrap());
    }

    #[test]
    fn run_errors_on_bad_inputs() {
        let m = samples::even_as();
        assert_eq!(
            m.run_from(&Hf::ord_of(7), &[]).unwrap_err(),
            AutomataError::UnknownState(Hf::ord_of(7))
        );
        assert!(matches!(
            m.run(&[Symbol(9)]).unwrap_err(),
            AutomataError::SymbolOutOfRange { .. }
        ));
        assert!(matches!(
            m.alphabet.parse_word("az").unwrap_err(),
            AutomataError::CharNotInAlphabet('z')
        ));
    }

    #[test]
    fn a_plus_nfa_runs() {
        let n = samples::a_plus();
        assert!(n.validate().is_empty());
        let a = n.alphabet.parse_word("a").unwrap();
        let aa = n.alphabet.parse_word("aa").unwrap();
        let s0 = Hf::ord_of(0);
        let s1 = Hf::ord_of(1);
        assert_eq!(n.run(&a).unwrap(), BTreeSet::from([s0.clone(), s1.clone()]));
        assert_eq!(n.run(&aa).unwrap(), BTreeSet::from([s0, s1]));
        assert!(!n.accepts(&[]).unwrap());
        assert!(n.accepts(&a).unwrap());
        assert!(n.accepts(&n.alphabet.parse_word("aaa").unwrap()).unwrap());
        assert!(!n.accepts(&n.alphabet.parse_word("ab").unwrap()).unwrap());
    }

    #[test]
    fn empty_word_run_is_the_closure() {
        let n = samples::a_plus();
        assert_eq!(n.run(&[]).unwrap(), n.eps_closure(&n.init));
    }

    #[test]
    fn eps_closure_basics() {
        let n = samples::a_plus();
        // No ε-edges: closure of a subset of states is the subset itself.
        let q = BTreeSet::from([Hf::ord_of(1)]);
        assert_eq!(n.eps_closure(&q), q);
        assert_eq!(n.eps_closure(&BTreeSet::new()), BTreeSet::new());
        // Non-states contribute only what they reach.
        let junk = BTreeSet::from([Hf::ord_of(9)]);
        assert_eq!(n.eps_closure(&junk), BTreeSet::new());
    }

    #[test]
    fn eps_edges_may_mention_non_states() {
        let mut n = samples::a_plus();
        n.eps.insert((Hf::ord_of(9), Hf::ord_of(0)));
        assert!(n.validate().is_empty());
        // The junk source still propagates into real states.
        let closure = n.eps_closure(&BTreeSet::from([Hf::ord_of(9)]));
        assert_eq!(closure, BTreeSet::from([Hf::ord_of(0)]));
    }

    #[test]
    fn nfa_init_must_be_states() {
        let mut n = samples::a_plus();
        n.init.insert(Hf::ord_of(4));
        assert!(n
            .validate()
            .contains(&Violation::InitNotInStates(Hf::ord_of(4))));
    }

    #[test]
    fn dfa_embedding_preserves_runs() {
        let m = samples::even_as();
        let n = m.to_nfa();
        assert!(n.validate().is_empty());
        for text in ["", "a", "b", "ab", "ba", "aab", "bbaa"] {
            let word = w(&m, text);
            assert_eq!(m.accepts(&word).unwrap(), n.accepts(&word).unwrap());
        }
    }
}
