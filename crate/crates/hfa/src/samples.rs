//! Small reference machines over the alphabet `{a, b}`.
//!
//! These are the worked examples used throughout the tests, the docs, and as
//! base cases of the regex compiler. States are von Neumann ordinals unless
//! a construction dictates otherwise.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::{Alphabet, Dfa, Nfa, Symbol};
use crate::hfset::Hf;

/// The two-letter alphabet `{a, b}`.
pub fn alphabet_ab() -> Alphabet {
    Alphabet::new(['a', 'b']).unwrap()
}

/// Two-state DFA accepting the words with an even number of `a`s: `a`
/// toggles between the states, `b` stays put, the initial state accepts.
pub fn even_as() -> Dfa {
    let alphabet = alphabet_ab();
    let q0 = Hf::ord_of(0);
    let q1 = Hf::ord_of(1);
    let states = BTreeSet::from([q0.clone(), q1.clone()]);
    Dfa::from_fn(
        alphabet,
        states,
        q0.clone(),
        BTreeSet::from([q0.clone()]),
        |q, x| {
            if x == Symbol(0) {
                // 'a' toggles
                if *q == q0 {
                    q1.clone()
                } else {
                    q0.clone()
                }
            } else {
                q.clone()
            }
        },
    )
}

/// Two-state DFA accepting the words ending in `b`.
pub fn ends_b() -> Dfa {
    let alphabet = alphabet_ab();
    let q0 = Hf::ord_of(0);
    let q1 = Hf::ord_of(1);
    let states = BTreeSet::from([q0.clone(), q1.clone()]);
    Dfa::from_fn(
        alphabet,
        states,
        q0.clone(),
        BTreeSet::from([q1.clone()]),
        |_, x| if x == Symbol(1) { q1.clone() } else { q0.clone() },
    )
}

/// Two-state NFA accepting `a⁺`: from the initial state, `a` goes to both
/// states; the second state is accepting and has no way out.
pub fn a_plus() -> Nfa {
    let alphabet = alphabet_ab();
    let s0 = Hf::ord_of(0);
    let s1 = Hf::ord_of(1);
    let mut nxt = BTreeMap::new();
    nxt.insert(
        s0.clone(),
        BTreeMap::from([(Symbol(0), BTreeSet::from([s0.clone(), s1.clone()]))]),
    );
    Nfa {
        alphabet,
        states: BTreeSet::from([s0.clone(), s1.clone()]),
        init: BTreeSet::from([s0]),
        finals: BTreeSet::from([s1]),
        nxt,
        eps: BTreeSet::new(),
    }
}

/// DFA accepting exactly the given word: a chain of `|word| + 1` states plus
/// a dead state that swallows every deviation.
pub fn exact_word(alphabet: &Alphabet, word: &[Symbol]) -> Dfa {
    let n = word.len();
    let dead = Hf::ord_of(n + 1);
    let chain: Vec<Hf> = (0..=n).map(Hf::ord_of).collect();
    let states: BTreeSet<Hf> = (0..=n + 1).map(Hf::ord_of).collect();
    Dfa::from_fn(
        alphabet.clone(),
        states,
        chain[0].clone(),
        BTreeSet::from([chain[n].clone()]),
        |q, x| {
            for (i, state) in chain.iter().enumerate() {
                if q == state && i < n && word[i] == x {
                    return chain[i + 1].clone();
                }
            }
            dead.clone()
        },
    )
}

/// Four-state chain DFA accepting exactly the word `ab`.
pub fn exactly_ab() -> Dfa {
    exact_word(&alphabet_ab(), &[Symbol(0), Symbol(1)])
}

/// One-state DFA accepting every word.
pub fn universal(alphabet: &Alphabet) -> Dfa {
    let q = Hf::ord_of(0);
    Dfa::from_fn(
        alphabet.clone(),
        BTreeSet::from([q.clone()]),
        q.clone(),
        BTreeSet::from([q.clone()]),
        |_, _| q.clone(),
    )
}

/// One-state DFA accepting nothing.
pub fn empty_language(alphabet: &Alphabet) -> Dfa {
    let q = Hf::ord_of(0);
    Dfa::from_fn(
        alphabet.clone(),
        BTreeSet::from([q.clone()]),
        q.clone(),
        BTreeSet::new(),
        |_, _| q.clone(),
    )
}

/// Four-state DFA with two indistinguishable accepting sinks, so its minimal
/// form has three states. From the start, `a` enters the first sink; `b`
/// moves to a waiting state from which `b` enters the second sink.
pub fn cloned_sink() -> Dfa {
    let alphabet = alphabet_ab();
    let q0 = Hf::ord_of(0);
    let q1 = Hf::ord_of(1);
    let s1 = Hf::ord_of(2);
    let s2 = Hf::ord_of(3);
    let states = BTreeSet::from([q0.clone(), q1.clone(), s1.clone(), s2.clone()]);
    Dfa::from_fn(
        alphabet,
        states,
        q0.clone(),
        BTreeSet::from([s1.clone(), s2.clone()]),
        |q, x| {
            if *q == q0 {
                if x == Symbol(0) {
                    s1.clone()
                } else {
                    q1.clone()
                }
            } else if *q == q1 {
                if x == Symbol(0) {
                    q1.clone()
                } else {
                    s2.clone()
                }
            } else {
                q.clone() // both sinks loop on everything
            }
        },
    )
}
