//! Seeded random automata, words, and regexes.
//!
//! Everything here is reproducible by construction: given the same seed and
//! parameters, the same values come out, on every platform. The generator is
//! ChaCha8; independent cases draw from independent streams derived as
//! `ChaCha8Rng::seed_from_u64(seed ^ (index · 0x9E3779B97F4A7C15))`, so case
//! results do not depend on evaluation order.
//!
//! Distributions, in draw order:
//! - DFA: state count uniform in `1..=max_states`; states are the ordinals
//!   `0..n` with ordinal 0 initial; one uniform target per state × symbol
//!   (row-major, symbols inner); each state final with probability 1/3.
//! - NFA: state count as above; each state × symbol × candidate target kept
//!   with probability 1/4; each state initial with probability 1/2 (ordinal
//!   0 is forced when that leaves the set empty); each state final with
//!   probability 1/3; ε-edge count uniform in `0..=max_eps`, then that many
//!   uniform ordered pairs.
//! - Word: length uniform in `0..=max_len`, symbols uniform.
//! - Regex: at the depth budget a leaf (∅ 1/8, ε 2/8, literal 5/8);
//!   otherwise alternation 3/10, concatenation 3/10, star 2/10, leaf 2/10.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{Alphabet, Dfa, Nfa, Symbol, Word};
use crate::constructions::{determinize, intersection, union, PowersetMode};
use crate::hfset::Hf;
use crate::langtools::Regex;
use crate::minimize::{canonical_dfa, collapse};
use crate::samples;

/// The RNG stream for one case of a seeded batch.
pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ case.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// A uniform random valid DFA; see the module docs for the distribution.
pub fn random_dfa(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_states: usize) -> Dfa {
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<Hf> = (0..n).map(Hf::ord_of).collect();
    let mut nxt = BTreeMap::new();
    for q in &states {
        let mut row = BTreeMap::new();
        for x in alphabet.symbols() {
            row.insert(x, states[rng.gen_range(0..n)].clone());
        }
        nxt.insert(q.clone(), row);
    }
    let finals: BTreeSet<Hf> = states
        .iter()
        .filter(|_| rng.gen_range(0..3) == 0)
        .cloned()
        .collect();
    Dfa {
        alphabet: alphabet.clone(),
        states: states.into_iter().collect(),
        init: Hf::ord_of(0),
        finals,
        nxt,
    }
}

/// A random valid NFA; see the module docs for the distribution.
pub fn random_nfa(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_states: usize,
    max_eps: usize,
) -> Nfa {
    let n = rng.gen_range(1..=max_states.max(1));
    let states: Vec<Hf> = (0..n).map(Hf::ord_of).collect();
    let mut nxt = BTreeMap::new();
    for q in &states {
        let mut row = BTreeMap::new();
        for x in alphabet.symbols() {
            let targets: BTreeSet<Hf> = states
                .iter()
                .filter(|_| rng.gen_range(0..4) == 0)
                .cloned()
                .collect();
            if !targets.is_empty() {
                row.insert(x, targets);
            }
        }
        if !row.is_empty() {
            nxt.insert(q.clone(), row);
        }
    }
    let mut init: BTreeSet<Hf> = states
        .iter()
        .filter(|_| rng.gen_range(0..2) == 0)
        .cloned()
        .collect();
    if init.is_empty() {
        init.insert(states[0].clone());
    }
    let finals: BTreeSet<Hf> = states
        .iter()
        .filter(|_| rng.gen_range(0..3) == 0)
        .cloned()
        .collect();
    let mut eps = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=max_eps) {
        let from = states[rng.gen_range(0..n)].clone();
        let to = states[rng.gen_range(0..n)].clone();
        eps.insert((from, to));
    }
    Nfa {
        alphabet: alphabet.clone(),
        states: states.into_iter().collect(),
        init,
        finals,
        nxt,
        eps,
    }
}

/// A random word of length at most `max_len`.
pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &Alphabet, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| Symbol(rng.gen_range(0..alphabet.len())))
        .collect()
}

/// A random regex with the given depth budget.
pub fn random_regex(rng: &mut ChaCha8Rng, alphabet: &Alphabet, depth: usize) -> Regex {
    if depth <= 1 {
        return random_leaf(rng, alphabet);
    }
    match rng.gen_range(0..10) {
        0..=2 => Regex::Alt(
            Box::new(random_regex(rng, alphabet, depth - 1)),
            Box::new(random_regex(rng, alphabet, depth - 1)),
        ),
        3..=5 => Regex::Concat(
            Box::new(random_regex(rng, alphabet, depth - 1)),
            Box::new(random_regex(rng, alphabet, depth - 1)),
        ),
        6..=7 => Regex::Star(Box::new(random_regex(rng, alphabet, depth - 1))),
        _ => random_leaf(rng, alphabet),
    }
}

fn random_leaf(rng: &mut ChaCha8Rng, alphabet: &Alphabet) -> Regex {
    match rng.gen_range(0..8) {
        0 => Regex::Empty,
        1..=2 => Regex::Epsilon,
        _ => Regex::Lit(Symbol(rng.gen_range(0..alphabet.len()))),
    }
}

/// A machine with exactly the same language as `m`, built by chaining one to
/// three random language-preserving transforms: adding an unreachable state,
/// intersecting with the universal machine, unioning with the empty one,
/// collapsing, canonicalizing, or determinizing the identity embedding.
pub fn equivalent_variant(rng: &mut ChaCha8Rng, m: &Dfa) -> Dfa {
    let mut cur = m.clone();
    for _ in 0..rng.gen_range(1..=3) {
        cur = match rng.gen_range(0..6) {
            0 => with_junk_state(rng, &cur),
            1 => intersection(&cur, &samples::universal(&cur.alphabet)).unwrap(),
            2 => union(&cur, &samples::empty_language(&cur.alphabet)).unwrap(),
            3 => collapse(&cur).unwrap(),
            4 => canonical_dfa(&cur).unwrap(),
            _ => determinize(&cur.to_nfa(), PowersetMode::Reachable).unwrap(),
        };
    }
    cur
}

/// Adds one unreachable state with random outgoing transitions. Reachable
/// rows are untouched, so the language is preserved.
fn with_junk_state(rng: &mut ChaCha8Rng, m: &Dfa) -> Dfa {
    let junk = (0..)
        .map(Hf::ord_of)
        .find(|q| !m.states.contains(q))
        .unwrap();
    let mut out = m.clone();
    out.states.insert(junk.clone());
    let all: Vec<Hf> = out.states.iter().cloned().collect();
    let row = out
        .alphabet
        .symbols()
        .map(|x| (x, all[rng.gen_range(0..all.len())].clone()))
        .collect();
    out.nxt.insert(junk, row);
    out
}
