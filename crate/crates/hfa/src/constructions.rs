//! Automaton-building constructions.
//!
//! Each construction names its states by honest HF values: powerset states
//! are the ε-closed subsets they stand for (coerced to a single set),
//! product states are Kuratowski pairs, and disjoint-sum states are tagged
//! pairs, so freshness and injectivity come from the set encoding instead of
//! bookkeeping.

use std::collections::{BTreeMap, BTreeSet};

use crate::automata::{AutomataError, Dfa, Nfa};
use crate::hfset::Hf;

/// Hard cap on full powerset enumeration; beyond this the state table could
/// not be materialized anyway.
pub const FULL_POWERSET_LIMIT: usize = 22;

/// Default state count up to which [`PowersetMode::Auto`] enumerates the
/// full powerset.
pub const DEFAULT_FULL_BOUND: usize = 12;

/// How [`determinize`] picks its state set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowersetMode {
    /// Enumerate all `2^n` subsets — the textbook definition, with
    /// unreachable subset-states kept.
    Full,
    /// Discover only the ε-closed subsets reachable from the initial
    /// closure; equals the accessible restriction of [`PowersetMode::Full`].
    Reachable,
    /// `Full` when the NFA has at most `full_bound` states, `Reachable`
    /// otherwise.
    Auto { full_bound: usize },
}

impl Default for PowersetMode {
    fn default() -> Self {
        PowersetMode::Auto {
            full_bound: DEFAULT_FULL_BOUND,
        }
    }
}

impl std::fmt::Display for PowersetMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PowersetMode::Full => write!(f, "full"),
            PowersetMode::Reachable => write!(f, "reachable"),
            PowersetMode::Auto { full_bound } => write!(f, "auto({full_bound})"),
        }
    }
}

impl PowersetMode {
    fn wants_full(self, states: usize) -> bool {
        match self {
            PowersetMode::Full => true,
            PowersetMode::Reachable => false,
            PowersetMode::Auto { full_bound } => states <= full_bound,
        }
    }
}

/// The powerset (subset) construction: a DFA equivalent to the given NFA.
///
/// States are `Hf::from_elements(C)` for ε-closed subsets `C` of the NFA's
/// states; the initial state is the closure of the initial set; a state is
/// final iff its subset meets the NFA's final set; and the transition on `x`
/// is the closure of the union of the per-state targets.
pub fn determinize(n: &Nfa, mode: PowersetMode) -> Result<Dfa, AutomataError> {
    n.require_valid()?;
    let state_vec: Vec<Hf> = n.states.iter().cloned().collect();

    // Map each subset-state value to the ε-closed subset it stands for.
    let mut subsets: BTreeMap<Hf, BTreeSet<Hf>> = BTreeMap::new();
    let init_closure = n.eps_closure(&n.init);
    let init_value = Hf::from_elements(init_closure.iter().cloned());

    if mode.wants_full(state_vec.len()) {
        if state_vec.len() > FULL_POWERSET_LIMIT {
            return Err(AutomataError::PowersetTooLarge {
                states: state_vec.len(),
                limit: FULL_POWERSET_LIMIT,
            });
        }
        for mask in 0u64..(1u64 << state_vec.len()) {
            let subset: BTreeSet<Hf> = state_vec
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, q)| q.clone())
                .collect();
            let closure = n.eps_closure(&subset);
            let value = Hf::from_elements(closure.iter().cloned());
            subsets.entry(value).or_insert(closure);
        }
    } else {
        let mut work = vec![init_value.clone()];
        subsets.insert(init_value.clone(), init_closure.clone());
        while let Some(value) = work.pop() {
            let closure = subsets[&value].clone();
            for x in n.alphabet.symbols() {
                let mut stepped = BTreeSet::new();
                for q in &closure {
                    stepped.extend(n.targets(q, x));
                }
                let next_closure = n.eps_closure(&stepped);
                let next_value = Hf::from_elements(next_closure.iter().cloned());
                if !subsets.contains_key(&next_value) {
                    subsets.insert(next_value.clone(), next_closure);
                    work.push(next_value);
                }
            }
        }
    }

    let states: BTreeSet<Hf> = subsets.keys().cloned().collect();
    let finals: BTreeSet<Hf> = subsets
        .iter()
        .filter(|(_, closure)| closure.intersection(&n.finals).next().is_some())
        .map(|(value, _)| value.clone())
        .collect();
    let mut nxt = BTreeMap::new();
    for (value, closure) in &subsets {
        let mut row = BTreeMap::new();
        for x in n.alphabet.symbols() {
            let mut stepped = BTreeSet::new();
            for q in closure {
                stepped.extend(n.targets(q, x));
            }
            let target = Hf::from_elements(n.eps_closure(&stepped));
            row.insert(x, target);
        }
        nxt.insert(value.clone(), row);
    }
    Ok(Dfa {
        alphabet: n.alphabet.clone(),
        states,
        init: init_value,
        finals,
        nxt,
    })
}

/// Reverses a DFA into an NFA: every transition is flipped, the final states
/// become the initial set and the old initial state becomes final. The
/// result accepts exactly the reversals of the accepted words.
pub fn reverse(m: &Dfa) -> Result<Nfa, AutomataError> {
    m.require_valid()?;
    let mut nxt: BTreeMap<Hf, BTreeMap<_, BTreeSet<Hf>>> = BTreeMap::new();
    for (p, row) in &m.nxt {
        for (&x, target) in row {
            nxt.entry(target.clone())
                .or_default()
                .entry(x)
                .or_default()
                .insert(p.clone());
        }
    }
    Ok(Nfa {
        alphabet: m.alphabet.clone(),
        states: m.states.clone(),
        init: m.finals.clone(),
        finals: BTreeSet::from([m.init.clone()]),
        nxt,
        eps: BTreeSet::new(),
    })
}

fn require_same_alphabet(a: &Dfa, b: &Dfa) -> Result<(), AutomataError> {
    if a.alphabet != b.alphabet {
        return Err(AutomataError::AlphabetMismatch);
    }
    Ok(())
}

/// The product DFA accepting the intersection of the two languages: states
/// are all pairs `⟨q1, q2⟩`, and the machines run in parallel.
pub fn intersection(a: &Dfa, b: &Dfa) -> Result<Dfa, AutomataError> {
    require_same_alphabet(a, b)?;
    a.require_valid()?;
    b.require_valid()?;
    let mut states = BTreeSet::new();
    let mut finals = BTreeSet::new();
    let mut nxt = BTreeMap::new();
    for q1 in &a.states {
        for q2 in &b.states {
            let state = Hf::pair(q1.clone(), q2.clone());
            if a.finals.contains(q1) && b.finals.contains(q2) {
                finals.insert(state.clone());
            }
            let mut row = BTreeMap::new();
            for x in a.alphabet.symbols() {
                let t1 = a.nxt[q1][&x].clone();
                let t2 = b.nxt[q2][&x].clone();
                row.insert(x, Hf::pair(t1, t2));
            }
            nxt.insert(state.clone(), row);
            states.insert(state);
        }
    }
    Ok(Dfa {
        alphabet: a.alphabet.clone(),
        states,
        init: Hf::pair(a.init.clone(), b.init.clone()),
        finals,
        nxt,
    })
}

/// Flips the final set; the result accepts exactly the complement language.
pub fn complement(m: &Dfa) -> Result<Dfa, AutomataError> {
    m.require_valid()?;
    let finals = m.states.difference(&m.finals).cloned().collect();
    Ok(Dfa {
        finals,
        ..m.clone()
    })
}

/// Union by De Morgan: the complement of the intersection of complements.
pub fn union(a: &Dfa, b: &Dfa) -> Result<Dfa, AutomataError> {
    complement(&intersection(&complement(a)?, &complement(b)?)?)
}

/// An NFA accepting the concatenation of the two languages, built on the
/// disjoint sum of the two state sets. The left copy simulates the first
/// machine, ε-edges jump from its final states to the right copy's initial
/// state, and the right copy's final states accept.
pub fn concatenation(a: &Dfa, b: &Dfa) -> Result<Nfa, AutomataError> {
    require_same_alphabet(a, b)?;
    a.require_valid()?;
    b.require_valid()?;
    let mut states = BTreeSet::new();
    let mut nxt: BTreeMap<Hf, BTreeMap<_, BTreeSet<Hf>>> = BTreeMap::new();
    for q in &a.states {
        let tagged = Hf::inl(q.clone());
        let mut row = BTreeMap::new();
        for x in a.alphabet.symbols() {
            row.insert(x, BTreeSet::from([Hf::inl(a.nxt[q][&x].clone())]));
        }
        nxt.insert(tagged.clone(), row);
        states.insert(tagged);
    }
    for q in &b.states {
        let tagged = Hf::inr(q.clone());
        let mut row = BTreeMap::new();
        for x in b.alphabet.symbols() {
            row.insert(x, BTreeSet::from([Hf::inr(b.nxt[q][&x].clone())]));
        }
        nxt.insert(tagged.clone(), row);
        states.insert(tagged);
    }
    let eps: BTreeSet<(Hf, Hf)> = a
        .finals
        .iter()
        .map(|f| (Hf::inl(f.clone()), Hf::inr(b.init.clone())))
        .collect();
    Ok(Nfa {
        alphabet: a.alphabet.clone(),
        states,
        init: BTreeSet::from([Hf::inl(a.init.clone())]),
        finals: b.finals.iter().map(|f| Hf::inr(f.clone())).collect(),
        nxt,
        eps,
    })
}

/// An NFA accepting the Kleene star of the DFA's language. A fresh state
/// (structurally fresh: the left injection of ∅, while every machine state
/// is wrapped in the right injection) is both initial and final; ε-edges run
/// from it into the machine's initial state and back from every final state.
pub fn kleene_star(m: &Dfa) -> Result<Nfa, AutomataError> {
    m.require_valid()?;
    let fresh = Hf::inl(Hf::empty());
    let mut states = BTreeSet::from([fresh.clone()]);
    let mut nxt: BTreeMap<Hf, BTreeMap<_, BTreeSet<Hf>>> = BTreeMap::new();
    for q in &m.states {
        let tagged = Hf::inr(q.clone());
        let mut row = BTreeMap::new();
        for x in m.alphabet.symbols() {
            row.insert(x, BTreeSet::from([Hf::inr(m.nxt[q][&x].clone())]));
        }
        nxt.insert(tagged.clone(), row);
        states.insert(tagged);
    }
    let mut eps = BTreeSet::from([(fresh.clone(), Hf::inr(m.init.clone()))]);
    for f in &m.finals {
        eps.insert((Hf::inr(f.clone()), fresh.clone()));
    }
    Ok(Nfa {
        alphabet: m.alphabet.clone(),
        states,
        init: BTreeSet::from([fresh.clone()]),
        finals: BTreeSet::from([fresh]),
        nxt,
        eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{Symbol, Word};
    use crate::langtools::{dfa_language_upto, nfa_language_upto, words_upto};
    use crate::samples;

    fn words(m: &Dfa, text: &str) -> Word {
        m.alphabet.parse_word(text).unwrap()
    }

    #[test]
    fn powerset_of_a_plus() {
        let n = samples::a_plus();
        let reachable = determinize(&n, PowersetMode::Reachable).unwrap();
        assert!(reachable.validate().is_empty());
        // {s0} --a--> {s0,s1} --a--> {s0,s1}; b leads to the empty sink.
        assert_eq!(reachable.states.len(), 3);
        let s0 = Hf::ord_of(0);
        let s1 = Hf::ord_of(1);
        let expected = BTreeSet::from([
            Hf::empty(),
            Hf::singleton(s0.clone()),
            Hf::from_elements([s0, s1]),
        ]);
        assert_eq!(reachable.states, expected);

        // The full powerset also keeps the unreachable image of {s1}.
        let full = determinize(&n, PowersetMode::Full).unwrap();
        assert!(full.validate().is_empty());
        assert_eq!(full.states.len(), 4);

        for m in [&reachable, &full] {
            assert!(!m.accepts(&[]).unwrap());
            assert!(m.accepts(&words(m, "a")).unwrap());
            assert!(m.accepts(&words(m, "aa")).unwrap());
            assert!(!m.accepts(&words(m, "ab")).unwrap());
        }
    }

    #[test]
    fn determinizing_an_embedded_dfa_is_an_isomorphism() {
        let m = samples::even_as();
        let d = determinize(&m.to_nfa(), PowersetMode::Reachable).unwrap();
        // Every reachable subset is the singleton of the embedded state.
        assert!(crate::minimize::find_isomorphism(&d, &m).unwrap().is_some());
    }

    #[test]
    fn powerset_agrees_with_nfa_on_short_words() {
        let n = samples::a_plus();
        let d = determinize(&n, PowersetMode::default()).unwrap();
        assert_eq!(
            nfa_language_upto(&n, 6).unwrap(),
            dfa_language_upto(&d, 6).unwrap()
        );
    }

    #[test]
    fn powerset_states_are_closed_subset_images() {
        let mut n = samples::a_plus();
        n.eps.insert((Hf::ord_of(1), Hf::ord_of(0)));
        let d = determinize(&n, PowersetMode::Full).unwrap();
        assert!(d.states.len() <= 1 << n.states.len());
        for state in &d.states {
            let subset = state.to_set();
            assert!(subset.is_subset(&n.states));
            assert_eq!(n.eps_closure(&subset), subset, "{state} not ε-closed");
        }
    }

    #[test]
    fn reversal_of_exactly_ab_accepts_exactly_ba() {
        let m = samples::exactly_ab();
        let r = reverse(&m).unwrap();
        assert!(r.validate().is_empty());
        let accepted = nfa_language_upto(&r, 6).unwrap();
        assert_eq!(accepted, vec![words(&m, "ba")]);
    }

    #[test]
    fn reversal_agrees_with_reversed_words() {
        let m = samples::even_as();
        let r = reverse(&m).unwrap();
        for w in words_upto(&m.alphabet, 6) {
            let mut rev = w.clone();
            rev.reverse();
            assert_eq!(r.accepts(&w).unwrap(), m.accepts(&rev).unwrap());
        }
    }

    #[test]
    fn intersection_runs_machines_in_parallel() {
        let even = samples::even_as();
        let endb = samples::ends_b();
        let both = intersection(&even, &endb).unwrap();
        assert!(both.validate().is_empty());
        assert_eq!(both.states.len(), even.states.len() * endb.states.len());
        for w in words_upto(&even.alphabet, 5) {
            let expect = even.accepts(&w).unwrap() && endb.accepts(&w).unwrap();
            assert_eq!(both.accepts(&w).unwrap(), expect);
        }
    }

    #[test]
    fn complement_flips_acceptance() {
        let m = samples::even_as();
        let c = complement(&m).unwrap();
        assert_eq!(complement(&c).unwrap(), m);
        assert!(c.accepts(&words(&m, "a")).unwrap());
        assert!(!c.accepts(&[]).unwrap());
        for w in words_upto(&m.alphabet, 6) {
            assert_ne!(m.accepts(&w).unwrap(), c.accepts(&w).unwrap());
        }
        // S ∩ S̄ is empty.
        let never = intersection(&m, &c).unwrap();
        assert_eq!(dfa_language_upto(&never, 6).unwrap(), Vec::<Word>::new());
    }

    #[test]
    fn union_matches_either_acceptance() {
        let even = samples::even_as();
        let endb = samples::ends_b();
        let either = union(&even, &endb).unwrap();
        for w in words_upto(&even.alphabet, 5) {
            let expect = even.accepts(&w).unwrap() || endb.accepts(&w).unwrap();
            assert_eq!(either.accepts(&w).unwrap(), expect);
        }
        // S ∪ S̄ is everything.
        let all = union(&even, &complement(&even).unwrap()).unwrap();
        assert_eq!(
            dfa_language_upto(&all, 6).unwrap(),
            words_upto(&even.alphabet, 6)
        );
    }

    #[test]
    fn concatenation_of_single_letters() {
        let alphabet = samples::alphabet_ab();
        let ma = samples::exact_word(&alphabet, &[Symbol(0)]);
        let mb = samples::exact_word(&alphabet, &[Symbol(1)]);
        let n = concatenation(&ma, &mb).unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.states.len(), ma.states.len() + mb.states.len());
        assert_eq!(nfa_language_upto(&n, 6).unwrap(), vec![words(&ma, "ab")]);
    }

    #[test]
    fn concatenation_closure_contains_the_jump() {
        let alphabet = samples::alphabet_ab();
        let ma = samples::exact_word(&alphabet, &[Symbol(0)]);
        let mb = samples::exact_word(&alphabet, &[Symbol(1)]);
        let n = concatenation(&ma, &mb).unwrap();
        let f = ma.finals.first().unwrap().clone();
        let closure = n.eps_closure(&BTreeSet::from([Hf::inl(f.clone())]));
        assert_eq!(
            closure,
            BTreeSet::from([Hf::inl(f), Hf::inr(mb.init.clone())])
        );
    }

    #[test]
    fn concatenation_with_epsilon_language_is_identity() {
        let alphabet = samples::alphabet_ab();
        let eps_only = samples::exact_word(&alphabet, &[]);
        let m = samples::even_as();
        let n = concatenation(&eps_only, &m).unwrap();
        assert_eq!(
            nfa_language_upto(&n, 6).unwrap(),
            dfa_language_upto(&m, 6).unwrap()
        );
    }

    #[test]
    fn star_of_single_letter() {
        let alphabet = samples::alphabet_ab();
        let ma = samples::exact_word(&alphabet, &[Symbol(0)]);
        let n = kleene_star(&ma).unwrap();
        assert!(n.validate().is_empty());
        assert_eq!(n.states.len(), ma.states.len() + 1);
        assert!(n.accepts(&[]).unwrap());
        let expected: Vec<Word> = (0..=6).map(|k| vec![Symbol(0); k]).collect();
        assert_eq!(nfa_language_upto(&n, 6).unwrap(), expected);
    }

    #[test]
    fn star_is_idempotent_on_short_words() {
        let m = samples::ends_b();
        let once = determinize(&kleene_star(&m).unwrap(), PowersetMode::default()).unwrap();
        let twice = determinize(&kleene_star(&once).unwrap(), PowersetMode::default()).unwrap();
        assert_eq!(
            dfa_language_upto(&once, 5).unwrap(),
            dfa_language_upto(&twice, 5).unwrap()
        );
    }

    #[test]
    fn binary_constructions_reject_mismatched_alphabets() {
        let m = samples::even_as();
        let other = samples::universal(&crate::automata::Alphabet::new(['x']).unwrap());
        assert_eq!(
            intersection(&m, &other).unwrap_err(),
            AutomataError::AlphabetMismatch
        );
        assert_eq!(
            concatenation(&m, &other).unwrap_err(),
            AutomataError::AlphabetMismatch
        );
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let mut n = samples::a_plus();
        n.init.insert(Hf::ord_of(7));
        assert!(matches!(
            determinize(&n, PowersetMode::default()).unwrap_err(),
            AutomataError::Invalid(_)
        ));
    }
}
