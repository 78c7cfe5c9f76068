//! Finite automata whose states are hereditarily finite sets.
//!
//! The crate builds the classical theory of regular languages on top of a
//! small kernel of canonical hereditarily finite (HF) sets: deterministic and
//! ε-nondeterministic automata, the powerset construction, the closure
//! constructions (intersection, complement, union, concatenation, Kleene
//! star), accessibility and indistinguishability quotients, the canonical
//! minimal automaton derived from the right-congruence of a language, and
//! Brzozowski's reverse–determinize–reverse–determinize minimization.
//!
//! States being HF sets means every construction names its states by honest
//! set-theoretic values — powerset states are the sets of the subsets they
//! stand for, product states are Kuratowski pairs, disjoint-sum states are
//! tagged pairs — so the textbook definitions can be executed literally and
//! their theorems re-checked as executable properties (see [`suite`]).
//!
//! Everything is immutable and pure: automata and HF values can be shared
//! across threads, and the property suite can fan out its independent cases
//! on a thread pool (the `parallel` feature, enabled by default).

pub mod automata;
pub mod constructions;
pub mod hfset;
pub mod langtools;
pub mod minimize;
pub mod random;
pub mod samples;
pub mod suite;

pub use automata::{Alphabet, AutomataError, Dfa, Nfa, Symbol, Violation, Word};
pub use constructions::{
    complement, concatenation, determinize, intersection, kleene_star, reverse, union,
    PowersetMode,
};
pub use hfset::{Hf, SumTag};
pub use langtools::{
    compile_regex, dfa_language_upto, distinguishing_word, equivalent, nfa_language_upto,
    parse_regex, regex_matches, words_upto, Regex,
};
pub use minimize::{
    accessible_dfa, accessible_states, brzozowski, canonical_dfa, collapse, find_isomorphism,
    indistinguishability_partition, is_minimal, min_states, path_to, residuals_equal,
    reverse_determinize, Partition, StateMap,
};
