//! The individual property checks behind the suite and the acceptance
//! tests.
//!
//! Each check is a pure function returning `Ok(())` or a human-readable
//! failure description; the callers decide sample counts and length bounds.
//! Checks deliberately pit independent computation routes against each
//! other: constructions against the bounded word-enumeration oracle, exact
//! product equivalence against breadth-first witness search, the compiled
//! regex against a direct syntax-tree matcher, and Brzozowski's minimizer
//! against the collapse-based one.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::automata::{Alphabet, Dfa, Nfa, Word};
use crate::constructions::{
    complement, concatenation, determinize, intersection, kleene_star, reverse, union,
    PowersetMode, FULL_POWERSET_LIMIT,
};
use crate::hfset::{Hf, SumTag};
use crate::langtools::{
    compile_regex, dfa_language_upto, distinguishing_word, equivalent, nfa_language_upto,
    parse_regex, regex_matches, words_upto, Regex,
};
use crate::minimize::{
    accessible_dfa, brzozowski, canonical_dfa, collapse, find_isomorphism, is_minimal,
    min_states, residuals_equal, reverse_determinize,
};
use crate::random;

fn err(e: impl std::fmt::Display) -> String {
    format!("library error: {e}")
}

fn same_language(
    tag: &str,
    alphabet: &Alphabet,
    got: &[Word],
    want: &[Word],
) -> Result<(), String> {
    if got == want {
        return Ok(());
    }
    let got_set: BTreeSet<&Word> = got.iter().collect();
    let want_set: BTreeSet<&Word> = want.iter().collect();
    let witness = got_set
        .symmetric_difference(&want_set)
        .next()
        .expect("unequal ordered enumerations must differ somewhere");
    Err(format!(
        "{tag}: languages differ on {}",
        alphabet.render_word(witness)
    ))
}

// ---------------------------------------------------------------- HF kernel

/// `code(decode(n)) = n` for all `n < limit`, and the element list
/// round-trips structurally.
pub fn hf_code_roundtrip(limit: u64) -> Result<(), String> {
    for n in 0..limit {
        let x = Hf::decode_u64(n);
        if x.code() != BigUint::from(n) {
            return Err(format!("code(decode({n})) = {} ≠ {n}", x.code()));
        }
        if Hf::from_elements(x.elements().iter().cloned()) != x {
            return Err(format!("element round-trip broke on code {n}"));
        }
    }
    Ok(())
}

/// Membership implies strictly-less, exhaustively below the code limit.
pub fn hf_order_extends_membership(code_limit: u64) -> Result<(), String> {
    let values: Vec<Hf> = (0..code_limit).map(Hf::decode_u64).collect();
    for a in &values {
        for b in &values {
            if b.contains(a) && *a >= *b {
                return Err(format!("{a} ∈ {b} but not {a} < {b}"));
            }
        }
    }
    Ok(())
}

/// Proper subset implies strictly-less, exhaustively below the code limit.
pub fn hf_order_extends_subset(code_limit: u64) -> Result<(), String> {
    let values: Vec<Hf> = (0..code_limit).map(Hf::decode_u64).collect();
    for a in &values {
        for b in &values {
            if a.is_subset_of(b) && a != b && *a >= *b {
                return Err(format!("{a} ⊂ {b} but not {a} < {b}"));
            }
        }
    }
    Ok(())
}

/// The structural comparison agrees with comparing codes as naturals,
/// exhaustively below the code limit.
pub fn hf_order_matches_codes(code_limit: u64) -> Result<(), String> {
    let values: Vec<Hf> = (0..code_limit).map(Hf::decode_u64).collect();
    for (i, a) in values.iter().enumerate() {
        for (j, b) in values.iter().enumerate() {
            if a.cmp(b) != i.cmp(&j) {
                return Err(format!("cmp({a}, {b}) disagrees with {i} vs {j}"));
            }
        }
    }
    Ok(())
}

/// Kuratowski pairs and tagged sums decompose back to their parts; the two
/// injections never collide.
pub fn hf_pair_sum_roundtrip(rng: &mut ChaCha8Rng, samples: usize) -> Result<(), String> {
    for _ in 0..samples {
        let a = Hf::decode_u64(rng.gen::<u16>() as u64);
        let b = Hf::decode_u64(rng.gen::<u16>() as u64);
        let p = Hf::pair(a.clone(), b.clone());
        if p.unpair() != Some((a.clone(), b.clone())) {
            return Err(format!("unpair(pair({a}, {b})) failed"));
        }
        if Hf::inl(a.clone()) == Hf::inr(b.clone()) {
            return Err(format!("inl({a}) collided with inr({b})"));
        }
        if Hf::inl(a.clone()).as_sum() != Some((SumTag::Left, a.clone())) {
            return Err(format!("inl({a}) did not decompose"));
        }
        if Hf::inr(b.clone()).as_sum() != Some((SumTag::Right, b.clone())) {
            return Err(format!("inr({b}) did not decompose"));
        }
    }
    Ok(())
}

// ------------------------------------------------------------ run semantics

/// `run(q, uv) = run(run(q, u), v)` on random states and words.
pub fn dfa_append_law(m: &Dfa, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), String> {
    let states: Vec<&Hf> = m.states.iter().collect();
    for _ in 0..samples {
        let q = states[rng.gen_range(0..states.len())];
        let u = random::random_word(rng, &m.alphabet, 4);
        let v = random::random_word(rng, &m.alphabet, 4);
        let mut uv = u.clone();
        uv.extend_from_slice(&v);
        let direct = m.run_from(q, &uv).map_err(err)?;
        let staged = m
            .run_from(&m.run_from(q, &u).map_err(err)?, &v)
            .map_err(err)?;
        if direct != staged {
            return Err(format!(
                "append law broke at state {q} on {} · {}",
                m.alphabet.render_word(&u),
                m.alphabet.render_word(&v)
            ));
        }
    }
    Ok(())
}

/// Runs never leave the state set.
pub fn dfa_runs_stay_in_states(
    m: &Dfa,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<(), String> {
    let states: Vec<&Hf> = m.states.iter().collect();
    for _ in 0..samples {
        let q = states[rng.gen_range(0..states.len())];
        let w = random::random_word(rng, &m.alphabet, 6);
        let reached = m.run_from(q, &w).map_err(err)?;
        if !m.states.contains(&reached) {
            return Err(format!("run from {q} escaped to {reached}"));
        }
    }
    Ok(())
}

/// Words reaching the same state keep reaching the same state under any
/// common suffix.
pub fn same_state_right_invariant(
    m: &Dfa,
    rng: &mut ChaCha8Rng,
    samples: usize,
) -> Result<(), String> {
    for _ in 0..samples {
        let u = random::random_word(rng, &m.alphabet, 5);
        let v = random::random_word(rng, &m.alphabet, 5);
        let suffix = random::random_word(rng, &m.alphabet, 4);
        if m.reaches_same_state(&u, &v).map_err(err)? {
            let mut uw = u.clone();
            uw.extend_from_slice(&suffix);
            let mut vw = v.clone();
            vw.extend_from_slice(&suffix);
            if !m.reaches_same_state(&uw, &vw).map_err(err)? {
                return Err(format!(
                    "right invariance broke for {} ~ {} with suffix {}",
                    m.alphabet.render_word(&u),
                    m.alphabet.render_word(&v),
                    m.alphabet.render_word(&suffix)
                ));
            }
        }
    }
    Ok(())
}

/// The singleton-transition NFA embedding accepts the same bounded language.
pub fn dfa_as_nfa_agrees(m: &Dfa, max_len: usize) -> Result<(), String> {
    let as_nfa = m.to_nfa();
    same_language(
        "dfa vs embedded nfa",
        &m.alphabet,
        &nfa_language_upto(&as_nfa, max_len).map_err(err)?,
        &dfa_language_upto(m, max_len).map_err(err)?,
    )
}

// ------------------------------------------------------------- minimization

/// Restricting to accessible states twice equals restricting once,
/// structurally.
pub fn accessible_fixpoint(m: &Dfa) -> Result<(), String> {
    let once = accessible_dfa(m).map_err(err)?;
    let twice = accessible_dfa(&once).map_err(err)?;
    if once != twice {
        return Err("accessible restriction is not a fixpoint".to_string());
    }
    Ok(())
}

fn preserves_language(
    tag: &str,
    m: &Dfa,
    transformed: &Dfa,
    max_len: usize,
) -> Result<(), String> {
    same_language(
        tag,
        &m.alphabet,
        &dfa_language_upto(transformed, max_len).map_err(err)?,
        &dfa_language_upto(m, max_len).map_err(err)?,
    )
}

pub fn accessible_preserves_language(m: &Dfa, max_len: usize) -> Result<(), String> {
    preserves_language("accessible", m, &accessible_dfa(m).map_err(err)?, max_len)
}

pub fn collapse_preserves_language(m: &Dfa, max_len: usize) -> Result<(), String> {
    preserves_language("collapse", m, &collapse(m).map_err(err)?, max_len)
}

pub fn canonical_preserves_language(m: &Dfa, max_len: usize) -> Result<(), String> {
    preserves_language("canonical", m, &canonical_dfa(m).map_err(err)?, max_len)
}

pub fn brzozowski_preserves_language(m: &Dfa, max_len: usize) -> Result<(), String> {
    preserves_language("brzozowski", m, &brzozowski(m).map_err(err)?, max_len)
}

pub fn collapse_accessible_is_minimal(m: &Dfa) -> Result<(), String> {
    let c = collapse(&accessible_dfa(m).map_err(err)?).map_err(err)?;
    if !is_minimal(&c).map_err(err)? {
        return Err(format!("collapse of accessible part has {} states but is not minimal", c.states.len()));
    }
    Ok(())
}

pub fn canonical_is_minimal(m: &Dfa) -> Result<(), String> {
    if !is_minimal(&canonical_dfa(m).map_err(err)?).map_err(err)? {
        return Err("canonical machine is not minimal".to_string());
    }
    Ok(())
}

pub fn brzozowski_is_minimal(m: &Dfa) -> Result<(), String> {
    if !is_minimal(&brzozowski(m).map_err(err)?).map_err(err)? {
        return Err("brzozowski output is not minimal".to_string());
    }
    Ok(())
}

/// The canonical machine, the Brzozowski output, and `min_states` all report
/// the same state count.
pub fn minimal_state_counts_agree(m: &Dfa) -> Result<(), String> {
    let canonical = canonical_dfa(m).map_err(err)?.states.len();
    let brz = brzozowski(m).map_err(err)?.states.len();
    let index = min_states(m).map_err(err)?;
    if canonical != index || brz != index {
        return Err(format!(
            "state counts disagree: canonical {canonical}, brzozowski {brz}, min_states {index}"
        ));
    }
    Ok(())
}

/// Everything the minimizer contract demands of a candidate minimization of
/// `m`: validity, minimality, language equivalence with `m`, and isomorphism
/// with the collapse-based minimizer.
pub fn minimizer_contract(m: &Dfa, candidate: &Dfa) -> Result<(), String> {
    candidate.require_valid().map_err(err)?;
    if !is_minimal(candidate).map_err(err)? {
        return Err("candidate is not minimal".to_string());
    }
    if !equivalent(m, candidate).map_err(err)? {
        return Err("candidate does not accept the input's language".to_string());
    }
    let reference = collapse(&accessible_dfa(m).map_err(err)?).map_err(err)?;
    if find_isomorphism(candidate, &reference).map_err(err)?.is_none() {
        return Err("candidate is not isomorphic to the collapsed machine".to_string());
    }
    Ok(())
}

/// Brzozowski and the collapse-based minimizer agree up to isomorphism, and
/// the canonical machine is isomorphic to both.
pub fn minimizers_isomorphic(m: &Dfa) -> Result<(), String> {
    let brz = brzozowski(m).map_err(err)?;
    minimizer_contract(m, &brz)?;
    let canonical = canonical_dfa(m).map_err(err)?;
    if find_isomorphism(&brz, &canonical).map_err(err)?.is_none() {
        return Err("brzozowski output is not isomorphic to the canonical machine".to_string());
    }
    Ok(())
}

/// One reverse-determinize pass yields a minimal machine whenever its input
/// has no inaccessible states.
pub fn reverse_determinize_minimal(m: &Dfa) -> Result<(), String> {
    let acc = accessible_dfa(m).map_err(err)?;
    let half = reverse_determinize(&acc, PowersetMode::default()).map_err(err)?;
    if !is_minimal(&half).map_err(err)? {
        return Err("reverse-determinize of an accessible machine is not minimal".to_string());
    }
    Ok(())
}

/// One reverse-determinize pass accepts exactly the reversed words.
pub fn reverse_determinize_reverses(m: &Dfa, max_len: usize) -> Result<(), String> {
    let half = reverse_determinize(m, PowersetMode::default()).map_err(err)?;
    let mut reversed: Vec<Word> = dfa_language_upto(m, max_len)
        .map_err(err)?
        .into_iter()
        .map(|mut w| {
            w.reverse();
            w
        })
        .collect();
    reversed.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    same_language(
        "reverse-determinize",
        &m.alphabet,
        &dfa_language_upto(&half, max_len).map_err(err)?,
        &reversed,
    )
}

/// The reversal NFA accepts `w` exactly when the DFA accepts `w` reversed.
pub fn reversal_matches_reversed_words(m: &Dfa, max_len: usize) -> Result<(), String> {
    let r = reverse(m).map_err(err)?;
    for w in words_upto(&m.alphabet, max_len) {
        let mut rev = w.clone();
        rev.reverse();
        if r.accepts(&w).map_err(err)? != m.accepts(&rev).map_err(err)? {
            return Err(format!(
                "reversal disagrees on {}",
                m.alphabet.render_word(&w)
            ));
        }
    }
    Ok(())
}

// --------------------------------------------------------- right congruence

/// Words with equal residuals keep equal residuals under common suffixes.
pub fn residuals_right_invariant(
    m: &Dfa,
    rng: &mut ChaCha8Rng,
    samples: usize,
    max_len: usize,
) -> Result<(), String> {
    for _ in 0..samples {
        let u = random::random_word(rng, &m.alphabet, max_len);
        let v = random::random_word(rng, &m.alphabet, max_len);
        let suffix = random::random_word(rng, &m.alphabet, max_len);
        if residuals_equal(m, &u, &v).map_err(err)? {
            let mut uw = u.clone();
            uw.extend_from_slice(&suffix);
            let mut vw = v.clone();
            vw.extend_from_slice(&suffix);
            if !residuals_equal(m, &uw, &vw).map_err(err)? {
                return Err(format!(
                    "residual equality broke for {} ~ {} with suffix {}",
                    m.alphabet.render_word(&u),
                    m.alphabet.render_word(&v),
                    m.alphabet.render_word(&suffix)
                ));
            }
        }
    }
    Ok(())
}

/// Reaching the same state implies equal residuals (the machine relation
/// refines the language relation).
pub fn same_state_refines_residuals(
    m: &Dfa,
    rng: &mut ChaCha8Rng,
    samples: usize,
    max_len: usize,
) -> Result<(), String> {
    for _ in 0..samples {
        let u = random::random_word(rng, &m.alphabet, max_len);
        let v = random::random_word(rng, &m.alphabet, max_len);
        if m.reaches_same_state(&u, &v).map_err(err)?
            && !residuals_equal(m, &u, &v).map_err(err)?
        {
            return Err(format!(
                "{} and {} reach the same state but have different residuals",
                m.alphabet.render_word(&u),
                m.alphabet.render_word(&v)
            ));
        }
    }
    Ok(())
}

/// No machine for the language is smaller than the minimized one: both of
/// two independently transformed equivalent variants bound each other's
/// minimization.
pub fn minimal_never_larger(m: &Dfa, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let a = random::equivalent_variant(rng, m);
    let b = random::equivalent_variant(rng, m);
    if !equivalent(&a, &b).map_err(err)? {
        return Err("variant generator broke language preservation".to_string());
    }
    let brz_a = brzozowski(&a).map_err(err)?;
    let brz_b = brzozowski(&b).map_err(err)?;
    if brz_a.states.len() > b.states.len() {
        return Err(format!(
            "minimized machine has {} states, beating equivalent machine of {}",
            brz_a.states.len(),
            b.states.len()
        ));
    }
    if brz_b.states.len() > a.states.len() {
        return Err(format!(
            "minimized machine has {} states, beating equivalent machine of {}",
            brz_b.states.len(),
            a.states.len()
        ));
    }
    Ok(())
}

/// The two equivalence routes agree, and the breadth-first witness really is
/// the least distinguishing word: shorter words all agree, the witness is
/// accepted by exactly one machine, and its length is below the product
/// state count.
pub fn equivalence_cross_checked(a: &Dfa, b: &Dfa, probe_len: usize) -> Result<(), String> {
    let exact = equivalent(a, b).map_err(err)?;
    let witness = distinguishing_word(a, b).map_err(err)?;
    if exact != witness.is_none() {
        return Err("product equivalence and witness search disagree".to_string());
    }
    match witness {
        None => same_language(
            "equivalent machines",
            &a.alphabet,
            &dfa_language_upto(a, probe_len).map_err(err)?,
            &dfa_language_upto(b, probe_len).map_err(err)?,
        ),
        Some(w) => {
            if w.len() >= a.states.len() * b.states.len() {
                return Err(format!(
                    "distinguishing word of length {} exceeds the product bound",
                    w.len()
                ));
            }
            if a.accepts(&w).map_err(err)? == b.accepts(&w).map_err(err)? {
                return Err("claimed distinguishing word does not distinguish".to_string());
            }
            if !w.is_empty() {
                for shorter in words_upto(&a.alphabet, w.len() - 1) {
                    if a.accepts(&shorter).map_err(err)? != b.accepts(&shorter).map_err(err)? {
                        return Err(format!(
                            "witness {} is not minimal: {} is shorter and distinguishes",
                            a.alphabet.render_word(&w),
                            a.alphabet.render_word(&shorter)
                        ));
                    }
                }
            }
            Ok(())
        }
    }
}

// ------------------------------------------------------------ powerset, nfa

/// The powerset DFA accepts exactly the NFA's bounded language.
pub fn power_preserves_language(n: &Nfa, max_len: usize, mode: PowersetMode) -> Result<(), String> {
    let d = determinize(n, mode).map_err(err)?;
    same_language(
        "powerset",
        &n.alphabet,
        &dfa_language_upto(&d, max_len).map_err(err)?,
        &nfa_language_upto(n, max_len).map_err(err)?,
    )
}

/// The powerset DFA is well-formed, no bigger than `2^states`, and each of
/// its states is an ε-closed subset of the NFA's states.
pub fn power_output_wellformed(n: &Nfa, mode: PowersetMode) -> Result<(), String> {
    let d = determinize(n, mode).map_err(err)?;
    d.require_valid().map_err(err)?;
    if n.states.len() < 64 && d.states.len() > (1usize << n.states.len()) {
        return Err(format!(
            "powerset DFA has {} states from {} NFA states",
            d.states.len(),
            n.states.len()
        ));
    }
    for state in &d.states {
        let subset = state.to_set();
        if !subset.is_subset(&n.states) {
            return Err(format!("powerset state {state} mentions non-states"));
        }
        if n.eps_closure(&subset) != subset {
            return Err(format!("powerset state {state} is not ε-closed"));
        }
    }
    Ok(())
}

/// Full and reachable powerset modes accept the same language and minimize
/// to isomorphic machines. (Skipped above the full-enumeration limit.)
pub fn power_modes_agree(n: &Nfa) -> Result<(), String> {
    if n.states.len() > FULL_POWERSET_LIMIT {
        return Ok(());
    }
    let full = determinize(n, PowersetMode::Full).map_err(err)?;
    let reachable = determinize(n, PowersetMode::Reachable).map_err(err)?;
    if !equivalent(&full, &reachable).map_err(err)? {
        return Err("full and reachable powerset DFAs differ in language".to_string());
    }
    let min_full = brzozowski(&full).map_err(err)?;
    let min_reachable = brzozowski(&reachable).map_err(err)?;
    if find_isomorphism(&min_full, &min_reachable)
        .map_err(err)?
        .is_none()
    {
        return Err("powerset modes minimize to non-isomorphic machines".to_string());
    }
    Ok(())
}

/// ε-closure is idempotent, monotone, confined to states, and contains
/// every state of its argument.
pub fn epsilon_closure_laws(n: &Nfa, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), String> {
    let states: Vec<&Hf> = n.states.iter().collect();
    for _ in 0..samples {
        let mut small: BTreeSet<Hf> = states
            .iter()
            .filter(|_| rng.gen_range(0..3) == 0)
            .map(|q| (*q).clone())
            .collect();
        if rng.gen_range(0..4) == 0 {
            small.insert(Hf::ord_of(n.states.len() + 3)); // not a state
        }
        let mut large = small.clone();
        large.extend(
            states
                .iter()
                .filter(|_| rng.gen_range(0..3) == 0)
                .map(|q| (*q).clone()),
        );

        let closed_small = n.eps_closure(&small);
        if !closed_small.is_subset(&n.states) {
            return Err("ε-closure left the state set".to_string());
        }
        if n.eps_closure(&closed_small) != closed_small {
            return Err("ε-closure is not idempotent".to_string());
        }
        if !closed_small.is_superset(
            &small
                .intersection(&n.states)
                .cloned()
                .collect::<BTreeSet<_>>(),
        ) {
            return Err("ε-closure dropped a state of its argument".to_string());
        }
        if !closed_small.is_subset(&n.eps_closure(&large)) {
            return Err("ε-closure is not monotone".to_string());
        }
    }
    Ok(())
}

/// NFA runs always produce ε-closed subsets of the state set.
pub fn nfa_runs_closed_and_confined(
    n: &Nfa,
    rng: &mut ChaCha8Rng,
    samples: usize,
    max_len: usize,
) -> Result<(), String> {
    for _ in 0..samples {
        let w = random::random_word(rng, &n.alphabet, max_len);
        let reached = n.run(&w).map_err(err)?;
        if !reached.is_subset(&n.states) {
            return Err("nfa run left the state set".to_string());
        }
        if n.eps_closure(&reached) != reached {
            return Err("nfa run result is not ε-closed".to_string());
        }
    }
    Ok(())
}

// ------------------------------------------------------------------ closure

pub fn intersection_matches_oracle(a: &Dfa, b: &Dfa, max_len: usize) -> Result<(), String> {
    let product = intersection(a, b).map_err(err)?;
    let in_b: BTreeSet<Word> = dfa_language_upto(b, max_len).map_err(err)?.into_iter().collect();
    let want: Vec<Word> = dfa_language_upto(a, max_len)
        .map_err(err)?
        .into_iter()
        .filter(|w| in_b.contains(w))
        .collect();
    same_language(
        "intersection",
        &a.alphabet,
        &dfa_language_upto(&product, max_len).map_err(err)?,
        &want,
    )
}

pub fn union_matches_oracle(a: &Dfa, b: &Dfa, max_len: usize) -> Result<(), String> {
    let either = union(a, b).map_err(err)?;
    let in_b: BTreeSet<Word> = dfa_language_upto(b, max_len).map_err(err)?.into_iter().collect();
    let want: Vec<Word> = words_upto(&a.alphabet, max_len)
        .into_iter()
        .filter(|w| in_b.contains(w) || a.accepts(w).unwrap_or(false))
        .collect();
    same_language(
        "union",
        &a.alphabet,
        &dfa_language_upto(&either, max_len).map_err(err)?,
        &want,
    )
}

/// Every word is accepted by exactly one of the machine and its complement,
/// and complementing twice is the structural identity.
pub fn complement_splits_words(m: &Dfa, max_len: usize) -> Result<(), String> {
    let c = complement(m).map_err(err)?;
    if complement(&c).map_err(err)? != *m {
        return Err("complement is not an involution".to_string());
    }
    for w in words_upto(&m.alphabet, max_len) {
        if m.accepts(&w).map_err(err)? == c.accepts(&w).map_err(err)? {
            return Err(format!(
                "complement does not split {}",
                m.alphabet.render_word(&w)
            ));
        }
    }
    Ok(())
}

pub fn concatenation_matches_oracle(a: &Dfa, b: &Dfa, max_len: usize) -> Result<(), String> {
    let joined = concatenation(a, b).map_err(err)?;
    let lang_a = dfa_language_upto(a, max_len).map_err(err)?;
    let lang_b = dfa_language_upto(b, max_len).map_err(err)?;
    let mut want: BTreeSet<Word> = BTreeSet::new();
    for u in &lang_a {
        for v in &lang_b {
            if u.len() + v.len() <= max_len {
                let mut uv = u.clone();
                uv.extend_from_slice(v);
                want.insert(uv);
            }
        }
    }
    let mut want: Vec<Word> = want.into_iter().collect();
    want.sort_by(|x, y| (x.len(), x.as_slice()).cmp(&(y.len(), y.as_slice())));
    same_language(
        "concatenation",
        &a.alphabet,
        &nfa_language_upto(&joined, max_len).map_err(err)?,
        &want,
    )
}

/// Every word the concatenation NFA accepts splits into an accepted prefix
/// and an accepted suffix.
pub fn concatenation_splits(a: &Dfa, b: &Dfa, max_len: usize) -> Result<(), String> {
    let joined = concatenation(a, b).map_err(err)?;
    for w in nfa_language_upto(&joined, max_len).map_err(err)? {
        let splits = (0..=w.len()).any(|i| {
            a.accepts(&w[..i]).unwrap_or(false) && b.accepts(&w[i..]).unwrap_or(false)
        });
        if !splits {
            return Err(format!(
                "accepted word {} admits no accepted split",
                a.alphabet.render_word(&w)
            ));
        }
    }
    Ok(())
}

pub fn star_matches_oracle(m: &Dfa, max_len: usize) -> Result<(), String> {
    let starred = kleene_star(m).map_err(err)?;
    let base: BTreeSet<Word> = dfa_language_upto(m, max_len).map_err(err)?.into_iter().collect();
    // Dynamic programming over words in length order: a word is in the star
    // closure iff it is empty or some nonempty accepted prefix leaves a
    // suffix already in the closure.
    let mut closure: BTreeSet<Word> = BTreeSet::new();
    let mut want: Vec<Word> = Vec::new();
    for w in words_upto(&m.alphabet, max_len) {
        let inside = w.is_empty()
            || (1..=w.len()).any(|i| base.contains(&w[..i]) && closure.contains(&w[i..]));
        if inside {
            closure.insert(w.clone());
            want.push(w);
        }
    }
    same_language(
        "star",
        &m.alphabet,
        &nfa_language_upto(&starred, max_len).map_err(err)?,
        &want,
    )
}

/// The constructions produce well-formed machines of exactly the predicted
/// sizes: product `|a|·|b|`, sum `|a|+|b|`, star `|a|+1`.
pub fn construction_state_counts(a: &Dfa, b: &Dfa) -> Result<(), String> {
    let product = intersection(a, b).map_err(err)?;
    product.require_valid().map_err(err)?;
    if product.states.len() != a.states.len() * b.states.len() {
        return Err(format!(
            "product has {} states, expected {}",
            product.states.len(),
            a.states.len() * b.states.len()
        ));
    }
    let joined = concatenation(a, b).map_err(err)?;
    joined.require_valid().map_err(err)?;
    if joined.states.len() != a.states.len() + b.states.len() {
        return Err(format!(
            "sum has {} states, expected {}",
            joined.states.len(),
            a.states.len() + b.states.len()
        ));
    }
    let starred = kleene_star(a).map_err(err)?;
    starred.require_valid().map_err(err)?;
    if starred.states.len() != a.states.len() + 1 {
        return Err(format!(
            "star has {} states, expected {}",
            starred.states.len(),
            a.states.len() + 1
        ));
    }
    union(a, b).map_err(err)?.require_valid().map_err(err)?;
    Ok(())
}

// -------------------------------------------------------------------- regex

/// The compiled DFA and the direct syntax-tree matcher agree on every word
/// up to the bound.
pub fn regex_compile_matches_reference(
    r: &Regex,
    alphabet: &Alphabet,
    max_len: usize,
) -> Result<(), String> {
    let m = compile_regex(r, alphabet).map_err(err)?;
    if !is_minimal(&m).map_err(err)? {
        return Err("compiled machine is not minimal".to_string());
    }
    for w in words_upto(alphabet, max_len) {
        if m.accepts(&w).map_err(err)? != regex_matches(r, &w) {
            return Err(format!(
                "compiled {} disagrees with the matcher on {}",
                r.render(alphabet),
                alphabet.render_word(&w)
            ));
        }
    }
    Ok(())
}

/// Parsing the fully parenthesized rendering returns the identical tree.
pub fn regex_render_parse_roundtrip(r: &Regex, alphabet: &Alphabet) -> Result<(), String> {
    let text = r.render(alphabet);
    match parse_regex(&text, alphabet) {
        Ok(parsed) if parsed == *r => Ok(()),
        Ok(_) => Err(format!("{text} parsed back to a different tree")),
        Err(e) => Err(format!("{text} failed to reparse: {e}")),
    }
}
