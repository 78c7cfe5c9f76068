//! Accessibility, indistinguishability, canonical machines, and
//! Brzozowski's minimization.
//!
//! A DFA is minimal when every state is accessible and no two states accept
//! the same word set from wherever they sit (equal "right languages").
//! Minimal machines are unique up to isomorphism: both the collapse of the
//! accessible part and Brzozowski's double reverse-determinize land on the
//! same machine, and [`canonical_dfa`] renames it onto von Neumann ordinals
//! ordered by each state's shortest witness, which makes the canonical form
//! a structural fixpoint.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automata::{AutomataError, Dfa, Symbol, Word};
use crate::constructions::{determinize, reverse, PowersetMode};
use crate::hfset::Hf;

/// States reachable from the initial state by some word. The initial state
/// is always included (the empty word witnesses it).
pub fn accessible_states(m: &Dfa) -> Result<BTreeSet<Hf>, AutomataError> {
    Ok(shortest_witnesses(m)?.into_keys().collect())
}

/// For every accessible state, the length-lexicographically least word that
/// reaches it (symbol order = alphabet order). Breadth-first search visits
/// words in exactly that order, so the first visit wins.
pub fn shortest_witnesses(m: &Dfa) -> Result<BTreeMap<Hf, Word>, AutomataError> {
    m.require_valid()?;
    let mut witnesses: BTreeMap<Hf, Word> = BTreeMap::new();
    witnesses.insert(m.init.clone(), Vec::new());
    let mut queue = VecDeque::from([m.init.clone()]);
    while let Some(q) = queue.pop_front() {
        let here = witnesses[&q].clone();
        for x in m.alphabet.symbols() {
            let target = m.next(&q, x)?.clone();
            if !witnesses.contains_key(&target) {
                let mut word = here.clone();
                word.push(x);
                witnesses.insert(target.clone(), word);
                queue.push_back(target);
            }
        }
    }
    Ok(witnesses)
}

/// The least word reaching `q`; errors if `q` is not accessible.
pub fn path_to(m: &Dfa, q: &Hf) -> Result<Word, AutomataError> {
    shortest_witnesses(m)?
        .remove(q)
        .ok_or_else(|| AutomataError::InaccessibleState(q.clone()))
}

/// Restriction of the DFA to its accessible states; the language is
/// unchanged, and restricting twice is the identity.
pub fn accessible_dfa(m: &Dfa) -> Result<Dfa, AutomataError> {
    let keep = accessible_states(m)?;
    let nxt = m
        .nxt
        .iter()
        .filter(|(q, _)| keep.contains(q))
        .map(|(q, row)| (q.clone(), row.clone()))
        .collect();
    Ok(Dfa {
        alphabet: m.alphabet.clone(),
        states: keep.clone(),
        init: m.init.clone(),
        finals: m.finals.intersection(&keep).cloned().collect(),
        nxt,
    })
}

/// A partition of a DFA's state set into disjoint nonempty blocks.
///
/// Blocks are numbered in ascending order of their least member, so the
/// partition of a given machine is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<BTreeSet<Hf>>,
    index: BTreeMap<Hf, usize>,
}

impl Partition {
    fn from_ids(ids: &BTreeMap<Hf, usize>) -> Partition {
        let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
        let mut blocks: Vec<BTreeSet<Hf>> = Vec::new();
        let mut index = BTreeMap::new();
        // States iterate ascending, so blocks are ordered by least member.
        for (q, &old) in ids {
            let id = *renumber.entry(old).or_insert_with(|| {
                blocks.push(BTreeSet::new());
                blocks.len() - 1
            });
            blocks[id].insert(q.clone());
            index.insert(q.clone(), id);
        }
        Partition { blocks, index }
    }

    pub fn blocks(&self) -> &[BTreeSet<Hf>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Index of the block containing `q`, if `q` is in the carrier.
    pub fn block_of(&self, q: &Hf) -> Option<usize> {
        self.index.get(q).copied()
    }

    /// Are `p` and `q` in the same block?
    pub fn same_block(&self, p: &Hf, q: &Hf) -> bool {
        match (self.block_of(p), self.block_of(q)) {
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }

    /// All blocks are singletons.
    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }
}

/// Groups states with equal right languages, by Moore partition refinement:
/// start from the accepting/rejecting split and keep splitting blocks whose
/// members disagree on some successor block until nothing changes. Two
/// states survive in one block exactly when no word distinguishes them.
pub fn indistinguishability_partition(m: &Dfa) -> Result<Partition, AutomataError> {
    m.require_valid()?;
    let mut ids: BTreeMap<Hf, usize> = m
        .states
        .iter()
        .map(|q| (q.clone(), usize::from(!m.finals.contains(q))))
        .collect();
    loop {
        let mut signatures: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let mut next_ids: BTreeMap<Hf, usize> = BTreeMap::new();
        for q in &m.states {
            let succ: Vec<usize> = m
                .alphabet
                .symbols()
                .map(|x| ids[&m.nxt[q][&x]])
                .collect();
            let key = (ids[q], succ);
            let fresh = signatures.len();
            let id = *signatures.entry(key).or_insert(fresh);
            next_ids.insert(q.clone(), id);
        }
        let stable = signatures.len()
            == ids.values().collect::<BTreeSet<_>>().len();
        ids = next_ids;
        if stable {
            return Ok(Partition::from_ids(&ids));
        }
    }
}

/// Merges indistinguishable states: each partition block becomes one state,
/// the HF set of its members. The transition out of a block follows any
/// representative (the relation is transition-respecting, so the choice is
/// immaterial). The language is unchanged.
pub fn collapse(m: &Dfa) -> Result<Dfa, AutomataError> {
    let partition = indistinguishability_partition(m)?;
    let block_values: Vec<Hf> = partition
        .blocks()
        .iter()
        .map(|b| Hf::from_elements(b.iter().cloned()))
        .collect();
    let value_of = |q: &Hf| block_values[partition.block_of(q).unwrap()].clone();
    let states: BTreeSet<Hf> = block_values.iter().cloned().collect();
    let finals: BTreeSet<Hf> = m.finals.iter().map(&value_of).collect();
    let mut nxt = BTreeMap::new();
    for (id, block) in partition.blocks().iter().enumerate() {
        let representative = block.first().unwrap();
        let mut row = BTreeMap::new();
        for x in m.alphabet.symbols() {
            row.insert(x, value_of(&m.nxt[representative][&x]));
        }
        nxt.insert(block_values[id].clone(), row);
    }
    Ok(Dfa {
        alphabet: m.alphabet.clone(),
        states,
        init: value_of(&m.init),
        finals,
        nxt,
    })
}

/// A DFA is minimal when every state is accessible and the
/// indistinguishability partition is discrete.
pub fn is_minimal(m: &Dfa) -> Result<bool, AutomataError> {
    Ok(accessible_states(m)? == m.states && indistinguishability_partition(m)?.is_discrete())
}

/// The number of states of a minimal DFA for the machine's language, i.e.
/// the index of the language's right-congruence.
pub fn min_states(m: &Dfa) -> Result<usize, AutomataError> {
    Ok(collapse(&accessible_dfa(m)?)?.states.len())
}

/// The canonical minimal DFA for the machine's language.
///
/// The states of the minimized machine stand for the classes of the
/// language's right-congruence (two words are congruent when every common
/// extension is accepted or rejected alike). Each class is named by a von
/// Neumann ordinal, assigned in length-lexicographic order of the class's
/// least witness word, so the empty word's class is always `ord 0`. The
/// naming is reproducible, which makes `canonical_dfa` idempotent: applying
/// it to its own output returns the same machine.
pub fn canonical_dfa(m: &Dfa) -> Result<Dfa, AutomataError> {
    let minimal = collapse(&accessible_dfa(m)?)?;
    let witnesses = shortest_witnesses(&minimal)?;
    let mut order: Vec<(usize, Word, Hf)> = witnesses
        .into_iter()
        .map(|(q, w)| (w.len(), w, q))
        .collect();
    order.sort();
    let rename: BTreeMap<Hf, Hf> = order
        .into_iter()
        .enumerate()
        .map(|(i, (_, _, q))| (q, Hf::ord_of(i)))
        .collect();
    let mut nxt = BTreeMap::new();
    for (q, row) in &minimal.nxt {
        let renamed_row: BTreeMap<Symbol, Hf> = row
            .iter()
            .map(|(&x, t)| (x, rename[t].clone()))
            .collect();
        nxt.insert(rename[q].clone(), renamed_row);
    }
    Ok(Dfa {
        alphabet: minimal.alphabet.clone(),
        states: rename.values().cloned().collect(),
        init: rename[&minimal.init].clone(),
        finals: minimal.finals.iter().map(|q| rename[q].clone()).collect(),
        nxt,
    })
}

/// Are `u` and `v` related by the right-congruence of the machine's
/// language? Decided on the machine: the words are congruent exactly when
/// they land in the same indistinguishability block of the accessible part.
pub fn residuals_equal(m: &Dfa, u: &[Symbol], v: &[Symbol]) -> Result<bool, AutomataError> {
    let acc = accessible_dfa(m)?;
    let partition = indistinguishability_partition(&acc)?;
    Ok(partition.same_block(&acc.run(u)?, &acc.run(v)?))
}

/// A bijection between two DFAs' state sets, preserving structure.
pub type StateMap = BTreeMap<Hf, Hf>;

/// Looks for an isomorphism between two DFAs over the same alphabet.
///
/// A structure-preserving map must send the state reached by `u` in `a` to
/// the state reached by `u` in `b`, so the only candidate is built by a
/// parallel breadth-first search from the two initial states. The candidate
/// is returned iff it is total, bijective, and preserves final states and
/// transitions — which decides isomorphism whenever both machines are
/// fully accessible (minimal machines in particular).
pub fn find_isomorphism(a: &Dfa, b: &Dfa) -> Result<Option<StateMap>, AutomataError> {
    if a.alphabet != b.alphabet {
        return Err(AutomataError::AlphabetMismatch);
    }
    a.require_valid()?;
    b.require_valid()?;
    if a.states.len() != b.states.len() {
        return Ok(None);
    }
    let mut map: StateMap = BTreeMap::new();
    let mut image: BTreeSet<Hf> = BTreeSet::new();
    map.insert(a.init.clone(), b.init.clone());
    image.insert(b.init.clone());
    let mut queue = VecDeque::from([(a.init.clone(), b.init.clone())]);
    while let Some((p, q)) = queue.pop_front() {
        if a.finals.contains(&p) != b.finals.contains(&q) {
            return Ok(None);
        }
        for x in a.alphabet.symbols() {
            let pt = a.nxt[&p][&x].clone();
            let qt = b.nxt[&q][&x].clone();
            match map.get(&pt) {
                Some(existing) => {
                    if *existing != qt {
                        return Ok(None);
                    }
                }
                None => {
                    if !image.insert(qt.clone()) {
                        return Ok(None); // two states of a would share an image
                    }
                    map.insert(pt.clone(), qt.clone());
                    queue.push_back((pt, qt));
                }
            }
        }
    }
    // Totality: the search only covers the accessible part of `a`.
    if map.len() != a.states.len() {
        return Ok(None);
    }
    Ok(Some(map))
}

/// Reverse, determinize, and restrict to the accessible part. The result
/// accepts the reversal of the input's language; when the input had no
/// inaccessible states it is also minimal, because the right languages of
/// powerset states over the reversal are unions of the input's (disjoint)
/// left languages.
pub fn reverse_determinize(m: &Dfa, mode: PowersetMode) -> Result<Dfa, AutomataError> {
    accessible_dfa(&determinize(&reverse(m)?, mode)?)
}

/// Brzozowski's minimization: make the machine accessible, then apply
/// [`reverse_determinize`] twice. The first pass yields a minimal machine
/// for the reversed language, the second undoes the reversal, so the result
/// is the minimal DFA for the original language.
pub fn brzozowski(m: &Dfa) -> Result<Dfa, AutomataError> {
    brzozowski_with(m, PowersetMode::default())
}

/// [`brzozowski`] with an explicit powerset mode.
pub fn brzozowski_with(m: &Dfa, mode: PowersetMode) -> Result<Dfa, AutomataError> {
    let acc = accessible_dfa(m)?;
    reverse_determinize(&reverse_determinize(&acc, mode)?, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langtools::{dfa_language_upto, words_upto};
    use crate::samples;

    /// even_as plus an unreachable self-looping junk state.
    fn even_with_junk() -> Dfa {
        let mut m = samples::even_as();
        let junk = Hf::ord_of(7);
        m.states.insert(junk.clone());
        let row = m
            .alphabet
            .symbols()
            .map(|x| (x, junk.clone()))
            .collect();
        m.nxt.insert(junk, row);
        m
    }

    #[test]
    fn accessibility_of_even_as() {
        let m = samples::even_as();
        assert_eq!(accessible_states(&m).unwrap(), m.states);
        assert_eq!(accessible_dfa(&m).unwrap(), m);

        let with_junk = even_with_junk();
        assert_eq!(accessible_states(&with_junk).unwrap(), m.states);
        assert_eq!(accessible_dfa(&with_junk).unwrap(), m);
        assert_eq!(
            dfa_language_upto(&with_junk, 6).unwrap(),
            dfa_language_upto(&m, 6).unwrap()
        );
    }

    #[test]
    fn accessible_restriction_is_idempotent() {
        let m = even_with_junk();
        let once = accessible_dfa(&m).unwrap();
        assert_eq!(accessible_dfa(&once).unwrap(), once);
    }

    #[test]
    fn witness_words_reach_their_states() {
        let m = samples::even_as();
        assert_eq!(path_to(&m, &Hf::ord_of(0)).unwrap(), Vec::<Symbol>::new());
        assert_eq!(path_to(&m, &Hf::ord_of(1)).unwrap(), vec![Symbol(0)]);
        assert!(matches!(
            path_to(&even_with_junk(), &Hf::ord_of(7)),
            Err(AutomataError::InaccessibleState(_))
        ));
        let chain = samples::exact_word(&samples::alphabet_ab(), &[Symbol(0), Symbol(0)]);
        assert_eq!(
            path_to(&chain, &Hf::ord_of(2)).unwrap(),
            vec![Symbol(0), Symbol(0)]
        );
        for (q, w) in shortest_witnesses(&chain).unwrap() {
            assert_eq!(chain.run(&w).unwrap(), q);
        }
    }

    #[test]
    fn partition_of_even_as_is_discrete() {
        let p = indistinguishability_partition(&samples::even_as()).unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.is_discrete());
    }

    #[test]
    fn partition_merges_cloned_sinks() {
        let m = samples::cloned_sink();
        let p = indistinguishability_partition(&m).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.same_block(&Hf::ord_of(2), &Hf::ord_of(3)));
        assert!(!p.same_block(&Hf::ord_of(0), &Hf::ord_of(1)));
    }

    #[test]
    fn all_final_states_collapse_to_one_block() {
        let mut m = samples::even_as();
        m.finals = m.states.clone();
        let p = indistinguishability_partition(&m).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn collapse_merges_and_preserves_language() {
        let m = samples::cloned_sink();
        let c = collapse(&m).unwrap();
        assert!(c.validate().is_empty());
        assert_eq!(c.states.len(), 3);
        assert_eq!(
            dfa_language_upto(&c, 6).unwrap(),
            dfa_language_upto(&m, 6).unwrap()
        );
        // Already-minimal machines only get renamed into singleton blocks.
        let even = samples::even_as();
        let collapsed = collapse(&even).unwrap();
        assert!(find_isomorphism(&even, &collapsed).unwrap().is_some());
    }

    #[test]
    fn minimality_judgment() {
        assert!(is_minimal(&samples::even_as()).unwrap());
        assert!(!is_minimal(&even_with_junk()).unwrap());
        assert!(!is_minimal(&samples::cloned_sink()).unwrap());
    }

    #[test]
    fn min_states_examples() {
        assert_eq!(min_states(&samples::even_as()).unwrap(), 2);
        assert_eq!(min_states(&samples::cloned_sink()).unwrap(), 3);
        let nothing = samples::empty_language(&samples::alphabet_ab());
        assert_eq!(min_states(&nothing).unwrap(), 1);
    }

    #[test]
    fn canonical_machine_for_even_as() {
        let c = canonical_dfa(&samples::even_as()).unwrap();
        assert_eq!(
            c.states,
            BTreeSet::from([Hf::ord_of(0), Hf::ord_of(1)])
        );
        assert_eq!(c.init, Hf::ord_of(0));
        assert_eq!(c.finals, BTreeSet::from([Hf::ord_of(0)]));
        assert_eq!(c.states.len(), min_states(&samples::even_as()).unwrap());
    }

    #[test]
    fn canonical_machine_is_a_fixpoint() {
        for m in [samples::even_as(), samples::cloned_sink(), even_with_junk()] {
            let once = canonical_dfa(&m).unwrap();
            let twice = canonical_dfa(&once).unwrap();
            assert_eq!(once, twice);
            assert!(is_minimal(&once).unwrap());
        }
    }

    #[test]
    fn residual_relation_on_even_as() {
        let m = samples::even_as();
        let w = |t: &str| m.alphabet.parse_word(t).unwrap();
        assert!(residuals_equal(&m, &w(""), &w("aa")).unwrap());
        assert!(!residuals_equal(&m, &w("a"), &w("b")).unwrap());
        // Same-state words are congruent, and congruence survives extension.
        assert!(residuals_equal(&m, &w("ab"), &w("ba")).unwrap());
        assert!(residuals_equal(&m, &w("abb"), &w("bab")).unwrap());
    }

    #[test]
    fn isomorphism_finds_renamings() {
        let m = samples::even_as();
        let identity = find_isomorphism(&m, &m).unwrap().unwrap();
        assert!(identity.iter().all(|(p, q)| p == q));

        // Rename the two states to different ordinals.
        let renamed = {
            let map: BTreeMap<Hf, Hf> = BTreeMap::from([
                (Hf::ord_of(0), Hf::ord_of(3)),
                (Hf::ord_of(1), Hf::ord_of(4)),
            ]);
            Dfa::from_fn(
                m.alphabet.clone(),
                map.values().cloned().collect(),
                map[&m.init].clone(),
                m.finals.iter().map(|q| map[q].clone()).collect(),
                |q, x| {
                    let original = map.iter().find(|(_, v)| *v == q).unwrap().0;
                    map[&m.nxt[original][&x]].clone()
                },
            )
        };
        let h = find_isomorphism(&m, &renamed).unwrap().unwrap();
        assert_eq!(h[&Hf::ord_of(0)], Hf::ord_of(3));
        assert_eq!(h[&Hf::ord_of(1)], Hf::ord_of(4));

        let tiny = samples::universal(&m.alphabet);
        assert!(find_isomorphism(&m, &tiny).unwrap().is_none());
    }

    #[test]
    fn isomorphism_rejects_swapped_finals() {
        let m = samples::even_as();
        let mut swapped = m.clone();
        swapped.finals = BTreeSet::from([Hf::ord_of(1)]);
        assert!(find_isomorphism(&m, &swapped).unwrap().is_none());
    }

    #[test]
    fn reverse_determinize_minimizes_the_reversal() {
        let m = samples::exactly_ab();
        let r = reverse_determinize(&m, PowersetMode::default()).unwrap();
        assert!(is_minimal(&r).unwrap());
        let ba = m.alphabet.parse_word("ba").unwrap();
        assert_eq!(dfa_language_upto(&r, 6).unwrap(), vec![ba]);

        // even_as reads the same forwards and backwards.
        let even = samples::even_as();
        let rev = reverse_determinize(&even, PowersetMode::default()).unwrap();
        assert!(is_minimal(&rev).unwrap());
        assert_eq!(
            dfa_language_upto(&rev, 6).unwrap(),
            dfa_language_upto(&even, 6).unwrap()
        );
    }

    #[test]
    fn brzozowski_minimizes() {
        let m = samples::cloned_sink();
        let b = brzozowski(&m).unwrap();
        assert!(is_minimal(&b).unwrap());
        assert_eq!(b.states.len(), 3);
        assert_eq!(
            dfa_language_upto(&b, 6).unwrap(),
            dfa_language_upto(&m, 6).unwrap()
        );
        // Two independent minimizers agree up to isomorphism.
        let via_collapse = collapse(&accessible_dfa(&m).unwrap()).unwrap();
        assert!(find_isomorphism(&b, &via_collapse).unwrap().is_some());

        let even = samples::even_as();
        assert!(find_isomorphism(&brzozowski(&even).unwrap(), &even)
            .unwrap()
            .is_some());
    }

    #[test]
    fn brzozowski_handles_degenerate_machines() {
        let alphabet = samples::alphabet_ab();
        for m in [
            samples::empty_language(&alphabet),
            samples::universal(&alphabet),
        ] {
            let b = brzozowski(&m).unwrap();
            assert!(is_minimal(&b).unwrap());
            assert_eq!(b.states.len(), 1);
            assert_eq!(
                dfa_language_upto(&b, 4).unwrap(),
                dfa_language_upto(&m, 4).unwrap()
            );
        }
    }

    #[test]
    fn same_state_words_have_equal_residuals() {
        let m = samples::cloned_sink();
        for u in words_upto(&m.alphabet, 4) {
            for v in words_upto(&m.alphabet, 3) {
                if m.reaches_same_state(&u, &v).unwrap() {
                    assert!(residuals_equal(&m, &u, &v).unwrap());
                }
            }
        }
    }
}
