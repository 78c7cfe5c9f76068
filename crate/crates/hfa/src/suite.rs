//! The executable property suite.
//!
//! Every law the library claims — the coding bijection and order laws of the
//! HF kernel, run semantics, language preservation of the powerset and
//! closure constructions, minimality and uniqueness of the minimizers, the
//! right-congruence facts behind the canonical machine — is written as a
//! pure check in [`checks`] and wired into a fixed registry that
//! [`run_suite`] evaluates over seeded random machines.
//!
//! Cases are independent: case `i` draws from its own RNG stream, so the
//! suite can fan out on a thread pool (`parallel = true`, needs the
//! `parallel` feature) and still aggregate results in case order. Reports
//! are bytewise reproducible for a given configuration, parallel or not.
//!
//! When a per-case property fails, the offending machine is greedily shrunk
//! (drop states, drop final markers, drop edges) while the same check keeps
//! failing, and the shrunk witness is attached to the failure.

use rand_chacha::ChaCha8Rng;

use crate::automata::{Dfa, Nfa};
use crate::constructions::PowersetMode;
use crate::langtools::Regex;
use crate::random;
use crate::samples;

pub mod checks;

/// Parameters of a suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Number of random cases per property.
    pub count: usize,
    /// Largest generated machine.
    pub max_states: usize,
    /// Length bound for the word-enumeration oracles.
    pub max_len: usize,
    /// Largest number of ε-edges in generated NFAs.
    pub max_eps: usize,
    /// Powerset scope used by the explicit powerset properties.
    pub mode: PowersetMode,
    /// Evaluate cases on a thread pool. Without the `parallel` feature this
    /// falls back to sequential evaluation; the report is identical either
    /// way.
    pub parallel: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            count: 100,
            max_states: 5,
            max_len: 6,
            max_eps: 4,
            mode: PowersetMode::default(),
            parallel: false,
        }
    }
}

/// One failing case of one property.
#[derive(Debug, Clone)]
pub struct CaseFailure {
    pub case: usize,
    pub message: String,
    /// The (shrunk, where possible) machines behind the failure, for the
    /// caller to serialize as counterexample files.
    pub dfa: Option<Dfa>,
    pub second_dfa: Option<Dfa>,
    pub nfa: Option<Nfa>,
    pub regex: Option<String>,
}

impl CaseFailure {
    fn plain(case: usize, message: String) -> CaseFailure {
        CaseFailure {
            case,
            message,
            dfa: None,
            second_dfa: None,
            nfa: None,
            regex: None,
        }
    }
}

/// Aggregated outcome of one property across all cases.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<CaseFailure>,
}

/// The full suite outcome.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub header: String,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|p| p.failures.is_empty())
    }

    /// Deterministic textual report: one line per property, failure details
    /// indented beneath, a summary line last.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header);
        out.push('\n');
        let mut failing_properties = 0usize;
        for p in &self.properties {
            let unit = if p.cases == 1 { "case" } else { "cases" };
            if p.failures.is_empty() {
                out.push_str(&format!("ok   {:<52} {:>6} {}\n", p.name, p.cases, unit));
            } else {
                failing_properties += 1;
                out.push_str(&format!(
                    "FAIL {:<52} {:>6} {}, {} failing\n",
                    p.name,
                    p.cases,
                    unit,
                    p.failures.len()
                ));
                for f in &p.failures {
                    out.push_str(&format!("     case {}: {}\n", f.case, f.message));
                }
            }
        }
        if failing_properties == 0 {
            out.push_str(&format!(
                "result: PASS ({} properties)\n",
                self.properties.len()
            ));
        } else {
            out.push_str(&format!(
                "result: FAIL ({} of {} properties failing)\n",
                failing_properties,
                self.properties.len()
            ));
        }
        out
    }
}

/// Names of the properties checked once per run, on exhaustive or seeded
/// inputs independent of the random machines.
pub const FIXED_PROPERTIES: &[&str] = &[
    "hf code/decode bijection",
    "hf order extends membership",
    "hf order extends subset",
    "hf order matches code order",
    "hf pair and sum round-trips",
];

/// Names of the properties checked on every random case, in registry order.
pub const PER_CASE_PROPERTIES: &[&str] = &[
    "dfa run append law",
    "dfa runs stay in states",
    "same-state relation is right invariant",
    "dfa embeds into nfa",
    "accessible restriction is a fixpoint",
    "accessible restriction preserves language",
    "collapse preserves language",
    "canonical machine preserves language",
    "brzozowski preserves language",
    "collapse of accessible part is minimal",
    "canonical machine is minimal",
    "brzozowski output is minimal",
    "minimal state counts agree",
    "minimizers agree up to isomorphism",
    "reverse-determinize is minimal on accessible input",
    "reverse-determinize accepts the reversal",
    "reversal nfa matches reversed words",
    "residual relation is right invariant",
    "same-state relation refines residuals",
    "minimal machine never larger than an equivalent one",
    "equivalence decision is cross-checked",
    "powerset preserves language",
    "powerset output is well-formed",
    "powerset modes agree",
    "epsilon closure laws",
    "nfa runs are closed and confined",
    "intersection matches the word oracle",
    "union matches the word oracle",
    "complement splits every word",
    "concatenation matches the word oracle",
    "accepted concatenations split",
    "star matches the word oracle",
    "construction state counts",
    "compiled regex matches the reference matcher",
    "regex render/parse round-trip",
];

/// Runs the whole suite for the given configuration.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let header = format!(
        "seed={} count={} max-states={} max-len={} max-eps={} mode={}",
        cfg.seed, cfg.count, cfg.max_states, cfg.max_len, cfg.max_eps, cfg.mode
    );
    let mut properties = Vec::with_capacity(FIXED_PROPERTIES.len() + PER_CASE_PROPERTIES.len());
    for (name, outcome) in fixed_block(cfg.seed) {
        properties.push(PropertyReport {
            name,
            cases: 1,
            failures: outcome
                .err()
                .map(|m| CaseFailure::plain(0, m))
                .into_iter()
                .collect(),
        });
    }
    let case_results = map_cases(cfg.count, cfg.parallel, |i| run_case(cfg, i));
    for (j, &name) in PER_CASE_PROPERTIES.iter().enumerate() {
        let failures = case_results
            .iter()
            .filter_map(|case| case[j].clone())
            .collect();
        properties.push(PropertyReport {
            name,
            cases: cfg.count,
            failures,
        });
    }
    SuiteReport { header, properties }
}

/// Maps `f` over case indices, in parallel when requested and compiled in.
fn map_cases<T, F>(count: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(&f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    (0..count).map(f).collect()
}

fn fixed_block(seed: u64) -> Vec<(&'static str, Result<(), String>)> {
    let mut rng = random::case_rng(seed, u64::MAX);
    vec![
        (FIXED_PROPERTIES[0], checks::hf_code_roundtrip(1 << 16)),
        (FIXED_PROPERTIES[1], checks::hf_order_extends_membership(256)),
        (FIXED_PROPERTIES[2], checks::hf_order_extends_subset(256)),
        (FIXED_PROPERTIES[3], checks::hf_order_matches_codes(1024)),
        (
            FIXED_PROPERTIES[4],
            checks::hf_pair_sum_roundtrip(&mut rng, 10_000),
        ),
    ]
}

/// Collects per-property outcomes for one case, in registry order.
struct CaseCtx {
    case: usize,
    out: Vec<Option<CaseFailure>>,
}

impl CaseCtx {
    /// A deterministic check of one DFA; failures are shrunk.
    fn dfa<F>(&mut self, m: &Dfa, f: F)
    where
        F: Fn(&Dfa) -> Result<(), String>,
    {
        match f(m) {
            Ok(()) => self.out.push(None),
            Err(first) => {
                let shrunk = shrink_dfa(m, &|c| f(c).is_err());
                let message = f(&shrunk).err().unwrap_or(first);
                self.out.push(Some(CaseFailure {
                    dfa: Some(shrunk),
                    ..CaseFailure::plain(self.case, message)
                }));
            }
        }
    }

    /// A randomized check of one DFA; attached unshrunk (the random draws
    /// could not be replayed against a mutated machine).
    fn dfa_rng<F>(&mut self, m: &Dfa, rng: &mut ChaCha8Rng, f: F)
    where
        F: Fn(&Dfa, &mut ChaCha8Rng) -> Result<(), String>,
    {
        self.out.push(f(m, rng).err().map(|message| CaseFailure {
            dfa: Some(m.clone()),
            ..CaseFailure::plain(self.case, message)
        }));
    }

    fn dfa_pair<F>(&mut self, a: &Dfa, b: &Dfa, f: F)
    where
        F: Fn(&Dfa, &Dfa) -> Result<(), String>,
    {
        self.out.push(f(a, b).err().map(|message| CaseFailure {
            dfa: Some(a.clone()),
            second_dfa: Some(b.clone()),
            ..CaseFailure::plain(self.case, message)
        }));
    }

    /// A deterministic check of one NFA; failures are shrunk.
    fn nfa<F>(&mut self, n: &Nfa, f: F)
    where
        F: Fn(&Nfa) -> Result<(), String>,
    {
        match f(n) {
            Ok(()) => self.out.push(None),
            Err(first) => {
                let shrunk = shrink_nfa(n, &|c| f(c).is_err());
                let message = f(&shrunk).err().unwrap_or(first);
                self.out.push(Some(CaseFailure {
                    nfa: Some(shrunk),
                    ..CaseFailure::plain(self.case, message)
                }));
            }
        }
    }

    fn nfa_rng<F>(&mut self, n: &Nfa, rng: &mut ChaCha8Rng, f: F)
    where
        F: Fn(&Nfa, &mut ChaCha8Rng) -> Result<(), String>,
    {
        self.out.push(f(n, rng).err().map(|message| CaseFailure {
            nfa: Some(n.clone()),
            ..CaseFailure::plain(self.case, message)
        }));
    }

    fn regex<F>(&mut self, r: &Regex, rendered: &str, f: F)
    where
        F: Fn(&Regex) -> Result<(), String>,
    {
        self.out.push(f(r).err().map(|message| CaseFailure {
            regex: Some(rendered.to_string()),
            ..CaseFailure::plain(self.case, message)
        }));
    }
}

fn run_case(cfg: &SuiteConfig, case: usize) -> Vec<Option<CaseFailure>> {
    let alphabet = samples::alphabet_ab();
    let mut rng = random::case_rng(cfg.seed, case as u64);
    let d1 = random::random_dfa(&mut rng, &alphabet, cfg.max_states);
    let d2 = random::random_dfa(&mut rng, &alphabet, cfg.max_states);
    let nfa = random::random_nfa(&mut rng, &alphabet, cfg.max_states, cfg.max_eps);
    let regex = random::random_regex(&mut rng, &alphabet, 4);
    let regex_text = regex.render(&alphabet);
    let k = cfg.max_len;
    let mode = cfg.mode;

    let mut ctx = CaseCtx {
        case,
        out: Vec::with_capacity(PER_CASE_PROPERTIES.len()),
    };

    ctx.dfa_rng(&d1, &mut rng, |m, r| checks::dfa_append_law(m, r, 16));
    ctx.dfa_rng(&d1, &mut rng, |m, r| checks::dfa_runs_stay_in_states(m, r, 16));
    ctx.dfa_rng(&d1, &mut rng, |m, r| {
        checks::same_state_right_invariant(m, r, 16)
    });
    ctx.dfa(&d1, |m| checks::dfa_as_nfa_agrees(m, k));
    ctx.dfa(&d1, checks::accessible_fixpoint);
    ctx.dfa(&d1, |m| checks::accessible_preserves_language(m, k));
    ctx.dfa(&d1, |m| checks::collapse_preserves_language(m, k));
    ctx.dfa(&d1, |m| checks::canonical_preserves_language(m, k));
    ctx.dfa(&d1, |m| checks::brzozowski_preserves_language(m, k));
    ctx.dfa(&d1, checks::collapse_accessible_is_minimal);
    ctx.dfa(&d1, checks::canonical_is_minimal);
    ctx.dfa(&d1, checks::brzozowski_is_minimal);
    ctx.dfa(&d1, checks::minimal_state_counts_agree);
    ctx.dfa(&d1, checks::minimizers_isomorphic);
    ctx.dfa(&d1, checks::reverse_determinize_minimal);
    ctx.dfa(&d1, |m| checks::reverse_determinize_reverses(m, k));
    ctx.dfa(&d1, |m| checks::reversal_matches_reversed_words(m, k));
    ctx.dfa_rng(&d1, &mut rng, |m, r| {
        checks::residuals_right_invariant(m, r, 16, k)
    });
    ctx.dfa_rng(&d1, &mut rng, |m, r| {
        checks::same_state_refines_residuals(m, r, 16, k)
    });
    ctx.dfa_rng(&d1, &mut rng, checks::minimal_never_larger);
    ctx.dfa_pair(&d1, &d2, |a, b| checks::equivalence_cross_checked(a, b, k));
    ctx.nfa(&nfa, |n| checks::power_preserves_language(n, k, mode));
    ctx.nfa(&nfa, |n| checks::power_output_wellformed(n, mode));
    ctx.nfa(&nfa, checks::power_modes_agree);
    ctx.nfa_rng(&nfa, &mut rng, |n, r| checks::epsilon_closure_laws(n, r, 16));
    ctx.nfa_rng(&nfa, &mut rng, |n, r| {
        checks::nfa_runs_closed_and_confined(n, r, 16, k)
    });
    ctx.dfa_pair(&d1, &d2, |a, b| checks::intersection_matches_oracle(a, b, k));
    ctx.dfa_pair(&d1, &d2, |a, b| checks::union_matches_oracle(a, b, k));
    ctx.dfa(&d1, |m| checks::complement_splits_words(m, k));
    ctx.dfa_pair(&d1, &d2, |a, b| checks::concatenation_matches_oracle(a, b, k));
    ctx.dfa_pair(&d1, &d2, |a, b| checks::concatenation_splits(a, b, k));
    ctx.dfa(&d1, |m| checks::star_matches_oracle(m, k.min(5)));
    ctx.dfa_pair(&d1, &d2, checks::construction_state_counts);
    ctx.regex(&regex, &regex_text, |r| {
        checks::regex_compile_matches_reference(r, &alphabet, k.min(5))
    });
    ctx.regex(&regex, &regex_text, |r| {
        checks::regex_render_parse_roundtrip(r, &alphabet)
    });

    debug_assert_eq!(ctx.out.len(), PER_CASE_PROPERTIES.len());
    ctx.out
}

/// Greedily shrinks a DFA while `fails` keeps holding: drop a non-initial
/// state (dangling transitions are redirected to the initial state), then
/// drop final markers. Every candidate stays well-formed.
pub fn shrink_dfa(m: &Dfa, fails: &dyn Fn(&Dfa) -> bool) -> Dfa {
    let mut cur = m.clone();
    loop {
        let mut improved = false;
        for q in cur.states.clone() {
            if q == cur.init {
                continue;
            }
            let mut candidate = cur.clone();
            candidate.states.remove(&q);
            candidate.finals.remove(&q);
            candidate.nxt.remove(&q);
            for row in candidate.nxt.values_mut() {
                for target in row.values_mut() {
                    if *target == q {
                        *target = candidate.init.clone();
                    }
                }
            }
            if fails(&candidate) {
                cur = candidate;
                improved = true;
                break;
            }
        }
        if improved {
            continue;
        }
        for q in cur.finals.clone() {
            let mut candidate = cur.clone();
            candidate.finals.remove(&q);
            if fails(&candidate) {
                cur = candidate;
                improved = true;
                break;
            }
        }
        if !improved {
            return cur;
        }
    }
}

/// NFA counterpart of [`shrink_dfa`]: drop states, ε-edges, transition
/// entries, and final markers.
pub fn shrink_nfa(n: &Nfa, fails: &dyn Fn(&Nfa) -> bool) -> Nfa {
    let mut cur = n.clone();
    loop {
        let mut improved = false;
        for q in cur.states.clone() {
            let mut candidate = cur.clone();
            candidate.states.remove(&q);
            candidate.init.remove(&q);
            candidate.finals.remove(&q);
            candidate.nxt.remove(&q);
            for row in candidate.nxt.values_mut() {
                for targets in row.values_mut() {
                    targets.remove(&q);
                }
            }
            candidate.eps.retain(|(a, b)| *a != q && *b != q);
            if !candidate.states.is_empty() && fails(&candidate) {
                cur = candidate;
                improved = true;
                break;
            }
        }
        if improved {
            continue;
        }
        for edge in cur.eps.clone() {
            let mut candidate = cur.clone();
            candidate.eps.remove(&edge);
            if fails(&candidate) {
                cur = candidate;
                improved = true;
                break;
            }
        }
        if improved {
            continue;
        }
        for q in cur.finals.clone() {
            let mut candidate = cur.clone();
            candidate.finals.remove(&q);
            if fails(&candidate) {
                cur = candidate;
                improved = true;
                break;
            }
        }
        if !improved {
            return cur;
        }
    }
}
