//! `hfa` — command-line front end for the automata library.
//!
//! Exit codes follow one contract across subcommands: 0 for success or a
//! positive verdict (accept, equivalent, isomorphic, all properties pass),
//! 1 for a negative verdict (reject, violations found, differs, not
//! isomorphic, failing properties), 2 for usage or input errors.

mod dot;
mod format;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use format::Automaton;
use hfa::suite::{run_suite, SuiteConfig};
use hfa::{Alphabet, Dfa, PowersetMode};

#[derive(Parser)]
#[command(
    name = "hfa",
    version,
    about = "Finite automata over hereditarily finite set states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the automaton axioms of a file; print `ok` or each violation
    Check { file: PathBuf },
    /// Run a word through an automaton and print the visited states
    Run { file: PathBuf, word: String },
    /// Apply a construction to an automaton file and write the result
    Transform {
        file: PathBuf,
        op: Op,
        /// Output file
        #[arg(long)]
        out: PathBuf,
        /// Powerset scope used by determinization
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Decide language equivalence of two DFA files
    Equiv { a: PathBuf, b: PathBuf },
    /// Print a state isomorphism between two DFA files, if one exists
    Iso { a: PathBuf, b: PathBuf },
    /// Compile a regular expression to a minimal DFA file
    Regex {
        expr: String,
        /// Alphabet, one character per symbol, e.g. `ab`
        #[arg(long)]
        alphabet: String,
        /// Output file
        #[arg(long)]
        out: PathBuf,
    },
    /// Export an automaton file as a Graphviz digraph
    Dot {
        file: PathBuf,
        /// Output file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized property suite and print its report
    Proptest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random cases per property
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        max_states: usize,
        /// Length bound for the word-enumeration oracles
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        /// Powerset scope used by the powerset properties
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        /// Directory for counterexample files
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Evaluate cases on a thread pool
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Determinize,
    Reverse,
    Complement,
    Accessible,
    Collapse,
    Canonical,
    Brzozowski,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Reachable,
    Auto,
}

impl From<ModeArg> for PowersetMode {
    fn from(m: ModeArg) -> PowersetMode {
        match m {
            ModeArg::Full => PowersetMode::Full,
            ModeArg::Reachable => PowersetMode::Reachable,
            ModeArg::Auto => PowersetMode::default(),
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Automaton> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    format::parse_automaton(&text)
        .map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_dfa(path: &Path, purpose: &str) -> Result<Dfa> {
    match load(path)? {
        Automaton::Dfa(d) => Ok(d),
        Automaton::Nfa(_) => bail!(
            "{}: {purpose} needs a DFA; determinize the NFA first",
            path.display()
        ),
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { file } => cmd_check(&file),
        Command::Run { file, word } => cmd_run(&file, &word),
        Command::Transform {
            file,
            op,
            out,
            mode,
        } => cmd_transform(&file, op, &out, mode.into()),
        Command::Equiv { a, b } => cmd_equiv(&a, &b),
        Command::Iso { a, b } => cmd_iso(&a, &b),
        Command::Regex {
            expr,
            alphabet,
            out,
        } => cmd_regex(&expr, &alphabet, &out),
        Command::Dot { file, out } => cmd_dot(&file, out.as_deref()),
        Command::Proptest {
            seed,
            count,
            max_states,
            max_len,
            mode,
            out,
            parallel,
        } => cmd_proptest(
            SuiteConfig {
                seed,
                count,
                max_states,
                max_len,
                mode: mode.into(),
                parallel,
                ..SuiteConfig::default()
            },
            &out,
        ),
    }
}

fn cmd_check(file: &Path) -> Result<u8> {
    let violations = match load(file)? {
        Automaton::Dfa(d) => d.validate(),
        Automaton::Nfa(n) => n.validate(),
    };
    if violations.is_empty() {
        println!("ok");
        Ok(0)
    } else {
        for v in violations {
            println!("{v}");
        }
        Ok(1)
    }
}

fn cmd_run(file: &Path, word: &str) -> Result<u8> {
    match load(file)? {
        Automaton::Dfa(d) => {
            d.require_valid()?;
            let w = d.alphabet.parse_word(word)?;
            let trace = d.trace(&w)?;
            let rendered: Vec<String> = trace.iter().map(|q| q.to_string()).collect();
            println!("{}", rendered.join(" → "));
            let accepted = d.finals.contains(trace.last().unwrap());
            println!("{}", if accepted { "accept" } else { "reject" });
            Ok(u8::from(!accepted))
        }
        Automaton::Nfa(n) => {
            n.require_valid()?;
            let w = n.alphabet.parse_word(word)?;
            let trace = n.trace(&w)?;
            let rendered: Vec<String> = trace
                .iter()
                .map(|set| {
                    let inner: Vec<String> = set.iter().map(|q| q.to_string()).collect();
                    format!("{{{}}}", inner.join(", "))
                })
                .collect();
            println!("{}", rendered.join(" → "));
            let accepted = trace
                .last()
                .unwrap()
                .intersection(&n.finals)
                .next()
                .is_some();
            println!("{}", if accepted { "accept" } else { "reject" });
            Ok(u8::from(!accepted))
        }
    }
}

fn cmd_transform(file: &Path, op: Op, out: &Path, mode: PowersetMode) -> Result<u8> {
    let input = load(file)?;
    let before = input.state_count();
    let started = Instant::now();
    let result = match (op, input) {
        (Op::Determinize, Automaton::Nfa(n)) => {
            Automaton::Dfa(hfa::determinize(&n, mode)?)
        }
        (Op::Determinize, Automaton::Dfa(d)) => {
            Automaton::Dfa(hfa::determinize(&d.to_nfa(), mode)?)
        }
        (Op::Reverse, Automaton::Dfa(d)) => Automaton::Nfa(hfa::reverse(&d)?),
        (Op::Complement, Automaton::Dfa(d)) => Automaton::Dfa(hfa::complement(&d)?),
        (Op::Accessible, Automaton::Dfa(d)) => Automaton::Dfa(hfa::accessible_dfa(&d)?),
        (Op::Collapse, Automaton::Dfa(d)) => Automaton::Dfa(hfa::collapse(&d)?),
        (Op::Canonical, Automaton::Dfa(d)) => Automaton::Dfa(hfa::canonical_dfa(&d)?),
        (Op::Brzozowski, Automaton::Dfa(d)) => {
            Automaton::Dfa(hfa::minimize::brzozowski_with(&d, mode)?)
        }
        (_, Automaton::Nfa(_)) => {
            bail!("this transform needs a DFA input; determinize the NFA first")
        }
    };
    let elapsed = started.elapsed();
    fs::write(out, format::render(&result))
        .with_context(|| format!("cannot write {}", out.display()))?;
    println!("states: {before} -> {}", result.state_count());
    eprintln!("transformed in {elapsed:.2?}");
    Ok(0)
}

fn cmd_equiv(a: &Path, b: &Path) -> Result<u8> {
    let da = load_dfa(a, "equivalence")?;
    let db = load_dfa(b, "equivalence")?;
    match hfa::distinguishing_word(&da, &db)? {
        None => {
            // The exact product decision must concur with the witness search.
            debug_assert!(hfa::equivalent(&da, &db)?);
            println!("equivalent");
            Ok(0)
        }
        Some(w) => {
            println!("differs on {}", da.alphabet.render_word(&w));
            Ok(1)
        }
    }
}

fn cmd_iso(a: &Path, b: &Path) -> Result<u8> {
    let mut da = load_dfa(a, "isomorphism")?;
    let mut db = load_dfa(b, "isomorphism")?;
    for (path, d) in [(a, &mut da), (b, &mut db)] {
        let accessible = hfa::accessible_dfa(d)?;
        if accessible.states.len() != d.states.len() {
            eprintln!(
                "note: ignoring {} unreachable states of {}",
                d.states.len() - accessible.states.len(),
                path.display()
            );
            *d = accessible;
        }
    }
    match hfa::find_isomorphism(&da, &db)? {
        Some(map) => {
            for (p, q) in map {
                println!("{p} ↦ {q}");
            }
            Ok(0)
        }
        None => {
            println!("not isomorphic");
            Ok(1)
        }
    }
}

fn cmd_regex(expr: &str, alphabet: &str, out: &Path) -> Result<u8> {
    let alphabet = Alphabet::new(alphabet.chars())?;
    if alphabet.is_empty() {
        bail!("the alphabet must not be empty");
    }
    let parsed = hfa::parse_regex(expr, &alphabet).map_err(|e| anyhow!("{e}"))?;
    let compiled = hfa::langtools::compile_regex(&parsed, &alphabet)?;
    fs::write(out, format::render_dfa(&compiled))
        .with_context(|| format!("cannot write {}", out.display()))?;
    println!("states: {}", compiled.states.len());
    Ok(0)
}

fn cmd_dot(file: &Path, out: Option<&Path>) -> Result<u8> {
    let rendered = dot::to_dot(&load(file)?);
    match out {
        Some(path) => fs::write(path, rendered)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(0)
}

fn cmd_proptest(cfg: SuiteConfig, out_dir: &Path) -> Result<u8> {
    let started = Instant::now();
    let report = run_suite(&cfg);
    print!("{}", report.render());
    eprintln!("suite finished in {:.2?}", started.elapsed());
    for property in &report.properties {
        for failure in &property.failures {
            let slug: String = property
                .name
                .chars()
                .map(|c| if c.is_alphanumeric() { c } else { '-' })
                .collect();
            let stem = format!("counterexample-{slug}-case{}", failure.case);
            let mut artifacts: Vec<(String, String)> = Vec::new();
            if let Some(d) = &failure.dfa {
                artifacts.push((format!("{stem}-a.aut"), format::render_dfa(d)));
            }
            if let Some(d) = &failure.second_dfa {
                artifacts.push((format!("{stem}-b.aut"), format::render_dfa(d)));
            }
            if let Some(n) = &failure.nfa {
                artifacts.push((format!("{stem}-n.aut"), format::render_nfa(n)));
            }
            if let Some(r) = &failure.regex {
                artifacts.push((format!("{stem}.regex"), format!("{r}\n")));
            }
            for (name, text) in artifacts {
                let path = out_dir.join(name);
                fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?;
                eprintln!("wrote {}", path.display());
            }
        }
    }
    Ok(u8::from(!report.all_passed()))
}
