//! End-to-end tests driving the `hfa` binary: file round-trips, verdicts,
//! and the exit-code contract (0 positive, 1 negative, 2 input error).

use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

const EVEN_AS: &str = "\
# words with an even number of a's
kind dfa
alphabet a b
state {}
state {{}}
init {}
final {}
trans {} a {{}}
trans {} b {}
trans {{}} a {}
trans {{}} b {{}}
";

const ODD_AS: &str = "\
kind dfa
alphabet a b
state {}
state {{}}
init {}
final {{}}
trans {} a {{}}
trans {} b {}
trans {{}} a {}
trans {{}} b {{}}
";

const A_PLUS: &str = "\
kind nfa
alphabet a b
state {}
state {{}}
init {}
final {{}}
trans {} a {}
trans {} a {{}}
";

// Two duplicated accepting sinks (codes 3 and 11 are the ordinals 2 and 3).
const CLONED_SINK: &str = "\
kind dfa
alphabet a b
state #0
state #1
state #3
state #11
init #0
final #3
final #11
trans #0 a #3
trans #0 b #1
trans #1 a #1
trans #1 b #11
trans #3 a #3
trans #3 b #3
trans #11 a #11
trans #11 b #11
";

const UNIVERSAL: &str = "\
kind dfa
alphabet a b
state {}
init {}
final {}
trans {} a {}
trans {} b {}
";

const OTHER_ALPHABET: &str = "\
kind dfa
alphabet x
state {}
init {}
final {}
trans {} x {}
";

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hfa(args: &[&str]) -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_hfa"))
        .args(args)
        .output()
        .expect("binary runs");
    Outcome {
        code: output.status.code().expect("exit code"),
        stdout: String::from_utf8(output.stdout).unwrap(),
        stderr: String::from_utf8(output.stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_valid_file() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "even.aut", EVEN_AS);
    let out = hfa(&["check", path_str(&file)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "ok\n");
}

#[test]
fn check_reports_violations() {
    let dir = TempDir::new().unwrap();
    let broken = EVEN_AS.replace("final {}\n", "final #5\n");
    let file = write(&dir, "broken.aut", &broken);
    let out = hfa(&["check", path_str(&file)]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("final state"), "{}", out.stdout);
    assert!(out.stdout.contains("not in the state set"));
}

#[test]
fn check_rejects_malformed_files() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "bad.aut", "kind dfa\nalphabet a\nstate {\n");
    let out = hfa(&["check", path_str(&file)]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
}

#[test]
fn run_prints_trace_and_verdict() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "even.aut", EVEN_AS);

    let out = hfa(&["run", path_str(&file), "aa"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "{} → {{}} → {}\naccept\n");

    let out = hfa(&["run", path_str(&file), "a"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.ends_with("reject\n"));

    let out = hfa(&["run", path_str(&file), "z"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("'z'"), "{}", out.stderr);
}

#[test]
fn run_traces_nfa_state_sets() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "aplus.aut", A_PLUS);
    let out = hfa(&["run", path_str(&file), "a"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "{{}} → {{}, {{}}}\naccept\n");
    let out = hfa(&["run", path_str(&file), ""]);
    assert_eq!(out.code, 1);
}

#[test]
fn transform_determinizes_with_both_scopes() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "aplus.aut", A_PLUS);

    let out_path = dir.path().join("reachable.aut");
    let out = hfa(&[
        "transform",
        path_str(&file),
        "determinize",
        "--out",
        path_str(&out_path),
        "--mode",
        "reachable",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "states: 2 -> 3\n");

    let full_path = dir.path().join("full.aut");
    let out = hfa(&[
        "transform",
        path_str(&file),
        "determinize",
        "--out",
        path_str(&full_path),
        "--mode",
        "full",
    ]);
    assert_eq!(out.stdout, "states: 2 -> 4\n");

    // Both outputs are valid and equivalent.
    for p in [&out_path, &full_path] {
        assert_eq!(hfa(&["check", path_str(p)]).code, 0);
    }
    let out = hfa(&["equiv", path_str(&out_path), path_str(&full_path)]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "equivalent\n");
}

#[test]
fn transform_brzozowski_minimizes() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "sink.aut", CLONED_SINK);
    let out_path = dir.path().join("min.aut");
    let out = hfa(&[
        "transform",
        path_str(&file),
        "brzozowski",
        "--out",
        path_str(&out_path),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "states: 4 -> 3\n");

    let out = hfa(&["equiv", path_str(&file), path_str(&out_path)]);
    assert_eq!(out.code, 0);
}

#[test]
fn transform_rejects_inapplicable_ops() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "aplus.aut", A_PLUS);
    let out = hfa(&[
        "transform",
        path_str(&file),
        "collapse",
        "--out",
        path_str(&dir.path().join("x.aut")),
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("needs a DFA"), "{}", out.stderr);
}

#[test]
fn equiv_verdicts() {
    let dir = TempDir::new().unwrap();
    let even = write(&dir, "even.aut", EVEN_AS);
    let odd = write(&dir, "odd.aut", ODD_AS);
    let other = write(&dir, "other.aut", OTHER_ALPHABET);

    let out = hfa(&["equiv", path_str(&even), path_str(&odd)]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "differs on ε\n");

    let out = hfa(&["equiv", path_str(&even), path_str(&other)]);
    assert_eq!(out.code, 2);
}

#[test]
fn iso_mappings_and_verdicts() {
    let dir = TempDir::new().unwrap();
    let even = write(&dir, "even.aut", EVEN_AS);
    let universal = write(&dir, "all.aut", UNIVERSAL);

    let out = hfa(&["iso", path_str(&even), path_str(&even)]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "{} ↦ {}\n{{}} ↦ {{}}\n");

    let out = hfa(&["iso", path_str(&even), path_str(&universal)]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "not isomorphic\n");
}

#[test]
fn iso_connects_two_minimizers() {
    let dir = TempDir::new().unwrap();
    let sink = write(&dir, "sink.aut", CLONED_SINK);
    let brz = dir.path().join("brz.aut");
    let canonical = dir.path().join("canonical.aut");
    hfa(&["transform", path_str(&sink), "brzozowski", "--out", path_str(&brz)]);
    hfa(&["transform", path_str(&sink), "canonical", "--out", path_str(&canonical)]);
    let out = hfa(&["iso", path_str(&brz), path_str(&canonical)]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(out.stdout.lines().count(), 3);
    assert!(out.stdout.contains(" ↦ "));
}

#[test]
fn regex_compiles_to_minimal_files() {
    let dir = TempDir::new().unwrap();
    let sigma_star = dir.path().join("sigma.aut");
    let out = hfa(&["regex", "(a|b)*", "--alphabet", "ab", "--out", path_str(&sigma_star)]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout, "states: 1\n");
    assert_eq!(hfa(&["check", path_str(&sigma_star)]).code, 0);

    let astar_b = dir.path().join("astarb.aut");
    let out = hfa(&["regex", "a*b", "--alphabet", "ab", "--out", path_str(&astar_b)]);
    assert_eq!(out.stdout, "states: 3\n");
    let run = hfa(&["run", path_str(&astar_b), "aab"]);
    assert_eq!(run.code, 0);

    let out = hfa(&["regex", "((", "--alphabet", "ab", "--out", path_str(&dir.path().join("x"))]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("offset"), "{}", out.stderr);
}

#[test]
fn dot_export_shapes() {
    let dir = TempDir::new().unwrap();
    let even = write(&dir, "even.aut", EVEN_AS);
    let out = hfa(&["dot", path_str(&even)]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("digraph"));
    assert!(out.stdout.contains("doublecircle"));
    assert!(out.stdout.contains("__init0 -> \"{}\""));

    let aplus = write(&dir, "aplus.aut", A_PLUS);
    let dot = hfa(&["dot", path_str(&aplus)]);
    assert!(!dot.stdout.contains("dashed"));

    // A concatenation NFA carries ε-edges; build one through the library.
    let concat = hfa::concatenation(
        &hfa::samples::even_as(),
        &hfa::samples::ends_b(),
    )
    .unwrap();
    let file = dir.path().join("concat.aut");
    std::fs::write(&file, render_nfa_text(&concat)).unwrap();
    let dot = hfa(&["dot", path_str(&file)]);
    assert_eq!(dot.code, 0, "{}", dot.stderr);
    assert!(dot.stdout.contains("style=dashed"), "{}", dot.stdout);
}

/// Minimal NFA renderer for test fixtures (the binary's own renderer is not
/// linkable from an integration test).
fn render_nfa_text(n: &hfa::Nfa) -> String {
    let mut out = String::from("kind nfa\n");
    let chars: Vec<String> = n
        .alphabet
        .symbols()
        .map(|s| n.alphabet.char_of(s).unwrap().to_string())
        .collect();
    out.push_str(&format!("alphabet {}\n", chars.join(" ")));
    for q in &n.states {
        out.push_str(&format!("state {q}\n"));
    }
    for q in &n.init {
        out.push_str(&format!("init {q}\n"));
    }
    for q in &n.finals {
        out.push_str(&format!("final {q}\n"));
    }
    for (q, row) in &n.nxt {
        for (&x, targets) in row {
            for t in targets {
                out.push_str(&format!(
                    "trans {q} {} {t}\n",
                    n.alphabet.char_of(x).unwrap()
                ));
            }
        }
    }
    for (from, to) in &n.eps {
        out.push_str(&format!("eps {from} {to}\n"));
    }
    out
}

#[test]
fn proptest_reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join(".");
    let args = [
        "proptest",
        "--seed",
        "42",
        "--count",
        "5",
        "--max-states",
        "4",
        "--max-len",
        "4",
        "--out",
        path_str(&out_dir),
    ];
    let first = hfa(&args);
    assert_eq!(first.code, 0, "{}\n{}", first.stdout, first.stderr);
    assert!(first.stdout.contains("result: PASS"));

    let second = hfa(&args);
    assert_eq!(first.stdout, second.stdout);

    // The parallel run produces the identical report.
    let mut parallel_args: Vec<&str> = args.to_vec();
    parallel_args.push("--parallel");
    let third = hfa(&parallel_args);
    assert_eq!(first.stdout, third.stdout);
}
