use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_foresight"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const BELL: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q -> c;\n";

#[test]
fn bell_on_ring_needs_no_swaps() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bell.qasm", BELL);
    let report = dir.path().join("r.json");
    let out = run(&["route", "--input", s(&input), "--topology", "ring(4)", "--verify", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["report_version"], 1);
    let rec = &r["records"][0];
    assert_eq!(rec["swap_count"], 0);
    assert_eq!(rec["swap_overhead_cnots"], 0);
    assert_eq!(rec["verify"]["equivalence"]["pass"], true);
    assert!(String::from_utf8_lossy(&out.stdout).contains("cx q["));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/random_12_200.qasm");
    let go = |seed: &str| {
        let out = run(&["route", "--input", s(&corpus), "--topology", "tokyo", "--seed", seed]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(go("3"), go("3"));
    let report = dir.path().join("a.json");
    let out = run(&["route", "--input", s(&corpus), "--topology", "tokyo", "--router", "greedy", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn hybrid_records_the_winner() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/qft_6.qasm");
    let report = dir.path().join("r.json");
    let out = run(&["route", "--input", s(&corpus), "--topology", "tokyo", "--router", "hybrid", "--report", s(&report)]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["records"][0]["router"], "hybrid");
    assert!(matches!(r["records"][0]["winner"].as_str(), Some("foresight" | "greedy")));
}

#[test]
fn bad_qasm_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.qasm", "OPENQASM 2.0;\nqreg q[2];\ncx q[0] q[1];\n");
    let out = run(&["route", "--input", s(&input), "--topology", "ring(4)"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_topology_and_missing_file_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bell.qasm", BELL);
    assert_eq!(run(&["route", "--input", s(&input), "--topology", "moebius(3)"]).status.code(), Some(1));
    let missing = dir.path().join("nope.qasm");
    assert_eq!(run(&["route", "--input", s(&missing), "--topology", "ring(4)"]).status.code(), Some(1));
    assert_eq!(run(&["route", "--input", s(&input), "--topology", "line(1)"]).status.code(), Some(1));
    assert_eq!(run(&["route", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

fn routed_qft(dir: &Path) -> (PathBuf, String) {
    let input = dir.join("qft.qasm");
    assert_eq!(run(&["gen", "--family", "qft", "--qubits", "5", "--output", s(&input)]).status.code(), Some(0));
    let out = run(&["route", "--input", s(&input), "--topology", "line(5)"]);
    assert_eq!(out.status.code(), Some(0));
    (input, String::from_utf8(out.stdout).unwrap())
}

#[test]
fn verify_accepts_untouched_output() {
    let dir = tempfile::tempdir().unwrap();
    let (input, routed) = routed_qft(dir.path());
    assert!(routed.contains("swap q["));
    let r = write(dir.path(), "routed.qasm", &routed);
    let out = run(&["verify", "--input", s(&input), "--routed", s(&r), "--topology", "line(5)"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_rejects_a_dropped_swap() {
    let dir = tempfile::tempdir().unwrap();
    let (input, routed) = routed_qft(dir.path());
    let lines: Vec<&str> = routed.lines().collect();
    let swaps_line = lines.iter().position(|l| l.starts_with("// routing_swaps:")).unwrap();
    let last_swap = lines.iter().rposition(|l| l.starts_with("swap ")).unwrap();
    let mut kept: Vec<String> = Vec::new();
    for (i, l) in lines.iter().enumerate() {
        if i == last_swap {
            continue;
        }
        if i == swaps_line {
            // The dropped SWAP is the last routing SWAP; earlier indices stay valid.
            let mut idx: Vec<&str> = l.trim_start_matches("// routing_swaps:").split_whitespace().collect();
            idx.pop();
            kept.push(format!("// routing_swaps: {}", idx.join(" ")));
        } else {
            kept.push(l.to_string());
        }
    }
    let r = write(dir.path(), "tampered.qasm", &(kept.join("\n") + "\n"));
    let out = run(&["verify", "--input", s(&input), "--routed", s(&r), "--topology", "line(5)"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_rejects_a_gate_on_a_non_edge() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bell.qasm", BELL);
    let out = run(&["route", "--input", s(&input), "--topology", "line(4)"]);
    let routed = String::from_utf8(out.stdout).unwrap();
    let cx = routed.lines().find(|l| l.starts_with("cx ")).unwrap().to_string();
    // Move the target two sites away: still a valid program, no longer routable.
    let tampered = routed.replace(&cx, "cx q[0],q[3];");
    let r = write(dir.path(), "t.qasm", &tampered);
    let out = run(&["verify", "--input", s(&input), "--routed", s(&r), "--topology", "line(4)"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_without_header_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bell.qasm", BELL);
    let out = run(&["verify", "--input", s(&input), "--routed", s(&input), "--topology", "ring(2)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_bv_has_one_cx_per_key_bit() {
    let out = run(&["gen", "--family", "bv", "--qubits", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("cx ")).count(), 99);
    assert_eq!(run(&["gen", "--family", "ghz", "--qubits", "1"]).status.code(), Some(1));
}

#[test]
fn bench_counts_and_sweep_monotonicity() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for (name, family, n) in [("a", "ghz", "3"), ("b", "ghz", "4"), ("c", "bv", "4")] {
        let p = corpus.join(format!("{name}.qasm"));
        assert_eq!(run(&["gen", "--family", family, "--qubits", n, "--output", s(&p)]).status.code(), Some(0));
    }
    let report = dir.path().join("bench.json");
    let out = run(&[
        "bench", "--corpus", s(&corpus), "--topology", "ring(5)", "--routers", "foresight,greedy,hybrid", "--seeds", "0,1",
        "--verify", "--report", s(&report),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let records = r["records"].as_array().unwrap();
    assert_eq!(records.len(), 3 * 3 * 2);
    for rec in records {
        for key in ["swap_count", "swap_overhead_cnots", "depth", "eps", "wall_time_ms", "seed", "original_cnots"] {
            assert!(rec[key].is_number(), "{key} missing in {rec}");
        }
    }

    let bv = dir.path().join("bv");
    std::fs::create_dir(&bv).unwrap();
    let p = bv.join("bv12.qasm");
    run(&["gen", "--family", "bv", "--qubits", "12", "--output", s(&p)]);
    let out = run(&[
        "bench", "--corpus", s(&bv), "--topology", "grid(4,4)", "--sweep-delta", "0,1,2", "--sweep-max-solutions", "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let counts: Vec<u64> = r["sweep"].as_array().unwrap().iter().map(|p| p["initial_pool_paths"].as_u64().unwrap()).collect();
    assert_eq!(counts.len(), 3);
    assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{counts:?}");
}

#[test]
fn empty_corpus_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["bench", "--corpus", s(dir.path()), "--topology", "tokyo"]);
    assert_eq!(out.status.code(), Some(1));
}
