use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hamdev::format::{parse_nft, serialize_digraph};
use hamdev::gadgets::Digraph;
use tempfile::TempDir;

fn hamdev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hamdev")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn family(dir: &TempDir, n: usize) -> PathBuf {
    let path = dir.path().join(format!("f{n}.nft"));
    let out = hamdev(&["gen", "family", &n.to_string(), "-o", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn family_exact_and_threshold() {
    let dir = TempDir::new().unwrap();
    let f4 = family(&dir, 4);
    let exact = hamdev(&["exact", s(&f4), "10"]);
    assert_eq!((code(&exact), stdout(&exact).trim()), (0, "TRUE"));
    assert_eq!(code(&hamdev(&["exact", s(&f4), "9"])), 1);
    assert_eq!(code(&hamdev(&["threshold", s(&f4), "0b1010"])), 0);
    assert_eq!(code(&hamdev(&["threshold", s(&f4), "0b1001"])), 1);
    assert_eq!(code(&hamdev(&["bounded", s(&f4)])), 0);
}

#[test]
fn gen_writes_truth_sidecar() {
    let dir = TempDir::new().unwrap();
    let f3 = family(&dir, 3);
    let truth = fs::read_to_string(format!("{}.truth", s(&f3))).unwrap();
    assert!(truth.starts_with("# truth:"));
    assert!(truth.contains("deviation=6"));
    let t = parse_nft(&fs::read_to_string(&f3).unwrap()).unwrap();
    assert_eq!(t.num_states(), 6);
}

#[test]
fn gen_is_deterministic() {
    let a = hamdev(&["gen", "family", "5"]);
    let b = hamdev(&["gen", "family", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn reachability_gadget_with_a_path_is_unbounded() {
    let dir = TempDir::new().unwrap();
    let graph = dir.path().join("g.txt");
    let g = Digraph { vertex_count: 3, edges: vec![(0, 1), (1, 2)], s: 0, t: 2 };
    fs::write(&graph, serialize_digraph(&g)).unwrap();
    let nft = dir.path().join("r.nft");
    assert_eq!(code(&hamdev(&["gen", "-o", s(&nft), "reach", s(&graph)])), 0);
    let out = hamdev(&["bounded", s(&nft)]);
    assert_eq!((code(&out), stdout(&out).trim()), (1, "FALSE"));

    let cut = Digraph { vertex_count: 3, edges: vec![(0, 1), (2, 1)], s: 0, t: 2 };
    fs::write(&graph, serialize_digraph(&cut)).unwrap();
    assert_eq!(code(&hamdev(&["gen", "-o", s(&nft), "reach", s(&graph)])), 0);
    assert_eq!(code(&hamdev(&["bounded", s(&nft)])), 0);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let f2 = family(&dir, 2);
    assert_eq!(code(&hamdev(&["threshold", s(&f2), "ten"])), 2);
    assert_eq!(code(&hamdev(&["threshold", s(&f2), "0b102"])), 2);
    let bad = dir.path().join("bad.nft");
    fs::write(&bad, "nft bad\nalphabet a\nstate p initial\ntrans p q a a\nend\n").unwrap();
    let out = hamdev(&["bounded", s(&bad)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("undeclared state"));
    assert_eq!(code(&hamdev(&["bounded", s(&dir.path().join("missing.nft"))])), 2);
    assert_eq!(code(&hamdev(&["frobnicate"])), 2);
}

#[test]
fn config_budget_exits_three() {
    let dir = TempDir::new().unwrap();
    let f4 = family(&dir, 4);
    assert_eq!(code(&hamdev(&["--max-configs", "2", "bounded", s(&f4)])), 3);
}

#[test]
fn analyze_json_has_the_documented_keys() {
    let dir = TempDir::new().unwrap();
    let f4 = family(&dir, 4);
    let f2 = family(&dir, 2);
    let out = hamdev(&["analyze", "--json", s(&f4), s(&f2)]);
    assert_eq!(code(&out), 0);
    let lines: Vec<serde_json::Value> =
        stdout(&out).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    let v = &lines[0];
    for key in ["lengthPreserving", "verdict", "deviation", "bounds", "witness"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for key in ["b", "B", "Lconj", "Lwit"] {
        assert!(v["bounds"].get(key).is_some(), "missing bounds.{key}");
    }
    assert_eq!(v["deviation"], 10);
    assert_eq!(lines[1]["deviation"], 3);
}

#[test]
fn analyze_text_shows_the_worked_pair() {
    let dir = TempDir::new().unwrap();
    let f4 = family(&dir, 4);
    let text = stdout(&hamdev(&["analyze", s(&f4)]));
    assert!(text.contains("deviation: 10"));
    assert!(text.contains("(1001110000, 0110001111)"));
}

#[test]
fn trim_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let f3 = family(&dir, 3);
    let original = fs::read_to_string(&f3).unwrap();
    let trimmed = stdout(&hamdev(&["trim", s(&f3)]));
    assert_eq!(trimmed, original);
    let atomized = parse_nft(&stdout(&hamdev(&["atomize", s(&f3)]))).unwrap();
    assert!(atomized.transitions().iter().all(|t| t.input.len() <= 1));
}

#[test]
fn oracle_reports_the_family_maximum() {
    let dir = TempDir::new().unwrap();
    let f4 = family(&dir, 4);
    let out = hamdev(&["oracle", s(&f4), "--max-run-len", "24", "--json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["maxSeen"], 10);
    assert_eq!(v["saturated"], false);
}

#[test]
fn compare_against_itself() {
    let dir = TempDir::new().unwrap();
    let f3 = family(&dir, 3);
    assert_eq!(code(&hamdev(&["compare", "exact", "0", s(&f3), s(&f3), "--check-domains", "4"])), 0);
    assert_eq!(code(&hamdev(&["compare", "bounded", s(&f3), s(&f3)])), 0);
    let f2 = family(&dir, 2);
    assert_eq!(code(&hamdev(&["compare", "bounded", s(&f3), s(&f2), "--check-domains", "4"])), 2);
}
