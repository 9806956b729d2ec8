use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cdgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdgen"))
        .args(args)
        .output()
        .expect("cdgen runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code_lines(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(str::to_string)
        .collect()
}

#[test]
fn stats_of_conditions_equals_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let leaves = dir.path().join("leaves.txt");
    let leaves = leaves.to_str().unwrap();
    for rules in ["1N3,2N1", "2N3,2N1", "1N3,3N1"] {
        stdout(&cdgen(&["generate", "--n", "6", "--rules", rules, "--out", leaves]));
        let stats = stdout(&cdgen(&["stats", "--input", leaves]));
        let hist = stdout(&cdgen(&["generate", "--n", "6", "--rules", rules, "--format", "histogram"]));
        assert_eq!(stats, hist, "{rules}");
    }
}

#[test]
fn manifests_verify_and_detect_changes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("leaves.txt");
    stdout(&cdgen(&["generate", "--n", "5", "--rules", "2N3,2N1", "--out", out.to_str().unwrap()]));
    let manifest = dir.path().join("leaves.txt.manifest");
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.contains("command=generate\n"));
    assert!(text.contains("rules=2N1,2N3\n"));
    assert!(text.contains("classes=36\n"));
    stdout(&cdgen(&["verify-manifest", manifest.to_str().unwrap()]));

    fs::write(&out, "tampered\n").unwrap();
    assert!(!cdgen(&["verify-manifest", manifest.to_str().unwrap()]).status.success());
}

#[test]
fn expand_writes_domains_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "# n=3\n4\n").unwrap();
    let out = dir.path().join("domains.txt");
    stdout(&cdgen(&["expand", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap()]));
    assert_eq!(fs::read_to_string(&out).unwrap(), "# n=3 source=4\n123\n213\n231\n321\n");
    assert!(Path::new(&format!("{}.manifest", out.display())).exists());
}

#[test]
fn partitioned_runs_reassemble_the_full_output() {
    let full = stdout(&cdgen(&["generate", "--n", "6", "--rules", "1N3,3N1"]));
    let nodes = stdout(&cdgen(&["partition", "--n", "6", "--rules", "1N3,3N1", "--depth", "4"]));
    let mut pieces = Vec::new();
    for node in nodes.lines() {
        let part = stdout(&cdgen(&["generate", "--n", "6", "--rules", "1N3,3N1", "--prefix", node]));
        pieces.extend(code_lines(&part));
    }
    pieces.sort();
    assert_eq!(pieces, code_lines(&full));
}

#[test]
fn threads_give_the_same_output() {
    let one = stdout(&cdgen(&["generate", "--n", "6", "--rules", "1N3,2N1"]));
    let four = stdout(&cdgen(&["generate", "--n", "6", "--rules", "1N3,2N1", "--threads", "4"]));
    assert_eq!(one, four);
}

#[test]
fn all_domains_mode_and_check() {
    let text = stdout(&cdgen(&["generate", "--n", "4", "--rules", "1N3,2N1", "--all-domains"]));
    assert_eq!(code_lines(&text).len(), 15);
    let check = stdout(&cdgen(&["check", "--n", "4", "--rules", "1N2,1N3,2N1,2N3,3N1,3N2"]));
    assert!(check.contains("domains=copious: equal (oracle 31, generated 31)"), "{check}");
    assert!(check.contains("domains=all: equal (oracle 302, generated 302)"), "{check}");
}

#[test]
fn errors_exit_nonzero() {
    let bad = cdgen(&["generate", "--n", "4", "--rules", "2N2"]);
    assert_eq!(bad.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&bad.stderr);
    for token in ["1N2", "1N3", "2N1", "2N3", "3N1", "3N2"] {
        assert!(msg.contains(token), "{msg}");
    }

    let unwritable = cdgen(&["generate", "--n", "3", "--rules", "2N3", "--out", "/nonexistent/dir/out.txt"]);
    assert_eq!(unwritable.status.code(), Some(1));

    let too_big = cdgen(&["check", "--n", "6", "--rules", "1N2,1N3,2N1,2N3,3N1,3N2"]);
    assert_eq!(too_big.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&too_big.stderr).contains("bound"));

    let bad_prefix = cdgen(&["generate", "--n", "4", "--rules", "2N3", "--prefix", "4040"]);
    assert_eq!(bad_prefix.status.code(), Some(1));
}
