use std::process::{Command, Output};

fn weilform(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weilform")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("weilform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn milgram_on_a1() {
    let o = weilform(&["milgram", "--lattice", "std:A1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("gauss sum  1+i"), "{s}");
    assert!(s.contains("expected   √2·e(1/8)"), "{s}");
    assert_eq!(s.lines().last(), Some("PASS"));
}

#[test]
fn e8_roots() {
    let o = weilform(&["reps", "--lattice", "std:E8", "--t", "[[1]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "240\n");
    let o = weilform(&["reps", "--lattice", "std:E8", "--t", "[[2]]"]);
    assert_eq!(stdout(&o), "2160\n");
}

#[test]
fn witt_example() {
    let o = weilform(&["witt", "--gram", "[[2,0,0],[0,-2,0],[0,0,-2]]"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("index 1\n"), "{s}");
    assert!(s.contains("witness (1,1,0)\n"), "{s}");
    assert!(s.contains("status certified"), "{s}");
}

#[test]
fn reps_listing_matches_count() {
    let o = weilform(&["reps", "--lattice", "std:A2", "--t", "[[\"1/3\"]]", "--mu", "1", "--list"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("count 3"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(weilform(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(weilform(&["milgram"]).status.code(), Some(2));
    assert_eq!(weilform(&["milgram", "--lattice", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(weilform(&["hurwitz", "--bound", "x"]).status.code(), Some(2));
    assert_eq!(weilform(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(weilform(&["disc", "--lattice", "std:A1", "--threads", "0"]).status.code(), Some(2));
    // math domain, with the error name on stderr
    let o = weilform(&["reps", "--lattice", "std:U", "--t", "[[1]]"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("IndefiniteLattice"));
    let o = weilform(&["witt", "--gram", "[[1,1],[1,1]]"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("DegenerateForm"));
}

#[test]
fn lattice_file_round_trip() {
    let path = tmp("a1.json");
    std::fs::write(&path, r#"{"case": "orthogonal", "gram": [["2"]]}"#).unwrap();
    let from_file = weilform(&["disc", "--lattice", &path]);
    let builtin = weilform(&["disc", "--lattice", "std:A1"]);
    assert_eq!(from_file.status.code(), Some(0));
    let tail = |o: &Output| stdout(o).lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(tail(&from_file), tail(&builtin));
    assert!(stdout(&builtin).contains("class 1 (1) lift (1/2) q 1/4"));
}

#[test]
fn weil_matrix_dump() {
    let o = weilform(&["weil", "T", "--lattice", "std:A1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows[0], "dim 2");
    // ρ(T) = diag(1, e(1/4))
    assert!(rows[1].starts_with("(1: 1; 1; 0)"), "{s}");
    assert!(rows[2].ends_with("(4: 0,1; 1; 0)"), "{s}");
}

#[test]
fn theta_and_slash_check() {
    let doc = tmp("e8.doc");
    let o = weilform(&["theta", "--lattice", "std:E8", "--bound", "10", "--out", &doc]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
    for w in ["S", "T"] {
        let o = weilform(&["slash-check", "--lattice", "std:E8", "--input", &doc, "--word", w]);
        assert_eq!(o.status.code(), Some(0), "{w}: {}", stdout(&o));
    }
    // one coefficient off: the modularity check must fail with code 4
    let text = std::fs::read_to_string(&doc).unwrap();
    assert!(text.contains("\n1 ; 0 ; 240\n"));
    let bad = tmp("e8-bad.doc");
    std::fs::write(&bad, text.replace("\n1 ; 0 ; 240\n", "\n1 ; 0 ; 241\n")).unwrap();
    let o = weilform(&["slash-check", "--lattice", "std:E8", "--input", &bad, "--word", "S"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).ends_with("FAIL\n"));
}

#[test]
fn zagier_and_hurwitz_agree() {
    let o = weilform(&["hurwitz", "--bound", "12"]);
    let h = stdout(&o);
    assert!(h.contains("\n3 1/3\n") && h.contains("\n4 1/2\n") && h.contains("\n12 4/3\n"), "{h}");
    let z = stdout(&weilform(&["zagier", "--bound", "12"]));
    assert!(z.contains("mock true"));
    assert!(z.contains("12 ; 0 ; 4/3"));
}

#[test]
fn deterministic_across_threads() {
    let runs: Vec<String> = ["1", "2", "8"]
        .iter()
        .map(|t| {
            let o = weilform(&["verify", "--suite", "milgram", "--suite", "witt", "--suite", "cycles-invariants", "--threads", t]);
            assert_eq!(o.status.code(), Some(0));
            stdout(&o)
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let thetas: Vec<String> = ["1", "8"]
        .iter()
        .map(|t| stdout(&weilform(&["theta", "--lattice", "std:D4", "--genus", "2", "--bound", "3", "--threads", t])))
        .collect();
    assert_eq!(thetas[0], thetas[1]);
}
