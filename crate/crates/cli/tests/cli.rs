use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sparse21"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sparse21-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn k5_text() -> String {
    let mut s = String::from("5 10\n");
    for u in 0..5 {
        for v in u + 1..5 {
            s.push_str(&format!("{u} {v}\n"));
        }
    }
    s
}

const G60: &str = "6 12\n0 1\n0 2\n0 3\n1 2\n1 3\n2 4\n2 5\n3 4\n3 5\n5 4\n0 5\n1 5\n";

#[test]
fn check_k5() {
    let p = scratch("k5.txt", &k5_text());
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "circuit: yes; f=0; 3-connected: yes\n");
    let o = run(&["--kv", "check", p.to_str().unwrap()]);
    assert!(stdout(&o).contains("circuit=yes\n"));
    assert!(stdout(&o).contains("sparse=no\n"));
}

#[test]
fn check_non_circuit_exits_one() {
    let p = scratch("c5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let o = run(&["check", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("circuit: no"));
}

#[test]
fn malformed_input_exits_two() {
    let p = scratch("bad.txt", "3 2\n0 1\n0 5\n");
    assert_eq!(run(&["check", p.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn multigraph_needs_flag() {
    let p = scratch("r0.txt", "1 2\n0 0\n0 0\n");
    assert_eq!(run(&["check", p.to_str().unwrap()]).status.code(), Some(1));
    let o = run(&["check", "--multigraph", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("circuit: yes"));
}

#[test]
fn reduce_then_replay_is_isomorphic() {
    let g = scratch("g60.txt", G60);
    let cert = scratch("g60.cert", "");
    let o = run(&["reduce", g.to_str().unwrap(), "-o", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.starts_with("ROOT "));
    let o = run(&["replay", cert.to_str().unwrap(), "--graph", g.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("isomorphic: yes\n"));
}

#[test]
fn reduce_is_deterministic_across_runs() {
    let g = scratch("g60b.txt", G60);
    let a = stdout(&run(&["reduce", g.to_str().unwrap()]));
    let b = stdout(&run(&["reduce", g.to_str().unwrap()]));
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn replay_rejects_tampered_certificate() {
    let g = scratch("g60c.txt", G60);
    let text = stdout(&run(&["reduce", g.to_str().unwrap()]));
    let cert = scratch("bad.cert", &text.replacen("BASE K5", "BASE G57c", 1));
    let o = run(&["replay", cert.to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn enumerate_counts() {
    let o = run(&["enumerate", "-n", "7", "--count-only"]);
    assert_eq!(stdout(&o), "34\n");
    let o = run(&["enumerate", "-n", "6", "--count-only", "--generative"]);
    assert_eq!(stdout(&o), "4\n");
    assert_eq!(run(&["enumerate", "-n", "8"]).status.code(), Some(2));
}

#[test]
fn catalog_lists_every_fixture() {
    let o = run(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("# ")).count(), 24);
    let o = run(&["catalog", "--flagged-figure14"]);
    assert!(stdout(&o).contains("circuit no; f=-1"));
}
