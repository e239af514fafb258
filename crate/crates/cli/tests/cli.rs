use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_largeness")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn prove_large_writes_certificate_that_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bs24.txt", "gens a t\nrel ta2TA4\n");
    let cert = dir.path().join("cert.txt");
    let o = run(&["prove-large", &g, "--max-index", "2", "--cert-out", cert.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("largeness-report v1"));
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.starts_with("largeness-certificate v1"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("cert.txt.json")).unwrap()).unwrap();
    assert!(json.is_object());

    for path in [cert.clone(), dir.path().join("cert.txt.json")] {
        let v = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(code(&v), 0, "{}", stdout(&v));
    }

    let tampered = text.replace("modulus 2", "modulus 3");
    let bad = write(dir.path(), "bad.txt", &tampered);
    assert_eq!(code(&run(&["verify", &bad])), 1);
}

#[test]
fn unknown_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bs12.txt", "gens a t\nrel taTA2\n");
    let o = run(&["prove-large", &g, "--max-index", "4"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("verdict unknown"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(code(&run(&["prove-large", "/nonexistent/file"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "junk.txt", "gens a\nrel b\n");
    assert_eq!(code(&run(&["alexander", &g])), 2);
    assert_eq!(code(&run(&["subgroups", &g, "--index", "3..1"])), 2);
}

#[test]
fn alexander_with_chi_and_modulus() {
    let o = run(&["alexander", "corpus:T1#1", "--chi", "1", "--mod", "5"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bs24.txt", "gens a t\nrel ta2TA4\n");
    let o = run(&["alexander", &g, "--chi", "1", "--mod", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("vanishes modulo 2"));
}

#[test]
fn subgroups_of_free_group_of_rank_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "f2.txt", "gens a b\n");
    let o = run(&["subgroups", &g, "--index", "1..3"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let count = |k: usize| out.lines().filter(|l| l.starts_with(&format!("index {k} "))).count();
    assert_eq!((count(1), count(2), count(3)), (1, 3, 7));
    let o = run(&["subgroups", &g, "--index", "2", "--normal-only", "--abelian"]);
    assert!(stdout(&o).lines().filter(|l| l.starts_with("index 2 ")).all(|l| l.contains("abelianisation [0,0,0]")));
}

#[test]
fn betti_prefilter_answers() {
    let dir = tempfile::tempdir().unwrap();
    let s3 = write(dir.path(), "s3.txt", "gens a b\nrel a2\nrel b3\nrel abab\n");
    let o = run(&["betti-prefilter", &s3, "--max-index", "5"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "no");
    let o = run(&["betti-prefilter", "corpus:T1#1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "yes index 1");
}

#[test]
fn batch_over_directory() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.txt", "gens a t\nrel ta2TA4\n");
    write(dir.path(), "b.txt", "gens a t\nrel taTA2\n");
    let out = dir.path().join("report");
    let o = run(&["batch", dir.path().to_str().unwrap(), "--mode", "prove-large", "--max-index", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).starts_with("largeness-batch v1"));
    assert!(dir.path().join("report.json").exists());
    assert_eq!(code(&run(&["batch", dir.path().to_str().unwrap(), "--mode", "bogus"])), 2);
}

#[test]
fn exported_corpus_parses() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["export-corpus", dir.path().to_str().unwrap()])), 0);
    let files: Vec<_> = fs::read_dir(dir.path()).unwrap().collect();
    assert!(files.len() > 50);
    let o = run(&["alexander", dir.path().join("r0.txt").to_str().unwrap()]);
    assert_ne!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}
