use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(file: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/knots")
        .join(file)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfsurgery"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn knot_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn ranks_of_six_two() {
    let o = run(&["ranks", "--knot", &data("6_2.knot"), "--slope", "5/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\t1\n1\t1\n2\t3\n3\t5\n4\t3\n");
}

#[test]
fn ranks_with_oracle_column() {
    let o = run(&["ranks", "--knot", &data("6_2.knot"), "--slope", "5/2", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\t1\t1\n1\t1\t1\n2\t3\t3\n3\t5\t5\n4\t3\t3\n");
    let o = run(&["ranks", "--knot", &data("m9_47.knot"), "--slope", "-11/3", "--oracle", "--window-margin", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 11);
}

#[test]
fn ranks_pretty() {
    let o = run(&["ranks", "--knot", &data("6_2.knot"), "--slope", "5/2", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# 6_2 at 5/2\nclass  rank\n"));
    assert!(out.contains("\n    3     5\n"));
}

#[test]
fn negative_slope() {
    let o = run(&["ranks", "--knot", &data("6_2.knot"), "--slope", "-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\t3\n1\t3\n2\t3\n");
}

#[test]
fn total_of_lens_space() {
    let o = run(&["total", "--knot", &data("unknot.knot"), "--slope", "7/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "7\n");
    let o = run(&["total", "--knot", &data("6_2.knot"), "--slope", "5/2"]);
    assert_eq!(stdout(&o), "13\n");
}

#[test]
fn cabling_of_eight_twenty() {
    let o = run(&["cabling", "--knot", &data("8_20.knot")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "2\t0,4\t-\n-2\t0,4\t-\n3\t0,2,2\t-\n-3\t0,2,2\t-\nverdict\tobstructed\n"
    );
    let o = run(&["cabling", "--knot", &data("m9_47.knot"), "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("p =  -3   A = {2}, B = {6,6}\n"));
    assert!(out.ends_with("verdict: obstructed\n"));
}

#[test]
fn cabling_needs_positive_genus() {
    let o = run(&["cabling", "--knot", &data("unknot.knot")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn genus_from_profile() {
    let o = run(&["genus", "--profile", "7,9,9,7,3,1,3", "--slope", "7/4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("distinct_ranks\t1,3,7,9\n"));
    assert!(out.contains("g_q_lower\t3\n"));
    assert!(out.contains("g_z_lower\t4\n"));

    let o = run(&["genus", "--profile", "1,1,3,5,3", "--genus", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("exceed g + 1"));

    let o = run(&["genus", "--profile", "1,1,3", "--slope", "5/2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn genus_from_knot() {
    let o = run(&["genus", "--knot", &data("6_2.knot"), "--slope", "5/2", "--pretty"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("g_Q >= 2"));
    assert!(out.contains("g_Z >= 2"));
}

#[test]
fn invalid_inputs_exit_one() {
    let missing_flag = knot_file("name X\nnu 0\ngenus 2\nrank 1 3\n");
    let path = missing_flag.path().to_str().unwrap();
    let o = run(&["ranks", "--knot", path, "--slope", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("v0h0"));

    for slope in ["5/-2", "0", "3/0", "x"] {
        let o = run(&["ranks", "--knot", &data("6_2.knot"), "--slope", slope]);
        assert_eq!(o.status.code(), Some(1), "slope {slope}");
    }
    let o = run(&["ranks", "--knot", "/nonexistent.knot", "--slope", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["ranks", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["verify", "--pmax", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn strict_rejects_even_ranks() {
    let even = knot_file("nu 1\ngenus 2\nrank 1 2\nrank -1 2\n");
    let path = even.path().to_str().unwrap();
    let o = run(&["total", "--knot", path, "--slope", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    let o = run(&["total", "--knot", path, "--slope", "7", "--strict"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "--count", "80", "--pmax", "12", "--qmax", "5", "--seed", "17"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = Command::new(env!("CARGO_BIN_EXE_hfsurgery"))
        .args(args)
        .env("HFSURGERY_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.contains("pairs\t80\npassed\t80\nfailed\t0\n"));
}

#[test]
fn sweep_table() {
    let o = run(&["sweep", "--knot", &data("6_2.knot"), "--pmax", "5", "--qmax", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("5/2\t1,1,3,5,3\t13\n"));
    assert!(out.starts_with("-5/1\t"));
    assert_eq!(out.lines().count(), 16);
}
