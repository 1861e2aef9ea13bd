use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn obstree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstree")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(out: &'a str, key: &str) -> Option<&'a str> {
    let prefix = format!("{key}: ");
    out.lines().find_map(|l| l.strip_prefix(prefix.as_str()))
}

/// Splits a printed `replay: obstree ...` line back into arguments.
fn replay_args(out: &str) -> Vec<String> {
    let line = field(out, "replay").expect("report has a replay line");
    let mut words = line.split_whitespace();
    assert_eq!(words.next(), Some("obstree"));
    words.map(str::to_string).collect()
}

fn run_owned(args: &[String]) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    obstree(&refs)
}

#[test]
fn tree_file_certifies() {
    let o = obstree(&["certify", "--tree", &fixture("path.tree")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(field(&stdout(&o), "status"), Some("pass"));
}

#[test]
fn four_cycle_yields_a_witness_that_replays() {
    let table = fixture("square.metric");
    let o = obstree(&["certify", "--table", &table]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(field(&out, "margin"), Some("1"));
    let args = replay_args(&out);
    assert_eq!(&args[..2], ["replay", "four-point"]);
    let r = run_owned(&args);
    assert_eq!(r.status.code(), Some(1), "{}", stdout(&r));
    assert_eq!(field(&stdout(&r), "reproduced"), Some("true"));
}

#[test]
fn replaying_a_non_witness_reports_pass() {
    let o = obstree(&["replay", "four-point", "--tree", &fixture("star.tree"), "px", "py", "pz", "ph"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn center_and_segment() {
    let tree = fixture("star.tree");
    let o = obstree(&["center", "--tree", &tree, "px", "py", "pz"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "center"), Some("ph"));
    let o = obstree(&["segment", "--tree", &fixture("path.tree"), "pa", "pc"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "length"), Some("5"));
}

#[test]
fn random_suite_is_reproducible_per_seed() {
    let a = obstree(&["certify", "--random", "20", "--seed", "7"]);
    let b = obstree(&["certify", "--random", "20", "--seed", "7"]);
    let c = obstree(&["certify", "--random", "20", "--seed", "8"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn tsv_output_has_comment_fields_and_tab_rows() {
    let o = obstree(&["--format", "tsv", "qmap", "smallwords", "--action", &fixture("sqrt2.action"), "--maxlen", "8", "--epsilon", "1/5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("#status\tpass"));
    assert!(out.lines().any(|l| l == "#min_nonzero\t3-2*sqrt:2 (aaaBB)"), "{out}");
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "word\tlength\ttranslation_length\tapprox");
}

#[test]
fn small_words_lists_commutators_first() {
    let o = obstree(&["qmap", "smallwords", "--weights", "1,sqrt:2", "--maxlen", "6", "--epsilon", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip_while(|l| !l.starts_with("word")).skip(1).collect();
    assert!(rows[0].starts_with("abAB"), "{out}");
    assert_eq!(field(&out, "min_nonzero"), Some("3-2*sqrt:2 (aaaBB)"));
}

#[test]
fn small_words_without_nonzero_hits_says_so() {
    let o = obstree(&["qmap", "smallwords", "--weights", "1,sqrt:2", "--maxlen", "6", "--epsilon", "0.03"]);
    assert_eq!(field(&stdout(&o), "min_nonzero"), Some("none below epsilon"));
}

#[test]
fn mixed_radicands_need_float_mode() {
    let o = obstree(&["qmap", "smallwords", "--weights", "1,sqrt:2,sqrt:3", "--maxlen", "4", "--epsilon", "1"]);
    assert_eq!(o.status.code(), Some(65));
    let o = obstree(&["qmap", "smallwords", "--weights", "1,sqrt:2,sqrt:3", "--maxlen", "4", "--epsilon", "1", "--float"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn q_of_a_commutator_ray_is_zero() {
    let o = obstree(&["qmap", "estimate", "--weights", "1,sqrt:2", "--point", ";abAB"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "estimate"), Some("0"));
    assert_eq!(field(&out, "escaped"), Some("false"));
}

#[test]
fn fibers_separate_points_with_different_drift() {
    let o = obstree(&["qmap", "fibers", "--weights", "1,sqrt:2", "--x", ";aaaBB", "--y", ";bbAAA"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "verdict"), Some("different"));
}

#[test]
fn lamination_audit_passes_and_replays() {
    let args = ["--weights", "1,sqrt:2", "--epsilon", "1/2", "--maxlen", "4", "--depth", "100"];
    let mut lam = vec!["qmap", "lamination"];
    lam.extend(args);
    let o = obstree(&lam);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "flip_closed"), Some("true"));
    assert_eq!(field(&out, "action_closed"), Some("true"));
    let mut rep = vec!["replay", "lamination"];
    rep.extend(args);
    assert_eq!(obstree(&rep).status.code(), Some(0));
}

#[test]
fn turning_sequence_converges_to_the_hub() {
    let o = obstree(&[
        "observers",
        "converge",
        "--multipod",
        "100",
        "--seq",
        &fixture("turning.seq"),
        "--depth",
        "100",
        "--target",
        "hub",
        "--probes",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(field(&stdout(&o), "status"), Some("pass"));
}

#[test]
fn eventually_constant_sequence_has_exact_liminf() {
    let o = obstree(&["observers", "liminf", "--tree", &fixture("star.tree"), "--seq", &fixture("star.seq"), "--basepoint", "px"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "liminf"), Some("q"));
    assert_eq!(field(&out, "certificate"), Some("0"));
}

#[test]
fn blended_star_stays_a_tree() {
    let o = obstree(&["blend", "metric", "--pair", &fixture("star.pair"), "--lambda-grid", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = obstree(&["blend", "metric", "--pair", &fixture("star.pair"), "--lambda", "1/3"]);
    assert_eq!(field(&stdout(&o), "blended_lengths"), Some("h-a:4/3 h-b:3/2 h-c:3 c-d:7/3"));
}

#[test]
fn line_and_rose_mix_violates_products_and_replays() {
    let o = obstree(&["blend", "axioms", "--l0", "line:1,0", "--l1", "rose:a,b", "--lambda-grid", "4", "--maxlen", "4"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let out = stdout(&o);
    let args = replay_args(&out);
    assert_eq!(&args[..2], ["replay", "axiom"]);
    let r = run_owned(&args);
    assert_eq!(r.status.code(), Some(1), "{}", stdout(&r));
    assert_eq!(field(&stdout(&r), "l(abaB)"), Some("5/2"));
}

#[test]
fn endpoints_of_the_grid_pass_the_axiom_replay() {
    let o = obstree(&["replay", "axiom", "--l0", "line:1,0", "--l1", "rose:a,b", "--lambda", "0", "--axiom", "products", "a", "baB"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn identical_blend_lengths_agree_with_the_blended_action() {
    let o = obstree(&["blend", "lengths", "--l0", "line:1,sqrt:2", "--l1", "line:1,1", "--lambda", "1/2", "--maxlen", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "max_deviation"), Some("0"));
}

#[test]
fn exit_codes_for_bad_input() {
    assert_eq!(obstree(&["certify", "--table", "/nonexistent/file"]).status.code(), Some(66));
    assert_eq!(obstree(&["center", "--tree", &fixture("path.tree"), "zz", "pa", "pc"]).status.code(), Some(65));
    assert_eq!(obstree(&["qmap", "estimate", "--weights", "1,sqrt:2", "--point", "a;;"]).status.code(), Some(64));
    assert_eq!(obstree(&["blend", "axioms", "--l0", "rose:a,b"]).status.code(), Some(65));
    assert_eq!(obstree(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_tree_file_is_a_parse_error() {
    let dir = std::env::temp_dir().join(format!("obstree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.tree");
    std::fs::write(&path, "edge a b x\n").unwrap();
    let o = obstree(&["certify", "--tree", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let _ = std::fs::remove_dir_all(&dir);
}
