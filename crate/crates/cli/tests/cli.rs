use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_treepattern"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_encode_decode_round_trip() {
    let gen = run(&["gen", "--n", "6", "--seed", "7"]);
    assert!(gen.status.success());
    let enc = run_stdin(&["encode"], &gen.stdout);
    assert!(enc.status.success(), "{}", String::from_utf8_lossy(&enc.stderr));
    let dec = run_stdin(&["decode"], &enc.stdout);
    assert!(dec.status.success());
    assert_eq!(dec.stdout, gen.stdout);
}

#[test]
fn gen_is_deterministic_per_seed() {
    let a = run(&["gen", "--n", "30", "--seed", "11"]);
    let b = run(&["gen", "--n", "30", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn count_end_rooted_path_in_path5() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "t.txt", "n 5\n1 2\n2 3\n3 4\n4 5\n");
    let pat = write(dir.path(), "p.pat", "n 3\n1 2\n2 3\nroot 1\n");
    let o = run(&["count", "--tree", &tree, "--pattern", &pat]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("2"));
    assert_eq!(text.lines().count(), 3);

    let o = run(&["count", "--tree", &tree, "--pattern", "path3@end", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 2);
    assert_eq!(v["occurrences"].as_array().unwrap().len(), 2);
}

#[test]
fn moments_json_for_rooted_edge() {
    let dir = tempfile::tempdir().unwrap();
    let pat = write(dir.path(), "edge.pat", "n 2\n1 2\nroot 1\n");
    let o = run(&["moments", "--pattern", &pat, "--n", "4", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mean"], "3/2");
    assert_eq!(v["second_moment"], "3");
    assert_eq!(v["cheb_bound"], "1/3");
}

#[test]
fn moments_below_pair_domain_leave_second_moment_null() {
    let o = run(&["moments", "--pattern", "cherry", "--n", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mean"], "12/25");
    assert!(v["second_moment"].is_null());
}

#[test]
fn verify_cherry_passes() {
    let o = run(&["verify", "--pattern", "cherry", "--n-max", "6", "--workers", "2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ns: Vec<u64> = v["runs"].as_array().unwrap().iter().map(|r| r["n"].as_u64().unwrap()).collect();
    assert_eq!(ns, [4, 5, 6]);
    assert_eq!(v["passed"], true);
}

#[test]
fn converge_csv_header_is_frozen() {
    let o = run(&[
        "converge", "--pattern", "cherry", "--n-list", "6,12", "--samples", "500", "--seed", "3", "--csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,samples,hits_ge1,p_hat,ci_low,ci_high,mean_hat,stderr_mean,exact_mean,cheb_bound")
    );
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first[0], "6");
    assert_eq!(first[8], "5/12");
    // n = 6 is the first size with a defined pair term for a cherry
    assert_eq!(first[9], "11/5");
}

#[test]
fn mc_output_to_file_is_seed_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for (path, workers) in [(&a, "1"), (&b, "3")] {
        let o = run(&[
            "mc", "--pattern", "edge", "--n", "9", "--samples", "3000", "--seed", "5", "--workers", workers,
            "--json", "--out", path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["mc", "--pattern", "cherry", "--n", "10", "--samples", "10"]).status.code(), Some(1));
    assert_eq!(run(&["gen", "--n", "5", "--seed", "1", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--pattern", "cherry", "--n-max", "3"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn bad_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cyclic = write(dir.path(), "c.txt", "n 3\n1 2\n2 3\n3 1\n");
    assert_eq!(run(&["center", "--tree", &cyclic]).status.code(), Some(2));
    assert_eq!(run(&["center", "--tree", "/definitely/not/here"]).status.code(), Some(2));
    assert_eq!(run_stdin(&["decode"], b"n 4\n1 2 3\n").status.code(), Some(2));
    let tree = write(dir.path(), "t.txt", "n 2\n1 2\n");
    assert_eq!(run(&["count", "--tree", &tree, "--pattern", "nonsense"]).status.code(), Some(2));
}

#[test]
fn center_and_rootify() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "t.txt", "n 4\n1 2\n2 3\n3 4\n");
    let o = run(&["center", "--tree", &tree, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "edge");
    assert_eq!(v["vertices"], serde_json::json!([2, 3]));

    let o = run(&["rootify", "--tree", &tree]);
    let text = stdout(&o);
    assert!(text.starts_with("n 5\n"));
    assert!(text.trim_end().ends_with("root 5"));
    // the rootified file is itself a valid pattern
    let pat = write(dir.path(), "r.pat", &text);
    let o = run(&["aut", "--pattern", &pat, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["aut_root_order"], "2");
}
