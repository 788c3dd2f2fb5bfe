use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycmzv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mhs_eval_prints_the_bare_value() {
    let o = run(&["mhs", "eval", "--n", "4", "--word", "h[1;2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "49/36\n");
}

#[test]
fn quasi_shuffle_verification_passes() {
    let o = run(&["verify", "quasi-shuffle", "--n-max", "40", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn adjoint_quasi_shuffle_verification_reports() {
    let o = run(&["--format", "json", "verify", "adjoint-quasi-shuffle", "--p", "5", "--alpha", "1", "--max-weight", "6", "--prec", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["relation"], "adjoint-quasi-shuffle");
    assert_eq!(v["pass"], true);
    assert_eq!(v["verdict"], "holds mod p^5");
}

#[test]
fn failing_relation_exits_one_with_both_sides() {
    let o = run(&["--format", "json", "--seed", "3", "verify", "shuffle", "--perturbed"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["witness"]["lhs"].is_string() && v["witness"]["rhs"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["mhs", "eval", "--n", "3", "--word", "h[1;"],
        vec!["mhs", "eval", "--n", "0", "--word", "h[1;2]"],
        vec!["verify", "act-rt", "--p", "9"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn output_does_not_depend_on_jobs() {
    let args = |j: &'static str| ["--jobs", j, "--format", "csv", "verify", "prop73", "--count", "8", "--seed", "11"];
    let (a, b) = (run(&args("1")), run(&args("3")));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_table_output() {
    let o = run(&["--format", "csv", "mhs", "table", "--n-max", "3", "--word", "h[1;1]"]);
    assert_eq!(stdout(&o), "n,word,value\n1,\"h[1,1;1]\",0\n2,\"h[1,1;1]\",1\n3,\"h[1,1;1]\",3/2\n");
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = std::env::temp_dir().join(format!("cycmzv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("eval.toml");
    std::fs::write(&path, "n = 4\nword = \"h[1;2]\"\nformat = \"json\"\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["mhs", "eval", "--config", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"value\":\"49/36\""));
    let o = run(&["mhs", "eval", "--config", p, "--n", "3", "--format", "pretty"]);
    assert_eq!(stdout(&o), "5/4\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn padic_commands_print_certified_values() {
    let o = run(&["ihara", "act-rt", "--n", "3", "--word", "h[1;2]", "--compare", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["value"], v["exact"]);
    let o = run(&["pmzv", "har-dagger", "--n", "3", "--word", "1", "--prec", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("O(5^4)\n"));
}

#[test]
fn duality_on_frobenius_data() {
    let o = run(&["--format", "json", "verify", "duality", "--p", "5", "--depth", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(v["pass"], true);
}
