use std::process::{Command, Output};

fn aclab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aclab")).args(args).output().expect("spawn aclab")
}

fn aclab_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aclab"))
        .args(args)
        .env("ACLAB_THREADS", threads)
        .output()
        .expect("spawn aclab")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const UNIFORM2: [&str; 4] = ["--kind", "uniform", "--value", "2"];

fn with<'a>(base: &[&'a str], rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = rest[..1].to_vec();
    v.extend_from_slice(base);
    v.extend_from_slice(&rest[1..]);
    v
}

#[test]
fn construct_lemma22() {
    let o = aclab(&["construct", "--kind", "lemma22", "--a", "2", "--b", "4", "--l", "1", "--length", "6"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("b: 1,2,4,2,4,2,4\na: 1,2,8,16,64,128,512\n"), "{out}");
    let json: serde_json::Value = serde_json::from_str(out.splitn(3, '\n').nth(2).unwrap()).unwrap();
    assert_eq!(json["spec"]["kind"], "lemma22");
    assert_eq!(json["a"][6], "512");
}

#[test]
fn construct_thm12_blocks() {
    let o = aclab(&["construct", "--kind", "thm12", "--d", "2,4", "--c", "9", "--length", "6"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("b: 1,2,9,4,2,9"));
}

#[test]
fn construct_rejects_bad_specs() {
    let o = aclab(&["construct", "--kind", "uniform", "--value", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b_j >= 2"));
    let o = aclab(&["construct", "--kind", "thm12", "--d", "2,4", "--c", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires c > 2b"));
    let o = aclab(&["construct", "--kind", "lemma22", "--a", "2", "--b", "3", "--l", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("b >= a + 2"));
    let o = aclab(&["construct", "--kind", "lemma22", "--a", "2", "--b", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn construct_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("base.json");
    let o = aclab(&["construct", "--spec", r#"{"kind":"thm11"}"#, "--length", "4", "--json", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "b: 1,2,3,4,5\na: 1,2,6,24,120\n");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(json["b"], serde_json::json!(["1", "2", "3", "4", "5"]));
}

#[test]
fn count_examples() {
    let o = aclab(&with(&UNIFORM2, &["count", "--x", "3"]));
    assert_eq!(stdout(&o), "count_A = 2\ncount_B = 2\ndefect = 1\n");
    let o = aclab(&with(&UNIFORM2, &["count", "--x", "5"]));
    assert_eq!(stdout(&o), "count_A = 4\ncount_B = 2\ndefect = 3\n");
    let o = aclab(&with(&UNIFORM2, &["count", "--x", "0"]));
    assert_eq!(stdout(&o), "count_A = 1\ncount_B = 1\ndefect = 1\n");
}

#[test]
fn count_large_x() {
    // x = 2^100 - 1 = x_50
    let x = "1267650600228229401496703205375";
    let o = aclab(&with(&UNIFORM2, &["count", "--x", x]));
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("defect = 1\n"));
}

#[test]
fn ratio_scan_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let o = aclab(&with(&UNIFORM2, &["ratio-scan", "--limit", "100", "--csv", path.to_str().unwrap()]));
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("max_ratio (x >= 4) = 8/5 (1.60000000000) at x = 5"), "{out}");
    assert!(out.contains("defect_one = 6 [1,3,7,15,31,63]"), "{out}");

    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header.join(","), "x,in_A,in_B,count_A,count_B,ratio_num,ratio_den,ratio_decimal,defect");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 22);
    for row in &rows {
        let n = |i: usize| row[i].parse::<i64>().unwrap();
        let (x, ca, cb, num, den, defect) = (n(0), n(3), n(4), n(5), n(6), n(8));
        assert!(&row[1] == "true" || &row[2] == "true");
        assert_eq!(num * x, ca * cb * den);
        assert_eq!(gcd(num, den), 1);
        assert_eq!(defect, ca * cb - x);
        assert_eq!(row[7].chars().filter(char::is_ascii_digit).count(), 12);
    }
    let five = rows.iter().find(|r| &r[0] == "5").unwrap();
    assert_eq!([&five[5], &five[6], &five[7]], ["8", "5", "1.60000000000"]);
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn ratio_scan_stdout_mode() {
    let o = aclab(&with(&UNIFORM2, &["ratio-scan", "--limit", "10"]));
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("x,in_A,in_B,"));
    assert_eq!(out.lines().count(), 1 + 6);
    assert!(stderr(&o).contains("records = 6"));
}

#[test]
fn ratio_scan_lemma22() {
    let o = aclab(&["ratio-scan", "--kind", "lemma22", "--a", "2", "--b", "4", "--l", "1", "--limit", "10000"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("max_ratio (x >= 8) = 16/9"));
}

#[test]
fn ratio_scan_errors() {
    let o = aclab(&with(&UNIFORM2, &["ratio-scan", "--limit", "0"]));
    assert_eq!(o.status.code(), Some(2));
    let o = aclab(&with(&UNIFORM2, &["ratio-scan", "--limit", "10", "--csv", "/nonexistent-dir/out.csv"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_defect_and_theorem_b() {
    let o = aclab(&with(&UNIFORM2, &["verify", "--suite", "defect", "--bound", "10"]));
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["pass"], true);
    assert_eq!(rep["checked"], 10);
    let o = aclab(&["verify", "--suite", "theoremB-crosscheck"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["notes"][2], "(a, b) = (3, 5): ratio 7/4");
}

#[test]
fn verify_all_suites_pass() {
    let explicit = ["--kind", "explicit", "--b", "2,3,2,3,2,3"];
    for (suite, bound) in [
        ("coverage", "2000"),
        ("uniqueness", "2000"),
        ("defect", "6"),
        ("lemma32", "6"),
        ("lemma33", "8"),
        ("lemma34", "2"),
        ("lemma35", "2"),
        ("scan-reduction", "2000"),
    ] {
        let o = aclab(&with(&explicit, &["verify", "--suite", suite, "--bound", bound]));
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stderr(&o));
    }
}

#[test]
fn verify_thm13_convergence() {
    let o = aclab(&["verify", "--suite", "thm13-convergence", "--a", "2", "--b", "4", "--bound", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["checked"], 4);
    assert!(rep["notes"][3].as_str().unwrap().starts_with("l = 7: D = 85/511"));
    let o = aclab(&["verify", "--suite", "thm13-convergence", "--b", "4,5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_usage_errors() {
    let o = aclab(&with(&UNIFORM2, &["verify", "--suite", "nope"]));
    assert_eq!(o.status.code(), Some(2));
    let o = aclab(&["verify", "--suite", "coverage"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("requires a base"));
    let o = aclab(&with(&UNIFORM2, &["verify", "--suite", "lemma34", "--bound", "20"]));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_across_thread_counts() {
    let args = ["verify", "--kind", "thm12", "--d", "2,4", "--c", "9", "--suite", "lemma35", "--bound", "4"];
    let one = aclab_env(&args, "1");
    let four = aclab_env(&args, "4");
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn verify_json_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let o = aclab(&with(&UNIFORM2, &["verify", "--suite", "lemma32", "--json", path.to_str().unwrap()]));
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(path).unwrap(), stdout(&o));
}

#[test]
fn dk_tables() {
    let o = aclab(&with(&UNIFORM2, &["dk", "--k-max", "4"]));
    let out = stdout(&o);
    let d: Vec<&str> = out.lines().skip(1).map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(d, ["1/2", "1/4", "3/8", "5/16"]);

    let o = aclab(&with(&UNIFORM2, &["dk", "--k-max", "1"]));
    assert_eq!(stdout(&o).lines().nth(1).unwrap(), "1\t1/2\t0.500000000000\t\t");

    let o = aclab(&["dk", "--kind", "lemma22", "--a", "2", "--b", "4", "--l", "1", "--k-max", "12"]);
    let evens: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].parse::<u32>().unwrap() % 2 == 0).then(|| f[2].parse().unwrap())
        })
        .collect();
    assert!(evens.windows(2).all(|w| w[0] < w[1] && w[1] < 1.0 / 7.0));
}

#[test]
fn bad_thread_env() {
    let o = aclab_env(&with(&UNIFORM2, &["count", "--x", "3"]), "zero");
    assert_eq!(o.status.code(), Some(2));
}
