use std::path::PathBuf;

use itemcp::cli::{run, EXIT_ERROR, EXIT_OK, EXIT_TIMEOUT};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn itemcp(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("itemcp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn example_args(query: &str) -> Vec<String> {
    vec![
        "--data".into(),
        data("example.dat"),
        "--query".into(),
        data(query),
        "--item-cats".into(),
        data("example.items"),
        "--trans-cats".into(),
        data("example.trans"),
        "--item-labels".into(),
        data("example.labels"),
    ]
}

fn mine(query: &str, extra: &[&str]) -> (i32, String, String) {
    let mut args = vec!["mine".to_string()];
    args.extend(example_args(query));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    itemcp(&refs)
}

#[test]
fn mine_q1_prints_four_lines() {
    let (code, out, err) = mine("q1.query", &[]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.contains(&"ALL\tALL\tG K\t3\t3/6"), "{out}");
}

#[test]
fn engines_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for engine in ["cp", "baseline", "oracle"] {
        let path = dir.path().join(format!("{engine}.tsv"));
        let p = path.to_string_lossy().into_owned();
        let (code, _, err) = mine("q4.query", &["--engine", engine, "--out", &p]);
        assert_eq!(code, EXIT_OK, "{err}");
        files.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(files[0], files[1]);
    assert_eq!(files[0], files[2]);
    assert_eq!(String::from_utf8(files[0].clone()).unwrap().lines().count(), 24);
}

#[test]
fn parallel_mining_matches() {
    let (_, seq, _) = mine("q3.query", &[]);
    let (code, par, _) = mine("q3.query", &["--parallel", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(seq, par);
    assert_eq!(seq.lines().count(), 11);
}

#[test]
fn bg_line() {
    let (code, out, _) = mine("bg.query", &[]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "A B C D E F G H\tALL\tB G\t2\t2/6\n");
}

#[test]
fn oracle_size_guard() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.dat");
    let row: Vec<String> = (1..=30).map(|i| i.to_string()).collect();
    std::fs::write(&big, format!("{}\n1 2\n", row.join(" "))).unwrap();
    let q = dir.path().join("q.query");
    std::fs::write(&q, "theta: 50%\n").unwrap();
    let (code, _, err) = itemcp(&[
        "mine",
        "--data",
        big.to_str().unwrap(),
        "--query",
        q.to_str().unwrap(),
        "--engine",
        "oracle",
    ]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("too large") && err.contains("limit 24"), "{err}");
}

#[test]
fn timeout_exit_code() {
    let (code, _, err) = mine("q4.query", &["--timeout", "0"]);
    assert_eq!(code, EXIT_TIMEOUT, "{err}");
}

#[test]
fn errors_exit_one() {
    let (code, _, err) = itemcp(&["mine", "--data", "/nonexistent.dat", "--query", "x"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("cannot open"), "{err}");
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("bad.query");
    std::fs::write(&q, "theta: 50%\nwhatever: 1\n").unwrap();
    let (code, _, err) = itemcp(&["mine", "--data", &data("example.dat"), "--query", q.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("unknown key"), "{err}");
    let (code, _, _) = itemcp(&["mine", "--bogus"]);
    assert_eq!(code, EXIT_ERROR);
}

fn verify(query: &str, extra: &[&str]) -> (i32, String, String) {
    let mut args = vec!["verify".to_string()];
    args.extend(example_args(query));
    args.extend(extra.iter().map(|s| s.to_string()));
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    itemcp(&refs)
}

#[test]
fn verify_q4_agrees() {
    let (code, out, err) = verify("q4.query", &[]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("24 = 24 = 24"), "{out}");
}

#[test]
fn verify_reports_tampered_engine() {
    let (code, out, _) = verify("q4.query", &["--tamper-theta", "25%"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("MISMATCH cp vs baseline: first differing pair"), "{out}");
}

#[test]
fn verify_random_seeds() {
    let (code, out, err) = itemcp(&["verify", "--seeds", "100"]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
    assert!(out.ends_with("100 of 100 instances agree\n"));
}

#[test]
fn bench_suite() {
    let (code, out, err) = itemcp(&["bench", "--suite", &data("suite.csv")]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert_eq!(&r[11], "ok", "{r:?}");
    }
    // q2 on 3 item groups with (2,2): #D = 3, 9 solutions.
    assert_eq!((&rows[0][6], &rows[0][7]), ("3", "9"));
    assert_eq!((&rows[2][6], &rows[2][7]), ("9", "24"));
}

#[test]
fn bench_empty_suite_and_timeouts() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "id,data,query\n").unwrap();
    let (code, out, _) = itemcp(&["bench", "--suite", empty.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 1);

    let (code, out, _) = itemcp(&["bench", "--suite", &data("suite.csv"), "--timeout", "0"]);
    assert_eq!(code, EXIT_OK);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let statuses: Vec<String> = rdr.records().map(|r| r.unwrap()[11].to_string()).collect();
    assert!(statuses.iter().filter(|s| *s == "to").count() >= 4, "{statuses:?}");
}

#[test]
fn bench_row_errors_do_not_stop_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.csv");
    std::fs::write(
        &suite,
        format!(
            "id,data,query,engines\nmissing,nope.dat,q.query,cp\nok,{},{},cp\n",
            data("example.dat"),
            data("q1.query")
        ),
    )
    .unwrap();
    let (code, out, _) = itemcp(&["bench", "--suite", suite.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[1].starts_with("missing,cp,") && lines[1].contains(",error,"));
    assert!(lines[2].contains(",ok,"));
}
