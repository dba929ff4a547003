use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

const BELL: &str =
    "dims 2 2\n0.5,0 0,0 0,0 0.5,0\n0,0 0,0 0,0 0,0\n0,0 0,0 0,0 0,0\n0.5,0 0,0 0,0 0.5,0\n";
const LN2: &str = "0.69314718056";
const LN3: &str = "1.09861228867";

fn eofb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eofb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses CSV text into a header and rows of fields.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect::<Vec<_>>());
    let header = lines.next().expect("header line");
    (header, lines.collect())
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

fn maximally_mixed_3x3() -> String {
    let mut s = String::from("dims 3 3\n");
    for i in 0..9 {
        let row: Vec<String> = (0..9)
            .map(|j| {
                if i == j {
                    format!("{},0", 1.0 / 9.0)
                } else {
                    "0,0".into()
                }
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

#[test]
fn bell_state_bounds_pinch() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bell.state");
    fs::write(&path, BELL).unwrap();
    let out = eofb(&["bounds", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let csv_text = &text[text.find("param,").unwrap()..];
    let (header, rows) = csv(csv_text);
    assert_eq!(rows[0][column(&header, "eof_lower")], LN2);
    assert_eq!(rows[0][column(&header, "eof_upper")], LN2);
}

#[test]
fn maximally_mixed_state_has_loose_upper_bound() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("mixed.state");
    fs::write(&path, maximally_mixed_3x3()).unwrap();
    let out = eofb(&["bounds", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("clamped"), "{text}");
    let (header, rows) = csv(&text[text.find("param,").unwrap()..]);
    assert_eq!(rows[0][column(&header, "eof_lower")], "0");
    assert_eq!(rows[0][column(&header, "eof_upper")], LN3);
}

#[test]
fn exit_codes() {
    let dir = tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    };
    let malformed = write("bad_dims.state", "dims two 2\n");
    assert_eq!(
        eofb(&["bounds", malformed.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let missing = dir.path().join("missing.state");
    assert_eq!(
        eofb(&["bounds", missing.to_str().unwrap()]).status.code(),
        Some(2)
    );

    let not_psd = write("not_psd.state", "dims 1 2\n1.5,0 0,0\n0,0 -0.5,0\n");
    let out = eofb(&["bounds", not_psd.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("positive"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    assert_eq!(eofb(&["envelope", "--m", "1"]).status.code(), Some(2));
    assert_eq!(
        eofb(&["example", "--family", "ising"]).status.code(),
        Some(2)
    );
    assert_eq!(eofb(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(
        eofb(&["example", "--family", "two-param", "--sweep", "a=0:1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn envelope_table_m3() {
    let dir = tempdir().unwrap();
    let out_path = dir.path().join("env.csv");
    let out = eofb(&[
        "envelope",
        "--m",
        "3",
        "--grid",
        "512",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (header, rows) = csv(&fs::read_to_string(&out_path).unwrap());
    assert_eq!(header, ["c", "X", "Y", "epsilon", "eta"]);
    // uniform grid, the origin and the interior breakpoint c = 1
    assert_eq!(rows.len(), 512 + 2);
    let at_one = rows.iter().find(|r| r[0] == "1").expect("row at c = 1");
    assert_eq!(at_one[2], LN2);
    assert_eq!(at_one[3], LN2);
    let last = rows.last().unwrap();
    assert!(last[1..].iter().all(|v| v == LN3), "{last:?}");
}

#[test]
fn envelope_table_m2_has_equal_extremes() {
    let out = eofb(&["envelope", "--m", "2", "--grid", "256"]);
    assert!(out.status.success());
    let (_, rows) = csv(&stdout(&out));
    assert!(rows.iter().all(|r| r[1] == r[2]));
}

#[test]
fn werner_sweep() {
    let out = eofb(&[
        "example",
        "--family",
        "werner",
        "--d",
        "3",
        "--sweep",
        "f=-1:0:0.01",
    ]);
    assert!(out.status.success());
    let (header, rows) = csv(&stdout(&out));
    assert_eq!(rows.len(), 101);
    let upper = column(&header, "eof_upper");
    assert!(rows.iter().all(|r| r[upper] == LN3));
    let hint = column(&header, "eof_upper_hint");
    let hints: Vec<f64> = rows.iter().map(|r| r[hint].parse().unwrap()).collect();
    assert!(hints.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn two_param_ordering_at_x_0_1() {
    let out = eofb(&[
        "example",
        "--family",
        "two-param",
        "--x",
        "0.1",
        "--sweep",
        "a=0.5:0.66:0.005",
    ]);
    assert!(out.status.success());
    let (header, rows) = csv(&stdout(&out));
    assert_eq!(rows.len(), 33);
    let (ppt, pur) = (
        column(&header, "eof_lower_ppt"),
        column(&header, "eof_lower_purityA"),
    );
    for r in &rows {
        let (a, b): (f64, f64) = (r[ppt].parse().unwrap(), r[pur].parse().unwrap());
        assert!(a >= b, "{r:?}");
    }
    let params: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(params.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn two_param_sweep_over_x() {
    let out = eofb(&[
        "example",
        "--family",
        "two-param",
        "--a",
        "0.5",
        "--sweep",
        "x=0:1:0.25",
    ]);
    assert!(out.status.success());
    let (header, rows) = csv(&stdout(&out));
    assert_eq!(rows.len(), 5);
    // x = 1 is the maximally mixed state
    assert_eq!(rows[4][column(&header, "eof_lower")], "0");
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = eofb(&[
            "example",
            "--family",
            "two-param",
            "--x",
            "0.6",
            "--sweep",
            "a=0:1:0.05",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        fs::read(p).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn verify_suites() {
    assert!(eofb(&[
        "verify",
        "--suite",
        "two-qubit",
        "--n",
        "300",
        "--seed",
        "42"
    ])
    .status
    .success());
    assert!(eofb(&["verify", "--suite", "pure-sandwich", "--n", "90"])
        .status
        .success());
    assert!(
        eofb(&["verify", "--suite", "envelope-hull", "--grid", "1024"])
            .status
            .success()
    );
    assert!(eofb(&["verify", "--suite", "roof-consistency", "--n", "2"])
        .status
        .success());
}

#[test]
fn verify_reports_are_reproducible() {
    let a = eofb(&[
        "verify",
        "--suite",
        "two-qubit",
        "--n",
        "100",
        "--seed",
        "7",
    ]);
    let b = eofb(&[
        "verify",
        "--suite",
        "two-qubit",
        "--n",
        "100",
        "--seed",
        "7",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

fn check_dump(path: &Path) {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.starts_with("dims "));
    // the dump is itself a valid state file
    let out = eofb(&["bounds", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn fixture_failures_dump_a_state() {
    let dir = tempdir().unwrap();
    let dump = dir.path().join("failure.state");
    let out = eofb(&[
        "verify",
        "--suite",
        "fixtures",
        "--dump",
        dump.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert!(text.contains("PASS werner EoF <= 1.099"), "{text}");
    assert!(text.contains("PASS x=0.1 reference coefficients"), "{text}");
    // checks that disagree with the reference upper envelope fail loudly
    assert_eq!(out.status.code(), Some(1));
    assert!(text.contains("FAIL eta matches m=3 closed form"), "{text}");
    check_dump(&dump);
}
