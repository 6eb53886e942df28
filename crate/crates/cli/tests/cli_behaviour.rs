use proptest::prelude::*;
use std::process::{Command, Output};
use veto_manip::election::ManipulationInstance;
use veto_manip_cli::csv_out::COLUMNS;
use veto_manip_cli::instance_file::{format_instance, parse_instance};

fn vetoman(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vetoman")).args(args).output().unwrap()
}

fn decide_text(text: &str) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("instance.txt");
    std::fs::write(&path, text).unwrap();
    vetoman(&["decide", path.to_str().unwrap()])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn decide_reports_and_exits() {
    let yes = decide_text("veto-instance v1\na 5\nb 5\nc 6\nW 1 1\n");
    assert_eq!(yes.status.code(), Some(0));
    let text = stdout(&yes);
    assert!(text.starts_with("MANIPULABLE\n"));
    assert!(text.contains("veto to A: 1") && text.contains("veto to B: 1"));

    let no = decide_text("# from a hung draw\nveto-instance v1\na 0\nb 0\nc 5\nW 4 6\n");
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).starts_with("NOT MANIPULABLE\n"));

    let short = decide_text("veto-instance v1\na 10\nb 1\nc 3\nW 1\n");
    assert_eq!(short.status.code(), Some(1));
    assert!(stdout(&short).contains("case: one-loser-ahead"));
    let enough = decide_text("veto-instance v1\na 10\nb 1\nc 3\nW 2\n");
    assert_eq!(enough.status.code(), Some(0));
    assert!(stdout(&enough).contains("veto to B: 2"));
}

#[test]
fn bad_input_exits_two() {
    for text in ["", "veto-instance v1\na 1\nb 2\n", "veto-instance v1\na 1\nb 2\nc 3\nW 0\n", "hello\n"] {
        let out = decide_text(text);
        assert_eq!(out.status.code(), Some(2), "{text:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(vetoman(&["decide", "/nonexistent/instance"]).status.code(), Some(2));
    assert_eq!(vetoman(&["curve", "--n", "16", "--m", "1", "--trials", "0", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(vetoman(&["curve", "--n", "16", "--m", "1"]).status.code(), Some(2));
    assert_eq!(vetoman(&["hung", "--m", "4", "--log2k", "41", "--seed", "1"]).status.code(), Some(2));
}

fn csv_records(bytes: &[u8]) -> Vec<csv::StringRecord> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).flexible(false).from_reader(bytes);
    assert_eq!(reader.headers().unwrap().iter().collect::<Vec<_>>(), COLUMNS);
    reader.records().map(Result::unwrap).collect()
}

#[test]
fn curve_csv_is_strict_and_worker_independent() {
    let args = ["curve", "--n", "64,256", "--x-step", "1", "--x-max", "2", "--trials", "400", "--seed", "11"];
    let one = vetoman(&[&args[..], &["--workers", "1"]].concat());
    let four = vetoman(&[&args[..], &["--workers", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    let records = csv_records(&one.stdout);
    let ms: Vec<_> = records.iter().map(|r| r[2].to_string()).collect();
    assert_eq!(ms, ["0", "8", "16", "0", "16", "32"]);
    for r in &records {
        assert_eq!(&r[0], "uniform");
        assert_eq!(&r[8], "11");
        let p: f64 = r[9].parse().unwrap();
        assert!((0.0..=1.0).contains(&p));
    }
}

#[test]
fn hung_writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hung.csv");
    let out = vetoman(&[
        "hung", "--m", "8", "--log2k", "2..8:3", "--one-random", "--log2k-prime", "0,8", "--trials", "50", "--seed", "2",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let records = csv_records(&std::fs::read(&path).unwrap());
    assert_eq!(records.len(), 6);
    assert!(records.iter().all(|r| &r[0] == "hung_one_random" && &r[1] == "0" && r[14].is_empty()));
    assert_eq!(&records[1][6], "256");
}

#[test]
fn bound_prints_fixture_values() {
    let out = vetoman(&["bound", "--n", "16,64", "--critical"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('m'))
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!((rows[0][4] / 1.026_405_900_316_821_4e-2 - 1.0).abs() < 1e-8);
    assert!((rows[1][4] / 5.111_918_797_634_190_1e-4 - 1.0).abs() < 1e-8);
}

#[test]
fn selftest_passes() {
    let out = vetoman(&["selftest", "--instances", "300", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

proptest! {
    #[test]
    fn instance_files_round_trip(
        a in 0u64..u64::MAX / 4,
        b in 0u64..u64::MAX / 4,
        c in 0u64..u64::MAX / 4,
        w in prop::collection::vec(1u64..1 << 40, 0..20),
        n in 0u32..5000,
    ) {
        let instance = ManipulationInstance::new(a, b, c, w).unwrap().with_voters(n);
        let text = format_instance(&instance);
        prop_assert_eq!(parse_instance(&text).unwrap(), instance);
    }
}
