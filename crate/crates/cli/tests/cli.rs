use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use wimp_cli::io::{data_to_csv, ingest_csv};
use wimp_core::mc::{make_dgp, simulate_path, Dgp, DgpSpec};
use wimp_core::nalgebra::DMatrix;
use wimp_core::rng::substream;
use wimp_core::ts::TimeSeriesData;

fn wimp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wimp"))
        .args(args)
        .env("WIMP_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

fn write_sample(dir: &Path, spec: &DgpSpec, seed: u64) -> PathBuf {
    let y = simulate_path(spec, &mut substream(seed, &[]));
    let names = (1..=y.ncols()).map(|i| format!("v{i}")).collect();
    let path = dir.join("data.csv");
    fs::write(&path, data_to_csv(&TimeSeriesData::new(y, names).unwrap())).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn body_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(str::to_string)
        .collect()
}

#[test]
fn ingest_accepts_and_rejects() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    fs::write(&good, "a,b,c\n1,2,3\n4,5,6\n7,8,9\n10,11,12\n13,14,15\n").unwrap();
    let data = ingest_csv(&good).unwrap();
    assert_eq!((data.nobs(), data.nvars()), (5, 3));
    assert_eq!(data.values()[(4, 2)], 15.0);

    let cases = [
        ("a,b\n1,2\n3,x\n", "row 3, column 2"),
        ("a,b\n1,2\n3\n", "row 3 has 1 fields"),
        ("a,a\n1,2\n", "duplicate column name"),
        ("a,b\n", "no data rows"),
    ];
    for (text, needle) in cases {
        let path = dir.path().join("bad.csv");
        fs::write(&path, text).unwrap();
        let err = ingest_csv(&path).unwrap_err().to_string();
        assert!(err.contains(needle), "{err}");
    }
}

#[test]
fn csv_round_trip_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let y = DMatrix::from_fn(30, 2, |t, c| {
        (t as f64 + 0.1).sqrt() * if c == 0 { 1.0 / 3.0 } else { -7e-12 }
    });
    let data = TimeSeriesData::new(y.clone(), vec!["x".into(), "y".into()]).unwrap();
    let path = dir.path().join("rt.csv");
    fs::write(&path, data_to_csv(&data)).unwrap();
    let back = ingest_csv(&path).unwrap();
    assert!(back
        .values()
        .iter()
        .zip(y.iter())
        .all(|(a, b)| a.to_bits() == b.to_bits()));
    assert_eq!(back.names(), data.names());
}

#[test]
fn analyze_bundle_is_complete_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_sample(dir.path(), &make_dgp(Dgp::Dgp2, 200), 7);
    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    let args = |out: &Path| {
        vec![
            "analyze".to_string(),
            "--input".into(),
            s(&input).into(),
            "--p".into(),
            "1".into(),
            "--B".into(),
            "49".into(),
            "--methods".into(),
            "wimp,ols,fdbb_aic".into(),
            "--seed".into(),
            "11".into(),
            "--out".into(),
            s(out).into(),
        ]
    };
    let a1 = args(&out1);
    ok(&wimp(&a1.iter().map(String::as_str).collect::<Vec<_>>()));
    let a2 = args(&out2);
    ok(&wimp(&a2.iter().map(String::as_str).collect::<Vec<_>>()));

    for name in ["intervals.csv", "weights.csv", "metadata.txt", "config.txt"] {
        let first = fs::read(out1.join(name)).unwrap();
        assert_eq!(first, fs::read(out2.join(name)).unwrap(), "{name} differs between runs");
        assert!(String::from_utf8(first)
            .unwrap()
            .starts_with("# schema_version=1 config_hash="));
    }

    // per-rank fan (K + 1) plus WIMP, OLS and FDB bagging; 9 pairs, horizons 0..=20
    let rows = body_lines(&out1.join("intervals.csv"));
    assert_eq!(rows.len(), 1 + (4 + 3) * 9 * 21);
    assert!(rows[1].starts_with("rank,0,1,1,0,"));

    // DGP2 has two cointegrating relations
    let weights = body_lines(&out1.join("weights.csv"));
    let reference: Vec<&String> = weights.iter().filter(|l| l.ends_with(",1")).collect();
    assert_eq!(reference.len(), 1);
    assert!(reference[0].starts_with("2,"), "{weights:?}");

    // replaying the stored configuration reproduces the bundle
    let replay = dir.path().join("replay");
    ok(&wimp(&[
        "analyze",
        "--config",
        s(&out1.join("config.txt")),
        "--out",
        s(&replay),
    ]));
    for name in ["intervals.csv", "weights.csv", "metadata.txt", "config.txt"] {
        assert_eq!(
            fs::read(out1.join(name)).unwrap(),
            fs::read(replay.join(name)).unwrap(),
            "{name}"
        );
    }

    let tables = dir.path().join("tables");
    ok(&wimp(&["report", "--bundle", s(&out1), "--out", s(&tables)]));
    let table = fs::read_to_string(tables.join("interval_table.csv")).unwrap();
    assert_eq!(table.lines().count(), 1 + 7 * 9 * 21);
    assert_eq!(
        fs::read_to_string(tables.join("coverage_summary.csv"))
            .unwrap()
            .lines()
            .count(),
        1
    );
}

#[test]
fn single_variable_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let y = simulate_path(&make_dgp(Dgp::Dgp2, 80), &mut substream(3, &[]));
    let data = TimeSeriesData::new(y.columns(0, 1).into_owned(), vec!["level".into()]).unwrap();
    let input = dir.path().join("one.csv");
    fs::write(&input, data_to_csv(&data)).unwrap();
    let out = dir.path().join("out");
    ok(&wimp(&[
        "analyze",
        "--input",
        s(&input),
        "--p",
        "1",
        "--B",
        "39",
        "--h-max",
        "8",
        "--out",
        s(&out),
    ]));

    let rows = body_lines(&out.join("intervals.csv"));
    let weights = body_lines(&out.join("weights.csv"));
    let reference = weights.iter().skip(1).position(|l| l.ends_with(",1")).unwrap();
    let parse = |line: &str| -> (String, String, f64, f64) {
        let f: Vec<&str> = line.split(',').collect();
        (
            format!("{}:{}", f[2], f[4]),
            f[1].to_string(),
            f[5].parse().unwrap(),
            f[6].parse().unwrap(),
        )
    };
    let mut wimp_rows = 0;
    for row in rows.iter().skip(1).filter(|r| r.starts_with("wimp,")) {
        let (key, _, lo, hi) = parse(row);
        let reference_row = rows
            .iter()
            .skip(1)
            .filter(|r| r.starts_with("rank,"))
            .map(|r| parse(r))
            .find(|(k, rank, _, _)| *k == key && *rank == reference.to_string())
            .unwrap();
        assert!(lo <= reference_row.2 && reference_row.3 <= hi);
        wimp_rows += 1;
    }
    assert_eq!(wimp_rows, 9);
    assert_eq!(rows.len(), 1 + 3 * 9);
}

#[test]
fn simulate_and_recount() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("sim");
    ok(&wimp(&[
        "simulate",
        "--dgp",
        "dgp2",
        "--T",
        "60",
        "--n-mc",
        "6",
        "--B",
        "39",
        "--h-max",
        "12",
        "--methods",
        "ols,wimp",
        "--seed",
        "3",
        "--out",
        s(&bundle),
    ]));
    let coverage = body_lines(&bundle.join("coverage.csv"));
    assert_eq!(coverage.len(), 1 + 2 * 9 * 12);
    for row in coverage.iter().skip(1) {
        let f: Vec<usize> = row.split(',').skip(4).take(3).map(|v| v.parse().unwrap()).collect();
        assert_eq!(f.iter().sum::<usize>(), 6);
    }

    let tables = dir.path().join("tables");
    ok(&wimp(&["report", "--bundle", s(&bundle), "--out", s(&tables)]));
    let recount = fs::read_to_string(tables.join("coverage_summary.csv")).unwrap();
    let summary = body_lines(&bundle.join("summary.csv"));
    let recount: Vec<&str> = recount.lines().collect();
    assert_eq!(recount[0], "method,horizon,median_cp,min_cp,mean_width");
    assert_eq!(recount.len(), summary.len());
    for (a, b) in recount.iter().skip(1).zip(summary.iter().skip(1)) {
        let fa: Vec<&str> = a.split(',').collect();
        let fb: Vec<&str> = b.split(',').collect();
        assert_eq!(fa[..2], fb[..2]);
        for i in 2..5 {
            let (x, y): (f64, f64) = (fa[i].parse().unwrap(), fb[i].parse().unwrap());
            assert!((x - y).abs() < 1e-12, "{a} vs {b}");
        }
    }
    assert_eq!(
        fs::read_to_string(tables.join("interval_table.csv"))
            .unwrap()
            .lines()
            .count(),
        1
    );
}

#[test]
fn empty_method_list_gives_header_only_tables() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("sim");
    ok(&wimp(&[
        "simulate",
        "--methods",
        "",
        "--n-mc",
        "2",
        "--out",
        s(&bundle),
    ]));
    let tables = dir.path().join("tables");
    ok(&wimp(&["report", "--bundle", s(&bundle), "--out", s(&tables)]));
    for name in ["interval_table.csv", "coverage_summary.csv", "weights.csv"] {
        assert_eq!(
            fs::read_to_string(tables.join(name)).unwrap().lines().count(),
            1,
            "{name}"
        );
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let code = |args: &[&str]| wimp(args).status.code().unwrap();

    assert_eq!(code(&["simulate", "--gamma", "2", "--out", s(&out)]), 2);
    assert_eq!(code(&["simulate", "--methods", "nonsense", "--out", s(&out)]), 2);
    assert_eq!(
        code(&[
            "analyze",
            "--input",
            s(&dir.path().join("missing.csv")),
            "--out",
            s(&out)
        ]),
        3
    );
    assert!(!out.exists(), "failed runs must not leave a bundle");

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a,b\n1,2\n3,oops\n").unwrap();
    assert_eq!(code(&["analyze", "--input", s(&bad), "--out", s(&out)]), 3);

    // identical columns make the moment matrix singular
    let y = simulate_path(&make_dgp(Dgp::Dgp1, 60), &mut substream(1, &[]));
    let twin = DMatrix::from_fn(60, 2, |t, _| y[(t, 0)]);
    let collinear = dir.path().join("twin.csv");
    fs::write(&collinear, data_to_csv(&TimeSeriesData::from_matrix(twin).unwrap())).unwrap();
    assert_eq!(
        code(&[
            "analyze",
            "--input",
            s(&collinear),
            "--p",
            "1",
            "--B",
            "39",
            "--out",
            s(&out)
        ]),
        4
    );

    let sim = dir.path().join("sim");
    assert_eq!(code(&["simulate", "--n-mc", "1", "--methods", "", "--out", s(&sim)]), 0);
    let cov = sim.join("coverage.csv");
    let text = fs::read_to_string(&cov)
        .unwrap()
        .replacen("schema_version=1", "schema_version=9", 1);
    fs::write(&cov, text).unwrap();
    assert_eq!(
        code(&["report", "--bundle", s(&sim), "--out", s(&dir.path().join("t"))]),
        3
    );
}
