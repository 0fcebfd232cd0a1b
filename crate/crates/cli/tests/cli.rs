use std::path::Path;
use std::process::{Command, Output};

use biozip::signal_io::{decode_raw, parse_csv, synth_eeg, write_signal};
use biozip::SignalFormat;

fn biozip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biozip"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr_lines(out: &Output) -> usize {
    String::from_utf8_lossy(&out.stderr).lines().count()
}

fn assert_fails(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        stderr_lines(out),
        1,
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn gen_writes_one_line_per_sample_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(biozip(&["gen", "10", "256", "42", p(&a)]).status.success());
    assert!(biozip(&["gen", "10", "256", "42", p(&b)]).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 2560);
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let expected = synth_eeg(10.0, 256.0, 42).unwrap();
    assert_eq!(parse_csv(&text).unwrap(), expected.samples());
}

#[test]
fn gen_rejects_low_rate() {
    let dir = tempfile::tempdir().unwrap();
    assert_fails(
        &biozip(&["gen", "10", "32", "42", p(&dir.path().join("x.csv"))]),
        1,
    );
}

#[test]
fn compress_prints_report_and_round_trips_at_zero_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    let container = dir.path().join("out.bzp");
    let back = dir.path().join("back.f64");
    let report = dir.path().join("report.json");
    assert!(biozip(&["gen", "4", "256", "42", p(&input)])
        .status
        .success());

    let out = biozip(&[
        "compress",
        "--transform",
        "dwt",
        "--codec",
        "arith",
        "--thr",
        "0",
        "--levels",
        "2",
        "--segments",
        "3",
        "--report",
        p(&report),
        p(&input),
        p(&container),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["num_segments"], 3);
    assert_eq!(json["config"]["transform"], "dwt");
    let saved: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(saved["compressed_bytes"], json["compressed_bytes"]);
    assert_eq!(
        json["compressed_bytes"].as_u64().unwrap(),
        std::fs::metadata(&container).unwrap().len()
    );

    let out = biozip(&["decompress", p(&container), p(&back)]);
    assert!(out.status.success());
    let timings: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(timings["samples"], 1024);
    let original = synth_eeg(4.0, 256.0, 42).unwrap();
    let restored = decode_raw(&std::fs::read(&back).unwrap()).unwrap();
    let err = original
        .samples()
        .iter()
        .zip(&restored)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
}

#[test]
fn deep_dwt_on_tiny_input_records_padding() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tiny.csv");
    std::fs::write(&input, "1\n4\n2\n8\n5\n7\n3\n6\n9\n").unwrap();
    let container = dir.path().join("tiny.bzp");
    let out = biozip(&[
        "compress",
        "--transform",
        "dwt",
        "--levels",
        "3",
        "--thr",
        "0",
        p(&input),
        p(&container),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let bytes = std::fs::read(&container).unwrap();
    // single segment entry: original_length 9, pad 7
    assert_eq!(&bytes[36..40], &9u32.to_le_bytes());
    assert_eq!(&bytes[40..44], &7u32.to_le_bytes());
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.csv");
    assert!(biozip(&["gen", "2", "256", "1", p(&input)])
        .status
        .success());
    let out_path = dir.path().join("o.bzp");
    let (i, o) = (p(&input), p(&out_path));
    assert_fails(&biozip(&["compress", "--thr", "1.5", i, o]), 2);
    assert_fails(&biozip(&["compress", "--thr", "-0.1", i, o]), 2);
    assert_fails(&biozip(&["compress", "--transform", "fft", i, o]), 2);
    assert_fails(&biozip(&["compress", "--levels", "0", i, o]), 2);
    assert_fails(
        &biozip(&["compress", "--segments", "2", "--ts", "1", i, o]),
        2,
    );
    assert_fails(&biozip(&["compress", i]), 2);
    assert_fails(&biozip(&["explode"]), 2);
    assert!(!out_path.exists());
}

#[test]
fn runtime_errors_exit_1_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let out = dir.path().join("o.bzp");
    assert_fails(&biozip(&["compress", p(&missing), p(&out)]), 1);

    let bad = dir.path().join("bad.bzp");
    std::fs::write(&bad, b"NOPE and then some bytes").unwrap();
    let res = biozip(&["decompress", p(&bad), p(&dir.path().join("x.csv"))]);
    assert_fails(&res, 1);
    assert!(String::from_utf8_lossy(&res.stderr).contains("magic"));
}

#[test]
fn corrupt_payload_names_the_segment() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.f64");
    let signal = synth_eeg(2.0, 256.0, 5).unwrap();
    write_signal(&signal, &input, SignalFormat::Raw).unwrap();
    let container = dir.path().join("c.bzp");
    let out = biozip(&[
        "compress",
        "--segments",
        "2",
        "--codec",
        "arith",
        p(&input),
        p(&container),
    ]);
    assert!(out.status.success());
    let mut bytes = std::fs::read(&container).unwrap();
    // second segment's entry starts after the first payload
    let first_len = u32::from_le_bytes(bytes[44..48].try_into().unwrap()) as usize;
    let second_payload = 36 + 12 + first_len + 12;
    for b in &mut bytes[second_payload..second_payload + 8] {
        *b ^= 0xa5;
    }
    std::fs::write(&container, &bytes).unwrap();
    let res = biozip(&["decompress", p(&container), p(&dir.path().join("x.f64"))]);
    assert_fails(&res, 1);
    assert!(String::from_utf8_lossy(&res.stderr).contains("segment 1"));
}

#[test]
fn sweep_emits_cartesian_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = biozip(&[
        "sweep",
        "--duration",
        "4",
        "--seed",
        "42",
        "--report",
        p(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("transform,codec,thr,num_segments,segment_size"));
    assert_eq!(lines.count(), 48);
}

#[test]
fn sweep_is_repeatable_apart_from_timings() {
    let run = || {
        let out = biozip(&[
            "sweep",
            "--duration",
            "3",
            "--transform",
            "dct",
            "--codec",
            "rle",
            "--segments",
            "1,3",
            "--thr",
            "0.01,0.02,0.04",
        ]);
        assert!(out.status.success());
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .map(|l| {
                let cols: Vec<&str> = l.split(',').collect();
                // drop t_comp_s..t_min_s
                [&cols[..8], &cols[12..]].concat().join(",")
            })
            .collect::<Vec<_>>()
    };
    let a = run();
    assert_eq!(a.len(), 7);
    assert_eq!(a, run());
}
