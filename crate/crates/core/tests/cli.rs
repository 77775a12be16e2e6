use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seqinfo"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn seqinfo")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

fn random_fasta(len: usize, seed: u64) -> String {
    // xorshift, enough for test inputs
    let mut x = seed.max(1);
    let body: String = (0..len)
        .map(|_| {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            b"ATGC"[(x % 4) as usize] as char
        })
        .collect();
    format!(">rand{seed}\n{body}\n")
}

#[test]
fn extract_writes_features_and_total_coding() {
    let dir = TempDir::new().unwrap();
    let genome = write(&dir, "g.fa", ">g\nATGCAT\n");
    let features = write(&dir, "f.tsv", "e1\texon\t1\t3\t+\ne2\texon\t4\t6\tcomplement\n");
    let out = stdout(&run(&["extract", "--input", s(&genome), "--features", s(&features)]));
    assert_eq!(out, ">e1\nATG\n>e2\nATG\n>total_coding\nATGATG\n");
}

#[test]
fn extract_without_exons_warns() {
    let dir = TempDir::new().unwrap();
    let genome = write(&dir, "g.fa", ">g\nATGCAT\n");
    let features = write(&dir, "f.tsv", "i1\tintron\t1\t3\t+\no1\tother\t4\t6\t+\n");
    let out = run(&["extract", "--input", s(&genome), "--features", s(&features)]);
    let text = stdout(&out);
    assert_eq!(text.matches('>').count(), 2);
    assert!(!text.contains("total_coding"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn extract_to_file_and_bounds_errors() {
    let dir = TempDir::new().unwrap();
    let genome = write(&dir, "g.fa", ">g\nATGCAT\n");
    let ok = write(&dir, "ok.tsv", "whole\texon\t1\t6\t+\n");
    let target = dir.path().join("out.fa");
    let out = run(&["extract", "--input", s(&genome), "--features", s(&ok), "--output", s(&target)]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(&target).unwrap().starts_with(">whole\nATGCAT\n"));

    let bad = write(&dir, "bad.tsv", "big\texon\t1\t7\t+\n");
    let out = run(&["extract", "--input", s(&genome), "--features", s(&bad)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("big") && err.contains("bad.tsv"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn parse_errors_carry_file_and_line() {
    let dir = TempDir::new().unwrap();
    let genome = write(&dir, "broken.fa", ">x\nACGT\nACNT\n");
    let out = run(&["entropy", "--input", s(&genome), "--L", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("broken.fa") && err.contains("line 3") && err.contains("column 3"), "{err}");
}

#[test]
fn report_has_one_row_per_l_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r.fa", &random_fasta(197, 11));
    let args = ["report", "--input", s(&input), "--L", "3..9", "--ensemble-size", "30", "--seed", "5"];
    let first = stdout(&run(&args));
    let second = stdout(&run(&args));
    assert_eq!(first, second);

    assert!(first.contains("# seed=5 rng=ChaCha20"));
    let header = first.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "sequence_id,length,L,h_raw,delta,h_corrected");
    let rows = data_rows(&first);
    assert_eq!(rows.len(), 7);
    for (row, l) in rows.iter().zip(3..) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], "rand11");
        assert_eq!(cols[1], "197");
        assert_eq!(cols[2], l.to_string());
        let corrected: f64 = cols[5].parse().unwrap();
        assert!((1.85..=2.15).contains(&corrected), "{row}");
        // six significant digits
        assert_eq!(cols[5].chars().filter(char::is_ascii_digit).count(), 6, "{row}");
    }

    let other_seed = stdout(&run(&["report", "--input", s(&input), "--L", "3..9", "--seed", "6"]));
    assert_ne!(first, other_seed);
}

#[test]
fn report_json_schema() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r.fa", &format!("{}{}", random_fasta(150, 1), random_fasta(90, 2)));
    let out = stdout(&run(&["report", "--input", s(&input), "--L", "2..4", "--format", "json", "--mode", "sliding"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let meta = &doc["metadata"];
    for key in ["tool", "version", "seed", "rng", "ensemble_size", "mode", "beta", "block_range"] {
        assert!(meta.get(key).is_some(), "missing metadata key {key}");
    }
    assert_eq!(meta["mode"], "sliding");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["L", "delta", "h_corrected", "h_raw", "length", "sequence_id"]);
    assert_eq!(rows[3]["sequence_id"], "rand2");
}

#[test]
fn entropy_and_benchmark_tables() {
    let dir = TempDir::new().unwrap();
    let codons: String = (0..64).map(|i| {
        let b = b"ATGC";
        format!("{}{}{}", b[i / 16] as char, b[(i / 4) % 4] as char, b[i % 4] as char)
    }).collect();
    let input = write(&dir, "c.fa", &format!(">codons\n{codons}\n"));
    let out = stdout(&run(&["entropy", "--input", s(&input), "--L", "3"]));
    assert_eq!(data_rows(&out), vec!["codons,192,3,6.00000,2.00000"]);

    let out = stdout(&run(&["benchmark", "--length", "100000", "--L", "3", "--ensemble-size", "3"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1);
    let delta: f64 = rows[0].split(',').nth(3).unwrap().parse().unwrap();
    assert!((delta - 1.0).abs() < 0.01);

    let two = write(&dir, "two.fa", &format!("{}{}{}", random_fasta(50, 3), random_fasta(60, 4), random_fasta(50, 5)));
    let out = stdout(&run(&["benchmark", "--input", s(&two), "--L", "2..3"]));
    let lengths: Vec<&str> = data_rows(&out).iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(lengths, ["50", "50", "60", "60"]);
}

#[test]
fn autocorr_csv() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "a.fa", ">x\nATGC\n");
    let out = stdout(&run(&["autocorr", "--input", s(&input), "--max-lag", "1"]));
    assert_eq!(out, "lag,value\n-1,-0.812500\n0,1.25000\n1,-0.812500\n");

    let out = run(&["autocorr", "--input", s(&input)]);
    assert!(!out.status.success(), "default lag 10 exceeds a 4 bp signal");

    let many = write(&dir, "m.fa", ">a\nATGCATGCATGC\n>b\nAAAAAAAAAAAAA\n");
    assert!(!run(&["autocorr", "--input", s(&many)]).status.success());
    let out = stdout(&run(&["autocorr", "--input", s(&many), "--record", "b", "--center"]));
    assert_eq!(data_rows(&format!("h\n{out}")).len(), 22);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",0")), "{out}");
}

#[test]
fn walsh_csv() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "w.fa", &format!(">homo\nAAAA\n{}", random_fasta(197, 9)));
    let out = stdout(&run(&["walsh", "--input", s(&input)]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "sequence_id,original_length,adjusted_length,adjustment,independent_count,r_numerator,r_denominator"
    );
    assert_eq!(lines[1], "homo,4,4,none,2,2,4");
    assert!(lines[2].starts_with("rand9,197,256,padded,"));
    assert!(lines[2].ends_with(",256"));
}

#[test]
fn origin_sample_with_features() {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let origin = data.join("intron_sample.origin");
    let features = data.join("intron_sample.tsv");
    let out = run(&["walsh", "--input", s(&origin), "--features", s(&features)]);
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("i,1092,1024,truncated,"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no exon"));

    let out = stdout(&run(&["entropy", "--input", s(&origin), "--L", "3..9"]));
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 7);
    assert!(rows[0].starts_with("intron_sample,1092,3,"));
}

#[test]
fn invalid_flags_fail() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "r.fa", &random_fasta(40, 1));
    for args in [
        vec!["entropy", "--input", s(&input), "--L", "9..3"],
        vec!["entropy", "--input", s(&input), "--L", "0"],
        vec!["entropy", "--input", s(&input), "--mode", "zigzag"],
        vec!["entropy", "--input", s(&input), "--beta", "-1"],
        vec!["entropy", "--input", s(&input), "--L", "41"],
        vec!["report", "--input", s(&input), "--ensemble-size", "0"],
        vec!["walsh", "--input", "/nonexistent/file.fa"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(out.stdout.is_empty(), "{args:?} wrote data");
        assert!(!out.stderr.is_empty());
    }
}
