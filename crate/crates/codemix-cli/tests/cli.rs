//! End-to-end checks of the `codemix` binary: exit codes, output file
//! contracts, and bit-for-bit reproducibility of reruns.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_codemix"))
}

fn assets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../assets/mini")
}

fn run(args: &[&str]) -> Output {
    let mut cmd = bin();
    cmd.args(args);
    cmd.output().expect("binary runs")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn missing_required_flag_exits_2() {
    let assets = assets();
    let out = run(&[
        "generate",
        "--pairs",
        assets.join("pairs.tsv").to_str().unwrap(),
        "--out",
        "/tmp/unused.jsonl",
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("--dict"));
}

#[test]
fn incoherent_flags_exit_2() {
    let assets = assets();
    let dir = tempfile::tempdir().unwrap();
    let dict = dir.path().join("dict.tsv");
    let built = run(&[
        "dict",
        "build",
        "--seed-file",
        assets.join("seed_dict.tsv").to_str().unwrap(),
        "--out",
        dict.to_str().unwrap(),
    ]);
    assert_eq!(built.status.code(), Some(0), "stderr: {}", stderr_of(&built));

    // extend without naming any extension source
    let out = run(&[
        "dict",
        "extend",
        "--dict",
        dict.to_str().unwrap(),
        "--pairs",
        assets.join("pairs.tsv").to_str().unwrap(),
        "--out",
        dir.path().join("out.tsv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));

    // pipeline without a config file
    let out = run(&["pipeline", "run", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("--config"));
}

#[test]
fn data_errors_exit_1_with_diagnostic() {
    let assets = assets();
    let out = run(&[
        "score",
        "--hyp",
        "/nonexistent/hyp.jsonl",
        "--refs",
        assets.join("refs.jsonl").to_str().unwrap(),
        "--out",
        "/tmp/unused.tsv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("/nonexistent/hyp.jsonl"));

    // malformed config line carries file and line number
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "iterations\n").unwrap();
    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "align",
        "train",
        "--pairs",
        assets.join("pairs.tsv").to_str().unwrap(),
        "--out",
        dir.path().join("t.tsv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("bad.conf:1"), "stderr: {}", stderr_of(&out));
}

#[test]
fn generate_reruns_are_byte_identical() {
    let assets = assets();
    let dir = tempfile::tempdir().unwrap();
    let dict = dir.path().join("dict.tsv");
    let built = run(&[
        "dict",
        "build",
        "--seed-file",
        assets.join("seed_dict.tsv").to_str().unwrap(),
        "--out",
        dict.to_str().unwrap(),
    ]);
    assert_eq!(built.status.code(), Some(0), "stderr: {}", stderr_of(&built));

    let mut outputs = Vec::new();
    for name in ["a.jsonl", "b.jsonl"] {
        let out_path = dir.path().join(name);
        let out = run(&[
            "generate",
            "--dict",
            dict.to_str().unwrap(),
            "--pairs",
            assets.join("pairs.tsv").to_str().unwrap(),
            "--pos-lexicon",
            assets.join("pos_lexicon.tsv").to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
        outputs.push(fs::read(&out_path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(!outputs[0].is_empty());
}

const PIPELINE_ARTIFACTS: [&str; 12] = [
    "align_table.tsv",
    "mapping.bin",
    "dict.tsv",
    "generated.jsonl",
    "score_report.tsv",
    "table2.tsv",
    "table4.tsv",
    "table5.tsv",
    "disagreement_hist.tsv",
    "dcm_ra.tsv",
    "report.json",
    "manifest.json",
];

#[test]
fn pipeline_writes_every_artifact_and_reruns_identically() {
    let conf = assets().join("pipeline.conf");
    let dir = tempfile::tempdir().unwrap();
    let (first, second) = (dir.path().join("run1"), dir.path().join("run2"));
    for out_dir in [&first, &second] {
        let out = run(&[
            "--config",
            conf.to_str().unwrap(),
            "pipeline",
            "run",
            "--out-dir",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
        for name in PIPELINE_ARTIFACTS {
            assert!(out_dir.join(name).exists(), "missing artifact {name}");
        }
    }
    for name in PIPELINE_ARTIFACTS {
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(second.join(name)).unwrap();
        assert_eq!(a, b, "artifact {name} differs between identical reruns");
    }

    // thread count must not change any output
    let throttled = dir.path().join("run3");
    let out = run(&[
        "--threads",
        "1",
        "--config",
        conf.to_str().unwrap(),
        "pipeline",
        "run",
        "--out-dir",
        throttled.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    for name in PIPELINE_ARTIFACTS {
        let a = fs::read(first.join(name)).unwrap();
        let b = fs::read(throttled.join(name)).unwrap();
        assert_eq!(a, b, "artifact {name} depends on thread count");
    }
}

#[test]
fn pipeline_manifest_covers_inputs_and_outputs() {
    let conf = assets().join("pipeline.conf");
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "pipeline",
        "run",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["tool"], "codemix");
    for key in ["pairs", "seed_dict", "refs", "ratings"] {
        let hash = manifest["inputs"][key].as_str().unwrap();
        assert_eq!(hash.len(), 64, "input {key} hash");
    }
    // every artifact except the manifest itself is hashed
    let outputs = manifest["outputs"].as_object().unwrap();
    for name in PIPELINE_ARTIFACTS.iter().filter(|n| **n != "manifest.json") {
        assert_eq!(outputs[*name].as_str().unwrap().len(), 64, "output {name} hash");
    }
    assert!(manifest["config"]["iterations"].is_string());
    // no timestamps or host data anywhere
    let text = manifest.to_string().to_lowercase();
    for word in ["time", "date", "host"] {
        assert!(!text.contains(word), "manifest leaks {word}");
    }
}

#[test]
fn score_and_evaluate_report_contracts() {
    let conf = assets().join("pipeline.conf");
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "--config",
        conf.to_str().unwrap(),
        "pipeline",
        "run",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    let report = fs::read_to_string(dir.path().join("score_report.tsv")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], "sentence_id\tbleu\tnist\twer\tter\tembed");
    assert_eq!(lines.len(), 1 + 40 + 1, "header, 40 sentences, corpus row");
    assert!(lines.last().unwrap().starts_with("#CORPUS\t"));
    assert!(lines[1].starts_with("p01#WAC\t"));

    let table4 = fs::read_to_string(dir.path().join("table4.tsv")).unwrap();
    assert!(table4.starts_with("method\trating\tn\t"));
    // ten rating rows for each of WAC and PAC
    assert_eq!(table4.lines().count(), 1 + 20);

    let table5 = fs::read_to_string(dir.path().join("table5.tsv")).unwrap();
    assert_eq!(table5.lines().count(), 1 + 6, "three buckets for each method");

    let table2 = fs::read_to_string(dir.path().join("table2.tsv")).unwrap();
    assert!(table2.starts_with("outcome\tcount\n"));
}

#[test]
fn keyphrase_tsv_contract() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("doc.txt");
    fs::write(&doc, "the red car is new\nthe red car runs fast\n").unwrap();
    let out_path = dir.path().join("kp.tsv");
    let out = run(&[
        "keyphrase",
        "--in",
        doc.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = fs::read_to_string(&out_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("phrase\tscore\tstart\tend"));
    let first = lines.next().expect("at least one phrase");
    let fields: Vec<&str> = first.split('\t').collect();
    assert_eq!(fields.len(), 4);
    fields[1].parse::<f64>().expect("score is numeric");
    fields[2].parse::<usize>().expect("start is an index");
}
