use std::path::{Path, PathBuf};
use std::process::Command;

use rundung::artifact::ModelArtifact;
use rundung::csv_io::{self, ColumnMap};
use rundung::synth::synthetic_corpus;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/synthetic_200.csv")
}

fn rundung(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rundung")).args(args).output().expect("run rundung");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn bundled_corpus_matches_generator() {
    let mut buf = Vec::new();
    csv_io::write_corpus(&mut buf, &synthetic_corpus(200, 42), b';', &ColumnMap::default()).unwrap();
    assert_eq!(buf, std::fs::read(corpus()).unwrap(), "regenerate with `rundung synth --out data/synthetic_200.csv`");
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(rundung(&["--help"]).0, 0);
    assert_eq!(rundung(&["--version"]).0, 0);
    assert_eq!(rundung(&["--no-such-flag"]).0, 1);
    assert_eq!(rundung(&["stats"]).0, 1, "no corpus given");
    let (code, _, err) = rundung(&["stats", s(&corpus()), "--slang", "/nonexistent/slang.tsv"]);
    assert_eq!(code, 1);
    assert!(err.contains("not found"), "{err}");
    assert_eq!(rundung(&["stats", "/nonexistent.csv"]).0, 1);
    assert_eq!(rundung(&["preprocess", "--text", "x", "--skip", "bogus"]).0, 1);
    assert_eq!(rundung(&["--folds", "1", "stats", s(&corpus())]).0, 1);
}

#[test]
fn stats_reports_and_validates() {
    let (code, out, _) = rundung(&["stats", s(&corpus()), "--strict"]);
    assert_eq!(code, 0);
    assert!(out.contains("records: 200"));
    assert!(out.contains("balanced: yes"));
    assert!(out.contains("valid: yes"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(
        &bad,
        "no;username;komentar;label;tanggal;akun_target\n1;a;halo kamu;Bullying;2023-01-01;t\n2;b;halo kamu;Spam;01/02/2023;t\n3;c;;Non-bullying;2023-01-03;t\n",
    )
    .unwrap();
    let (code, out, _) = rundung(&["stats", s(&bad)]);
    assert_eq!(code, 0);
    assert!(out.contains("duplicates: 1 [(1, 2)]"), "{out}");
    assert!(out.contains("unknown labels: 1"), "{out}");
    assert!(out.contains("missing fields: 1 [3]"), "{out}");
    assert!(out.contains("nonstandard dates: 1 [2]"), "{out}");
    assert_eq!(rundung(&["stats", s(&bad), "--strict"]).0, 2);

    let short = dir.path().join("short.csv");
    std::fs::write(&short, "no;username;komentar;label;tanggal;akun_target\n1;a;halo;Bullying;2023-01-01\n").unwrap();
    let (code, _, err) = rundung(&["stats", s(&short)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn preprocess_shows_every_stage() {
    let (code, out, _) = rundung(&["preprocess", "--trace", "--text", "@budi Kamu JELEKKK bgt https://t.co/x"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0].split('\t').count(), 8);
    assert!(lines[1].ends_with("\tjelek"), "{out}");
    let (_, out, _) = rundung(&["preprocess", s(&corpus()), "--limit", "3"]);
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn train_predict_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("lr.model");
    let (code, _, err) = rundung(&["train", s(&corpus()), "--family", "lr", "--param", "l2_lambda=0.001", "--out", s(&model)]);
    assert_eq!(code, 0, "{err}");
    let artifact = ModelArtifact::load(&model).unwrap();
    assert_eq!(artifact.family_tag(), "logistic_regression");
    assert_eq!(ModelArtifact::parse(&artifact.to_text()).unwrap(), artifact);

    let input = dir.path().join("in.txt");
    std::fs::write(&input, "dasar kamu goblok banget\nsemoga sehat selalu kak, keren\n🤮🤮\n").unwrap();
    let (code, out, err) = rundung(&["predict", "--model", s(&model), "--input", s(&input)]);
    assert_eq!(code, 0, "{err}");
    let labels: Vec<&str> = out.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(labels, ["Bullying", "Non-bullying", "Bullying"]);
    assert!(out.lines().nth(2).unwrap().ends_with("\t-"));
    assert!(err.contains("line 3"), "{err}");

    let (code, _, err) = rundung(&["predict", "--model", s(&model), "--input", s(&input), "--skip", "stem"]);
    assert_eq!(code, 1);
    assert!(err.contains("--force"), "{err}");
    let (code, _, err) = rundung(&["predict", "--model", s(&model), "--input", s(&input), "--skip", "stem", "--force"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"), "{err}");

    std::fs::write(&model, std::fs::read_to_string(&model).unwrap().replace("format_version 1", "format_version 9")).unwrap();
    assert_eq!(rundung(&["predict", "--model", s(&model), "--input", s(&input)]).0, 1);
}

#[test]
fn training_is_reproducible_and_evaluate_scores_it() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.model");
    let b = dir.path().join("b.model");
    for m in [&a, &b] {
        let (code, _, err) = rundung(&["-q", "train", s(&corpus()), "--family", "bilstm_attention", "--out", s(m)]);
        assert_eq!(code, 0, "{err}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let json = dir.path().join("m.json");
    let (code, out, err) = rundung(&["evaluate", s(&corpus()), "--model", s(&a), "--json", s(&json)]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("records: 200"), "{out}");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let acc = m["accuracy"].as_f64().unwrap();
    assert!(out.contains(&format!("accuracy: {acc:.4}")), "{out}");
    assert_eq!(m["support"], serde_json::json!([100, 100]));
    assert_eq!(rundung(&["evaluate", s(&corpus()), "--model", s(&a), "--skip", "stem"]).0, 1);
}

#[test]
fn single_candidate_tune_equals_train() {
    let dir = tempfile::tempdir().unwrap();
    let trained = dir.path().join("a.model");
    let tuned = dir.path().join("b.model");
    let report = dir.path().join("grid.json");
    assert_eq!(rundung(&["train", s(&corpus()), "--family", "nb", "--param", "alpha=0.5", "--out", s(&trained)]).0, 0);
    let (code, _, err) = rundung(&[
        "-q",
        "tune",
        s(&corpus()),
        "--family",
        "nb",
        "--grid",
        "alpha=0.5",
        "--report",
        s(&report),
        "--out",
        s(&tuned),
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(std::fs::read(&trained).unwrap(), std::fs::read(&tuned).unwrap());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["per_candidate"].as_array().unwrap().len(), 1);
    assert_eq!(rundung(&["tune", s(&corpus()), "--family", "bilstm", "--out", s(&tuned)]).0, 1);
    assert_eq!(rundung(&["tune", s(&corpus()), "--family", "nb", "--grid", "gamma=1", "--out", s(&tuned)]).0, 1);
}

#[test]
fn training_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let one_class = dir.path().join("one.csv");
    std::fs::write(
        &one_class,
        "no;username;komentar;label;tanggal;akun_target\n1;a;kamu jelek;Bullying;2023-01-01;t\n2;b;dasar bodoh;Bullying;2023-01-02;t\n",
    )
    .unwrap();
    let (code, _, err) = rundung(&["train", s(&one_class), "--family", "nb", "--out", s(&dir.path().join("m"))]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "seed = 7\n[corpus]\npath = {:?}\n[model]\nfamily = \"svm\"\n[model.params]\nreg_lambda = 0.01\n",
            s(&corpus())
        ),
    )
    .unwrap();
    let a = dir.path().join("a.model");
    let b = dir.path().join("b.model");
    assert_eq!(rundung(&["--config", s(&cfg), "train", "--out", s(&a)]).0, 0);
    assert_eq!(rundung(&["--config", s(&cfg), "--seed", "8", "train", "--out", s(&b)]).0, 0);
    let a = ModelArtifact::load(&a).unwrap();
    let b = ModelArtifact::load(&b).unwrap();
    assert_eq!((a.seed, b.seed), (7, 8));
    assert_eq!(a.family_tag(), "linear_svm");

    std::fs::write(&cfg, "seed = 7\n[model]\nfamliy = \"svm\"\n").unwrap();
    let (code, _, err) = rundung(&["--config", s(&cfg), "stats", s(&corpus())]);
    assert_eq!(code, 1);
    assert!(err.contains("famliy"), "{err}");
}

#[test]
fn synth_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(rundung(&["--seed", "3", "synth", "--n", "20", "--out", s(&a)]).0, 0);
    assert_eq!(rundung(&["--seed", "3", "synth", "--n", "20", "--out", s(&b)]).0, 0);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(csv_io::load_corpus(&a, b';', &ColumnMap::default()).unwrap().len(), 20);
}
