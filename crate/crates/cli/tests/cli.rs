mod common;

use common::*;

#[test]
fn validate_exit_codes() {
    let ok = midas(&["validate", "--corpus", p(&data("two.jsonl"))]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok), "researchers=2 publications=4\n");

    let bad = midas(&["validate", "--corpus", p(&data("broken.jsonl"))]);
    assert_eq!(code(&bad), 1);
    assert!(stderr(&bad).contains("line:2"), "{}", stderr(&bad));
    assert!(stderr(&bad).contains("field:citation_series"));

    let missing = midas(&["validate", "--corpus", "/nonexistent/corpus.jsonl"]);
    assert_eq!(code(&missing), 2);

    assert_eq!(code(&midas(&["validate"])), 2);
    assert_eq!(code(&midas(&["frobnicate"])), 2);
    assert_eq!(code(&midas(&["validate", "--format", "xml"])), 2);
}

#[test]
fn compute_two_researchers_by_hand() {
    let out = midas(&["compute", "--corpus", p(&data("two.jsonl")), "--no-filter"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // r1: A (c_3 = 16) and B (c_3 = 15) are old enough, C is not;
    // counts at 2015 are 31, 22, 7. r2: D has c_3 = 1 and 2 citations.
    assert_eq!(
        stdout(&out),
        "researcher_id,as_of_year,amt,h_index,i10_index,citation_count,academic_age,eligible_pub_count\n\
         r1,2015,1.0000,3,2,60,7,2\n\
         r2,2015,0.0000,1,0,2,4,1\n"
    );

    let out = midas(&[
        "compute",
        "--corpus",
        p(&data("two.jsonl")),
        "--no-filter",
        "--as-of",
        "2013",
    ]);
    let rows: Vec<String> = stdout(&out).lines().skip(1).map(String::from).collect();
    assert_eq!(rows, ["r1,2013,1.0000,2,2,40,5,2", "r2,2013,0.0000,1,0,1,2,0"]);
}

#[test]
fn compute_empty_cohort_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let out = midas(&["compute", "--corpus", p(&data("two.jsonl")), "--out", p(dir.path())]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "reports=0\n");
    let csv = std::fs::read_to_string(dir.path().join("indicators.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("indicators.json")).unwrap()).unwrap();
    assert_eq!(json, serde_json::json!([]));
}

#[test]
fn compute_reads_csv_corpora() {
    let dir = tempfile::tempdir().unwrap();
    let corpus =
        midas_core::corpus::load_corpus(data("two.jsonl"), midas_core::corpus::CorpusFormat::Jsonl, None).unwrap();
    let csv_path = dir.path().join("two.csv");
    midas_core::corpus::save_corpus(&corpus, &csv_path, midas_core::corpus::CorpusFormat::Csv).unwrap();
    let a = midas(&["compute", "--corpus", p(&data("two.jsonl")), "--no-filter"]);
    let b = midas(&["compute", "--corpus", p(&csv_path), "--no-filter"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn sweep_on_analytic_plane() {
    let dir = tempfile::tempdir().unwrap();
    let out = midas(&[
        "sweep",
        "--corpus",
        p(&data("plane.jsonl")),
        "--no-filter",
        "--grid-y",
        "10..40:5",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let first = stdout(&out).lines().next().unwrap().to_string();
    assert_eq!(first, "C = 1.0000 + 0.0200*x - 0.0200*y (R²=1.0000)");
    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fit.json")).unwrap()).unwrap();
    let keys: Vec<&String> = fit.as_object().unwrap().keys().collect();
    assert_eq!(keys.len(), 4);
    for k in ["intercept", "coef_x", "coef_y", "r_squared"] {
        assert!(fit.get(k).is_some(), "{k}");
    }
    assert!(dir.path().join("sweep.csv").exists());
}

#[test]
fn sweep_synthetic_heatmap_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let sim = midas(&[
        "simulate",
        "--seed",
        "7",
        "--researchers",
        "300",
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&sim), 0);
    let out_dir = dir.path().join("sweep");
    let out = midas(&[
        "sweep",
        "--corpus",
        p(&dir.path().join("corpus.jsonl")),
        "--out",
        p(&out_dir),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(out_dir.join("sweep.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,mean_amt"));
    let cells: Vec<(u32, u32, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(cells.len(), 6 * 8);
    let at = |i: usize, j: usize| cells[i * 8 + j].2;
    for i in 0..6 {
        for j in 0..8 {
            if i > 0 {
                assert!(at(i - 1, j) <= at(i, j));
            }
            if j > 0 {
                assert!(at(i, j - 1) >= at(i, j));
            }
        }
    }
    let normality: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("normality.json")).unwrap()).unwrap();
    assert_eq!(normality["result"]["method"], "shapiro_wilk");
}

#[test]
fn sweep_rejects_bad_grid() {
    let out = midas(&["sweep", "--corpus", p(&data("plane.jsonl")), "--grid-x", "6..1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn compare_identical_twins() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, treated) = duplicate_fixture(dir.path(), 12, 5);
    let out_dir = dir.path().join("out");
    let out = midas(&[
        "compare",
        "--corpus",
        p(&corpus),
        "--treated",
        p(&treated),
        "--no-filter",
        "--out",
        p(&out_dir),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(out_dir.join("comparison.csv")).unwrap();
    let diffs: Vec<&str> = csv
        .lines()
        .filter(|l| l.contains(",relative_difference_percent,"))
        .collect();
    assert_eq!(diffs.len(), 2);
    for line in diffs {
        assert!(line.ends_with(",0.0000,0.0000,0.0000,0.0000"), "{line}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("comparison.json")).unwrap()).unwrap();
    for pair in report["pairs"].as_array().unwrap() {
        assert_eq!(pair["distance"], 0.0);
        let t = pair["treated_id"].as_str().unwrap();
        assert_eq!(pair["control_id"].as_str().unwrap(), format!("{t}-twin"));
    }
    assert_eq!(report["balance"]["academic_age"]["status"], "perfect");
    assert_eq!(report["balance"]["academic_age"]["result"]["p_value"], 1.0);
    let dist = std::fs::read_to_string(out_dir.join("distribution.csv")).unwrap();
    assert_eq!(dist.lines().count(), 1 + 12 * 2 * 2);
}

#[test]
fn compare_error_paths() {
    let dir = tempfile::tempdir().unwrap();
    let (corpus, _) = duplicate_fixture(dir.path(), 6, 2);
    let list = dir.path().join("ghost.txt");
    std::fs::write(&list, "# header\nR00001\nghost-42\n").unwrap();
    let out = midas(&[
        "compare",
        "--corpus",
        p(&corpus),
        "--treated",
        p(&list),
        "--out",
        p(dir.path()),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("ghost-42"), "{}", stderr(&out));

    // seven treated, but only five twins remain in the pool
    let greedy = dir.path().join("greedy.txt");
    std::fs::write(&greedy, "R00001\nR00002\nR00003\nR00004\nR00005\nR00006\nR00001-twin\n").unwrap();
    let out = midas(&[
        "compare",
        "--corpus",
        p(&corpus),
        "--treated",
        p(&greedy),
        "--no-filter",
    ]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "\n# nothing\n").unwrap();
    assert_eq!(
        code(&midas(&["compare", "--corpus", p(&corpus), "--treated", p(&empty)])),
        1
    );
    assert_eq!(code(&midas(&["compare", "--corpus", p(&corpus)])), 2);
}

#[test]
fn simulate_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = midas(&[
            "simulate",
            "--seed",
            "42",
            "--researchers",
            "80",
            "--awardees",
            "8",
            "--out",
            p(d),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(snapshot(&a), snapshot(&b));
    let ids = std::fs::read_to_string(a.join("awardees.txt")).unwrap();
    assert_eq!(ids.lines().count(), 8);
    let v = midas(&["validate", "--corpus", p(&a.join("corpus.jsonl"))]);
    assert_eq!(code(&v), 0);
    assert!(stdout(&v).starts_with("researchers=80 "));

    let other = dir.path().join("c");
    midas(&["simulate", "--seed", "43", "--researchers", "80", "--out", p(&other)]);
    assert_ne!(
        std::fs::read(a.join("corpus.jsonl")).unwrap(),
        std::fs::read(other.join("corpus.jsonl")).unwrap()
    );

    let zero = midas(&["simulate", "--researchers", "0", "--out", p(dir.path())]);
    assert_eq!(code(&zero), 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("two.jsonl"), dir.path().join("two.jsonl")).unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "corpus = two.jsonl\nno_filter = true\nx = 3\ny = 16\n").unwrap();
    let out = midas(&["compute", "--config", p(&conf)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    // y = 16: only A reaches it
    assert!(stdout(&out).contains("r1,2015,0.5000,"));
    let out = midas(&["compute", "--config", p(&conf), "--y", "15"]);
    assert!(stdout(&out).contains("r1,2015,1.0000,"));

    std::fs::write(&conf, "corpus = two.jsonl\nbogus = 1\n").unwrap();
    assert_eq!(code(&midas(&["compute", "--config", p(&conf)])), 2);
}

#[test]
fn thread_setting_is_validated() {
    let bad = midas_with_threads(&["validate", "--corpus", p(&data("two.jsonl"))], Some("many"));
    assert_eq!(code(&bad), 2);
    let ok = midas_with_threads(&["validate", "--corpus", p(&data("two.jsonl"))], Some("3"));
    assert_eq!(code(&ok), 0);
}

#[test]
fn input_corpus_is_not_modified() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("two.jsonl");
    std::fs::copy(data("two.jsonl"), &corpus).unwrap();
    let before = std::fs::read(&corpus).unwrap();
    for cmd in ["validate", "compute", "sweep"] {
        midas(&[cmd, "--corpus", p(&corpus), "--no-filter", "--out", p(dir.path())]);
    }
    assert_eq!(std::fs::read(&corpus).unwrap(), before);
}

#[test]
fn in_process_entry_point() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = midas_cli::run(
        ["midas", "validate", "--corpus", p(&data("two.jsonl"))],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "researchers=2 publications=4\n");
    let mut out = Vec::new();
    assert_eq!(midas_cli::run(["midas", "--help"], &mut out, &mut err), 0);
    assert!(String::from_utf8(out).unwrap().contains("simulate"));
}
