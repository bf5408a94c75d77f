#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use midas_core::corpus::{generate_synthetic, save_corpus, Corpus, CorpusFormat, Researcher, SyntheticConfig};

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn core_data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

/// Runs the `midas` binary with an explicit thread setting.
pub fn midas_with_threads(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_midas"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("MIDAS_THREADS", t),
        None => cmd.env_remove("MIDAS_THREADS"),
    };
    cmd.output().expect("spawn midas")
}

pub fn midas(args: &[&str]) -> Output {
    midas_with_threads(args, None)
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}

/// Award winners plus an exact non-award clone of each, written as JSONL.
/// Returns the corpus path and the treated-id file.
pub fn duplicate_fixture(dir: &Path, awardees: usize, seed: u64) -> (PathBuf, PathBuf) {
    let cfg = SyntheticConfig {
        researchers: awardees,
        awardees,
        ..Default::default()
    };
    let base = generate_synthetic(&cfg, seed).unwrap();
    let mut all: Vec<Researcher> = base.researchers().to_vec();
    for r in base.researchers() {
        let mut c = r.clone();
        c.researcher_id = format!("{}-twin", r.researcher_id);
        c.award_years.clear();
        for p in &mut c.publications {
            p.pub_id = format!("{}-twin", p.pub_id);
        }
        all.push(c);
    }
    let corpus = Corpus::new(all, base.reference_year()).unwrap();
    let path = dir.join("twins.jsonl");
    save_corpus(&corpus, &path, CorpusFormat::Jsonl).unwrap();
    let treated = dir.join("treated.txt");
    let ids: String = base
        .researchers()
        .iter()
        .map(|r| format!("{}\n", r.researcher_id))
        .collect();
    std::fs::write(&treated, ids).unwrap();
    (path, treated)
}

/// Every file under `dir` with its bytes, sorted by relative path.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}
