#![allow(dead_code)]

use citemap_core::wos::{parse_cited_reference, write_records, DocType, DocumentRecord};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

/// Listed abbreviation and the variant sometimes written in references.
pub const JOURNALS: [(&str, &str); 24] = [
    ("LEONARDO", "LEONARDO"),
    ("ART J", "ART JOURNAL"),
    ("BURLINGTON MAG", "BURLINGTON MAGAZINE"),
    ("OCTOBER", "OCTOBER"),
    ("ART BULL", "ART BULLETIN"),
    ("J AESTHET ART CRIT", "J AESTHETICS ART CRIT"),
    ("BRIT J AESTHET", "BRIT J AESTHETICS"),
    ("MUSIC PERCEPT", "MUSIC PERCEPTION"),
    ("COMPUT MUSIC J", "COMPUTER MUSIC J"),
    ("PERSPECT NEW MUSIC", "PERSPECTIVES NEW MUSIC"),
    ("J MUSIC THEORY", "J MUSIC THEORY"),
    ("MUSIC ANAL", "MUSIC ANALYSIS"),
    ("ISIS", "ISIS"),
    ("HIST SCI", "HISTORY SCI"),
    ("TECHNOL CULT", "TECHNOLOGY CULT"),
    ("SCI AM", "SCI AMER"),
    ("NATURE", "NATURE"),
    ("SCIENCE", "SCIENCE"),
    ("SCREEN", "SCREEN"),
    ("CINEMA J", "CINEMA JOURNAL"),
    ("FILM QUART", "FILM QUARTERLY"),
    ("POETICS TODAY", "POETICS TODAY"),
    ("CRIT INQUIRY", "CRITICAL INQUIRY"),
    ("NEW LIT HIST", "NEW LITERARY HIST"),
];

/// Small xorshift generator; fixtures must not depend on a crate's RNG stream.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1)
    }
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
    pub fn uniform(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }
    pub fn chance(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

/// Records in four six-journal clusters; every tenth reference to a
/// journal uses its long variant, a few lack a year.
pub fn synthetic_corpus(
    n: usize,
    years: std::ops::RangeInclusive<i32>,
    seed: u64,
) -> Vec<DocumentRecord> {
    let mut rng = Rng::new(seed);
    let span = (years.end() - years.start() + 1) as u64;
    let langs = [
        "English", "English", "English", "English", "French", "German",
    ];
    (0..n)
        .map(|i| {
            let j = rng.below(24) as usize;
            let cluster = j / 6;
            let mut r = DocumentRecord::new(format!("WOS:{:015}", i + 1));
            r.source_abbrev = JOURNALS[j].0.to_string();
            r.source_journal = JOURNALS[j].1.to_string();
            r.title = format!("Synthetic paper {i}");
            r.authors = vec![format!("AUTHOR{}, A", rng.below(500))];
            r.pub_year = Some(years.start() + rng.below(span) as i32);
            r.doc_type = if rng.chance(0.8) {
                DocType::Article
            } else {
                DocType::BookReview
            };
            r.language = langs[rng.below(6) as usize].to_string();
            let k = 4 + rng.below(12);
            r.cited_refs = (0..k)
                .map(|_| {
                    let target = if rng.chance(0.15) {
                        0
                    } else if rng.chance(0.75) {
                        cluster * 6 + rng.below(6) as usize
                    } else {
                        rng.below(24) as usize
                    };
                    let name = if rng.chance(0.1) {
                        JOURNALS[target].1
                    } else {
                        JOURNALS[target].0
                    };
                    let raw = if rng.chance(0.03) {
                        format!("ANON, {name}, V{}", rng.below(40) + 1)
                    } else {
                        format!(
                            "WRITER{} B, {}, {name}, V{}, P{}",
                            rng.below(900),
                            1950 + rng.below(50),
                            rng.below(40) + 1,
                            rng.below(400) + 1
                        )
                    };
                    parse_cited_reference(&raw)
                })
                .collect();
            r.reported_ref_count = Some(r.cited_refs.len() as u32);
            r
        })
        .collect()
}

pub fn write_corpus(dir: &Path, records: &[DocumentRecord]) -> (PathBuf, PathBuf) {
    let export = dir.join("savedrecs.txt");
    std::fs::write(&export, write_records(records)).unwrap();
    let sources = dir.join("sources.txt");
    let list: String = JOURNALS.iter().map(|(a, _)| format!("{a}\n")).collect();
    std::fs::write(&sources, list).unwrap();
    (export, sources)
}

pub fn citemap_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citemap"))
        .args(args)
        .current_dir(dir)
        .env_remove("CITEMAP_CONFIG")
        .output()
        .expect("run citemap")
}

pub fn citemap(args: &[&str]) -> Output {
    citemap_in(&std::env::temp_dir(), args)
}

pub fn ok(out: Output, args: &[&str]) -> Output {
    assert!(
        out.status.success(),
        "citemap {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn citemap_ok(dir: &Path, args: &[&str]) -> Output {
    ok(citemap_in(dir, args), args)
}

/// parse -> jcr -> env -> map inside `dir`, with paths relative to it.
/// Expects `savedrecs.txt` and `sources.txt` in `dir`.
pub fn run_pipeline(dir: &Path, seed: &str, extra_map: &[&str]) {
    citemap_ok(dir, &["parse", "savedrecs.txt", "--out", "parsed"]);
    citemap_ok(
        dir,
        &[
            "jcr",
            "--records",
            "parsed/records.json",
            "--sources",
            "sources.txt",
            "--out",
            "jcr",
        ],
    );
    citemap_ok(
        dir,
        &[
            "env",
            "--matrix",
            "jcr/jcr.csv",
            "--seed",
            seed,
            "--out",
            "env",
        ],
    );
    let mut args = vec![
        "map",
        "--env",
        "env/environment.json",
        "--matrix",
        "jcr/jcr.csv",
        "--out",
        "map",
    ];
    args.extend_from_slice(extra_map);
    citemap_ok(dir, &args);
}

/// Every file under `dir` with its bytes, sorted by relative path.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let e = e.unwrap();
            let path = e.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(dir)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.push((rel, std::fs::read(&path).unwrap()));
            }
        }
    }
    out.sort();
    out
}
