use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use citemap_core::export::{
    self, collision_csv, distribution_csv, environment_csv, factor_csv, matrix_csv,
    read_matrix_csv, year_table_csv,
};
use citemap_core::matrix::{
    build_quasi_jcr_with, cited_environment, citing_environment, fuzzy_gain, slice_by_year,
    sparsity_report, topic_environment, BuildOptions, CitationEnvironment, CitationMatrix,
    Direction, EnvError, MatrixSummary,
};
use citemap_core::pipeline::{animation_frames, build_map, MapOptions};
use citemap_core::registry::load_source_list;
use citemap_core::stats::{
    doc_type_distribution, format_tenths, group_thousands, language_distribution,
    never_cited_share, percent_tenths, spearman_counts, year_table, RowPolicy,
};
use citemap_core::wos::{parse_export, Database, DocumentRecord, ParseError, ParseOptions};

use crate::config::{effective_params, fuzzy, RunConfig, RUN_CONFIG_FILE};
use crate::{
    AnimateArgs, Command, DirectionArg, EnvArgs, JcrArgs, MapArgs, OriginArg, ParseArgs, StatsArgs,
};

#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }
}

fn io_err(path: &Path, e: impl Display) -> CliError {
    CliError::new("io", format!("{}: {e}", path.display()))
}

impl From<export::ExportError> for CliError {
    fn from(e: export::ExportError) -> Self {
        CliError::new("export", e.to_string())
    }
}

impl From<EnvError> for CliError {
    fn from(e: EnvError) -> Self {
        match e {
            EnvError::UnknownSeed { seed, nearest } => CliError::new(
                "seed_not_found",
                format!("seed '{seed}' not found; nearest: {}", nearest.join(", ")),
            ),
            other => CliError::new("environment", other.to_string()),
        }
    }
}

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Parse(a) => parse(a),
        Command::Jcr(a) => jcr(a),
        Command::Env(a) => env(a),
        Command::Map(a) => map(a),
        Command::Animate(a) => animate(a),
        Command::Stats(a) => stats(a),
    }
}

struct Output {
    dir: PathBuf,
    written: Vec<String>,
}

impl Output {
    fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Output {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn text(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        export::write_text(self.dir.join(name), text)?;
        self.written.push(name.to_string());
        Ok(())
    }

    fn json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
        self.text(name, &text)
    }

    fn finish(mut self, mut cfg: RunConfig) -> Result<(), CliError> {
        self.written.push(RUN_CONFIG_FILE.into());
        cfg.outputs = std::mem::take(&mut self.written);
        self.json(RUN_CONFIG_FILE, &cfg)
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::new("input", format!("{}: {e}", path.display())))
}

fn read_records(path: &Path) -> Result<Vec<DocumentRecord>, CliError> {
    read_json(path)
}

fn direction(d: DirectionArg) -> Direction {
    match d {
        DirectionArg::Cited => Direction::Cited,
        DirectionArg::Citing => Direction::Citing,
    }
}

fn parse(a: ParseArgs) -> Result<(), CliError> {
    let opts = ParseOptions {
        origin: a.origin.map(|o| match o {
            OriginArg::Ahci => Database::Ahci,
            OriginArg::Sci => Database::Sci,
            OriginArg::Ssci => Database::Ssci,
        }),
        ..Default::default()
    };
    let mut records = Vec::new();
    let mut reports = BTreeMap::new();
    let mut seen = std::collections::HashSet::new();
    let mut duplicates = 0usize;
    for path in &a.inputs {
        let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
        let parsed = match parse_export(std::io::BufReader::new(file), &opts) {
            Ok(p) => p,
            Err(ParseError::Truncated { partial }) if a.allow_truncated => *partial,
            Err(ParseError::Truncated { .. }) => {
                return Err(CliError::new(
                    "truncated",
                    format!(
                        "{}: export ends without EF (use --allow-truncated to keep its records)",
                        path.display()
                    ),
                ))
            }
            Err(e) => return Err(io_err(path, e)),
        };
        for r in parsed.records {
            if seen.insert(r.accession_id.clone()) {
                records.push(r);
            } else {
                duplicates += 1;
            }
        }
        reports.insert(path.display().to_string(), parsed.report);
    }
    let mut out = Output::create(&a.out)?;
    out.json("records.json", &records)?;
    out.json(
        "parse_report.json",
        &serde_json::json!({ "files": reports, "records": records.len(), "cross_file_duplicates": duplicates }),
    )?;
    let mut cfg = RunConfig::new("parse");
    cfg.inputs = a.inputs.clone();
    cfg.option("origin", a.origin);
    cfg.option("allow_truncated", a.allow_truncated);
    out.finish(cfg)
}

fn jcr(a: JcrArgs) -> Result<(), CliError> {
    let params = effective_params(&a.params)?;
    let fuzzy = fuzzy(&a.params);
    let mut records = read_records(&a.records)?;
    if let Some(y) = a.year {
        records = slice_by_year(&records, y);
    }
    let (list, load) = load_source_list(&a.sources, "sources")
        .map_err(|e| CliError::new("sources", e.to_string()))?;
    let opts = BuildOptions {
        fuzzy,
        citable_only: params.citable_only,
        ..Default::default()
    };
    let matrix = build_quasi_jcr_with(&records, &list, &opts);
    let mut out = Output::create(&a.out)?;
    out.text("jcr.csv", &matrix_csv(&matrix))?;
    out.json("jcr.summary.json", &matrix.summary())?;
    out.json("fuzzy_gain.json", &fuzzy_gain(&records, &list, &opts))?;
    out.json(
        "sparsity.json",
        &sparsity_report(&matrix, a.sparsity_cutoff),
    )?;
    out.json("source_list.json", &load)?;
    out.text("collisions.csv", &collision_csv(&list.collisions()))?;
    let mut cfg = RunConfig::new("jcr");
    cfg.inputs = vec![a.records.clone()];
    cfg.sources = vec![a.sources.clone()];
    cfg.params = Some(params);
    cfg.fuzzy = Some(fuzzy);
    cfg.year_range = a.year.map(|y| (y, y));
    cfg.option("sparsity_cutoff", a.sparsity_cutoff);
    out.finish(cfg)
}

fn summary_path(matrix: &Path) -> PathBuf {
    let stem = matrix
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    matrix.with_file_name(format!("{stem}.summary.json"))
}

fn load_matrix(path: &Path) -> Result<CitationMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut m = read_matrix_csv(&text, "")?;
    let sp = summary_path(path);
    if sp.exists() {
        let s: MatrixSummary = read_json(&sp)?;
        m.apply_summary(&s);
    }
    Ok(m)
}

fn env(a: EnvArgs) -> Result<(), CliError> {
    let params = effective_params(&a.params)?;
    let dir = direction(a.direction);
    let mut cfg = RunConfig::new("env");
    let e: CitationEnvironment = match (&a.matrix, &a.seed, &a.records, &a.topic) {
        (Some(m), Some(seed), _, _) => {
            let matrix = load_matrix(m)?;
            cfg.inputs = vec![m.clone()];
            cfg.seed = Some(seed.clone());
            match dir {
                Direction::Cited => cited_environment(&matrix, seed, &params)?,
                Direction::Citing => citing_environment(&matrix, seed, &params)?,
            }
        }
        (_, _, Some(r), Some(topic)) => {
            let docs = read_records(r)?;
            cfg.inputs = vec![r.clone()];
            let citing = match &a.citing_records {
                Some(c) => {
                    cfg.inputs.push(c.clone());
                    read_records(c)?
                }
                None if dir == Direction::Cited => {
                    return Err(CliError::new(
                        "usage",
                        "a cited topic environment needs --citing-records",
                    ))
                }
                None => Vec::new(),
            };
            cfg.topic = Some(topic.clone());
            topic_environment(topic, &docs, &citing, dir, &params)?
        }
        _ => {
            return Err(CliError::new(
                "usage",
                "give --matrix with --seed, or --records with --topic",
            ))
        }
    };
    let mut out = Output::create(&a.out)?;
    out.text("environment.csv", &environment_csv(&e))?;
    out.json("environment.json", &e)?;
    cfg.params = Some(params);
    cfg.direction = Some(a.direction);
    out.finish(cfg)
}

fn map(a: MapArgs) -> Result<(), CliError> {
    let params = effective_params(&a.params)?;
    let e: CitationEnvironment = read_json(&a.env)?;
    if e.is_empty() {
        return Err(CliError::new("environment", "environment has no journals"));
    }
    let matrix = match &a.matrix {
        Some(m) => Some(load_matrix(m)?),
        None => None,
    };
    let opts = MapOptions {
        largest_component: a.largest_component,
        rotate: !a.no_rotate,
        exclude_seed: a.exclude_seed,
    };
    let m = build_map(&e, matrix.as_ref(), &params, opts)
        .map_err(|e| CliError::new("factors", e.to_string()))?;
    let mut out = Output::create(&a.out)?;
    out.text("map.net", &export::render_pajek(&m.network, &m.layout)?)?;
    out.json("network_stats.json", &m.stats)?;
    if let Some(f) = &m.factors {
        out.text("factors.csv", &factor_csv(f))?;
    }
    let mut cfg = RunConfig::new("map");
    cfg.inputs = vec![a.env.clone()];
    cfg.inputs.extend(a.matrix.clone());
    cfg.params = Some(params);
    cfg.seed = Some(e.seed.clone());
    cfg.option("largest_component", a.largest_component);
    cfg.option("rotate", !a.no_rotate);
    cfg.option("exclude_seed", a.exclude_seed);
    out.finish(cfg)
}

fn animate(a: AnimateArgs) -> Result<(), CliError> {
    if a.from > a.to {
        return Err(CliError::new(
            "usage",
            format!("--from {} is after --to {}", a.from, a.to),
        ));
    }
    let params = effective_params(&a.params)?;
    let fuzzy = fuzzy(&a.params);
    let records = read_records(&a.records)?;
    let (list, _) = load_source_list(&a.sources, "sources")
        .map_err(|e| CliError::new("sources", e.to_string()))?;
    let build = BuildOptions {
        fuzzy,
        citable_only: params.citable_only,
        ..Default::default()
    };
    let whole = build_quasi_jcr_with(&records, &list, &build);
    // an unknown seed fails here rather than yielding only empty frames
    match direction(a.direction) {
        Direction::Cited => cited_environment(&whole, &a.seed, &params).map(|_| ())?,
        Direction::Citing => citing_environment(&whole, &a.seed, &params).map(|_| ())?,
    }
    let frames = animation_frames(
        &records,
        &list,
        &a.seed,
        direction(a.direction),
        a.from..=a.to,
        &build,
        &params,
    );
    let mut out = Output::create(&a.out)?;
    let years: Vec<i32> = frames.iter().map(|f| f.year).collect();
    let nets: Vec<_> = frames.iter().map(|f| f.network.clone()).collect();
    let layouts: Vec<_> = frames.iter().map(|f| f.layout.clone()).collect();
    let manifest = export::write_frame_series(&years, &nets, &layouts, &out.dir)?;
    out.written
        .extend(manifest.frames.iter().map(|f| f.file.clone()));
    out.written.push("manifest.json".into());
    let notes: BTreeMap<i32, &str> = frames
        .iter()
        .filter_map(|f| f.note.as_deref().map(|n| (f.year, n)))
        .collect();
    out.json("frame_notes.json", &notes)?;
    let mut cfg = RunConfig::new("animate");
    cfg.inputs = vec![a.records.clone()];
    cfg.sources = vec![a.sources.clone()];
    cfg.params = Some(params);
    cfg.fuzzy = Some(fuzzy);
    cfg.year_range = Some((a.from, a.to));
    cfg.seed = Some(a.seed.clone());
    cfg.direction = Some(a.direction);
    out.finish(cfg)
}

fn read_counts(path: &Path) -> Result<Vec<(String, u64)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    export::read_label_counts(&text)
        .map_err(|e| CliError::new("input", format!("{}: {e}", path.display())))
}

fn stats(a: StatsArgs) -> Result<(), CliError> {
    let records = read_records(&a.records)?;
    let citing = match &a.citing_records {
        Some(p) => read_records(p)?,
        None => Vec::new(),
    };
    let types = doc_type_distribution(&records);
    let langs = language_distribution(&records);
    let years = year_table(&records, &citing);
    let mut report = String::new();
    report.push_str(&types.render("Document types"));
    report.push('\n');
    report.push_str(&langs.render("Languages"));
    report.push('\n');
    report.push_str(&years.render());

    let mut extra = serde_json::Map::new();
    if let Some(v) = &a.never_cited {
        let (items, cited) = (v[0], v[1]);
        let share =
            never_cited_share(items, cited).map_err(|e| CliError::new("stats", e.to_string()))?;
        let pct = format_tenths(percent_tenths(items - cited, items));
        report.push_str(&format!(
            "\nNever cited: {} of {} ({pct}%)\n",
            group_thousands(items - cited),
            group_thousands(items)
        ));
        extra.insert(
            "never_cited".into(),
            serde_json::json!({ "items": items, "cited_items": cited, "share": share }),
        );
    }
    if let Some(paths) = &a.spearman {
        let x = read_counts(&paths[0])?;
        let y = read_counts(&paths[1])?;
        let mut labels: Vec<String> = x.iter().map(|r| r.0.clone()).collect();
        for (l, _) in &y {
            if !labels.contains(l) {
                labels.push(l.clone());
            }
        }
        let lookup =
            |rows: &[(String, u64)], l: &str| rows.iter().find(|r| r.0 == l).map_or(0, |r| r.1);
        let xs: Vec<u64> = labels.iter().map(|l| lookup(&x, l)).collect();
        let ys: Vec<u64> = labels.iter().map(|l| lookup(&y, l)).collect();
        let mut results = serde_json::Map::new();
        report.push_str("\nSpearman rank correlation\n");
        for (name, policy) in [
            ("all_rows", RowPolicy::AllRows),
            ("shared_nonzero", RowPolicy::SharedNonzero),
        ] {
            match spearman_counts(&xs, &ys, policy) {
                Ok(s) => {
                    report.push_str(&format!(
                        "{name:<15} n={:<3} rho={:.4} p={:.3e}\n",
                        s.n, s.rho, s.p_value
                    ));
                    results.insert(name.into(), serde_json::to_value(s).expect("serializable"));
                }
                Err(e) => {
                    report.push_str(&format!("{name:<15} undefined: {e}\n"));
                    results.insert(name.into(), serde_json::json!({ "error": e.to_string() }));
                }
            }
        }
        extra.insert("spearman".into(), results.into());
    }

    let mut out = Output::create(&a.out)?;
    out.text("stats.txt", &report)?;
    out.text("doc_types.csv", &distribution_csv(&types))?;
    out.text("languages.csv", &distribution_csv(&langs))?;
    out.text("year_table.csv", &year_table_csv(&years))?;
    out.json(
        "stats.json",
        &serde_json::json!({ "doc_types": types, "languages": langs, "years": years, "extra": extra }),
    )?;
    let mut cfg = RunConfig::new("stats");
    cfg.inputs = vec![a.records.clone()];
    cfg.inputs.extend(a.citing_records.clone());
    if let Some(p) = &a.spearman {
        cfg.inputs.extend(p.iter().cloned());
    }
    cfg.option("never_cited", &a.never_cited);
    out.finish(cfg)
}
