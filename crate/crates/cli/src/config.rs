use serde::Serialize;
use std::path::{Path, PathBuf};

use citemap_core::params::AnalysisParams;

use crate::commands::CliError;
use crate::ParamArgs;

pub const CONFIG_ENV: &str = "CITEMAP_CONFIG";
pub const RUN_CONFIG_FILE: &str = "run_config.json";

/// Defaults, then the `CITEMAP_CONFIG` file, then the preset, then flags.
pub fn effective_params(args: &ParamArgs) -> Result<AnalysisParams, CliError> {
    let mut p = match std::env::var_os(CONFIG_ENV) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::new("config", format!("{}: {e}", Path::new(&path).display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::new("config", format!("{}: {e}", Path::new(&path).display()))
            })?
        }
        None => AnalysisParams::default(),
    };
    if args.humanities {
        p.contribution_fraction = AnalysisParams::humanities().contribution_fraction;
    }
    if let Some(c) = args.contribution {
        p.contribution_fraction = c;
    }
    if let Some(c) = args.cosine_threshold {
        p.cosine_cutoff = c;
    }
    if let Some(k) = args.factors {
        p.factor_count = Some(k);
    }
    if let Some(s) = args.seed_rng {
        p.rng_seed = s;
    }
    if args.citable_only {
        p.citable_only = true;
    }
    if let Some(w) = args.anchor_weight {
        p.anchor_weight = w;
    }
    if let Some(s) = args.size_scale {
        p.size_scale = s;
    }
    if args.include_diagonal {
        p.include_diagonal_in_similarity = true;
    }
    p.validate()
        .map_err(|e| CliError::new("params", e.to_string()))?;
    Ok(p)
}

pub fn fuzzy(args: &ParamArgs) -> bool {
    !args.no_fuzzy || args.fuzzy
}

#[derive(Debug, Serialize, Default)]
pub struct RunConfig {
    pub subcommand: String,
    pub version: String,
    pub inputs: Vec<PathBuf>,
    pub sources: Vec<PathBuf>,
    pub params: Option<AnalysisParams>,
    pub fuzzy: Option<bool>,
    pub outputs: Vec<String>,
    pub year_range: Option<(i32, i32)>,
    pub seed: Option<String>,
    pub topic: Option<String>,
    pub direction: Option<crate::DirectionArg>,
    pub options: serde_json::Map<String, serde_json::Value>,
}

impl RunConfig {
    pub fn new(subcommand: &str) -> Self {
        RunConfig {
            subcommand: subcommand.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            ..Default::default()
        }
    }

    pub fn option(&mut self, key: &str, value: impl Serialize) {
        self.options.insert(
            key.into(),
            serde_json::to_value(value).expect("serializable option"),
        );
    }
}
