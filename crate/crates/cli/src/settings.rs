//! Effective configuration: flags, then `ZEQR_*` variables, then the
//! config file, then built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use zeqr::{Config, Mode, PostmodifierRule};

use crate::args::Overrides;
use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub idf_threshold: Option<f64>,
    pub premodifier_idf_threshold: Option<f64>,
    pub bm25_k1: Option<f64>,
    pub bm25_b: Option<f64>,
    pub reader_max_tokens: Option<usize>,
    pub min_answer_score: Option<f64>,
    pub mode: Option<Mode>,
    pub map_relevance_cutoff: Option<u32>,
    pub postmodifier_rule: Option<PostmodifierRule>,

    pub collection: Option<PathBuf>,
    pub topics: Option<PathBuf>,
    pub qrels: Option<PathBuf>,
    pub idf_cache: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub reader: Option<String>,
    pub model: Option<String>,
    pub retriever: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config file {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }
}

pub struct Settings {
    pub config: Config,
    pub file: FileConfig,
}

impl Settings {
    pub fn resolve(config_path: Option<&Path>, flags: &Overrides) -> Result<Self, CliError> {
        let file = match config_path {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let d = Config::default();
        let config = Config {
            idf_threshold: flags.idf_threshold.or(file.idf_threshold).unwrap_or(d.idf_threshold),
            premodifier_idf_threshold: flags
                .premodifier_idf_threshold
                .or(file.premodifier_idf_threshold)
                .unwrap_or(d.premodifier_idf_threshold),
            bm25_k1: flags.bm25_k1.or(file.bm25_k1).unwrap_or(d.bm25_k1),
            bm25_b: flags.bm25_b.or(file.bm25_b).unwrap_or(d.bm25_b),
            reader_max_tokens: flags.reader_max_tokens.or(file.reader_max_tokens).unwrap_or(d.reader_max_tokens),
            min_answer_score: flags.min_answer_score.or(file.min_answer_score).unwrap_or(d.min_answer_score),
            mode: flags.mode.or(file.mode).unwrap_or(d.mode),
            map_relevance_cutoff: flags
                .relevance_cutoff
                .or(file.map_relevance_cutoff)
                .unwrap_or(d.map_relevance_cutoff),
            postmodifier_rule: flags.postmodifier.or(file.postmodifier_rule).unwrap_or(d.postmodifier_rule),
        };
        config.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(Settings { config, file })
    }

    /// Logs the effective configuration to stderr as TOML.
    pub fn echo(&self) {
        let text = toml::to_string(&self.config).expect("config serializes");
        eprintln!("# effective config");
        eprint!("{text}");
    }
}

/// The flag value, else the config file value, else a usage error naming the flag.
pub fn required<T: Clone>(flag: &Option<T>, file: &Option<T>, name: &str) -> Result<T, CliError> {
    flag.clone()
        .or_else(|| file.clone())
        .ok_or_else(|| CliError::usage(format!("missing --{name} (or `{}` in the config file)", name.replace('-', "_"))))
}
