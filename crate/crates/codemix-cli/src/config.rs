use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use codemix::corpus::PairFormat;
use codemix::eval::DedupMode;

use crate::error::CliError;

/// `key = value` lines with `#` comments. Values are free text; path
/// values are resolved relative to the config file's directory so a
/// config can travel with its data.
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    dir: PathBuf,
    source: Option<PathBuf>,
}

impl ConfigFile {
    pub fn empty() -> Self {
        ConfigFile { values: BTreeMap::new(), dir: PathBuf::from("."), source: None }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| crate::error::io_err(path, e))?;
        let mut values = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::data(format!(
                    "{}:{}: expected key=value, got {raw:?}",
                    path.display(),
                    idx + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        Ok(ConfigFile { values, dir, source: Some(path.to_path_buf()) })
    }

    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// Path value, resolved against the config file's directory.
    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(|v| self.dir.join(v))
    }

    /// Resolution order: explicit flag, then config key, then default.
    pub fn knob<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(raw) => raw.parse().map_err(|e| {
                CliError::data(format!("config key `{key}`: cannot parse {raw:?}: {e}"))
            }),
            None => Ok(default),
        }
    }

    /// Like `knob` but without a default.
    pub fn opt_knob<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| CliError::data(format!("config key `{key}`: cannot parse {raw:?}: {e}"))),
            None => Ok(None),
        }
    }
}

pub fn parse_dedup(raw: &str) -> Result<DedupMode, CliError> {
    match raw {
        "per-rating" => Ok(DedupMode::PerRating),
        "sentence-mean" => Ok(DedupMode::SentenceMean),
        other => Err(CliError::data(format!(
            "config key `dedup_mode`: expected per-rating or sentence-mean, got {other:?}"
        ))),
    }
}

pub fn dedup_name(mode: DedupMode) -> &'static str {
    match mode {
        DedupMode::PerRating => "per-rating",
        DedupMode::SentenceMean => "sentence-mean",
    }
}

/// Flag-level overrides accepted by `pipeline run`; flags win over the
/// config file.
#[derive(Default)]
pub struct PipelineOverrides {
    pub iterations: Option<usize>,
    pub embed_threshold: Option<f64>,
    pub min_count: Option<usize>,
    pub min_prob: Option<f64>,
    pub pac_max_n: Option<usize>,
    pub dedup_mode: Option<DedupMode>,
}

/// Fully resolved pipeline settings; every referenced path exists and
/// every knob is in range by the time this value is constructed.
pub struct PipelineConfig {
    pub pairs: PathBuf,
    pub pairs_format: PairFormat,
    pub seed_dict: PathBuf,
    pub refs: PathBuf,
    pub ratings: PathBuf,
    pub vectors_hi: Option<PathBuf>,
    pub vectors_en: Option<PathBuf>,
    pub pos_lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub translit_table: Option<PathBuf>,
    pub iterations: usize,
    pub embed_threshold: f64,
    pub min_count: usize,
    pub min_prob: f64,
    pub bleu_max_n: usize,
    pub nist_max_n: usize,
    pub pac_max_n: usize,
    pub dedup_mode: DedupMode,
    pub seed: Option<u64>,
}

impl PipelineConfig {
    pub fn resolve(
        config: &ConfigFile,
        overrides: &PipelineOverrides,
        seed: Option<u64>,
    ) -> Result<Self, CliError> {
        let required = |key: &str| -> Result<PathBuf, CliError> {
            let path = config
                .path(key)
                .ok_or_else(|| CliError::data(format!("config: missing required key `{key}`")))?;
            check_exists(key, path)
        };
        let optional = |key: &str| -> Result<Option<PathBuf>, CliError> {
            config.path(key).map(|p| check_exists(key, p)).transpose()
        };

        let pairs_format = match config.get("pairs_format") {
            None | Some("tsv") => PairFormat::Tsv,
            Some("jsonl") => PairFormat::Jsonl,
            Some(other) => {
                return Err(CliError::data(format!(
                    "config key `pairs_format`: expected tsv or jsonl, got {other:?}"
                )))
            }
        };

        let iterations = config.knob(overrides.iterations, "iterations", 5)?;
        let embed_threshold = config.knob(overrides.embed_threshold, "embed_threshold", 0.5)?;
        let min_count = config.knob(overrides.min_count, "min_count", 2)?;
        let min_prob = config.knob(overrides.min_prob, "min_prob", 0.3)?;
        let bleu_max_n = config.knob(None, "bleu_max_n", 4)?;
        let nist_max_n = config.knob(None, "nist_max_n", 5)?;
        let pac_max_n = config.knob(overrides.pac_max_n, "pac_max_n", 3)?;
        in_range("iterations", iterations >= 1, "≥ 1")?;
        in_range("embed_threshold", embed_threshold > 0.0 && embed_threshold <= 1.0, "in (0, 1]")?;
        in_range("min_count", min_count >= 1, "≥ 1")?;
        in_range("min_prob", min_prob > 0.0 && min_prob <= 1.0, "in (0, 1]")?;
        in_range("bleu_max_n", (1..=9).contains(&bleu_max_n), "in 1..=9")?;
        in_range("nist_max_n", (1..=9).contains(&nist_max_n), "in 1..=9")?;
        in_range("pac_max_n", (1..=3).contains(&pac_max_n), "in 1..=3")?;

        let dedup_mode = match overrides.dedup_mode {
            Some(mode) => mode,
            None => match config.get("dedup_mode") {
                Some(raw) => parse_dedup(raw)?,
                None => DedupMode::PerRating,
            },
        };

        let vectors_hi = optional("vectors_hi")?;
        let vectors_en = optional("vectors_en")?;
        if vectors_hi.is_some() != vectors_en.is_some() {
            return Err(CliError::data(
                "config: vectors_hi and vectors_en must be given together",
            ));
        }

        Ok(PipelineConfig {
            pairs: required("pairs")?,
            pairs_format,
            seed_dict: required("seed_dict")?,
            refs: required("refs")?,
            ratings: required("ratings")?,
            vectors_hi,
            vectors_en,
            pos_lexicon: optional("pos_lexicon")?,
            stopwords: optional("stopwords")?,
            translit_table: optional("translit_table")?,
            iterations,
            embed_threshold,
            min_count,
            min_prob,
            bleu_max_n,
            nist_max_n,
            pac_max_n,
            dedup_mode,
            seed: match seed {
                Some(s) => Some(s),
                None => config.opt_knob(None, "seed")?,
            },
        })
    }

    /// Effective settings, echoed into the run manifest.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            map.insert(k.to_string(), v);
        };
        put("pairs", self.pairs.display().to_string());
        put(
            "pairs_format",
            match self.pairs_format {
                PairFormat::Tsv => "tsv".to_string(),
                PairFormat::Jsonl => "jsonl".to_string(),
            },
        );
        put("seed_dict", self.seed_dict.display().to_string());
        put("refs", self.refs.display().to_string());
        put("ratings", self.ratings.display().to_string());
        for (key, value) in [
            ("vectors_hi", &self.vectors_hi),
            ("vectors_en", &self.vectors_en),
            ("pos_lexicon", &self.pos_lexicon),
            ("stopwords", &self.stopwords),
            ("translit_table", &self.translit_table),
        ] {
            if let Some(path) = value {
                put(key, path.display().to_string());
            }
        }
        put("iterations", self.iterations.to_string());
        put("embed_threshold", self.embed_threshold.to_string());
        put("min_count", self.min_count.to_string());
        put("min_prob", self.min_prob.to_string());
        put("bleu_max_n", self.bleu_max_n.to_string());
        put("nist_max_n", self.nist_max_n.to_string());
        put("pac_max_n", self.pac_max_n.to_string());
        put("dedup_mode", dedup_name(self.dedup_mode).to_string());
        if let Some(seed) = self.seed {
            put("seed", seed.to_string());
        }
        map
    }
}

fn check_exists(key: &str, path: PathBuf) -> Result<PathBuf, CliError> {
    if path.exists() {
        Ok(path)
    } else {
        Err(CliError::data(format!(
            "config: `{key}` path does not exist: {}",
            path.display()
        )))
    }
}

fn in_range(key: &str, ok: bool, expect: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::data(format!("config key `{key}` out of range: expected {expect}")))
    }
}
