pub mod align;
pub mod dict;
pub mod embed;
pub mod evaluate;
pub mod generate;
pub mod keyphrase;
pub mod pipeline;
pub mod score;
pub mod translit;

use std::path::Path;

use clap::ValueEnum;

use codemix::corpus::{PairFormat, Reject};
use codemix::keyphrase::Stopwords;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum FormatArg {
    #[default]
    Tsv,
    Jsonl,
}

impl From<FormatArg> for PairFormat {
    fn from(f: FormatArg) -> PairFormat {
        match f {
            FormatArg::Tsv => PairFormat::Tsv,
            FormatArg::Jsonl => PairFormat::Jsonl,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DedupArg {
    PerRating,
    SentenceMean,
}

impl From<DedupArg> for codemix::eval::DedupMode {
    fn from(d: DedupArg) -> Self {
        match d {
            DedupArg::PerRating => codemix::eval::DedupMode::PerRating,
            DedupArg::SentenceMean => codemix::eval::DedupMode::SentenceMean,
        }
    }
}

pub(crate) fn warn_rejects(path: &Path, rejects: &[Reject]) {
    for r in rejects {
        eprintln!("codemix: warning: {}:{}: {}", path.display(), r.line, r.reason);
    }
}

pub(crate) fn load_stopwords(path: Option<&Path>) -> Result<Stopwords, CliError> {
    match path {
        Some(p) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| crate::error::io_err(p, e))?;
            Ok(Stopwords::from_lines(&text))
        }
        None => Ok(Stopwords::default_english()),
    }
}
