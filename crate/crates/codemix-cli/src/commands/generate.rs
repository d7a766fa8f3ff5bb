use std::path::PathBuf;

use clap::{Args, ValueEnum};

use codemix::corpus::{load_parallel, save_generated};
use codemix::generate::{generate_corpus, GenerationConfig, MethodChoice, PosLexicon};
use codemix::lexicon::BilingualDictionary;
use codemix::translit::TranslitTable;

use super::FormatArg;
use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum MethodArg {
    Wac,
    Pac,
    #[default]
    Both,
}

impl From<MethodArg> for MethodChoice {
    fn from(m: MethodArg) -> MethodChoice {
        match m {
            MethodArg::Wac => MethodChoice::Wac,
            MethodArg::Pac => MethodChoice::Pac,
            MethodArg::Both => MethodChoice::Both,
        }
    }
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Generation method
    #[arg(long, value_enum, default_value_t)]
    method: MethodArg,
    /// Dictionary TSV (from `dict build` / `dict extend`)
    #[arg(long)]
    dict: PathBuf,
    /// Parallel corpus
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pairs_format: FormatArg,
    /// Output JSONL of generated sentences
    #[arg(long)]
    out: PathBuf,
    /// POS lexicon TSV word<TAB>tag (fallback: suffix heuristic)
    #[arg(long)]
    pos_lexicon: Option<PathBuf>,
    /// Ignore embedding-induced dictionary entries below this weight
    #[arg(long)]
    embed_threshold: Option<f64>,
    /// Alternative transliteration table TSV
    #[arg(long)]
    translit_table: Option<PathBuf>,
    /// Stopword list for phrase candidates (default: built-in English)
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Longest embedded phrase, 1..=3 [default: 3]
    #[arg(long)]
    pac_max_n: Option<usize>,
}

pub fn run(args: GenerateArgs, config: &ConfigFile) -> Result<(), CliError> {
    let dict = BilingualDictionary::load_tsv(&args.dict)?;
    let loaded = load_parallel(&args.pairs, args.pairs_format.into())?;
    super::warn_rejects(&args.pairs, &loaded.rejects);
    let pos = match &args.pos_lexicon {
        Some(path) => PosLexicon::load(path)?,
        None => PosLexicon::new(),
    };
    let table = match &args.translit_table {
        Some(path) => TranslitTable::load(path)?,
        None => TranslitTable::default_table(),
    };
    let stopwords = super::load_stopwords(args.stopwords.as_deref())?;

    let cfg = GenerationConfig {
        pac_max_n: config.knob(args.pac_max_n, "pac_max_n", 3)?,
        embed_threshold: config.opt_knob(args.embed_threshold, "embed_threshold")?,
        ..GenerationConfig::default()
    };
    let (outputs, summary) = generate_corpus(
        &loaded.records,
        args.method.into(),
        &dict,
        &cfg,
        &table,
        &pos,
        &stopwords,
    )?;
    save_generated(&args.out, &outputs)?;
    eprintln!(
        "codemix: {} sentences generated; {}/{} tokens embedded ({:.1}% replacement), \
         {} outputs with no replacement",
        summary.outputs,
        summary.embedded_tokens,
        summary.total_tokens,
        100.0 * summary.replacement_rate(),
        summary.zero_replacement_count
    );
    Ok(())
}
