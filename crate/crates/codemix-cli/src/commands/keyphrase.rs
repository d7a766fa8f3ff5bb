use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Args;

use codemix::corpus::{tokenize, Sentence};
use codemix::keyphrase::extract;

use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Args)]
pub struct KeyphraseArgs {
    /// Input document, one sentence per line
    #[arg(long = "in")]
    input: PathBuf,
    /// Output TSV (phrase, score, start, end)
    #[arg(long)]
    out: PathBuf,
    /// Stopword list, one word per line (default: built-in English)
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Longest phrase in tokens, 1..=3
    #[arg(long, default_value_t = 3)]
    max_n: usize,
    /// Keep only the best K phrases
    #[arg(long)]
    top_k: Option<usize>,
}

pub fn run(args: KeyphraseArgs, _config: &ConfigFile) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.input).map_err(|e| crate::error::io_err(&args.input, e))?;
    let document: Vec<Sentence> =
        text.lines().filter(|l| !l.trim().is_empty()).map(tokenize).collect();
    let stopwords = super::load_stopwords(args.stopwords.as_deref())?;
    let phrases = extract(&document, &stopwords, args.max_n, args.top_k)?;
    let mut out = String::from("phrase\tscore\tstart\tend\n");
    for p in &phrases {
        writeln!(out, "{}\t{:.6}\t{}\t{}", p.tokens.join(" "), p.score, p.start, p.end)
            .expect("string write");
    }
    fs::write(&args.out, out).map_err(|e| crate::error::io_err(&args.out, e))?;
    eprintln!("codemix: {} phrases extracted", phrases.len());
    Ok(())
}
