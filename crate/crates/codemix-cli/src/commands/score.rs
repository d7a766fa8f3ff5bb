use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::Args;

use codemix::corpus::{load_generated, GeneratedSentence};
use codemix::embed::VectorStore;
use codemix::eval::ScoredSentence;
use codemix::metrics::{score_corpus, CorpusScore, MetricConfig};

use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Args)]
pub struct ScoreArgs {
    /// Hypotheses JSONL (generated sentences)
    #[arg(long)]
    hyp: PathBuf,
    /// References JSONL, same schema, grouped by pair_id
    #[arg(long)]
    refs: PathBuf,
    /// Word vectors for the embedding similarity metric
    #[arg(long)]
    vectors: Option<PathBuf>,
    /// Output report TSV
    #[arg(long)]
    out: PathBuf,
    /// Highest BLEU n-gram order [default: 4]
    #[arg(long)]
    bleu_max_n: Option<usize>,
    /// Highest NIST n-gram order [default: 5]
    #[arg(long)]
    nist_max_n: Option<usize>,
}

pub fn run(args: ScoreArgs, config: &ConfigFile) -> Result<(), CliError> {
    let hyps = load_generated(&args.hyp)?;
    let refs = load_generated(&args.refs)?;
    let store = args.vectors.as_deref().map(VectorStore::load).transpose()?;
    let cfg = MetricConfig {
        bleu_n: config.knob(args.bleu_max_n, "bleu_max_n", 4)?,
        nist_n: config.knob(args.nist_max_n, "nist_max_n", 5)?,
        ter_block: 10,
    };
    let (report, _, corpus) = score_generated(&hyps, &refs, store.as_ref(), &cfg)?;
    fs::write(&args.out, report).map_err(|e| crate::error::io_err(&args.out, e))?;
    eprintln!(
        "codemix: {} sentences scored; corpus bleu {:.4}, wer {:.4}, ter {:.4}",
        corpus.sentences, corpus.bleu, corpus.wer, corpus.ter
    );
    Ok(())
}

/// Score hypotheses against references joined on pair_id and render the
/// report TSV (one row per sentence plus a final `#CORPUS` row). Also
/// returns the per-sentence scores at full precision for downstream
/// correlation analysis.
pub(crate) fn score_generated(
    hyps: &[GeneratedSentence],
    refs: &[GeneratedSentence],
    store: Option<&VectorStore>,
    cfg: &MetricConfig,
) -> Result<(String, Vec<ScoredSentence>, CorpusScore), CliError> {
    let mut refs_by_pair: HashMap<&str, Vec<Vec<String>>> = HashMap::new();
    for r in refs {
        refs_by_pair
            .entry(r.pair_id.as_str())
            .or_default()
            .push(r.tokens.iter().map(|t| t.surface.clone()).collect());
    }
    let hyp_tokens: Vec<Vec<String>> =
        hyps.iter().map(|h| h.tokens.iter().map(|t| t.surface.clone()).collect()).collect();
    let refsets: Vec<Vec<Vec<String>>> = hyps
        .iter()
        .map(|h| refs_by_pair.get(h.pair_id.as_str()).cloned().unwrap_or_default())
        .collect();
    let (corpus, sentences) = score_corpus(&hyp_tokens, &refsets, store, cfg)?;

    let mut tsv = String::from("sentence_id\tbleu\tnist\twer\tter\tembed\n");
    let mut scored = Vec::with_capacity(hyps.len());
    for (h, s) in hyps.iter().zip(&sentences) {
        writeln!(
            tsv,
            "{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}",
            h.sentence_id(),
            s.bleu,
            s.nist,
            s.wer,
            s.ter,
            fmt_embed(s.embed)
        )
        .expect("string write");
        scored.push(ScoredSentence { sentence_id: h.sentence_id(), score: s.clone() });
    }
    writeln!(
        tsv,
        "#CORPUS\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}",
        corpus.bleu,
        corpus.nist,
        corpus.wer,
        corpus.ter,
        fmt_embed(corpus.embed)
    )
    .expect("string write");
    Ok((tsv, scored, corpus))
}

pub(crate) fn fmt_embed(embed: Option<f64>) -> String {
    match embed {
        Some(x) => format!("{x:.4}"),
        None => "—".to_string(),
    }
}
