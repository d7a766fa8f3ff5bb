use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::json;

use codemix::corpus::{load_ratings, RatingRecord};
use codemix::eval::{
    agreement_table, bucket_correlations, dcm_ra_summary, disagreement_histogram, mean_by_rating,
    render_agreement, render_dcm_ra, render_histogram, DedupMode, ScoredSentence,
};
use codemix::metrics::{CorpusScore, SentenceScore};

use crate::commands::score::fmt_embed;
use crate::commands::{warn_rejects, DedupArg};
use crate::config::{dedup_name, parse_dedup, ConfigFile};
use crate::error::{io_err, CliError};

#[derive(Args)]
pub struct EvaluateArgs {
    /// Score report TSV produced by `codemix score`
    #[arg(long)]
    scores: PathBuf,
    /// Human ratings JSONL
    #[arg(long)]
    ratings: PathBuf,
    /// Directory the report files are written into
    #[arg(long)]
    out_dir: PathBuf,
    /// How repeated ratings of a sentence are counted [default: per-rating]
    #[arg(long)]
    dedup_mode: Option<DedupArg>,
}

pub fn run(args: EvaluateArgs, config: &ConfigFile) -> Result<(), CliError> {
    let (scored, corpus) = read_score_tsv(&args.scores)?;
    let loaded = load_ratings(&args.ratings)?;
    warn_rejects(&args.ratings, &loaded.rejects);
    let dedup = match args.dedup_mode {
        Some(d) => DedupMode::from(d),
        None => match config.get("dedup_mode") {
            Some(raw) => parse_dedup(raw)?,
            None => DedupMode::default(),
        },
    };
    let written = write_reports(&args.out_dir, &scored, &loaded.records, dedup, corpus.as_ref())?;
    eprintln!("codemix: wrote {} report files to {}", written.len(), args.out_dir.display());
    Ok(())
}

/// Parse a score report TSV back into per-sentence scores plus the
/// trailing `#CORPUS` row if present.
pub(crate) fn read_score_tsv(
    path: &Path,
) -> Result<(Vec<ScoredSentence>, Option<CorpusScore>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut scored = Vec::new();
    let mut corpus = None;
    for (idx, line) in text.lines().enumerate() {
        if idx == 0 || line.is_empty() {
            continue;
        }
        let cell = |raw: &str, what: &str| -> Result<f64, CliError> {
            raw.parse().map_err(|_| {
                CliError::data(format!("{}:{}: bad {what} value {raw:?}", path.display(), idx + 1))
            })
        };
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, bleu, nist, wer, ter, embed] = fields.as_slice() else {
            return Err(CliError::data(format!(
                "{}:{}: expected 6 tab-separated columns, got {}",
                path.display(),
                idx + 1,
                fields.len()
            )));
        };
        let embed = match *embed {
            "—" => None,
            raw => Some(cell(raw, "embed")?),
        };
        let (bleu, nist, wer, ter) =
            (cell(bleu, "bleu")?, cell(nist, "nist")?, cell(wer, "wer")?, cell(ter, "ter")?);
        if *id == "#CORPUS" {
            corpus =
                Some(CorpusScore { bleu, nist, wer, ter, embed, sentences: scored.len() });
        } else {
            scored.push(ScoredSentence {
                sentence_id: id.to_string(),
                score: SentenceScore { bleu, nist, wer, ter, embed },
            });
        }
    }
    Ok((scored, corpus))
}

/// Sentence ids carry the generation method as a `#`-suffix; sentences
/// without one fall into a single ALL group.
fn method_of(sentence_id: &str) -> &str {
    match sentence_id.rsplit_once('#') {
        Some((_, method)) if !method.is_empty() => method,
        _ => "ALL",
    }
}

/// Compute and write every report file; returns the paths written.
pub(crate) fn write_reports(
    out_dir: &Path,
    scored: &[ScoredSentence],
    ratings: &[RatingRecord],
    dedup: DedupMode,
    corpus: Option<&CorpusScore>,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;

    let mut groups: BTreeMap<&str, Vec<ScoredSentence>> = BTreeMap::new();
    for s in scored {
        groups.entry(method_of(&s.sentence_id)).or_default().push(s.clone());
    }
    // WAC and PAC lead; any other method labels follow alphabetically.
    let mut methods: Vec<&str> = Vec::new();
    for known in ["WAC", "PAC"] {
        if groups.contains_key(known) {
            methods.push(known);
        }
    }
    methods.extend(groups.keys().copied().filter(|m| !matches!(*m, "WAC" | "PAC")));

    let mut table4 = String::from("method\trating\tn\tbleu\tnist\twer\tter\tembed\n");
    let mut table5 = String::from("method\tbucket\trange\tn\tbleu\tnist\twer\tter\tembed\n");
    let mut methods_json = serde_json::Map::new();
    for method in &methods {
        let table = mean_by_rating(&groups[method], ratings, dedup);
        for rating in 1..=10u8 {
            match table.rows.get(&rating) {
                Some(row) => writeln!(
                    table4,
                    "{method}\t{rating}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}",
                    row.n,
                    row.bleu,
                    row.nist,
                    row.wer,
                    row.ter,
                    fmt_embed(row.embed),
                ),
                None => writeln!(table4, "{method}\t{rating}\t0\t—\t—\t—\t—\t—"),
            }
            .expect("string write");
        }
        let buckets = bucket_correlations(&table);
        for row in &buckets {
            let range = row.bucket.range();
            writeln!(
                table5,
                "{method}\t{}\t{}-{}\t{}\t{}\t{}\t{}\t{}\t{}",
                row.bucket.name(),
                range.start(),
                range.end(),
                row.n,
                fmt_embed(row.bleu),
                fmt_embed(row.nist),
                fmt_embed(row.wer),
                fmt_embed(row.ter),
                fmt_embed(row.embed),
            )
            .expect("string write");
        }
        methods_json.insert(
            method.to_string(),
            json!({
                "per_rating": table.rows.iter().map(|(rating, row)| json!({
                    "rating": rating,
                    "n": row.n,
                    "bleu": row.bleu,
                    "nist": row.nist,
                    "wer": row.wer,
                    "ter": row.ter,
                    "embed": row.embed,
                })).collect::<Vec<_>>(),
                "buckets": buckets.iter().map(|row| json!({
                    "bucket": row.bucket.name(),
                    "range": [row.bucket.range().start(), row.bucket.range().end()],
                    "n": row.n,
                    "bleu": row.bleu,
                    "nist": row.nist,
                    "wer": row.wer,
                    "ter": row.ter,
                    "embed": row.embed,
                })).collect::<Vec<_>>(),
            }),
        );
    }

    let agreement = agreement_table(ratings);
    let hist = disagreement_histogram(ratings);
    let dcm_ra = dcm_ra_summary(ratings);

    let report = json!({
        "dedup_mode": dedup_name(dedup),
        "sentences_scored": scored.len(),
        "corpus": corpus.map(|c| json!({
            "bleu": c.bleu,
            "nist": c.nist,
            "wer": c.wer,
            "ter": c.ter,
            "embed": c.embed,
            "sentences": c.sentences,
        })),
        "methods": methods_json,
        "agreement": {
            "both_correct": agreement.correct_agree,
            "both_incorrect": agreement.incorrect_agree,
            "disagree": agreement.disagree,
            "excluded": agreement.excluded,
            "total_pairs": agreement.total_pairs(),
        },
        "disagreement_histogram": {
            "counts": hist.counts,
            "pairs": hist.pairs,
            "excluded": hist.excluded,
            "high_fraction": hist.high_fraction(),
        },
        "dcm_ra": dcm_ra.iter().map(|row| json!({
            "scale": row.scale.as_str(),
            "rater": row.rater_id,
            "mean": row.mean,
            "n": row.n,
        })).collect::<Vec<_>>(),
    });

    let files: [(&str, String); 6] = [
        ("table2.tsv", render_agreement(&agreement)),
        ("table4.tsv", table4),
        ("table5.tsv", table5),
        ("disagreement_hist.tsv", render_histogram(&hist)),
        ("dcm_ra.tsv", render_dcm_ra(&dcm_ra)),
        ("report.json", format!("{:#}\n", report)),
    ];
    let mut written = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = out_dir.join(name);
        fs::write(&path, content).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
