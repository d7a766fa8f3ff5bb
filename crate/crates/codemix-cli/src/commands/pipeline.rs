use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};

use codemix::align::{align_pair, extract_pairs, train_ibm1};
use codemix::corpus::{load_generated, load_parallel, load_ratings, save_generated};
use codemix::embed::{learn_mapping, VectorStore};
use codemix::generate::{generate_corpus, GenerationConfig, MethodChoice, PosLexicon};
use codemix::lexicon::BilingualDictionary;
use codemix::metrics::MetricConfig;
use codemix::translit::TranslitTable;

use crate::commands::{evaluate, load_stopwords, score, warn_rejects, DedupArg};
use crate::config::{ConfigFile, PipelineConfig, PipelineOverrides};
use crate::error::{io_err, CliError};
use crate::manifest::{sha256_file, Manifest};

#[derive(Subcommand)]
pub enum PipelineCmd {
    /// Run dictionary induction, generation, scoring and evaluation
    /// end to end from one config file
    Run(RunArgs),
}

#[derive(Args)]
pub struct RunArgs {
    /// Directory every artifact is written into
    #[arg(long)]
    out_dir: PathBuf,
    /// EM iterations for alignment training [default: 5]
    #[arg(long)]
    iterations: Option<usize>,
    /// Minimum cosine for embedding-induced entries [default: 0.5]
    #[arg(long)]
    embed_threshold: Option<f64>,
    /// Minimum count for alignment-harvested pairs [default: 2]
    #[arg(long)]
    min_count: Option<usize>,
    /// Minimum probability for alignment-harvested pairs [default: 0.3]
    #[arg(long)]
    min_prob: Option<f64>,
    /// Longest PAC keyphrase [default: 3]
    #[arg(long)]
    pac_max_n: Option<usize>,
    /// How repeated ratings of a sentence are counted [default: per-rating]
    #[arg(long)]
    dedup_mode: Option<DedupArg>,
}

pub fn run(cmd: PipelineCmd, config: &ConfigFile, seed: Option<u64>) -> Result<(), CliError> {
    let PipelineCmd::Run(args) = cmd;
    if config.source().is_none() {
        return Err(CliError::usage("pipeline run requires --config"));
    }
    let overrides = PipelineOverrides {
        iterations: args.iterations,
        embed_threshold: args.embed_threshold,
        min_count: args.min_count,
        min_prob: args.min_prob,
        pac_max_n: args.pac_max_n,
        dedup_mode: args.dedup_mode.map(Into::into),
    };
    let cfg = PipelineConfig::resolve(config, &overrides, seed)?;
    let out_dir = &args.out_dir;
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    // file name -> hash of everything this run writes, for the manifest
    let mut outputs: BTreeMap<String, String> = BTreeMap::new();
    let record = |outputs: &mut BTreeMap<String, String>,
                  path: &Path|
     -> Result<(), CliError> {
        let name = path.file_name().expect("artifact has a file name").to_string_lossy();
        outputs.insert(name.into_owned(), sha256_file(path)?);
        Ok(())
    };

    let loaded = load_parallel(&cfg.pairs, cfg.pairs_format)?;
    warn_rejects(&cfg.pairs, &loaded.rejects);
    let pairs = loaded.records;
    eprintln!("codemix: pipeline: {} parallel pairs", pairs.len());

    let (seed_dict, rejects) = BilingualDictionary::load_seed(&cfg.seed_dict)?;
    warn_rejects(&cfg.seed_dict, &rejects);
    let seed_entries = seed_dict.len();

    let table = train_ibm1(&pairs, cfg.iterations)?;
    for (i, ll) in table.log_likelihood.iter().enumerate() {
        eprintln!("codemix: iteration {}: log-likelihood {ll:.4}", i + 1);
    }
    let table_path = out_dir.join("align_table.tsv");
    table.save_tsv(&table_path)?;
    record(&mut outputs, &table_path)?;

    let links: Vec<_> = pairs.iter().map(|p| align_pair(p, &table)).collect();
    let extracted = extract_pairs(&links, &pairs, &table, cfg.min_count, cfg.min_prob)?;
    let mut dict = seed_dict.extend_with_alignments(&extracted);

    let mut en_store = None;
    if let (Some(hi_path), Some(en_path)) = (&cfg.vectors_hi, &cfg.vectors_en) {
        let hi = VectorStore::load(hi_path)?;
        let en = VectorStore::load(en_path)?;
        let seeds: Vec<(String, String)> =
            dict.entries().iter().map(|e| (e.hindi.clone(), e.english.clone())).collect();
        let mapping = learn_mapping(&hi, &en, &seeds)?;
        let mapping_path = out_dir.join("mapping.bin");
        mapping.save(&mapping_path)?;
        record(&mut outputs, &mapping_path)?;
        dict = dict.extend_with_embeddings(&pairs, &hi, &en, &mapping, cfg.embed_threshold)?;
        en_store = Some(en);
    }

    let dict_path = out_dir.join("dict.tsv");
    dict.save_tsv(&dict_path)?;
    record(&mut outputs, &dict_path)?;
    let (s, e, a) = dict.provenance_counts();
    eprintln!(
        "codemix: dictionary: {seed_entries} seed -> {} entries (seed {s}, embed {e}, align {a})",
        dict.len()
    );

    let pos_lexicon = match &cfg.pos_lexicon {
        Some(path) => PosLexicon::load(path)?,
        None => PosLexicon::new(),
    };
    let translit = match &cfg.translit_table {
        Some(path) => TranslitTable::load(path)?,
        None => TranslitTable::default_table(),
    };
    let stopwords = load_stopwords(cfg.stopwords.as_deref())?;
    let gen_cfg = GenerationConfig {
        pac_max_n: cfg.pac_max_n,
        // the dictionary's EMBED entries were already thresholded during
        // induction, so generation uses them all
        embed_threshold: None,
        ..GenerationConfig::default()
    };
    let (generated, summary) =
        generate_corpus(&pairs, MethodChoice::Both, &dict, &gen_cfg, &translit, &pos_lexicon, &stopwords)?;
    let generated_path = out_dir.join("generated.jsonl");
    save_generated(&generated_path, &generated)?;
    record(&mut outputs, &generated_path)?;
    eprintln!(
        "codemix: generated {} sentences, {:.1}% embedded tokens, {} without replacements",
        summary.outputs,
        summary.replacement_rate() * 100.0,
        summary.zero_replacement_count
    );

    let refs = load_generated(&cfg.refs)?;
    let metric_cfg =
        MetricConfig { bleu_n: cfg.bleu_max_n, nist_n: cfg.nist_max_n, ter_block: 10 };
    let (report_tsv, scored, corpus) =
        score::score_generated(&generated, &refs, en_store.as_ref(), &metric_cfg)?;
    let score_path = out_dir.join("score_report.tsv");
    fs::write(&score_path, report_tsv).map_err(|e| io_err(&score_path, e))?;
    record(&mut outputs, &score_path)?;
    eprintln!(
        "codemix: corpus scores: bleu {:.4}, nist {:.4}, wer {:.4}, ter {:.4}",
        corpus.bleu, corpus.nist, corpus.wer, corpus.ter
    );

    let ratings = load_ratings(&cfg.ratings)?;
    warn_rejects(&cfg.ratings, &ratings.rejects);
    let report_files =
        evaluate::write_reports(out_dir, &scored, &ratings.records, cfg.dedup_mode, Some(&corpus))?;
    for path in &report_files {
        record(&mut outputs, path)?;
    }

    let mut inputs = BTreeMap::new();
    let mut named_inputs: Vec<(&str, &Path)> = vec![
        ("pairs", &cfg.pairs),
        ("seed_dict", &cfg.seed_dict),
        ("refs", &cfg.refs),
        ("ratings", &cfg.ratings),
    ];
    for (key, path) in [
        ("vectors_hi", &cfg.vectors_hi),
        ("vectors_en", &cfg.vectors_en),
        ("pos_lexicon", &cfg.pos_lexicon),
        ("stopwords", &cfg.stopwords),
        ("translit_table", &cfg.translit_table),
    ] {
        if let Some(p) = path {
            named_inputs.push((key, p));
        }
    }
    for (key, path) in named_inputs {
        inputs.insert(key.to_string(), sha256_file(path)?);
    }
    let manifest = Manifest {
        tool: "codemix",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg.echo(),
        inputs,
        outputs,
    };
    let manifest_path = out_dir.join("manifest.json");
    manifest.write(&manifest_path)?;

    eprintln!(
        "codemix: pipeline complete: {} artifacts in {}",
        // every recorded artifact plus the manifest itself
        manifest.outputs.len() + 1,
        out_dir.display()
    );
    Ok(())
}
