use std::path::PathBuf;

use clap::{Args, Subcommand};

use codemix::align::{align_pair, extract_pairs, TranslationTable};
use codemix::corpus::load_parallel;
use codemix::embed::{Mapping, VectorStore};
use codemix::lexicon::BilingualDictionary;

use super::FormatArg;
use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Subcommand)]
pub enum DictCmd {
    /// Convert a seed TSV (english<TAB>hindi) into the dictionary format
    Build(BuildArgs),
    /// Add alignment- and/or embedding-induced entries to a dictionary
    Extend(ExtendArgs),
}

#[derive(Args)]
pub struct BuildArgs {
    /// Seed word list, english<TAB>hindi per line
    #[arg(long)]
    seed_file: PathBuf,
    /// Output dictionary TSV (english, hindi, provenance, weight)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct ExtendArgs {
    /// Dictionary TSV to extend (output of `dict build`)
    #[arg(long)]
    dict: PathBuf,
    /// Parallel corpus
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pairs_format: FormatArg,
    #[arg(long)]
    out: PathBuf,
    /// Translation table enabling alignment extension
    #[arg(long)]
    table: Option<PathBuf>,
    /// Keep aligned pairs seen at least this often [default: 2]
    #[arg(long)]
    min_count: Option<usize>,
    /// Keep aligned pairs with probability at least this [default: 0.3]
    #[arg(long)]
    min_prob: Option<f64>,
    /// Hindi vectors, enabling embedding extension
    #[arg(long)]
    src_vectors: Option<PathBuf>,
    /// English vectors for embedding extension
    #[arg(long)]
    tgt_vectors: Option<PathBuf>,
    /// Learned map from `embed map`
    #[arg(long)]
    mapping: Option<PathBuf>,
    /// Minimum cosine for accepting an induced pair [default: 0.5]
    #[arg(long)]
    embed_threshold: Option<f64>,
}

pub fn run(cmd: DictCmd, config: &ConfigFile) -> Result<(), CliError> {
    match cmd {
        DictCmd::Build(args) => build(args),
        DictCmd::Extend(args) => extend(args, config),
    }
}

fn build(args: BuildArgs) -> Result<(), CliError> {
    let (dict, rejects) = BilingualDictionary::load_seed(&args.seed_file)?;
    super::warn_rejects(&args.seed_file, &rejects);
    dict.save_tsv(&args.out)?;
    eprintln!("codemix: dictionary built: {} seed entries", dict.len());
    Ok(())
}

fn extend(args: ExtendArgs, config: &ConfigFile) -> Result<(), CliError> {
    let embed_flags =
        [args.mapping.is_some(), args.src_vectors.is_some(), args.tgt_vectors.is_some()];
    let has_embed = embed_flags.iter().any(|f| *f);
    if args.table.is_none() && !has_embed {
        return Err(CliError::usage(
            "dict extend needs --table (alignment extension) and/or \
             --mapping --src-vectors --tgt-vectors (embedding extension)",
        ));
    }
    if has_embed && !embed_flags.iter().all(|f| *f) {
        return Err(CliError::usage(
            "embedding extension needs all of --mapping, --src-vectors and --tgt-vectors",
        ));
    }

    let mut dict = BilingualDictionary::load_tsv(&args.dict)?;
    let before = dict.len();
    let loaded = load_parallel(&args.pairs, args.pairs_format.into())?;
    super::warn_rejects(&args.pairs, &loaded.rejects);
    let pairs = loaded.records;

    if let Some(table_path) = &args.table {
        let table = TranslationTable::load_tsv(table_path)?;
        let links: Vec<_> = pairs.iter().map(|p| align_pair(p, &table)).collect();
        let min_count = config.knob(args.min_count, "min_count", 2)?;
        let min_prob = config.knob(args.min_prob, "min_prob", 0.3)?;
        let extracted = extract_pairs(&links, &pairs, &table, min_count, min_prob)?;
        eprintln!("codemix: alignment extension: {} surviving pairs", extracted.len());
        dict = dict.extend_with_alignments(&extracted);
    }

    if let Some(mapping_path) = &args.mapping {
        let mapping = Mapping::load(mapping_path)?;
        let src = VectorStore::load(args.src_vectors.as_ref().expect("validated above"))?;
        let tgt = VectorStore::load(args.tgt_vectors.as_ref().expect("validated above"))?;
        let threshold = config.knob(args.embed_threshold, "embed_threshold", 0.5)?;
        dict = dict.extend_with_embeddings(&pairs, &src, &tgt, &mapping, threshold)?;
    }

    dict.save_tsv(&args.out)?;
    let (seed, embed, align) = dict.provenance_counts();
    eprintln!(
        "codemix: dictionary extended: {before} -> {} entries \
         (seed {seed}, embed {embed}, align {align})",
        dict.len()
    );
    Ok(())
}
