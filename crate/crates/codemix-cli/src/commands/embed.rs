use std::path::PathBuf;

use clap::{Args, Subcommand};

use codemix::embed::{learn_mapping, VectorStore};
use codemix::lexicon::BilingualDictionary;

use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Subcommand)]
pub enum EmbedCmd {
    /// Learn an orthogonal map from source into target vector space
    Map(MapArgs),
}

#[derive(Args)]
pub struct MapArgs {
    /// Vectors of the side being mapped (Hindi in the standard pipeline)
    #[arg(long)]
    src: PathBuf,
    /// Vectors of the shared target space (English)
    #[arg(long)]
    tgt: PathBuf,
    /// Dictionary TSV supplying hindi->english seed pairs
    #[arg(long)]
    dict: PathBuf,
    /// Output mapping file (binary, row-major doubles)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: EmbedCmd, _config: &ConfigFile) -> Result<(), CliError> {
    let EmbedCmd::Map(args) = cmd;
    let src = VectorStore::load(&args.src)?;
    let tgt = VectorStore::load(&args.tgt)?;
    let dict = BilingualDictionary::load_tsv(&args.dict)?;
    let seeds: Vec<(String, String)> =
        dict.entries().iter().map(|e| (e.hindi.clone(), e.english.clone())).collect();
    let mapping = learn_mapping(&src, &tgt, &seeds)?;
    mapping.save(&args.out)?;
    eprintln!(
        "codemix: mapping learned: dim {} from {} dictionary entries",
        mapping.dim(),
        seeds.len()
    );
    Ok(())
}
