use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Subcommand};

use codemix::align::{align_pair, train_ibm1, TranslationTable};
use codemix::corpus::load_parallel;

use super::FormatArg;
use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Subcommand)]
pub enum AlignCmd {
    /// Train IBM Model 1 translation probabilities
    Train(TrainArgs),
    /// Link each Hindi token to its best English token under a table
    Infer(InferArgs),
}

#[derive(Args)]
pub struct TrainArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pairs_format: FormatArg,
    /// EM iterations [default: 5]
    #[arg(long)]
    iterations: Option<usize>,
    /// Output table TSV (english, hindi, probability)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct InferArgs {
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    pairs_format: FormatArg,
    /// Trained table from `align train`
    #[arg(long)]
    table: PathBuf,
    /// Output links TSV (pair_id, hindi_index, english_index, posterior)
    #[arg(long)]
    out: PathBuf,
}

pub fn run(cmd: AlignCmd, config: &ConfigFile) -> Result<(), CliError> {
    match cmd {
        AlignCmd::Train(args) => train(args, config),
        AlignCmd::Infer(args) => infer(args),
    }
}

fn train(args: TrainArgs, config: &ConfigFile) -> Result<(), CliError> {
    let loaded = load_parallel(&args.pairs, args.pairs_format.into())?;
    super::warn_rejects(&args.pairs, &loaded.rejects);
    let iterations = config.knob(args.iterations, "iterations", 5)?;
    let table = train_ibm1(&loaded.records, iterations)?;
    for (i, ll) in table.log_likelihood.iter().enumerate() {
        eprintln!("codemix: iteration {}: log-likelihood {ll:.4}", i + 1);
    }
    table.save_tsv(&args.out)?;
    eprintln!(
        "codemix: table saved: {} English x {} Hindi words",
        table.english_vocab_size(),
        table.hindi_vocab_size()
    );
    Ok(())
}

fn infer(args: InferArgs) -> Result<(), CliError> {
    let loaded = load_parallel(&args.pairs, args.pairs_format.into())?;
    super::warn_rejects(&args.pairs, &loaded.rejects);
    let table = TranslationTable::load_tsv(&args.table)?;
    let mut out = String::from("pair_id\thindi_index\tenglish_index\tposterior\n");
    for pair in &loaded.records {
        let links = align_pair(pair, &table);
        for link in &links.links {
            let english = match link.english_index {
                Some(j) => j.to_string(),
                None => "NULL".to_string(),
            };
            writeln!(
                out,
                "{}\t{}\t{english}\t{:.6}",
                links.pair_id, link.hindi_index, link.posterior
            )
            .expect("string write");
        }
    }
    fs::write(&args.out, out).map_err(|e| crate::error::io_err(&args.out, e))?;
    Ok(())
}
