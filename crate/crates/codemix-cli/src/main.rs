mod commands;
mod config;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{align, dict, embed, evaluate, generate, keyphrase, pipeline, score, translit};
use config::ConfigFile;
use error::CliError;

/// Synthesize code-mixed Hinglish from parallel English–Hindi corpora
/// and evaluate it against references and human ratings.
#[derive(Parser)]
#[command(name = "codemix", version, about, max_term_width = 100)]
struct Cli {
    /// Worker threads [default: all cores]
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// key=value settings file; explicit flags win over it
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for randomized steps; fixed seed means identical output
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or extend a bilingual dictionary
    #[command(subcommand)]
    Dict(dict::DictCmd),
    /// Train word-alignment probabilities or link tokens with them
    #[command(subcommand)]
    Align(align::AlignCmd),
    /// Learn a cross-lingual embedding map
    #[command(subcommand)]
    Embed(embed::EmbedCmd),
    /// Romanize Devanagari text
    Translit(translit::TranslitArgs),
    /// Rank candidate keyphrases in a document
    Keyphrase(keyphrase::KeyphraseArgs),
    /// Generate code-mixed sentences from parallel pairs
    Generate(generate::GenerateArgs),
    /// Score generated sentences against references
    Score(score::ScoreArgs),
    /// Correlate scores with human ratings and write report tables
    Evaluate(evaluate::EvaluateArgs),
    /// Run the whole tool chain from one config file
    #[command(subcommand)]
    Pipeline(pipeline::PipelineCmd),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::empty(),
    };
    match cli.command {
        Command::Dict(cmd) => dict::run(cmd, &config),
        Command::Align(cmd) => align::run(cmd, &config),
        Command::Embed(cmd) => embed::run(cmd, &config),
        Command::Translit(args) => translit::run(args, &config),
        Command::Keyphrase(args) => keyphrase::run(args, &config),
        Command::Generate(args) => generate::run(args, &config),
        Command::Score(args) => score::run(args, &config),
        Command::Evaluate(args) => evaluate::run(args, &config),
        Command::Pipeline(cmd) => pipeline::run(cmd, &config, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("codemix: cannot size the thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("codemix: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Data(e)) => {
            eprintln!("codemix: {e}");
            ExitCode::from(1)
        }
    }
}
