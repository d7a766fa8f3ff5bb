use std::fs;
use std::path::PathBuf;

use clap::Args;

use codemix::corpus::tokenize;
use codemix::translit::{transliterate_sentence, TranslitTable};

use crate::config::ConfigFile;
use crate::error::CliError;

#[derive(Args)]
pub struct TranslitArgs {
    /// Input text, one sentence per line
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Alternative table TSV (devanagari_codepoint<TAB>roman)
    #[arg(long)]
    table: Option<PathBuf>,
}

pub fn run(args: TranslitArgs, _config: &ConfigFile) -> Result<(), CliError> {
    let table = match &args.table {
        Some(path) => TranslitTable::load(path)?,
        None => TranslitTable::default_table(),
    };
    let text = fs::read_to_string(&args.input).map_err(|e| crate::error::io_err(&args.input, e))?;
    let mut out = String::new();
    let mut unmapped_total = 0usize;
    for line in text.lines() {
        let sentence = tokenize(line);
        let (tokens, unmapped) = transliterate_sentence(&sentence, &table);
        unmapped_total += unmapped;
        let surfaces: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
        out.push_str(&surfaces.join(" "));
        out.push('\n');
    }
    fs::write(&args.out, out).map_err(|e| crate::error::io_err(&args.out, e))?;
    if unmapped_total > 0 {
        eprintln!("codemix: warning: {unmapped_total} unmapped characters replaced by '?'");
    }
    Ok(())
}
