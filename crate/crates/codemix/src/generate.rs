//! Code-mixed Hinglish generators. Hindi is the matrix language, English
//! the embedded language: WAC replaces dictionary-aligned Hindi
//! noun/adjective tokens with English tokens, PAC replaces Hindi spans
//! with English keyphrases of up to three tokens. Everything left in
//! Devanagari is transliterated, so outputs are always all-Roman.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::{
    in_devanagari_block, GeneratedSentence, Method, ParallelPair, Script, Sentence, Span,
    SpanOrigin, Token,
};
use crate::error::{Error, Result};
use crate::keyphrase::{extract, Stopwords};
use crate::lexicon::BilingualDictionary;
use crate::translit::{transliterate_token, TranslitTable};

/// Where English part-of-speech tags come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosSource {
    /// Keep tags already present on tokens; fill gaps with the heuristic.
    Provided,
    /// Ignore existing tags and retag everything with the heuristic.
    LexiconHeuristic,
}

/// Generator knobs.
#[derive(Debug, Clone)]
pub struct GenerationConfig {
    pub pos_source: PosSource,
    /// Tags eligible for WAC replacement.
    pub wac_pos_set: BTreeSet<String>,
    /// Longest PAC keyphrase.
    pub pac_max_n: usize,
    /// When set, EMBED dictionary entries below this weight are ignored.
    pub embed_threshold: Option<f64>,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            pos_source: PosSource::Provided,
            wac_pos_set: ["NOUN", "ADJ"].iter().map(|s| s.to_string()).collect(),
            pac_max_n: 3,
            embed_threshold: None,
        }
    }
}

/// English word → POS tag lookup, lowercased keys.
#[derive(Debug, Clone, Default)]
pub struct PosLexicon {
    map: HashMap<String, String>,
}

impl PosLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Load TSV `word<TAB>tag`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut map = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(Error::parse(path, lineno, "expected `word<TAB>tag`"));
            }
            map.insert(fields[0].to_lowercase(), fields[1].to_string());
        }
        Ok(PosLexicon { map })
    }

    pub fn get(&self, word: &str) -> Option<&str> {
        self.map.get(&word.to_lowercase()).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

fn heuristic_tag(word: &str) -> &'static str {
    let lower = word.to_lowercase();
    for suffix in ["tion", "ness", "ment", "ity"] {
        if lower.ends_with(suffix) {
            return "NOUN";
        }
    }
    for suffix in ["ous", "ful", "ive", "al"] {
        if lower.ends_with(suffix) {
            return "ADJ";
        }
    }
    "OTHER"
}

/// Tag a sentence's tokens: lexicon hit, else suffix heuristic, else
/// OTHER. With [`PosSource::Provided`], tokens that already carry a tag
/// keep it.
pub fn tag_pos_en(sentence: &mut Sentence, lexicon: &PosLexicon, source: PosSource) {
    for token in &mut sentence.tokens {
        if source == PosSource::Provided && token.pos.is_some() {
            continue;
        }
        let tag = lexicon.get(&token.surface).unwrap_or_else(|| heuristic_tag(&token.surface));
        token.pos = Some(tag.to_string());
    }
}

/// Origin of one output token before span merging.
#[derive(Clone, Copy, PartialEq, Eq)]
enum TokenOrigin {
    Embedded { replacement: usize },
    Transliterated,
    Verbatim,
}

/// Merge per-token origins into maximal spans. Each embedded replacement
/// keeps its own span; transliterated/verbatim runs coalesce.
fn build_spans(origins: &[TokenOrigin]) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut i = 0;
    while i < origins.len() {
        let start = i;
        let head = origins[i];
        i += 1;
        while i < origins.len() && origins[i] == head {
            i += 1;
        }
        let origin = match head {
            TokenOrigin::Embedded { .. } => SpanOrigin::EmbeddedEnglish,
            TokenOrigin::Transliterated => SpanOrigin::TransliteratedHindi,
            TokenOrigin::Verbatim => SpanOrigin::Verbatim,
        };
        spans.push(Span(start, i, origin));
    }
    spans
}

/// Replace any Devanagari code point that slipped through (mixed-script
/// tokens, danda marks in neutral tokens) so output script purity holds
/// unconditionally.
fn scrub_devanagari(surface: &str, table: &TranslitTable) -> Option<String> {
    if surface.chars().any(in_devanagari_block) {
        Some(transliterate_token(surface, table).0)
    } else {
        None
    }
}

struct Rendered {
    tokens: Vec<Token>,
    origins: Vec<TokenOrigin>,
}

impl Rendered {
    fn new() -> Self {
        Rendered { tokens: Vec::new(), origins: Vec::new() }
    }

    fn push_hindi(&mut self, token: &Token, table: &TranslitTable) {
        if token.script == Script::Devanagari {
            let (roman, _) = transliterate_token(&token.surface, table);
            self.tokens.push(Token::new(roman));
            self.origins.push(TokenOrigin::Transliterated);
        } else {
            let mut out = token.clone();
            if let Some(clean) = scrub_devanagari(&out.surface, table) {
                out = Token::new(clean);
            }
            self.tokens.push(out);
            self.origins.push(TokenOrigin::Verbatim);
        }
    }

    fn push_embedded(&mut self, surface: &str, replacement: usize, table: &TranslitTable) {
        let clean = scrub_devanagari(surface, table).unwrap_or_else(|| surface.to_string());
        self.tokens.push(Token::new(clean));
        self.origins.push(TokenOrigin::Embedded { replacement });
    }

    fn into_sentence(self, pair_id: &str, method: Method) -> GeneratedSentence {
        let spans = build_spans(&self.origins);
        GeneratedSentence {
            pair_id: pair_id.to_string(),
            method,
            tokens: self.tokens,
            spans,
        }
    }
}

/// Word-aligned generation: each Hindi token whose dictionary translation
/// matches an eligible (by POS) and unconsumed English token is replaced
/// by that token's surface; candidates are ranked by relative-position
/// proximity, ties to the smallest English index. The rest is
/// transliterated.
pub fn generate_wac(
    pair: &ParallelPair,
    dict: &BilingualDictionary,
    cfg: &GenerationConfig,
    table: &TranslitTable,
) -> GeneratedSentence {
    let len_hi = pair.hi.len();
    let len_en = pair.en.len();
    let mut consumed = vec![false; len_en];
    let mut rendered = Rendered::new();
    let mut replacements = 0usize;
    for (i, h_tok) in pair.hi.tokens.iter().enumerate() {
        let mut best: Option<(f64, usize)> = None;
        for (j, e_tok) in pair.en.tokens.iter().enumerate() {
            if consumed[j] {
                continue;
            }
            let eligible = e_tok
                .pos
                .as_ref()
                .is_some_and(|p| cfg.wac_pos_set.contains(p));
            if !eligible {
                continue;
            }
            if !dict.translates(&e_tok.surface, &h_tok.surface, cfg.embed_threshold) {
                continue;
            }
            let d = (i as f64 / len_hi as f64 - j as f64 / len_en as f64).abs();
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        match best {
            Some((_, j)) => {
                consumed[j] = true;
                rendered.push_embedded(&pair.en.tokens[j].surface, replacements, table);
                replacements += 1;
            }
            None => rendered.push_hindi(h_tok, table),
        }
    }
    rendered.into_sentence(&pair.id, Method::Wac)
}

/// Phrase-aligned generation: English keyphrases (longest first, then
/// best-scored) replace the first non-overlapping Hindi span of equal
/// length whose tokens are position-wise dictionary translations. The
/// rest is transliterated.
pub fn generate_pac(
    pair: &ParallelPair,
    dict: &BilingualDictionary,
    cfg: &GenerationConfig,
    table: &TranslitTable,
    stopwords: &Stopwords,
) -> GeneratedSentence {
    let document = vec![pair.en.clone()];
    let max_n = cfg.pac_max_n.clamp(1, 3);
    let mut phrases =
        extract(&document, stopwords, max_n, None).expect("clamped max_n is always valid");
    phrases.sort_by(|a, b| {
        b.len()
            .cmp(&a.len())
            .then(a.score.total_cmp(&b.score))
            .then(a.start.cmp(&b.start))
    });

    let len_hi = pair.hi.len();
    let mut replaced: Vec<Option<usize>> = vec![None; len_hi]; // position → phrase slot
    let mut chosen: Vec<(usize, Vec<String>)> = Vec::new(); // start → surfaces
    for phrase in &phrases {
        let n = phrase.len();
        if n > len_hi {
            continue;
        }
        let lowers: Vec<String> = phrase.tokens.iter().map(|t| t.to_lowercase()).collect();
        'starts: for s in 0..=(len_hi - n) {
            for k in 0..n {
                if replaced[s + k].is_some() {
                    continue 'starts;
                }
                if !dict.translates(
                    &lowers[k],
                    &pair.hi.tokens[s + k].surface,
                    cfg.embed_threshold,
                ) {
                    continue 'starts;
                }
            }
            let slot = chosen.len();
            for k in 0..n {
                replaced[s + k] = Some(slot);
            }
            chosen.push((s, phrase.tokens.clone()));
            break;
        }
    }

    let mut rendered = Rendered::new();
    let mut i = 0usize;
    while i < len_hi {
        match replaced[i] {
            Some(slot) if chosen[slot].0 == i => {
                let (_, surfaces) = &chosen[slot];
                for surface in surfaces {
                    rendered.push_embedded(surface, slot, table);
                }
                i += surfaces.len();
            }
            Some(_) => unreachable!("span interior reached without its start"),
            None => {
                rendered.push_hindi(&pair.hi.tokens[i], table);
                i += 1;
            }
        }
    }
    rendered.into_sentence(&pair.id, Method::Pac)
}

/// Which generator(s) to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    Wac,
    Pac,
    Both,
}

/// Corpus-level generation tallies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenerationSummary {
    pub outputs: usize,
    pub embedded_tokens: usize,
    pub total_tokens: usize,
    /// Outputs with no embedded span at all (pure transliteration).
    pub zero_replacement_count: usize,
}

impl GenerationSummary {
    /// Fraction of output tokens that are embedded English.
    pub fn replacement_rate(&self) -> f64 {
        if self.total_tokens == 0 {
            0.0
        } else {
            self.embedded_tokens as f64 / self.total_tokens as f64
        }
    }
}

/// Generate for every pair, in order; BOTH yields WAC then PAC per pair.
/// English sides are tagged before generation according to
/// `cfg.pos_source`.
pub fn generate_corpus(
    pairs: &[ParallelPair],
    method: MethodChoice,
    dict: &BilingualDictionary,
    cfg: &GenerationConfig,
    table: &TranslitTable,
    pos_lexicon: &PosLexicon,
    stopwords: &Stopwords,
) -> Result<(Vec<GeneratedSentence>, GenerationSummary)> {
    if !(1..=3).contains(&cfg.pac_max_n) {
        return Err(Error::InvalidArgument(format!(
            "pac_max_n must be 1..=3, got {}",
            cfg.pac_max_n
        )));
    }
    let per_pair: Vec<Vec<GeneratedSentence>> = pairs
        .par_iter()
        .map(|pair| {
            let mut tagged = pair.clone();
            tag_pos_en(&mut tagged.en, pos_lexicon, cfg.pos_source);
            let mut outputs = Vec::with_capacity(2);
            if matches!(method, MethodChoice::Wac | MethodChoice::Both) {
                outputs.push(generate_wac(&tagged, dict, cfg, table));
            }
            if matches!(method, MethodChoice::Pac | MethodChoice::Both) {
                outputs.push(generate_pac(&tagged, dict, cfg, table, stopwords));
            }
            outputs
        })
        .collect();

    let mut sentences = Vec::new();
    let mut summary = GenerationSummary::default();
    for outputs in per_pair {
        for s in outputs {
            summary.outputs += 1;
            summary.total_tokens += s.tokens.len();
            let embedded: usize = s
                .spans
                .iter()
                .filter(|sp| sp.origin() == SpanOrigin::EmbeddedEnglish)
                .map(|sp| sp.end() - sp.start())
                .sum();
            summary.embedded_tokens += embedded;
            if embedded == 0 {
                summary.zero_replacement_count += 1;
            }
            sentences.push(s);
        }
    }
    Ok((sentences, summary))
}
