//! Canonical data model and file I/O for parallel corpora, generated
//! sentences, and human ratings.
//!
//! Tokenization is whitespace splitting plus detachment of leading/trailing
//! punctuation; every token carries the majority script of its characters.
//! All types are immutable after construction.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Script category of a character or token.
///
/// Every Unicode code point maps to exactly one category. The Devanagari
/// block is U+0900..=U+097F, except the danda punctuation marks which are
/// treated as neutral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Script {
    Latin,
    Devanagari,
    Neutral,
}

const DANDA: char = '\u{0964}';
const DOUBLE_DANDA: char = '\u{0965}';

/// True for code points in the Devanagari block (danda marks included).
pub fn in_devanagari_block(c: char) -> bool {
    ('\u{0900}'..='\u{097F}').contains(&c)
}

/// Classify a single code point.
pub fn classify_char(c: char) -> Script {
    if c == DANDA || c == DOUBLE_DANDA {
        return Script::Neutral;
    }
    if in_devanagari_block(c) {
        return Script::Devanagari;
    }
    if c.is_alphabetic() && is_latin_range(c) {
        return Script::Latin;
    }
    Script::Neutral
}

fn is_latin_range(c: char) -> bool {
    c.is_ascii_alphabetic()
        || ('\u{00C0}'..='\u{024F}').contains(&c)
        || ('\u{1E00}'..='\u{1EFF}').contains(&c)
}

/// Majority script over the letter characters of a token surface.
///
/// Ties go to Devanagari so mixed tokens get transliterated rather than
/// leaking raw Devanagari into generator output. No letters at all means
/// `Neutral`.
pub fn detect_script(surface: &str) -> Script {
    let mut latin = 0usize;
    let mut devanagari = 0usize;
    for c in surface.chars() {
        match classify_char(c) {
            Script::Latin => latin += 1,
            Script::Devanagari => devanagari += 1,
            Script::Neutral => {}
        }
    }
    if latin == 0 && devanagari == 0 {
        Script::Neutral
    } else if latin > devanagari {
        Script::Latin
    } else {
        Script::Devanagari
    }
}

/// A single token: surface form, script, optional part-of-speech tag.
///
/// POS tags are an open set; the generators only distinguish `NOUN` and
/// `ADJ` from everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub script: Script,
    pub pos: Option<String>,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let script = detect_script(&surface);
        Token { surface, script, pos: None }
    }

    pub fn with_pos(mut self, pos: impl Into<String>) -> Self {
        self.pos = Some(pos.into());
        self
    }
}

/// An ordered token sequence plus the original text it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub raw: String,
}

impl Sentence {
    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    /// Space-joined surfaces. Re-tokenizing the result recovers the same
    /// token sequence.
    pub fn detokenize(&self) -> String {
        let surfaces: Vec<&str> = self.tokens.iter().map(|t| t.surface.as_str()).collect();
        surfaces.join(" ")
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }
}

fn is_word_char(c: char) -> bool {
    if c == DANDA || c == DOUBLE_DANDA {
        return false;
    }
    c.is_alphanumeric() || in_devanagari_block(c)
}

/// Whitespace tokenization with leading/trailing punctuation detached as
/// single-character neutral tokens. Deterministic; empty text yields an
/// empty sentence.
pub fn tokenize(text: &str) -> Sentence {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut start = 0;
        let mut end = chars.len();
        while start < end && !is_word_char(chars[start]) {
            start += 1;
        }
        while end > start && !is_word_char(chars[end - 1]) {
            end -= 1;
        }
        for &c in &chars[..start] {
            tokens.push(Token::new(c.to_string()));
        }
        if start < end {
            tokens.push(Token::new(chars[start..end].iter().collect::<String>()));
        }
        for &c in &chars[end..] {
            tokens.push(Token::new(c.to_string()));
        }
    }
    Sentence { tokens, raw: text.to_string() }
}

/// A parallel English-Hindi sentence pair, the unit of generation.
#[derive(Debug, Clone)]
pub struct ParallelPair {
    pub id: String,
    pub en: Sentence,
    pub hi: Sentence,
}

impl ParallelPair {
    /// Tokenize and validate a pair. The English side must be free of
    /// Devanagari tokens and the Hindi side must contain at least one.
    pub fn new(id: impl Into<String>, en_text: &str, hi_text: &str) -> std::result::Result<Self, String> {
        let en = tokenize(en_text);
        let hi = tokenize(hi_text);
        if en.is_empty() {
            return Err("empty English sentence".into());
        }
        if hi.is_empty() {
            return Err("empty Hindi sentence".into());
        }
        if en.tokens.iter().any(|t| t.script == Script::Devanagari) {
            return Err("Devanagari token in English sentence".into());
        }
        if !hi.tokens.iter().any(|t| t.script == Script::Devanagari) {
            return Err("no Devanagari token in Hindi sentence".into());
        }
        Ok(ParallelPair { id: id.into(), en, hi })
    }
}

/// Generation method tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "WAC")]
    Wac,
    #[serde(rename = "PAC")]
    Pac,
    #[serde(rename = "HUMAN")]
    Human,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Wac => "WAC",
            Method::Pac => "PAC",
            Method::Human => "HUMAN",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Provenance of a token span in a generated sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpanOrigin {
    #[serde(rename = "embedded-english")]
    EmbeddedEnglish,
    #[serde(rename = "transliterated-hindi")]
    TransliteratedHindi,
    #[serde(rename = "verbatim")]
    Verbatim,
}

/// Half-open token range `[start, end)` with its origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span(pub usize, pub usize, pub SpanOrigin);

impl Span {
    pub fn start(&self) -> usize {
        self.0
    }
    pub fn end(&self) -> usize {
        self.1
    }
    pub fn origin(&self) -> SpanOrigin {
        self.2
    }
}

/// A generated (or human reference) Hinglish sentence with per-span
/// provenance. Spans partition the token range.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSentence {
    pub pair_id: String,
    pub method: Method,
    pub tokens: Vec<Token>,
    pub spans: Vec<Span>,
}

impl GeneratedSentence {
    pub fn text(&self) -> String {
        let surfaces: Vec<&str> = self.tokens.iter().map(|t| t.surface.as_str()).collect();
        surfaces.join(" ")
    }

    /// Identifier used in score reports and rating files.
    pub fn sentence_id(&self) -> String {
        format!("{}#{}", self.pair_id, self.method)
    }

    /// Check that spans are sorted, non-empty and exactly cover `[0, len)`.
    pub fn spans_partition_tokens(&self) -> bool {
        let mut next = 0usize;
        for span in &self.spans {
            if span.start() != next || span.end() <= span.start() {
                return false;
            }
            next = span.end();
        }
        next == self.tokens.len()
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratedRecord {
    pair_id: String,
    method: Method,
    text: String,
    spans: Vec<Span>,
}

/// Human rating scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scale {
    #[serde(rename = "QUALITY")]
    Quality,
    #[serde(rename = "DCM")]
    Dcm,
    #[serde(rename = "RA")]
    Ra,
    #[serde(rename = "LABEL")]
    Label,
}

impl Scale {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scale::Quality => "QUALITY",
            Scale::Dcm => "DCM",
            Scale::Ra => "RA",
            Scale::Label => "LABEL",
        }
    }
}

/// Correct/Incorrect verdict for LABEL-scale ratings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Correct,
    Incorrect,
}

/// Rating payload: an integer score or a verdict label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatingValue {
    Score(u8),
    Label(Verdict),
}

/// One rating by one rater on one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub sentence_id: String,
    pub rater_id: String,
    pub scale: Scale,
    pub value: RatingValue,
}

impl RatingRecord {
    /// Bounds check: QUALITY in 1..=10, DCM and RA in 0..=10, LABEL must
    /// carry a verdict.
    pub fn validate(&self) -> std::result::Result<(), String> {
        match (self.scale, self.value) {
            (Scale::Quality, RatingValue::Score(v)) if (1..=10).contains(&v) => Ok(()),
            (Scale::Quality, RatingValue::Score(v)) => {
                Err(format!("QUALITY value {v} out of range 1..=10"))
            }
            (Scale::Dcm | Scale::Ra, RatingValue::Score(v)) if v <= 10 => Ok(()),
            (Scale::Dcm | Scale::Ra, RatingValue::Score(v)) => {
                Err(format!("{} value {v} out of range 0..=10", self.scale.as_str()))
            }
            (Scale::Label, RatingValue::Label(_)) => Ok(()),
            (Scale::Label, RatingValue::Score(v)) => {
                Err(format!("LABEL value must be Correct/Incorrect, got {v}"))
            }
            (_, RatingValue::Label(_)) => {
                Err(format!("{} value must be an integer", self.scale.as_str()))
            }
        }
    }

    pub fn score(&self) -> Option<u8> {
        match self.value {
            RatingValue::Score(v) => Some(v),
            RatingValue::Label(_) => None,
        }
    }

    pub fn verdict(&self) -> Option<Verdict> {
        match self.value {
            RatingValue::Score(_) => None,
            RatingValue::Label(v) => Some(v),
        }
    }
}

/// A record that failed validation during a lenient load.
#[derive(Debug, Clone)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

/// Result of a lenient loader: valid records plus per-line rejects.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub records: Vec<T>,
    pub rejects: Vec<Reject>,
}

impl<T> Loaded<T> {
    pub fn skipped(&self) -> usize {
        self.rejects.len()
    }
}

/// Input format for parallel corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairFormat {
    Tsv,
    Jsonl,
}

#[derive(Deserialize)]
struct PairRecord {
    id: String,
    en: String,
    hi: String,
}

/// Load parallel pairs from TSV (`id<TAB>english<TAB>hindi`) or JSONL
/// (`{"id":..,"en":..,"hi":..}`). Records violating pair invariants are
/// skipped and counted, not fatal.
pub fn load_parallel(path: impl AsRef<Path>, format: PairFormat) -> Result<Loaded<ParallelPair>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut rejects = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: std::result::Result<ParallelPair, String> = match format {
            PairFormat::Tsv => {
                let mut fields = line.splitn(3, '\t');
                match (fields.next(), fields.next(), fields.next()) {
                    (Some(id), Some(en), Some(hi)) => ParallelPair::new(id, en, hi),
                    _ => Err("expected 3 tab-separated fields".into()),
                }
            }
            PairFormat::Jsonl => serde_json::from_str::<PairRecord>(&line)
                .map_err(|e| e.to_string())
                .and_then(|r| ParallelPair::new(r.id, &r.en, &r.hi)),
        };
        match parsed {
            Ok(pair) => records.push(pair),
            Err(reason) => rejects.push(Reject { line: lineno, reason }),
        }
    }
    Ok(Loaded { records, rejects })
}

/// Load rating records, rejecting out-of-range values with their line
/// numbers.
pub fn load_ratings(path: impl AsRef<Path>) -> Result<Loaded<RatingRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut rejects = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RatingRecord>(&line) {
            Ok(record) => match record.validate() {
                Ok(()) => records.push(record),
                Err(reason) => rejects.push(Reject { line: lineno, reason }),
            },
            Err(e) => rejects.push(Reject { line: lineno, reason: e.to_string() }),
        }
    }
    Ok(Loaded { records, rejects })
}

/// Save rating records as JSONL, one object per line.
pub fn save_ratings(path: impl AsRef<Path>, records: &[RatingRecord]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for record in records {
        let json = serde_json::to_string(record).expect("rating record serializes");
        writeln!(writer, "{json}").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Save generated sentences as JSONL
/// (`{"pair_id":..,"method":..,"text":..,"spans":[[start,end,origin],..]}`).
pub fn save_generated(path: impl AsRef<Path>, sentences: &[GeneratedSentence]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for sentence in sentences {
        let record = GeneratedRecord {
            pair_id: sentence.pair_id.clone(),
            method: sentence.method,
            text: sentence.text(),
            spans: sentence.spans.clone(),
        };
        let json = serde_json::to_string(&record).expect("generated record serializes");
        writeln!(writer, "{json}").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Load generated sentences. Strict: a malformed line or a span list that
/// does not partition the token range is a parse error.
pub fn load_generated(path: impl AsRef<Path>) -> Result<Vec<GeneratedSentence>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut sentences = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: GeneratedRecord = serde_json::from_str(&line)
            .map_err(|e| Error::parse(path, lineno, e.to_string()))?;
        let tokens: Vec<Token> = record.text.split_whitespace().map(Token::new).collect();
        let sentence = GeneratedSentence {
            pair_id: record.pair_id,
            method: record.method,
            tokens,
            spans: record.spans,
        };
        if !sentence.spans_partition_tokens() {
            return Err(Error::parse(path, lineno, "spans do not partition token range"));
        }
        sentences.push(sentence);
    }
    Ok(sentences)
}
