//! Devanagari to Roman transliteration in the informal, diacritic-free
//! style common in Hindi text messaging ("घर" becomes "ghar", "है"
//! becomes "hai").
//!
//! Character romanizations live in a replaceable table; syllable
//! structure — inherent schwa insertion, word-final schwa deletion,
//! virama, nukta folding, and contextual nasals — is handled by rule.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::corpus::{in_devanagari_block, Script, Sentence, Token};
use crate::error::{Error, Result};

const VIRAMA: char = '\u{094D}';
const NUKTA: char = '\u{093C}';
const ANUSVARA: char = '\u{0902}';
const CANDRABINDU: char = '\u{0901}';
const VISARGA: char = '\u{0903}';

fn is_consonant(c: char) -> bool {
    ('\u{0915}'..='\u{0939}').contains(&c)
        || ('\u{0958}'..='\u{095F}').contains(&c)
        || ('\u{0979}'..='\u{097F}').contains(&c)
}

fn is_matra(c: char) -> bool {
    ('\u{093E}'..='\u{094C}').contains(&c)
        || c == '\u{093A}'
        || c == '\u{093B}'
        || c == '\u{094E}'
        || c == '\u{094F}'
        || ('\u{0955}'..='\u{0957}').contains(&c)
        || c == '\u{0962}'
        || c == '\u{0963}'
}

fn is_labial(c: char) -> bool {
    matches!(c, 'प' | 'फ' | 'ब' | 'भ' | 'म' | '\u{095E}')
}

/// Precomposed code point for consonant + nukta, where one exists.
fn precompose_nukta(c: char) -> Option<char> {
    Some(match c {
        'क' => '\u{0958}',
        'ख' => '\u{0959}',
        'ग' => '\u{095A}',
        'ज' => '\u{095B}',
        'ड' => '\u{095C}',
        'ढ' => '\u{095D}',
        'फ' => '\u{095E}',
        'य' => '\u{095F}',
        'न' => '\u{0929}',
        'र' => '\u{0931}',
        'ळ' => '\u{0934}',
        _ => return None,
    })
}

/// Character romanization table, keyed by single Devanagari code points.
#[derive(Debug, Clone)]
pub struct TranslitTable {
    map: BTreeMap<char, String>,
}

impl TranslitTable {
    /// Parse `char<TAB>roman` lines. `#` starts a comment; a missing or
    /// empty roman side deletes the character.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.splitn(2, '\t');
            let key = fields.next().unwrap_or("");
            let roman = fields.next().unwrap_or("");
            let mut key_chars = key.chars();
            let c = match (key_chars.next(), key_chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(Error::parse(
                        origin,
                        lineno,
                        format!("key {key:?} is not a single character"),
                    ))
                }
            };
            map.insert(c, roman.to_string());
        }
        Ok(TranslitTable { map })
    }

    /// Load a table from a TSV file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// The built-in table covering the full Devanagari alphabet.
    pub fn default_table() -> Self {
        Self::parse(
            include_str!("../resources/translit_table.tsv"),
            Path::new("<builtin>"),
        )
        .expect("built-in table parses")
    }

    pub fn lookup(&self, c: char) -> Option<&str> {
        self.map.get(&c).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Transliterate one token surface. Non-Devanagari characters pass
/// through unchanged; unmapped Devanagari characters become `?` and are
/// counted in the second return value.
pub fn transliterate_token(surface: &str, table: &TranslitTable) -> (String, usize) {
    let chars: Vec<char> = surface.chars().collect();
    let mut out = String::new();
    let mut unmapped = 0usize;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !in_devanagari_block(c) {
            out.push(c);
            i += 1;
            continue;
        }
        if is_consonant(c) {
            let mut consumed = 1;
            let roman: String = if chars.get(i + 1) == Some(&NUKTA) {
                consumed = 2;
                let folded = precompose_nukta(c).and_then(|p| table.lookup(p));
                match folded.or_else(|| table.lookup(c)) {
                    Some(r) => r.to_string(),
                    None => {
                        unmapped += 1;
                        "?".to_string()
                    }
                }
            } else {
                match table.lookup(c) {
                    Some(r) => r.to_string(),
                    None => {
                        unmapped += 1;
                        "?".to_string()
                    }
                }
            };
            out.push_str(&roman);
            match chars.get(i + consumed) {
                // word-final inherent vowel is dropped
                None => {}
                Some(&n) if n == VIRAMA || is_matra(n) => {}
                Some(_) => out.push('a'),
            }
            i += consumed;
        } else if c == VIRAMA || c == NUKTA {
            i += 1;
        } else if c == ANUSVARA || c == CANDRABINDU {
            let nasal = if c == ANUSVARA
                && matches!(chars.get(i + 1), Some(&n) if is_labial(n))
            {
                'm'
            } else {
                'n'
            };
            out.push(nasal);
            i += 1;
        } else if c == VISARGA {
            out.push('h');
            i += 1;
        } else {
            match table.lookup(c) {
                Some(r) => out.push_str(r),
                None => {
                    out.push('?');
                    unmapped += 1;
                }
            }
            i += 1;
        }
    }
    (out, unmapped)
}

/// Transliterate every Devanagari-script token of a sentence, passing
/// other tokens through byte-identical. Returns the new tokens and the
/// total count of unmapped characters.
pub fn transliterate_sentence(sentence: &Sentence, table: &TranslitTable) -> (Vec<Token>, usize) {
    let mut tokens = Vec::with_capacity(sentence.len());
    let mut unmapped = 0usize;
    for token in &sentence.tokens {
        if token.script == Script::Devanagari {
            let (roman, missed) = transliterate_token(&token.surface, table);
            unmapped += missed;
            let mut new_token = Token::new(roman);
            new_token.pos = token.pos.clone();
            tokens.push(new_token);
        } else {
            tokens.push(token.clone());
        }
    }
    (tokens, unmapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;

    fn roman(s: &str) -> String {
        transliterate_token(s, &TranslitTable::default_table()).0
    }

    #[test]
    fn basic_words() {
        assert_eq!(roman("घर"), "ghar");
        assert_eq!(roman("है"), "hai");
        assert_eq!(roman("नमस्ते"), "namaste");
        assert_eq!(roman("आधार"), "aadhar");
    }

    #[test]
    fn nukta_both_encodings() {
        // precomposed U+095C
        assert_eq!(roman("बड़ा"), "bada");
        // decomposed U+0921 U+093C
        assert_eq!(roman("बड\u{093C}ा"), "bada");
        assert_eq!(roman("ज़रा"), "zara");
    }

    #[test]
    fn nasals_are_contextual() {
        assert_eq!(roman("हिंदी"), "hindi");
        assert_eq!(roman("मैं"), "main");
        assert_eq!(roman("संगीत"), "sangit");
        assert_eq!(roman("लंबा"), "lamba");
    }

    #[test]
    fn virama_clusters() {
        assert_eq!(roman("स्कूल"), "skul");
        assert_eq!(roman("प्यार"), "pyar");
    }

    #[test]
    fn digits_map_to_ascii() {
        assert_eq!(roman("४२"), "42");
    }

    #[test]
    fn unmapped_becomes_question_mark() {
        let table = TranslitTable::parse("क\tk", Path::new("<test>")).unwrap();
        let (out, missed) = transliterate_token("कख", &table);
        assert_eq!(out, "ka?");
        assert_eq!(missed, 1);
    }

    #[test]
    fn non_devanagari_passes_through() {
        let (out, missed) = transliterate_token("house,", &TranslitTable::default_table());
        assert_eq!(out, "house,");
        assert_eq!(missed, 0);
    }

    #[test]
    fn sentence_level_pass_through_and_count() {
        let table = TranslitTable::default_table();
        let sentence = tokenize("the घर is बड़ा !");
        let (tokens, missed) = transliterate_sentence(&sentence, &table);
        let surfaces: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, vec!["the", "ghar", "is", "bada", "!"]);
        assert_eq!(missed, 0);
        assert!(tokens.iter().all(|t| t.script != Script::Devanagari));
    }

    #[test]
    fn default_table_covers_common_alphabet() {
        let table = TranslitTable::default_table();
        for c in "कखगघचछजझटठडढतथदधनपफबभमयरलवशषसह".chars() {
            assert!(table.lookup(c).is_some(), "missing consonant {c}");
        }
        for c in "अआइईउऊएऐओऔ".chars() {
            assert!(table.lookup(c).is_some(), "missing vowel {c}");
        }
    }
}
