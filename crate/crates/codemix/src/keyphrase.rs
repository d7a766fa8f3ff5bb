//! Unsupervised single-document keyphrase extraction for candidate
//! phrases of up to three tokens, in the style of statistical keyword
//! extractors: each word is scored from five corpus statistics and
//! phrases combine word scores multiplicatively. Lower scores mean more
//! important.
//!
//! Word score: `S(w) = rel · pos / (casing + tf_norm/rel + disp/rel)`
//! with `casing = max(tf_acronym, tf_capitalized)/tf`,
//! `pos = ln(ln(3 + median occurrence index))`,
//! `tf_norm = tf / (mean_tf + stddev_tf)`,
//! `rel = 1 + (DL + DR) · tf / max_tf` over a ±2 token window, and
//! `disp` the fraction of sentences containing the word.
//!
//! Phrase score: `S(kw) = Π S(w) / (TF(kw) · (1 + Σ S(w)))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::corpus::{Script, Sentence};
use crate::error::{Error, Result};

/// Lowercased stopword set; phrases may not start or end with one.
#[derive(Debug, Clone, Default)]
pub struct Stopwords {
    set: BTreeSet<String>,
}

impl Stopwords {
    pub fn from_lines(text: &str) -> Self {
        let set = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_lowercase())
            .collect();
        Stopwords { set }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::from_lines(&text))
    }

    /// Bundled English list.
    pub fn default_english() -> Self {
        Self::from_lines(include_str!("../resources/stopwords_en.txt"))
    }

    /// Bundled romanized-Hindi list.
    pub fn default_hindi_latin() -> Self {
        Self::from_lines(include_str!("../resources/stopwords_hi_latin.txt"))
    }

    /// Union of this list and another.
    pub fn union(&self, other: &Stopwords) -> Self {
        let set = self.set.union(&other.set).cloned().collect();
        Stopwords { set }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.set.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// Per-word statistics and the combined score.
#[derive(Debug, Clone, PartialEq)]
pub struct TermScore {
    pub tf: usize,
    pub casing: f64,
    pub position: f64,
    pub tf_norm: f64,
    pub relatedness: f64,
    pub dispersion: f64,
    pub score: f64,
}

/// A scored contiguous phrase; `span` indexes tokens of one sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Keyphrase {
    /// Surfaces of the first occurrence.
    pub tokens: Vec<String>,
    pub score: f64,
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
}

impl Keyphrase {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn text(&self) -> String {
        self.tokens.join(" ")
    }
}

const WINDOW: usize = 2;

fn is_acronym(surface: &str) -> bool {
    surface.chars().count() > 1
        && surface.chars().any(char::is_alphabetic)
        && surface.chars().all(|c| !c.is_lowercase())
}

fn is_capitalized(surface: &str) -> bool {
    surface.chars().next().is_some_and(char::is_uppercase) && !is_acronym(surface)
}

struct Occurrence {
    sentence: usize,
    global: usize,
}

/// Score every distinct word (by lowercased surface) of a document. An
/// empty document yields an empty map.
pub fn score_terms(document: &[Sentence]) -> BTreeMap<String, TermScore> {
    let mut occurrences: BTreeMap<String, Vec<Occurrence>> = BTreeMap::new();
    let mut acronyms: BTreeMap<String, usize> = BTreeMap::new();
    let mut capitalized: BTreeMap<String, usize> = BTreeMap::new();
    let mut left_neighbors: BTreeMap<String, (BTreeSet<String>, usize)> = BTreeMap::new();
    let mut right_neighbors: BTreeMap<String, (BTreeSet<String>, usize)> = BTreeMap::new();
    let mut global = 0usize;
    for (s, sentence) in document.iter().enumerate() {
        let lowers: Vec<String> =
            sentence.tokens.iter().map(|t| t.surface.to_lowercase()).collect();
        for (i, token) in sentence.tokens.iter().enumerate() {
            let word = lowers[i].clone();
            occurrences
                .entry(word.clone())
                .or_default()
                .push(Occurrence { sentence: s, global });
            if is_acronym(&token.surface) {
                *acronyms.entry(word.clone()).or_insert(0) += 1;
            } else if i > 0 && is_capitalized(&token.surface) {
                *capitalized.entry(word.clone()).or_insert(0) += 1;
            }
            let lo = i.saturating_sub(WINDOW);
            let left = left_neighbors.entry(word.clone()).or_default();
            for neighbor in &lowers[lo..i] {
                left.0.insert(neighbor.clone());
                left.1 += 1;
            }
            let hi = (i + 1 + WINDOW).min(sentence.tokens.len());
            let right = right_neighbors.entry(word.clone()).or_default();
            for neighbor in &lowers[i + 1..hi] {
                right.0.insert(neighbor.clone());
                right.1 += 1;
            }
            global += 1;
        }
    }
    if occurrences.is_empty() {
        return BTreeMap::new();
    }

    let tfs: Vec<f64> = occurrences.values().map(|o| o.len() as f64).collect();
    let mean_tf = tfs.iter().sum::<f64>() / tfs.len() as f64;
    let var = tfs.iter().map(|t| (t - mean_tf) * (t - mean_tf)).sum::<f64>() / tfs.len() as f64;
    let std_tf = var.sqrt();
    let max_tf = tfs.iter().cloned().fold(0.0, f64::max);
    let sentences_total = document.len() as f64;

    let mut out = BTreeMap::new();
    for (word, occs) in &occurrences {
        let tf = occs.len();
        let tf_f = tf as f64;
        let casing = acronyms
            .get(word)
            .copied()
            .unwrap_or(0)
            .max(capitalized.get(word).copied().unwrap_or(0)) as f64
            / tf_f;
        let median = {
            let mut positions: Vec<usize> = occs.iter().map(|o| o.global).collect();
            positions.sort_unstable();
            let n = positions.len();
            if n % 2 == 1 {
                positions[n / 2] as f64
            } else {
                (positions[n / 2 - 1] + positions[n / 2]) as f64 / 2.0
            }
        };
        let position = (3.0 + median).ln().ln();
        let tf_norm = tf_f / (mean_tf + std_tf);
        let (dl_set, dl_total) = left_neighbors.get(word).cloned().unwrap_or_default();
        let (dr_set, dr_total) = right_neighbors.get(word).cloned().unwrap_or_default();
        let dl = if dl_total > 0 { dl_set.len() as f64 / dl_total as f64 } else { 0.0 };
        let dr = if dr_total > 0 { dr_set.len() as f64 / dr_total as f64 } else { 0.0 };
        let relatedness = 1.0 + (dl + dr) * tf_f / max_tf;
        let sentences_with: BTreeSet<usize> = occs.iter().map(|o| o.sentence).collect();
        let dispersion = sentences_with.len() as f64 / sentences_total;
        let score =
            relatedness * position / (casing + tf_norm / relatedness + dispersion / relatedness);
        out.insert(
            word.clone(),
            TermScore { tf, casing, position, tf_norm, relatedness, dispersion, score },
        );
    }
    out
}

/// Score one phrase identity given per-word scores and its frequency.
fn phrase_score(words: &[String], term_scores: &BTreeMap<String, TermScore>, tf: usize) -> f64 {
    let mut product = 1.0;
    let mut sum = 0.0;
    for w in words {
        let s = term_scores.get(w).map(|t| t.score).unwrap_or(0.0);
        product *= s;
        sum += s;
    }
    product / (tf as f64 * (1.0 + sum))
}

/// Extract candidate phrases of 1..=`max_n` contiguous tokens, excluding
/// candidates containing punctuation/neutral tokens or a boundary
/// stopword. Distinct lowercased identities are scored once and returned
/// ascending by score (ties by first occurrence), truncated to `top_k`
/// when given.
pub fn extract(
    document: &[Sentence],
    stopwords: &Stopwords,
    max_n: usize,
    top_k: Option<usize>,
) -> Result<Vec<Keyphrase>> {
    if !(1..=3).contains(&max_n) {
        return Err(Error::InvalidArgument(format!("max_n must be 1..=3, got {max_n}")));
    }
    let term_scores = score_terms(document);

    struct Candidate {
        tokens: Vec<String>,
        words: Vec<String>,
        tf: usize,
        sentence: usize,
        start: usize,
        end: usize,
    }
    let mut candidates: BTreeMap<Vec<String>, Candidate> = BTreeMap::new();
    for (s, sentence) in document.iter().enumerate() {
        for start in 0..sentence.tokens.len() {
            for n in 1..=max_n {
                let end = start + n;
                if end > sentence.tokens.len() {
                    break;
                }
                let slice = &sentence.tokens[start..end];
                if slice.iter().any(|t| t.script == Script::Neutral) {
                    continue;
                }
                if stopwords.contains(&slice[0].surface)
                    || stopwords.contains(&slice[n - 1].surface)
                {
                    continue;
                }
                let words: Vec<String> =
                    slice.iter().map(|t| t.surface.to_lowercase()).collect();
                match candidates.get_mut(&words) {
                    Some(c) => c.tf += 1,
                    None => {
                        candidates.insert(
                            words.clone(),
                            Candidate {
                                tokens: slice.iter().map(|t| t.surface.clone()).collect(),
                                words,
                                tf: 1,
                                sentence: s,
                                start,
                                end,
                            },
                        );
                    }
                }
            }
        }
    }

    let mut phrases: Vec<Keyphrase> = candidates
        .into_values()
        .map(|c| Keyphrase {
            score: phrase_score(&c.words, &term_scores, c.tf),
            tokens: c.tokens,
            sentence: c.sentence,
            start: c.start,
            end: c.end,
        })
        .collect();
    phrases.sort_by(|a, b| {
        a.score
            .total_cmp(&b.score)
            .then(a.sentence.cmp(&b.sentence))
            .then(a.start.cmp(&b.start))
            .then(a.end.cmp(&b.end))
    });
    if let Some(k) = top_k {
        phrases.truncate(k);
    }
    Ok(phrases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tokenize;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_document_yields_nothing() {
        assert!(score_terms(&[]).is_empty());
        let out = extract(&[], &Stopwords::default_english(), 3, None).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn repeated_word_document() {
        let doc = vec![tokenize("rain rain rain")];
        let scores = score_terms(&doc);
        assert_eq!(scores.len(), 1);
        let term = &scores["rain"];
        assert_eq!(term.tf, 3);
        assert_abs_diff_eq!(term.dispersion, 1.0);
        let phrases = extract(&doc, &Stopwords::default_english(), 1, None).unwrap();
        assert_eq!(phrases.len(), 1);
        assert_eq!(phrases[0].text(), "rain");
    }

    #[test]
    fn single_word_document_is_sole_keyphrase() {
        let doc = vec![tokenize("monsoon")];
        let phrases = extract(&doc, &Stopwords::default_english(), 3, None).unwrap();
        assert_eq!(phrases.len(), 1);
        assert_eq!(phrases[0].text(), "monsoon");
        assert_eq!((phrases[0].start, phrases[0].end), (0, 1));
    }

    #[test]
    fn hand_computed_two_sentence_fixture() {
        // "heavy rain today" / "heavy wind today" — by-hand feature table
        let doc = vec![tokenize("heavy rain today"), tokenize("heavy wind today")];
        let scores = score_terms(&doc);
        // tf: heavy 2, rain 1, wind 1, today 2 → mean 1.5, var 0.25, std 0.5
        let mean_std = 2.0;
        let heavy = &scores["heavy"];
        assert_eq!(heavy.tf, 2);
        assert_abs_diff_eq!(heavy.tf_norm, 2.0 / mean_std, epsilon = 1e-12);
        // positions 0 and 3 → median 1.5; pos = ln(ln(4.5))
        assert_abs_diff_eq!(heavy.position, 4.5f64.ln().ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(heavy.casing, 0.0);
        assert_abs_diff_eq!(heavy.dispersion, 1.0);
        // left: none; right windows cover {rain, today, wind}: 2 slots each
        // occurrence, distinct {rain,today} and {wind,today} → 3 distinct / 4
        let dr = 3.0 / 4.0;
        let rel = 1.0 + (0.0 + dr) * 2.0 / 2.0;
        assert_abs_diff_eq!(heavy.relatedness, rel, epsilon = 1e-12);
        let expected = rel * 4.5f64.ln().ln() / (0.0 + (2.0 / mean_std) / rel + 1.0 / rel);
        assert_abs_diff_eq!(heavy.score, expected, epsilon = 1e-12);

        let rain = &scores["rain"];
        assert_eq!(rain.tf, 1);
        // occurrence at global 1 → pos = ln(ln(4))
        assert_abs_diff_eq!(rain.position, 4.0f64.ln().ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(rain.dispersion, 0.5);
    }

    #[test]
    fn phrase_scoring_matches_formula() {
        let doc = vec![tokenize("heavy rain today"), tokenize("heavy wind today")];
        let scores = score_terms(&doc);
        let phrases = extract(&doc, &Stopwords::default_english(), 2, None).unwrap();
        let heavy_rain = phrases.iter().find(|p| p.text() == "heavy rain").unwrap();
        let s_h = scores["heavy"].score;
        let s_r = scores["rain"].score;
        assert_abs_diff_eq!(
            heavy_rain.score,
            s_h * s_r / (1.0 * (1.0 + s_h + s_r)),
            epsilon = 1e-12
        );
        assert!(phrases.iter().all(|p| p.len() <= 2));
    }

    #[test]
    fn boundary_stopwords_and_punctuation_excluded() {
        let doc = vec![tokenize("the heavy rain , today")];
        let sw = Stopwords::default_english();
        let phrases = extract(&doc, &sw, 3, None).unwrap();
        for p in &phrases {
            assert!(!sw.contains(&p.tokens[0]));
            assert!(!sw.contains(&p.tokens[p.tokens.len() - 1]));
            assert!(!p.tokens.iter().any(|t| t == ","));
        }
        assert!(phrases.iter().any(|p| p.text() == "heavy rain"));
        // "rain , today" must not appear (crosses punctuation)
        assert!(!phrases.iter().any(|p| p.text().contains(',')));
    }

    #[test]
    fn interior_stopwords_are_allowed() {
        let doc = vec![tokenize("ministry of finance")];
        let phrases = extract(&doc, &Stopwords::default_english(), 3, None).unwrap();
        assert!(phrases.iter().any(|p| p.text() == "ministry of finance"));
        assert!(!phrases.iter().any(|p| p.text() == "of finance"));
    }

    #[test]
    fn output_sorted_ascending_with_stable_ties() {
        let doc = vec![tokenize("alpha beta alpha beta")];
        let phrases = extract(&doc, &Stopwords::default_english(), 2, None).unwrap();
        for w in phrases.windows(2) {
            assert!(w[0].score <= w[1].score);
        }
        // identical identities are merged: "alpha beta" occurs twice but is
        // listed once with tf 2
        let ab: Vec<&Keyphrase> = phrases.iter().filter(|p| p.text() == "alpha beta").collect();
        assert_eq!(ab.len(), 1);
        assert_eq!((ab[0].sentence, ab[0].start), (0, 0));
    }

    #[test]
    fn top_k_truncates() {
        let doc = vec![tokenize("one two three four five")];
        let all = extract(&doc, &Stopwords::default_english(), 3, None).unwrap();
        let top = extract(&doc, &Stopwords::default_english(), 3, Some(2)).unwrap();
        assert_eq!(top.len(), 2);
        assert_eq!(top[0], all[0]);
        assert_eq!(top[1], all[1]);
    }

    #[test]
    fn acronym_and_capitalization_detection() {
        assert!(is_acronym("NASA"));
        assert!(!is_acronym("N"));
        assert!(!is_acronym("Nasa"));
        assert!(is_capitalized("Delhi"));
        assert!(!is_capitalized("delhi"));
        assert!(!is_capitalized("NASA"));
        let doc = vec![tokenize("agency NASA launched"), tokenize("NASA agency again")];
        let scores = score_terms(&doc);
        // acronym at both occurrences → casing = 2/2
        assert_abs_diff_eq!(scores["nasa"].casing, 1.0);
    }

    #[test]
    fn bad_max_n_rejected() {
        let doc = vec![tokenize("a b")];
        assert!(extract(&doc, &Stopwords::default_english(), 0, None).is_err());
        assert!(extract(&doc, &Stopwords::default_english(), 4, None).is_err());
    }

    #[test]
    fn stopword_loading_and_union() {
        let en = Stopwords::default_english();
        let hi = Stopwords::default_hindi_latin();
        assert!(en.contains("the"));
        assert!(en.contains("The"));
        assert!(hi.contains("hai"));
        let both = en.union(&hi);
        assert!(both.contains("the") && both.contains("hai"));
        assert_eq!(both.len(), en.len() + hi.len() - {
            // overlap between the two bundled lists
            en_hi_overlap(&en, &hi)
        });
    }

    fn en_hi_overlap(en: &Stopwords, hi: &Stopwords) -> usize {
        en.set.intersection(&hi.set).count()
    }
}
