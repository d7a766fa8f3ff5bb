//! Unsupervised word alignment with IBM Model 1 expectation-maximization,
//! yielding lexical translation probabilities and per-pair alignment
//! links for dictionary harvesting.
//!
//! English tokens are lowercased and a NULL token is prepended to every
//! English sentence so Hindi function words are not force-aligned to
//! content words. Training is deterministic: the parallel E-step splits
//! the corpus into fixed-size chunks whose partial counts are merged in
//! chunk order, so results are bit-identical regardless of thread count.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::corpus::{detect_script, ParallelPair, Script};
use crate::error::{Error, Result};

/// Reserved English-side token for "aligned to nothing". The tokenizer
/// strips edge punctuation, so this surface can never occur in a corpus.
pub const NULL_TOKEN: &str = "<NULL>";

/// Number of sentence pairs per E-step work unit (independent of the
/// thread count, so partial-count merge order is fixed).
const EM_CHUNK: usize = 512;

/// Sparse lexical translation table t(hindi | english).
#[derive(Debug, Clone)]
pub struct TranslationTable {
    english: Vec<String>,
    english_index: HashMap<String, u32>,
    hindi: Vec<String>,
    hindi_index: HashMap<String, u32>,
    /// per English index: Hindi index → probability
    t: Vec<BTreeMap<u32, f64>>,
    pub iterations: usize,
    /// corpus log-likelihood observed at the start of each iteration
    pub log_likelihood: Vec<f64>,
}

impl TranslationTable {
    /// t(hindi | english); english is matched case-insensitively except
    /// for the NULL token. Unknown words give 0.
    pub fn prob(&self, english: &str, hindi: &str) -> f64 {
        let e_key =
            if english == NULL_TOKEN { english.to_string() } else { english.to_lowercase() };
        let (Some(&e), Some(&h)) = (self.english_index.get(&e_key), self.hindi_index.get(hindi))
        else {
            return 0.0;
        };
        self.t[e as usize].get(&h).copied().unwrap_or(0.0)
    }

    pub fn english_vocab_size(&self) -> usize {
        self.english.len() - 1 // excluding NULL
    }

    pub fn hindi_vocab_size(&self) -> usize {
        self.hindi.len()
    }

    /// Iterate all entries as (english, hindi, prob), sorted by index
    /// order (NULL first).
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.t.iter().enumerate().flat_map(move |(e, row)| {
            row.iter()
                .map(move |(&h, &p)| (self.english[e].as_str(), self.hindi[h as usize].as_str(), p))
        })
    }

    /// Persist as TSV `english<TAB>hindi<TAB>prob`, keeping only entries
    /// with probability ≥ 1e-6 (sparsity cutoff for file size).
    pub fn save_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        for (e, h, p) in self.entries() {
            if p >= 1e-6 {
                writeln!(w, "{e}\t{h}\t{p}").map_err(|err| Error::io(path, err))?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Load a table saved by [`TranslationTable::save_tsv`]. Training
    /// metadata (iterations, likelihood trace) is not persisted.
    pub fn load_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut english = vec![NULL_TOKEN.to_string()];
        let mut english_index: HashMap<String, u32> = HashMap::new();
        english_index.insert(NULL_TOKEN.to_string(), 0);
        let mut hindi = Vec::new();
        let mut hindi_index: HashMap<String, u32> = HashMap::new();
        let mut t: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new()];
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::parse(path, lineno, "expected `english<TAB>hindi<TAB>prob`"));
            }
            let p: f64 = fields[2]
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad probability {:?}", fields[2])))?;
            let e = *english_index.entry(fields[0].to_string()).or_insert_with(|| {
                english.push(fields[0].to_string());
                t.push(BTreeMap::new());
                (english.len() - 1) as u32
            });
            let h = *hindi_index.entry(fields[1].to_string()).or_insert_with(|| {
                hindi.push(fields[1].to_string());
                (hindi.len() - 1) as u32
            });
            t[e as usize].insert(h, p);
        }
        Ok(TranslationTable {
            english,
            english_index,
            hindi,
            hindi_index,
            t,
            iterations: 0,
            log_likelihood: Vec::new(),
        })
    }
}

/// One alignment decision: a Hindi token linked to an English token index
/// (or NULL) with its posterior under the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub hindi_index: usize,
    pub english_index: Option<usize>,
    pub posterior: f64,
}

/// Alignment of one sentence pair: exactly one link per Hindi token.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentLinks {
    pub pair_id: String,
    pub links: Vec<Link>,
}

/// An aggregated aligned word pair surviving the count/probability gates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtractedPair {
    pub english: String,
    pub hindi: String,
    pub count: usize,
    pub prob: f64,
}

struct IndexedCorpus {
    english: Vec<String>,
    english_index: HashMap<String, u32>,
    hindi: Vec<String>,
    hindi_index: HashMap<String, u32>,
    /// per pair: (English indices with NULL prepended, Hindi indices)
    sentences: Vec<(Vec<u32>, Vec<u32>)>,
}

fn index_corpus(pairs: &[ParallelPair]) -> IndexedCorpus {
    let mut english = vec![NULL_TOKEN.to_string()];
    let mut english_index: HashMap<String, u32> = HashMap::new();
    english_index.insert(NULL_TOKEN.to_string(), 0);
    let mut hindi = Vec::new();
    let mut hindi_index: HashMap<String, u32> = HashMap::new();
    let mut sentences = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let mut en = Vec::with_capacity(pair.en.len() + 1);
        en.push(0u32);
        for token in &pair.en.tokens {
            let key = token.surface.to_lowercase();
            let idx = *english_index.entry(key.clone()).or_insert_with(|| {
                english.push(key.clone());
                (english.len() - 1) as u32
            });
            en.push(idx);
        }
        let mut hi = Vec::with_capacity(pair.hi.len());
        for token in &pair.hi.tokens {
            let key = token.surface.clone();
            let idx = *hindi_index.entry(key.clone()).or_insert_with(|| {
                hindi.push(key.clone());
                (hindi.len() - 1) as u32
            });
            hi.push(idx);
        }
        sentences.push((en, hi));
    }
    IndexedCorpus { english, english_index, hindi, hindi_index, sentences }
}

/// Train IBM Model 1 with `iterations` EM passes. The translation table
/// starts uniform at 1/|V_hi| over co-occurring pairs; the reported
/// log-likelihood sequence (one value per iteration, computed before that
/// iteration's update) is non-decreasing.
pub fn train_ibm1(pairs: &[ParallelPair], iterations: usize) -> Result<TranslationTable> {
    if pairs.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be ≥ 1".into()));
    }
    let corpus = index_corpus(pairs);
    let v_hi = corpus.hindi.len();
    let uniform = 1.0 / v_hi as f64;

    // sparse uniform init over co-occurring (e, h) — equivalent to a dense
    // uniform table for every quantity EM ever reads
    let mut t: Vec<BTreeMap<u32, f64>> = vec![BTreeMap::new(); corpus.english.len()];
    for (en, hi) in &corpus.sentences {
        for &e in en {
            for &h in hi {
                t[e as usize].entry(h).or_insert(uniform);
            }
        }
    }

    // per-chunk E-step output: pair counts, per-English totals, log-likelihood
    type ChunkCounts = (BTreeMap<(u32, u32), f64>, BTreeMap<u32, f64>, f64);

    let mut log_likelihood = Vec::with_capacity(iterations);
    for _ in 0..iterations {
        // E-step: expected counts and the likelihood of the current table
        let chunk_results: Vec<ChunkCounts> = corpus
            .sentences
            .par_chunks(EM_CHUNK)
            .map(|chunk| {
                let mut counts: BTreeMap<(u32, u32), f64> = BTreeMap::new();
                let mut totals: BTreeMap<u32, f64> = BTreeMap::new();
                let mut ll = 0.0f64;
                for (en, hi) in chunk {
                    let log_len = (en.len() as f64).ln();
                    for &h in hi {
                        let mut denom = 0.0;
                        for &e in en {
                            denom += t[e as usize].get(&h).copied().unwrap_or(0.0);
                        }
                        ll += denom.ln() - log_len;
                        for &e in en {
                            let p = t[e as usize].get(&h).copied().unwrap_or(0.0);
                            if p > 0.0 {
                                let share = p / denom;
                                *counts.entry((e, h)).or_insert(0.0) += share;
                                *totals.entry(e).or_insert(0.0) += share;
                            }
                        }
                    }
                }
                (counts, totals, ll)
            })
            .collect();

        let mut counts: BTreeMap<(u32, u32), f64> = BTreeMap::new();
        let mut totals: BTreeMap<u32, f64> = BTreeMap::new();
        let mut ll = 0.0;
        for (c, tot, l) in chunk_results {
            for (k, v) in c {
                *counts.entry(k).or_insert(0.0) += v;
            }
            for (k, v) in tot {
                *totals.entry(k).or_insert(0.0) += v;
            }
            ll += l;
        }
        log_likelihood.push(ll);

        // M-step: renormalize
        for row in &mut t {
            row.clear();
        }
        for ((e, h), c) in counts {
            let total = totals[&e];
            if total > 0.0 {
                t[e as usize].insert(h, c / total);
            }
        }
    }

    Ok(TranslationTable {
        english: corpus.english,
        english_index: corpus.english_index,
        hindi: corpus.hindi,
        hindi_index: corpus.hindi_index,
        t,
        iterations,
        log_likelihood,
    })
}

/// Link every Hindi token of a pair to its argmax English token (or
/// NULL). Ties prefer an English token over NULL and the smallest English
/// index among English candidates; tokens unseen in training link to NULL
/// with uniform fallback mass.
pub fn align_pair(pair: &ParallelPair, table: &TranslationTable) -> AlignmentLinks {
    let candidates = pair.en.len() + 1; // English tokens plus NULL
    let mut links = Vec::with_capacity(pair.hi.len());
    for (i, h_tok) in pair.hi.tokens.iter().enumerate() {
        let h = &h_tok.surface;
        if !table.hindi_index.contains_key(h) {
            links.push(Link {
                hindi_index: i,
                english_index: None,
                posterior: 1.0 / candidates as f64,
            });
            continue;
        }
        let mut best_score = table.prob(NULL_TOKEN, h);
        let mut best_j: Option<usize> = None;
        let mut sum = best_score;
        for (j, e_tok) in pair.en.tokens.iter().enumerate() {
            let s = table.prob(&e_tok.surface, h);
            sum += s;
            if s > best_score || (s == best_score && best_j.is_none() && s > 0.0) {
                best_score = s;
                best_j = Some(j);
            }
        }
        let posterior = if sum > 0.0 { best_score / sum } else { 1.0 / candidates as f64 };
        links.push(Link { hindi_index: i, english_index: best_j, posterior });
    }
    AlignmentLinks { pair_id: pair.id.clone(), links }
}

/// Aggregate non-NULL links into word pairs, keeping those seen at least
/// `min_count` times with table probability at least `min_prob`. Only
/// Latin-script English and Devanagari Hindi surfaces are emitted, so
/// punctuation never reaches the dictionary.
pub fn extract_pairs(
    all_links: &[AlignmentLinks],
    pairs: &[ParallelPair],
    table: &TranslationTable,
    min_count: usize,
    min_prob: f64,
) -> Result<Vec<ExtractedPair>> {
    if min_count < 1 {
        return Err(Error::InvalidArgument("min_count must be ≥ 1".into()));
    }
    if !(min_prob > 0.0 && min_prob <= 1.0) {
        return Err(Error::InvalidArgument("min_prob must be in (0, 1]".into()));
    }
    if all_links.len() != pairs.len() {
        return Err(Error::LengthMismatch { left: all_links.len(), right: pairs.len() });
    }
    let mut counts: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (links, pair) in all_links.iter().zip(pairs) {
        for link in &links.links {
            let Some(j) = link.english_index else { continue };
            let english = pair.en.tokens[j].surface.to_lowercase();
            let hindi = pair.hi.tokens[link.hindi_index].surface.clone();
            if detect_script(&english) != Script::Latin
                || detect_script(&hindi) != Script::Devanagari
            {
                continue;
            }
            *counts.entry((english, hindi)).or_insert(0) += 1;
        }
    }
    let mut out = Vec::new();
    for ((english, hindi), count) in counts {
        if count < min_count {
            continue;
        }
        let prob = table.prob(&english, &hindi);
        if prob < min_prob {
            continue;
        }
        out.push(ExtractedPair { english, hindi, count, prob });
    }
    Ok(out)
}
