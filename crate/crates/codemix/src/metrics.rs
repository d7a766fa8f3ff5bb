//! Token-level machine-translation metrics with multi-reference support:
//! BLEU, NIST, WER, TER, and a greedy-match embedding F1.
//!
//! All functions are pure and deterministic. Scoring is case-sensitive
//! over the corpus tokenizer's output: romanized-Hindi spelling variation
//! is part of what these scores are meant to expose, so no normalization
//! is applied.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embed::{dot, VectorStore};
use crate::error::{Error, Result};

/// Knobs for corpus scoring.
#[derive(Debug, Clone)]
pub struct MetricConfig {
    /// Highest n-gram order for BLEU.
    pub bleu_n: usize,
    /// Highest n-gram order for NIST.
    pub nist_n: usize,
    /// Longest block a TER shift may move.
    pub ter_block: usize,
}

impl Default for MetricConfig {
    fn default() -> Self {
        MetricConfig { bleu_n: 4, nist_n: 5, ter_block: 10 }
    }
}

const BLEU_EPS: f64 = 1e-9;

/// Per-sentence metric values. `embed` is absent when neither side has
/// any vector or string match to anchor the greedy matching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceScore {
    pub bleu: f64,
    pub nist: f64,
    pub wer: f64,
    pub ter: f64,
    pub embed: Option<f64>,
}

/// Corpus-level metric values: pooled counts for BLEU/NIST, edit sums
/// over length sums for WER/TER, mean for the embedding score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusScore {
    pub bleu: f64,
    pub nist: f64,
    pub wer: f64,
    pub ter: f64,
    pub embed: Option<f64>,
    pub sentences: usize,
}

/// Token-level Levenshtein distance with unit costs.
pub fn edit_distance(a: &[&str], b: &[&str]) -> usize {
    let n = b.len();
    let mut prev: Vec<usize> = (0..=n).collect();
    let mut curr = vec![0usize; n + 1];
    for (i, ta) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, tb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ta != tb);
            curr[j + 1] = sub.min(prev[j + 1] + 1).min(curr[j] + 1);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[n]
}

/// Word error rate against the minimizing reference: edit distance over
/// that reference's length.
pub fn wer(hyp: &[&str], refs: &[&[&str]]) -> f64 {
    assert!(!refs.is_empty(), "wer needs at least one reference");
    let (d, len) = wer_parts(hyp, refs);
    d as f64 / len.max(1) as f64
}

/// The (distance, reference length) pair for the ratio-minimizing
/// reference; ties keep the earliest reference.
fn wer_parts(hyp: &[&str], refs: &[&[&str]]) -> (usize, usize) {
    let mut best: Option<(f64, usize, usize)> = None;
    for r in refs {
        let d = edit_distance(hyp, r);
        let ratio = d as f64 / r.len().max(1) as f64;
        let better = match best {
            None => true,
            Some((b, _, _)) => ratio < b,
        };
        if better {
            best = Some((ratio, d, r.len()));
        }
    }
    let (_, d, len) = best.expect("non-empty refs");
    (d, len)
}

fn contains_subslice(haystack: &[&str], needle: &[&str]) -> bool {
    if needle.len() > haystack.len() {
        return false;
    }
    haystack.windows(needle.len()).any(|w| w == needle)
}

/// Minimum shifts + remaining edit distance for one reference, using a
/// greedy improving-shift search. A block may move only if it matches a
/// reference substring exactly and the move strictly reduces total edits.
fn ter_edits(hyp: &[&str], reference: &[&str], max_block: usize) -> usize {
    let mut current: Vec<&str> = hyp.to_vec();
    let mut shifts = 0usize;
    let mut d = edit_distance(&current, reference);
    // a shift costs 1, so no improvement is possible once d < 2
    while d >= 2 {
        // best = (new_distance, block_start, insert_pos, block_len)
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for i in 0..current.len() {
            let max_len = max_block.min(current.len() - i);
            for l in 1..=max_len {
                let block: Vec<&str> = current[i..i + l].to_vec();
                if !contains_subslice(reference, &block) {
                    continue;
                }
                let mut removed: Vec<&str> = Vec::with_capacity(current.len() - l);
                removed.extend_from_slice(&current[..i]);
                removed.extend_from_slice(&current[i + l..]);
                for p in 0..=removed.len() {
                    if p == i {
                        continue; // reinserting in place is a no-op
                    }
                    let mut cand: Vec<&str> = Vec::with_capacity(current.len());
                    cand.extend_from_slice(&removed[..p]);
                    cand.extend_from_slice(&block);
                    cand.extend_from_slice(&removed[p..]);
                    let nd = edit_distance(&cand, reference);
                    if nd + 1 >= d {
                        continue;
                    }
                    let better = match best {
                        None => true,
                        Some((bd, bi, bp, bl)) => {
                            (nd, i, p, std::cmp::Reverse(l)) < (bd, bi, bp, std::cmp::Reverse(bl))
                        }
                    };
                    if better {
                        best = Some((nd, i, p, l));
                    }
                }
            }
        }
        match best {
            Some((nd, i, p, l)) => {
                let block: Vec<&str> = current[i..i + l].to_vec();
                current.drain(i..i + l);
                for (k, tok) in block.into_iter().enumerate() {
                    current.insert(p + k, tok);
                }
                shifts += 1;
                d = nd;
            }
            None => break,
        }
    }
    shifts + d
}

/// Translation edit rate: minimum (shifts + edits) over the references,
/// divided by the mean reference length.
pub fn ter(hyp: &[&str], refs: &[&[&str]], max_block: usize) -> f64 {
    let (edits, avg_len) = ter_parts(hyp, refs, max_block);
    if avg_len == 0.0 {
        return 0.0;
    }
    edits as f64 / avg_len
}

fn ter_parts(hyp: &[&str], refs: &[&[&str]], max_block: usize) -> (usize, f64) {
    assert!(!refs.is_empty(), "ter needs at least one reference");
    let edits = refs
        .iter()
        .map(|r| ter_edits(hyp, r, max_block))
        .min()
        .expect("non-empty refs");
    let avg_len = refs.iter().map(|r| r.len()).sum::<usize>() as f64 / refs.len() as f64;
    (edits, avg_len)
}

fn ngram_counts<'a>(tokens: &[&'a str], n: usize) -> BTreeMap<Vec<&'a str>, usize> {
    let mut counts = BTreeMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for w in tokens.windows(n) {
        *counts.entry(w.to_vec()).or_insert(0) += 1;
    }
    counts
}

/// Clipped matches and candidate totals for one order.
fn clipped_matches(hyp: &[&str], refs: &[&[&str]], n: usize) -> (usize, usize) {
    let hyp_counts = ngram_counts(hyp, n);
    let total: usize = hyp_counts.values().sum();
    if total == 0 {
        return (0, 0);
    }
    let ref_counts: Vec<BTreeMap<Vec<&str>, usize>> =
        refs.iter().map(|r| ngram_counts(r, n)).collect();
    let mut matched = 0usize;
    for (gram, &c) in &hyp_counts {
        let max_ref = ref_counts.iter().map(|rc| rc.get(gram).copied().unwrap_or(0)).max();
        matched += c.min(max_ref.unwrap_or(0));
    }
    (matched, total)
}

/// Closest reference length to the hypothesis length; ties prefer the
/// shorter reference.
fn closest_ref_len(hyp_len: usize, refs: &[&[&str]]) -> usize {
    let mut best: Option<usize> = None;
    for r in refs {
        let len = r.len();
        let better = match best {
            None => true,
            Some(b) => {
                let (db, dl) = (b.abs_diff(hyp_len), len.abs_diff(hyp_len));
                dl < db || (dl == db && len < b)
            }
        };
        if better {
            best = Some(len);
        }
    }
    best.expect("non-empty refs")
}

fn bleu_from_counts(per_order: &[(usize, usize)], hyp_len: usize, ref_len: usize) -> f64 {
    let effective: Vec<f64> = per_order
        .iter()
        .filter(|(_, total)| *total > 0)
        .map(|&(matched, total)| {
            let p = matched as f64 / total as f64;
            if p == 0.0 {
                BLEU_EPS
            } else {
                p
            }
        })
        .collect();
    if effective.is_empty() || hyp_len == 0 {
        return 0.0;
    }
    let log_mean = effective.iter().map(|p| p.ln()).sum::<f64>() / effective.len() as f64;
    let bp = if hyp_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    };
    bp * log_mean.exp()
}

/// Sentence BLEU: geometric mean of clipped modified n-gram precisions
/// over the effective orders (capped by hypothesis length), times the
/// brevity penalty against the closest reference length. Zero precisions
/// are replaced by a small epsilon; an empty hypothesis scores 0.
pub fn bleu(hyp: &[&str], refs: &[&[&str]], max_n: usize) -> f64 {
    assert!(!refs.is_empty(), "bleu needs at least one reference");
    if hyp.is_empty() {
        return 0.0;
    }
    let orders = max_n.min(hyp.len());
    let per_order: Vec<(usize, usize)> =
        (1..=orders).map(|n| clipped_matches(hyp, refs, n)).collect();
    bleu_from_counts(&per_order, hyp.len(), closest_ref_len(hyp.len(), refs))
}

/// Pooled n-gram statistics over a reference corpus, used for NIST
/// information weights: `info(g) = log2(count(prefix(g)) / count(g))`.
#[derive(Debug, Clone)]
pub struct NistStats {
    max_n: usize,
    counts: Vec<BTreeMap<String, u64>>,
    total_tokens: u64,
}

const GRAM_SEP: char = '\u{1f}';

fn gram_key(tokens: &[&str]) -> String {
    let mut key = String::new();
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            key.push(GRAM_SEP);
        }
        key.push_str(t);
    }
    key
}

impl NistStats {
    /// Pool counts over every reference of every segment.
    pub fn from_references(refsets: &[Vec<Vec<String>>], max_n: usize) -> Self {
        let mut counts = vec![BTreeMap::new(); max_n];
        let mut total_tokens = 0u64;
        for refset in refsets {
            for reference in refset {
                let toks: Vec<&str> = reference.iter().map(String::as_str).collect();
                total_tokens += toks.len() as u64;
                for n in 1..=max_n {
                    if toks.len() < n {
                        break;
                    }
                    for w in toks.windows(n) {
                        *counts[n - 1].entry(gram_key(w)).or_insert(0) += 1;
                    }
                }
            }
        }
        NistStats { max_n, counts, total_tokens }
    }

    /// Information weight of an n-gram; 0 for unseen n-grams.
    pub fn info(&self, gram: &[&str]) -> f64 {
        let n = gram.len();
        if n == 0 || n > self.max_n {
            return 0.0;
        }
        let c = self.counts[n - 1].get(&gram_key(gram)).copied().unwrap_or(0);
        if c == 0 {
            return 0.0;
        }
        let parent = if n == 1 {
            self.total_tokens
        } else {
            self.counts[n - 2].get(&gram_key(&gram[..n - 1])).copied().unwrap_or(0)
        };
        if parent == 0 {
            return 0.0;
        }
        (parent as f64 / c as f64).log2()
    }
}

/// NIST brevity factor exponent: chosen so the factor is 0.5 when the
/// hypothesis is 2/3 the reference length.
fn nist_beta() -> f64 {
    let ln_two_thirds = (2.0f64 / 3.0).ln();
    0.5f64.ln() / (ln_two_thirds * ln_two_thirds)
}

fn nist_brevity(hyp_len: f64, ref_len: f64) -> f64 {
    if hyp_len <= 0.0 || ref_len <= 0.0 {
        return 0.0;
    }
    let ratio = (hyp_len / ref_len).min(1.0);
    let l = ratio.ln();
    (nist_beta() * l * l).exp()
}

/// Per-order (sum of matched info, candidate count) for one segment.
fn nist_segment_counts(
    hyp: &[&str],
    refs: &[&[&str]],
    stats: &NistStats,
    max_n: usize,
) -> Vec<(f64, usize)> {
    let mut out = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let hyp_counts = ngram_counts(hyp, n);
        let total: usize = hyp_counts.values().sum();
        let ref_counts: Vec<BTreeMap<Vec<&str>, usize>> =
            refs.iter().map(|r| ngram_counts(r, n)).collect();
        let mut info_sum = 0.0;
        for (gram, &c) in &hyp_counts {
            let max_ref = ref_counts
                .iter()
                .map(|rc| rc.get(gram).copied().unwrap_or(0))
                .max()
                .unwrap_or(0);
            let matched = c.min(max_ref);
            if matched > 0 {
                info_sum += matched as f64 * stats.info(gram);
            }
        }
        out.push((info_sum, total));
    }
    out
}

fn nist_from_counts(per_order: &[(f64, usize)], hyp_len: f64, ref_len: f64) -> f64 {
    let mut score = 0.0;
    for &(info_sum, total) in per_order {
        if total > 0 {
            score += info_sum / total as f64;
        }
    }
    score * nist_brevity(hyp_len, ref_len)
}

/// Sentence NIST with information weights from `stats` (normally pooled
/// over the evaluation corpus references). The reference length is the
/// mean reference length.
pub fn nist(hyp: &[&str], refs: &[&[&str]], stats: &NistStats, max_n: usize) -> f64 {
    assert!(!refs.is_empty(), "nist needs at least one reference");
    if hyp.is_empty() {
        return 0.0;
    }
    let per_order = nist_segment_counts(hyp, refs, stats, max_n);
    let ref_len = refs.iter().map(|r| r.len()).sum::<usize>() as f64 / refs.len() as f64;
    nist_from_counts(&per_order, hyp.len() as f64, ref_len)
}

/// Similarity for greedy matching: a token always matches itself exactly;
/// otherwise cosine when both tokens have vectors, else 0.
fn match_sim(a: &str, b: &str, store: &VectorStore) -> f64 {
    if a == b {
        return 1.0;
    }
    match (store.get(a), store.get(b)) {
        (Some(va), Some(vb)) => dot(va, vb),
        _ => 0.0,
    }
}

fn greedy_direction(from: &[&str], to: &[&str], store: &VectorStore) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    for a in from {
        let best = to.iter().map(|b| match_sim(a, b, store)).fold(f64::MIN, f64::max);
        sum += if best == f64::MIN { 0.0 } else { best };
    }
    sum / from.len() as f64
}

fn embed_one(hyp: &[&str], reference: &[&str], store: &VectorStore) -> Option<f64> {
    let any_vocab = hyp.iter().chain(reference.iter()).any(|t| store.contains(t));
    let any_exact = hyp.iter().any(|h| reference.contains(h));
    if !any_vocab && !any_exact {
        return None;
    }
    let recall = greedy_direction(reference, hyp, store);
    let precision = greedy_direction(hyp, reference, store);
    if precision + recall == 0.0 {
        return Some(0.0);
    }
    Some(2.0 * precision * recall / (precision + recall))
}

/// Greedy-match embedding F1 against the best reference: precision is the
/// mean over hypothesis tokens of the best similarity to any reference
/// token, recall is symmetric. Absent when no reference gives the
/// matching anything to anchor on (no vectors and no shared tokens).
pub fn embed_score(hyp: &[&str], refs: &[&[&str]], store: &VectorStore) -> Option<f64> {
    assert!(!refs.is_empty(), "embed_score needs at least one reference");
    refs.iter()
        .filter_map(|r| embed_one(hyp, r, store))
        .fold(None, |acc, f| Some(acc.map_or(f, |a: f64| a.max(f))))
}

/// Score a hypothesis corpus against reference sets. Returns the corpus
/// aggregate and per-sentence scores (in input order) for downstream
/// rating analytics.
pub fn score_corpus(
    hyps: &[Vec<String>],
    refsets: &[Vec<Vec<String>>],
    store: Option<&VectorStore>,
    cfg: &MetricConfig,
) -> Result<(CorpusScore, Vec<SentenceScore>)> {
    if hyps.len() != refsets.len() {
        return Err(Error::LengthMismatch { left: hyps.len(), right: refsets.len() });
    }
    if hyps.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    for (i, refset) in refsets.iter().enumerate() {
        if refset.is_empty() {
            return Err(Error::MissingReferences { index: i });
        }
    }
    let stats = NistStats::from_references(refsets, cfg.nist_n);

    struct SentenceParts {
        score: SentenceScore,
        bleu_counts: Vec<(usize, usize)>,
        hyp_len: usize,
        closest_ref: usize,
        nist_counts: Vec<(f64, usize)>,
        mean_ref_len: f64,
        wer_d: usize,
        wer_len: usize,
        ter_edits: usize,
        ter_avg_len: f64,
    }

    let parts: Vec<SentenceParts> = hyps
        .par_iter()
        .zip(refsets.par_iter())
        .map(|(hyp_owned, refset_owned)| {
            let hyp: Vec<&str> = hyp_owned.iter().map(String::as_str).collect();
            let refs_vec: Vec<Vec<&str>> = refset_owned
                .iter()
                .map(|r| r.iter().map(String::as_str).collect())
                .collect();
            let refs: Vec<&[&str]> = refs_vec.iter().map(Vec::as_slice).collect();

            let orders = cfg.bleu_n.min(hyp.len());
            let bleu_counts: Vec<(usize, usize)> =
                (1..=orders).map(|n| clipped_matches(&hyp, &refs, n)).collect();
            let closest_ref = closest_ref_len(hyp.len(), &refs);
            let bleu_val = bleu_from_counts(&bleu_counts, hyp.len(), closest_ref);

            let nist_counts = nist_segment_counts(&hyp, &refs, &stats, cfg.nist_n);
            let mean_ref_len =
                refs.iter().map(|r| r.len()).sum::<usize>() as f64 / refs.len() as f64;
            let nist_val = if hyp.is_empty() {
                0.0
            } else {
                nist_from_counts(&nist_counts, hyp.len() as f64, mean_ref_len)
            };

            let (wer_d, wer_len) = wer_parts(&hyp, &refs);
            let wer_val = wer_d as f64 / wer_len.max(1) as f64;
            let (ter_e, ter_avg_len) = ter_parts(&hyp, &refs, cfg.ter_block);
            let ter_val = if ter_avg_len == 0.0 { 0.0 } else { ter_e as f64 / ter_avg_len };

            let embed = store.and_then(|s| embed_score(&hyp, &refs, s));

            SentenceParts {
                score: SentenceScore {
                    bleu: bleu_val,
                    nist: nist_val,
                    wer: wer_val,
                    ter: ter_val,
                    embed,
                },
                bleu_counts,
                hyp_len: hyp.len(),
                closest_ref,
                nist_counts,
                mean_ref_len,
                wer_d,
                wer_len,
                ter_edits: ter_e,
                ter_avg_len,
            }
        })
        .collect();

    let mut bleu_pool = vec![(0usize, 0usize); cfg.bleu_n];
    let mut nist_pool = vec![(0.0f64, 0usize); cfg.nist_n];
    let mut hyp_len_sum = 0usize;
    let mut closest_ref_sum = 0usize;
    let mut mean_ref_len_sum = 0.0f64;
    let mut wer_d_sum = 0usize;
    let mut wer_len_sum = 0usize;
    let mut ter_edit_sum = 0usize;
    let mut ter_len_sum = 0.0f64;
    let mut embed_sum = 0.0f64;
    let mut embed_n = 0usize;
    for p in &parts {
        for (n, &(m, t)) in p.bleu_counts.iter().enumerate() {
            bleu_pool[n].0 += m;
            bleu_pool[n].1 += t;
        }
        for (n, &(info, t)) in p.nist_counts.iter().enumerate() {
            nist_pool[n].0 += info;
            nist_pool[n].1 += t;
        }
        hyp_len_sum += p.hyp_len;
        closest_ref_sum += p.closest_ref;
        mean_ref_len_sum += p.mean_ref_len;
        wer_d_sum += p.wer_d;
        wer_len_sum += p.wer_len;
        ter_edit_sum += p.ter_edits;
        ter_len_sum += p.ter_avg_len;
        if let Some(e) = p.score.embed {
            embed_sum += e;
            embed_n += 1;
        }
    }
    let corpus = CorpusScore {
        bleu: bleu_from_counts(&bleu_pool, hyp_len_sum, closest_ref_sum),
        nist: nist_from_counts(&nist_pool, hyp_len_sum as f64, mean_ref_len_sum),
        wer: wer_d_sum as f64 / wer_len_sum.max(1) as f64,
        ter: if ter_len_sum == 0.0 { 0.0 } else { ter_edit_sum as f64 / ter_len_sum },
        embed: if embed_n > 0 { Some(embed_sum / embed_n as f64) } else { None },
        sentences: hyps.len(),
    };
    let scores = parts.into_iter().map(|p| p.score).collect();
    Ok((corpus, scores))
}
