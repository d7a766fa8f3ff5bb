//! Human-rating analytics: joins quality ratings to automatic metric
//! scores, aggregates means per rating level, correlates rating with
//! metric inside rating buckets, and summarizes inter-rater agreement.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::corpus::{RatingRecord, Scale, Verdict};
use crate::error::{Error, Result};
use crate::metrics::SentenceScore;

/// Pearson correlation coefficient, clamped to [-1, 1] against rounding
/// drift. Undefined for fewer than two points or zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::UndefinedCorrelation {
            reason: format!("length mismatch: {} vs {}", xs.len(), ys.len()),
        });
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::UndefinedCorrelation {
            reason: format!("need at least 2 points, got {n}"),
        });
    }
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::UndefinedCorrelation { reason: "zero variance".to_string() });
    }
    Ok((cov / (var_x * var_y).sqrt()).clamp(-1.0, 1.0))
}

/// Rating ranges the correlations are computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bucket {
    /// Ratings 2–10.
    B1,
    /// Ratings 2–5.
    B2,
    /// Ratings 6–10.
    B3,
}

impl Bucket {
    pub const ALL: [Bucket; 3] = [Bucket::B1, Bucket::B2, Bucket::B3];

    pub fn name(self) -> &'static str {
        match self {
            Bucket::B1 => "Bucket1",
            Bucket::B2 => "Bucket2",
            Bucket::B3 => "Bucket3",
        }
    }

    pub fn range(self) -> std::ops::RangeInclusive<u8> {
        match self {
            Bucket::B1 => 2..=10,
            Bucket::B2 => 2..=5,
            Bucket::B3 => 6..=10,
        }
    }

    pub fn contains(self, rating: u8) -> bool {
        self.range().contains(&rating)
    }
}

/// How a sentence's multiple quality ratings become observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DedupMode {
    /// One observation per distinct (rating, sentence) pair: raters who
    /// agree contribute a single observation, raters who differ one each.
    #[default]
    PerRating,
    /// Collapse each sentence's ratings to their mean, rounded half-up:
    /// one observation per sentence.
    SentenceMean,
}

/// A sentence's metric scores keyed by its id.
#[derive(Debug, Clone)]
pub struct ScoredSentence {
    pub sentence_id: String,
    pub score: SentenceScore,
}

/// Mean metric values over the observations at one rating level.
#[derive(Debug, Clone, PartialEq)]
pub struct RatingRow {
    /// Observations at this level.
    pub n: usize,
    pub bleu: f64,
    pub nist: f64,
    pub wer: f64,
    pub ter: f64,
    /// Mean over the observations whose embedding score is present.
    pub embed: Option<f64>,
    pub embed_n: usize,
}

/// Metric means keyed by quality rating (1–10). Levels nobody used are
/// absent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RatingTable {
    pub rows: BTreeMap<u8, RatingRow>,
}

#[derive(Default)]
struct RowAccum {
    n: usize,
    bleu: f64,
    nist: f64,
    wer: f64,
    ter: f64,
    embed: f64,
    embed_n: usize,
}

/// Join QUALITY ratings to sentence scores and average each metric per
/// rating level. Ratings whose sentence was not scored are ignored.
/// Observations are accumulated in a fixed sort order so the result does
/// not depend on input permutation.
pub fn mean_by_rating(
    scores: &[ScoredSentence],
    ratings: &[RatingRecord],
    dedup: DedupMode,
) -> RatingTable {
    let mut by_id: HashMap<&str, &SentenceScore> = HashMap::new();
    for s in scores {
        by_id.entry(s.sentence_id.as_str()).or_insert(&s.score);
    }

    let quality = ratings.iter().filter_map(|r| {
        if r.scale != Scale::Quality {
            return None;
        }
        let v = r.score()?;
        by_id.contains_key(r.sentence_id.as_str()).then_some((v, r.sentence_id.as_str()))
    });

    // sorted (rating, sentence_id) observations
    let observations: Vec<(u8, &str)> = match dedup {
        DedupMode::PerRating => {
            let distinct: BTreeSet<(u8, &str)> = quality.collect();
            distinct.into_iter().collect()
        }
        DedupMode::SentenceMean => {
            let mut groups: BTreeMap<&str, (u32, u32)> = BTreeMap::new();
            for (v, sentence) in quality {
                let slot = groups.entry(sentence).or_insert((0, 0));
                slot.0 += u32::from(v);
                slot.1 += 1;
            }
            let mut obs: Vec<(u8, &str)> = groups
                .into_iter()
                .map(|(sentence, (sum, count))| {
                    let mean = f64::from(sum) / f64::from(count);
                    ((mean + 0.5).floor() as u8, sentence) // half rounds up
                })
                .collect();
            obs.sort_unstable();
            obs
        }
    };

    let mut accum: BTreeMap<u8, RowAccum> = BTreeMap::new();
    for (rating, sentence_id) in observations {
        let score = by_id[sentence_id];
        let row = accum.entry(rating).or_default();
        row.n += 1;
        row.bleu += score.bleu;
        row.nist += score.nist;
        row.wer += score.wer;
        row.ter += score.ter;
        if let Some(e) = score.embed {
            row.embed += e;
            row.embed_n += 1;
        }
    }

    let rows = accum
        .into_iter()
        .map(|(rating, a)| {
            let n = a.n as f64;
            let row = RatingRow {
                n: a.n,
                bleu: a.bleu / n,
                nist: a.nist / n,
                wer: a.wer / n,
                ter: a.ter / n,
                embed: (a.embed_n > 0).then(|| a.embed / a.embed_n as f64),
                embed_n: a.embed_n,
            };
            (rating, row)
        })
        .collect();
    RatingTable { rows }
}

/// Correlation of rating level against rating-level metric means within
/// one bucket. A metric is `None` when fewer than two usable levels fall
/// in the bucket or the correlation is undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketCorrelations {
    pub bucket: Bucket,
    /// Rating levels in the bucket that have observations.
    pub n: usize,
    pub bleu: Option<f64>,
    pub nist: Option<f64>,
    pub wer: Option<f64>,
    pub ter: Option<f64>,
    pub embed: Option<f64>,
}

/// Correlate rating level with per-level metric means in each bucket.
/// Points are (rating level, level mean); every bucket gets a row.
pub fn bucket_correlations(table: &RatingTable) -> Vec<BucketCorrelations> {
    Bucket::ALL
        .iter()
        .map(|&bucket| {
            let points: Vec<(f64, &RatingRow)> = table
                .rows
                .iter()
                .filter(|(rating, _)| bucket.contains(**rating))
                .map(|(rating, row)| (f64::from(*rating), row))
                .collect();
            let levels: Vec<f64> = points.iter().map(|(x, _)| *x).collect();
            let corr = |ys: Vec<f64>| pearson(&levels, &ys).ok();
            let embed = {
                let pairs: Vec<(f64, f64)> = points
                    .iter()
                    .filter_map(|(x, row)| row.embed.map(|e| (*x, e)))
                    .collect();
                let xs: Vec<f64> = pairs.iter().map(|(x, _)| *x).collect();
                let ys: Vec<f64> = pairs.iter().map(|(_, y)| *y).collect();
                pearson(&xs, &ys).ok()
            };
            BucketCorrelations {
                bucket,
                n: points.len(),
                bleu: corr(points.iter().map(|(_, r)| r.bleu).collect()),
                nist: corr(points.iter().map(|(_, r)| r.nist).collect()),
                wer: corr(points.iter().map(|(_, r)| r.wer).collect()),
                ter: corr(points.iter().map(|(_, r)| r.ter).collect()),
                embed,
            }
        })
        .collect()
}

/// Two-rater agreement on Correct/Incorrect labels. Sentences with any
/// number of LABEL ratings other than exactly two are excluded.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AgreementTable {
    pub correct_agree: usize,
    pub incorrect_agree: usize,
    pub disagree: usize,
    /// Sentences without exactly two LABEL ratings.
    pub excluded: usize,
}

impl AgreementTable {
    pub fn total_pairs(&self) -> usize {
        self.correct_agree + self.incorrect_agree + self.disagree
    }
}

pub fn agreement_table(ratings: &[RatingRecord]) -> AgreementTable {
    let mut groups: BTreeMap<&str, Vec<Verdict>> = BTreeMap::new();
    for r in ratings {
        if r.scale != Scale::Label {
            continue;
        }
        let Some(v) = r.verdict() else { continue };
        groups.entry(r.sentence_id.as_str()).or_default().push(v);
    }
    let mut table = AgreementTable::default();
    for verdicts in groups.values() {
        match verdicts.as_slice() {
            [a, b] if a == b && *a == Verdict::Correct => table.correct_agree += 1,
            [a, b] if a == b => table.incorrect_agree += 1,
            [_, _] => table.disagree += 1,
            _ => table.excluded += 1,
        }
    }
    table
}

/// Histogram of |rating difference| between the two QUALITY ratings of
/// each sentence. Differences range 0–9.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisagreementHistogram {
    pub counts: [usize; 10],
    /// Sentences with exactly two QUALITY ratings.
    pub pairs: usize,
    /// Sentences with some other number of QUALITY ratings.
    pub excluded: usize,
}

impl DisagreementHistogram {
    /// Fraction of pairs differing by 5 or more; `None` without pairs.
    pub fn high_fraction(&self) -> Option<f64> {
        if self.pairs == 0 {
            return None;
        }
        let high: usize = self.counts[5..].iter().sum();
        Some(high as f64 / self.pairs as f64)
    }
}

pub fn disagreement_histogram(ratings: &[RatingRecord]) -> DisagreementHistogram {
    let mut groups: BTreeMap<&str, Vec<u8>> = BTreeMap::new();
    for r in ratings {
        if r.scale != Scale::Quality {
            continue;
        }
        let Some(v) = r.score() else { continue };
        groups.entry(r.sentence_id.as_str()).or_default().push(v);
    }
    let mut hist = DisagreementHistogram { counts: [0; 10], pairs: 0, excluded: 0 };
    for values in groups.values() {
        match values.as_slice() {
            [a, b] => {
                let diff = a.abs_diff(*b) as usize;
                hist.counts[diff] += 1;
                hist.pairs += 1;
            }
            _ => hist.excluded += 1,
        }
    }
    hist
}

/// One rater's mean on one 0–10 scale.
#[derive(Debug, Clone, PartialEq)]
pub struct RaterScaleMean {
    pub rater_id: String,
    pub scale: Scale,
    pub mean: f64,
    pub n: usize,
}

/// Per-rater means for the DCM and RA scales, sorted by scale then rater.
pub fn dcm_ra_summary(ratings: &[RatingRecord]) -> Vec<RaterScaleMean> {
    let mut groups: BTreeMap<(Scale, &str), (u32, usize)> = BTreeMap::new();
    for r in ratings {
        if !matches!(r.scale, Scale::Dcm | Scale::Ra) {
            continue;
        }
        let Some(v) = r.score() else { continue };
        let slot = groups.entry((r.scale, r.rater_id.as_str())).or_insert((0, 0));
        slot.0 += u32::from(v);
        slot.1 += 1;
    }
    groups
        .into_iter()
        .map(|((scale, rater), (sum, n))| RaterScaleMean {
            rater_id: rater.to_string(),
            scale,
            mean: f64::from(sum) / n as f64,
            n,
        })
        .collect()
}

const EMPTY_CELL: &str = "—";

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| EMPTY_CELL.to_string(), |x| format!("{x:.4}"))
}

/// TSV with one row per rating level 1–10; levels without observations
/// render as em-dash cells.
pub fn render_rating_table(table: &RatingTable) -> String {
    let mut out = String::from("rating\tn\tbleu\tnist\twer\tter\tembed\n");
    for rating in 1..=10u8 {
        match table.rows.get(&rating) {
            Some(row) => {
                let _ = writeln!(
                    out,
                    "{rating}\t{}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{}",
                    row.n,
                    row.bleu,
                    row.nist,
                    row.wer,
                    row.ter,
                    fmt_opt(row.embed),
                );
            }
            None => {
                let _ = writeln!(
                    out,
                    "{rating}\t0\t{EMPTY_CELL}\t{EMPTY_CELL}\t{EMPTY_CELL}\t{EMPTY_CELL}\t{EMPTY_CELL}"
                );
            }
        }
    }
    out
}

/// TSV of bucket correlations; undefined correlations render as em-dash.
pub fn render_bucket_correlations(rows: &[BucketCorrelations]) -> String {
    let mut out = String::from("bucket\trange\tn\tbleu\tnist\twer\tter\tembed\n");
    for row in rows {
        let range = row.bucket.range();
        let _ = writeln!(
            out,
            "{}\t{}-{}\t{}\t{}\t{}\t{}\t{}\t{}",
            row.bucket.name(),
            range.start(),
            range.end(),
            row.n,
            fmt_opt(row.bleu),
            fmt_opt(row.nist),
            fmt_opt(row.wer),
            fmt_opt(row.ter),
            fmt_opt(row.embed),
        );
    }
    out
}

pub fn render_agreement(table: &AgreementTable) -> String {
    format!(
        "outcome\tcount\nboth_correct\t{}\nboth_incorrect\t{}\ndisagree\t{}\nexcluded\t{}\n",
        table.correct_agree, table.incorrect_agree, table.disagree, table.excluded
    )
}

pub fn render_histogram(hist: &DisagreementHistogram) -> String {
    let mut out = String::from("difference\tcount\n");
    for (diff, count) in hist.counts.iter().enumerate() {
        let _ = writeln!(out, "{diff}\t{count}");
    }
    let _ = writeln!(out, "#pairs\t{}", hist.pairs);
    let _ = writeln!(out, "#excluded\t{}", hist.excluded);
    let _ = writeln!(out, "#high_fraction\t{}", fmt_opt(hist.high_fraction()));
    out
}

pub fn render_dcm_ra(rows: &[RaterScaleMean]) -> String {
    let mut out = String::from("scale\trater\tmean\tn\n");
    for row in rows {
        let _ = writeln!(out, "{}\t{}\t{:.2}\t{}", row.scale.as_str(), row.rater_id, row.mean, row.n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RatingValue;

    fn quality(sentence: &str, rater: &str, value: u8) -> RatingRecord {
        RatingRecord {
            sentence_id: sentence.to_string(),
            rater_id: rater.to_string(),
            scale: Scale::Quality,
            value: RatingValue::Score(value),
        }
    }

    fn label(sentence: &str, rater: &str, verdict: Verdict) -> RatingRecord {
        RatingRecord {
            sentence_id: sentence.to_string(),
            rater_id: rater.to_string(),
            scale: Scale::Label,
            value: RatingValue::Label(verdict),
        }
    }

    fn scored(id: &str, bleu: f64, embed: Option<f64>) -> ScoredSentence {
        ScoredSentence {
            sentence_id: id.to_string(),
            score: SentenceScore {
                bleu,
                nist: bleu * 2.0,
                wer: 1.0 - bleu,
                ter: 1.0 - bleu,
                embed,
            },
        }
    }

    #[test]
    fn pearson_closed_form() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [2.0, 4.0, 5.0, 4.0, 5.0];
        // centered sums: cov 6, xx 10, yy 6 → r = 6/√60
        let r = pearson(&xs, &ys).unwrap();
        assert!((r - 0.7745966692414834).abs() < 1e-12, "r = {r}");
    }

    #[test]
    fn pearson_affine_invariance() {
        let xs = [0.3, 1.7, 2.2, 4.9, 5.1, 6.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x - 2.0).collect();
        let r = pearson(&xs, &ys).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -0.25 * x + 7.0).collect();
        let r = pearson(&xs, &neg).unwrap();
        assert!((r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_undefined_cases() {
        assert!(pearson(&[1.0], &[2.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[2.0]).is_err());
        assert!(pearson(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[3.0, 3.0]).is_err());
    }

    #[test]
    fn bucket_membership() {
        assert!(Bucket::B1.contains(2) && Bucket::B1.contains(10) && !Bucket::B1.contains(1));
        assert!(Bucket::B2.contains(5) && !Bucket::B2.contains(6));
        assert!(Bucket::B3.contains(6) && Bucket::B3.contains(10) && !Bucket::B3.contains(5));
        assert_eq!(Bucket::B2.name(), "Bucket2");
    }

    #[test]
    fn mean_by_rating_joins_and_averages() {
        let scores = vec![
            scored("s1", 0.2, None),
            scored("s2", 0.4, Some(0.5)),
            scored("s3", 0.6, Some(0.7)),
            scored("s4", 0.8, Some(0.9)),
        ];
        let ratings = vec![
            quality("s1", "r1", 3),
            quality("s1", "r2", 3), // agreeing rater → same observation
            quality("s2", "r1", 3),
            quality("s3", "r1", 7),
            quality("s4", "r2", 7),
            quality("missing", "r1", 5), // unscored → ignored
        ];
        let table = mean_by_rating(&scores, &ratings, DedupMode::PerRating);
        assert_eq!(table.rows.len(), 2);
        let row3 = &table.rows[&3];
        assert_eq!(row3.n, 2);
        assert!((row3.bleu - 0.3).abs() < 1e-12);
        assert!((row3.wer - 0.7).abs() < 1e-12);
        assert_eq!(row3.embed_n, 1);
        assert!((row3.embed.unwrap() - 0.5).abs() < 1e-12);
        let row7 = &table.rows[&7];
        assert_eq!(row7.n, 2);
        assert!((row7.bleu - 0.7).abs() < 1e-12);
        assert!((row7.embed.unwrap() - 0.8).abs() < 1e-12);
    }

    #[test]
    fn mean_by_rating_permutation_independent() {
        let scores: Vec<ScoredSentence> = (0..20)
            .map(|i| scored(&format!("s{i}"), 0.05 * i as f64, Some(0.03 * i as f64)))
            .collect();
        let ratings: Vec<RatingRecord> = (0..20)
            .map(|i| quality(&format!("s{i}"), &format!("r{}", i % 3), (i % 9 + 1) as u8))
            .collect();
        let forward = mean_by_rating(&scores, &ratings, DedupMode::PerRating);
        let mut reversed_ratings = ratings.clone();
        reversed_ratings.reverse();
        let mut reversed_scores = scores.clone();
        reversed_scores.reverse();
        let backward = mean_by_rating(&reversed_scores, &reversed_ratings, DedupMode::PerRating);
        assert_eq!(forward, backward); // exact f64 equality
    }

    #[test]
    fn dedup_sentence_mean_rounds_half_up() {
        let scores = vec![scored("s1", 0.5, None)];
        let ratings = vec![quality("s1", "r1", 3), quality("s1", "r2", 4)];
        // disagreeing raters → one observation per distinct rating
        let per_rating = mean_by_rating(&scores, &ratings, DedupMode::PerRating);
        assert_eq!(per_rating.rows[&3].n, 1);
        assert_eq!(per_rating.rows[&4].n, 1);
        // sentence-mean collapse: mean 3.5 rounds up to one observation at 4
        let collapsed = mean_by_rating(&scores, &ratings, DedupMode::SentenceMean);
        assert_eq!(collapsed.rows.len(), 1);
        assert_eq!(collapsed.rows[&4].n, 1);
        // two sentences stay two observations even at the same mean
        let scores2 = vec![scored("s1", 0.5, None), scored("s2", 0.7, None)];
        let ratings2 = vec![quality("s1", "r1", 5), quality("s2", "r1", 5)];
        let t = mean_by_rating(&scores2, &ratings2, DedupMode::SentenceMean);
        assert_eq!(t.rows[&5].n, 2);
    }

    #[test]
    fn bucket_correlations_monotone() {
        // rating r → bleu r/10 (increasing), wer 1−r/10 (decreasing)
        let scores: Vec<ScoredSentence> =
            (2..=10).map(|r| scored(&format!("s{r}"), r as f64 / 10.0, Some(r as f64 / 20.0))).collect();
        let ratings: Vec<RatingRecord> =
            (2..=10).map(|r| quality(&format!("s{r}"), "r1", r as u8)).collect();
        let table = mean_by_rating(&scores, &ratings, DedupMode::PerRating);
        let rows = bucket_correlations(&table);
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert!((row.bleu.unwrap() - 1.0).abs() < 1e-12, "{:?}", row);
            assert!((row.nist.unwrap() - 1.0).abs() < 1e-12);
            assert!((row.wer.unwrap() + 1.0).abs() < 1e-12);
            assert!((row.ter.unwrap() + 1.0).abs() < 1e-12);
            assert!((row.embed.unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(rows[0].n, 9);
        assert_eq!(rows[1].n, 4);
        assert_eq!(rows[2].n, 5);
    }

    #[test]
    fn bucket_correlations_sparse_levels_absent() {
        // only ratings 7 and 8 used → Bucket2 has no points
        let scores = vec![scored("a", 0.2, None), scored("b", 0.9, None)];
        let ratings = vec![quality("a", "r1", 7), quality("b", "r1", 8)];
        let table = mean_by_rating(&scores, &ratings, DedupMode::PerRating);
        let rows = bucket_correlations(&table);
        let b2 = rows.iter().find(|r| r.bucket == Bucket::B2).unwrap();
        assert_eq!(b2.n, 0);
        assert!(b2.bleu.is_none() && b2.embed.is_none());
        let b3 = rows.iter().find(|r| r.bucket == Bucket::B3).unwrap();
        assert_eq!(b3.n, 2);
        assert!(b3.bleu.is_some());
        assert!(b3.embed.is_none()); // no embed values anywhere
    }

    #[test]
    fn agreement_hand_count() {
        let ratings = vec![
            label("a", "r1", Verdict::Correct),
            label("a", "r2", Verdict::Correct),
            label("b", "r1", Verdict::Incorrect),
            label("b", "r2", Verdict::Incorrect),
            label("c", "r1", Verdict::Correct),
            label("c", "r2", Verdict::Incorrect),
            label("d", "r1", Verdict::Correct), // only one rating
            label("e", "r1", Verdict::Correct),
            label("e", "r2", Verdict::Correct),
            label("e", "r3", Verdict::Correct), // three ratings
            quality("a", "r1", 5),              // other scales ignored
        ];
        let table = agreement_table(&ratings);
        assert_eq!(table.correct_agree, 1);
        assert_eq!(table.incorrect_agree, 1);
        assert_eq!(table.disagree, 1);
        assert_eq!(table.excluded, 2);
        assert_eq!(table.total_pairs(), 3);
    }

    #[test]
    fn histogram_hand_count() {
        let ratings = vec![
            quality("a", "r1", 2),
            quality("a", "r2", 9),
            quality("b", "r1", 3),
            quality("b", "r2", 8),
            quality("c", "r1", 6), // single rating → excluded
        ];
        let hist = disagreement_histogram(&ratings);
        assert_eq!(hist.pairs, 2);
        assert_eq!(hist.excluded, 1);
        assert_eq!(hist.counts[7], 1);
        assert_eq!(hist.counts[5], 1);
        assert_eq!(hist.counts.iter().sum::<usize>(), 2);
        assert_eq!(hist.high_fraction(), Some(1.0));
        let empty = disagreement_histogram(&[]);
        assert_eq!(empty.high_fraction(), None);
    }

    #[test]
    fn dcm_ra_means() {
        let rec = |sentence: &str, rater: &str, scale: Scale, v: u8| RatingRecord {
            sentence_id: sentence.to_string(),
            rater_id: rater.to_string(),
            scale,
            value: RatingValue::Score(v),
        };
        let ratings = vec![
            rec("a", "r2", Scale::Ra, 5),
            rec("a", "r1", Scale::Dcm, 8),
            rec("b", "r1", Scale::Dcm, 9),
            quality("a", "r1", 5),
        ];
        let summary = dcm_ra_summary(&ratings);
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[0].scale, Scale::Dcm);
        assert_eq!(summary[0].rater_id, "r1");
        assert!((summary[0].mean - 8.5).abs() < 1e-12);
        assert_eq!(summary[0].n, 2);
        assert_eq!(summary[1].scale, Scale::Ra);
        assert!((summary[1].mean - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rating_table_renders_all_ten_levels() {
        let scores = vec![scored("s1", 0.5, None)];
        let ratings = vec![quality("s1", "r1", 4)];
        let table = mean_by_rating(&scores, &ratings, DedupMode::PerRating);
        let tsv = render_rating_table(&table);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines.len(), 11); // header + 10 levels
        assert!(lines[4].starts_with("4\t1\t0.5000"));
        assert!(lines[5].starts_with("5\t0\t—"));
        let bucket_tsv = render_bucket_correlations(&bucket_correlations(&table));
        assert!(bucket_tsv.contains("Bucket1\t2-10\t1\t—"));
    }
}
