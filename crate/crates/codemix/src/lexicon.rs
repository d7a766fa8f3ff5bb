//! Bilingual English–Hindi dictionary with provenance tracking: seed
//! entries from a TSV file, plus two extension procedures — embedding
//! nearest-neighbor mining over parallel sentences and harvested word
//! alignments.
//!
//! Entries are unique on (lowercased English, Hindi); the first arrival
//! wins, so seed entries are never overwritten by induced ones.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::align::ExtractedPair;
use crate::corpus::{detect_script, ParallelPair, Reject, Script};
use crate::embed::{closest_in_sentence, Mapping, VectorStore};
use crate::error::{Error, Result};

/// How an entry got into the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Provenance {
    Seed,
    Embed,
    Align,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Seed => "SEED",
            Provenance::Embed => "EMBED",
            Provenance::Align => "ALIGN",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "SEED" => Some(Provenance::Seed),
            "EMBED" => Some(Provenance::Embed),
            "ALIGN" => Some(Provenance::Align),
            _ => None,
        }
    }
}

/// One dictionary entry. `weight` carries the cosine (EMBED) or alignment
/// probability (ALIGN); seed entries have none.
#[derive(Debug, Clone, PartialEq)]
pub struct DictEntry {
    pub english: String,
    pub hindi: String,
    pub provenance: Provenance,
    pub weight: Option<f64>,
}

/// English→Hindi dictionary with a consistent reverse index.
#[derive(Debug, Clone, Default)]
pub struct BilingualDictionary {
    entries: Vec<DictEntry>,
    by_key: HashMap<(String, String), usize>,
    forward: BTreeMap<String, Vec<usize>>,
    reverse: BTreeMap<String, Vec<usize>>,
}

impl BilingualDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry counts per provenance: (seed, embed, align).
    pub fn provenance_counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for e in &self.entries {
            match e.provenance {
                Provenance::Seed => counts.0 += 1,
                Provenance::Embed => counts.1 += 1,
                Provenance::Align => counts.2 += 1,
            }
        }
        counts
    }

    /// Insert with script validation and first-wins semantics. Returns
    /// whether the entry was added.
    fn insert(&mut self, english: &str, hindi: &str, provenance: Provenance, weight: Option<f64>) -> std::result::Result<bool, String> {
        let english = english.to_lowercase();
        if detect_script(&english) != Script::Latin {
            return Err(format!("english field {english:?} is not Latin script"));
        }
        if detect_script(hindi) != Script::Devanagari {
            return Err(format!("hindi field {hindi:?} is not Devanagari script"));
        }
        let key = (english.clone(), hindi.to_string());
        if self.by_key.contains_key(&key) {
            return Ok(false);
        }
        let idx = self.entries.len();
        self.entries.push(DictEntry {
            english: english.clone(),
            hindi: hindi.to_string(),
            provenance,
            weight,
        });
        self.by_key.insert(key, idx);
        self.forward.entry(english).or_default().push(idx);
        self.reverse.entry(hindi.to_string()).or_default().push(idx);
        Ok(true)
    }

    /// All entries for an English word (case-insensitive).
    pub fn lookup(&self, english: &str) -> impl Iterator<Item = &DictEntry> {
        let key = english.to_lowercase();
        self.forward
            .get(&key)
            .map(Vec::as_slice)
            .unwrap_or(&[])
            .iter()
            .map(move |&i| &self.entries[i])
    }

    /// All entries for a Hindi word.
    pub fn reverse_lookup(&self, hindi: &str) -> impl Iterator<Item = &DictEntry> {
        self.reverse
            .get(hindi)
            .map(Vec::as_slice)
            .unwrap_or(&[])
            .iter()
            .map(move |&i| &self.entries[i])
    }

    /// Does the dictionary translate `english` to `hindi`? EMBED entries
    /// with weight below `embed_min` (when given) are ignored, so callers
    /// can tighten induced entries without rebuilding the dictionary.
    pub fn translates(&self, english: &str, hindi: &str, embed_min: Option<f64>) -> bool {
        let key = (english.to_lowercase(), hindi.to_string());
        match self.by_key.get(&key) {
            None => false,
            Some(&i) => {
                let entry = &self.entries[i];
                match (entry.provenance, embed_min) {
                    (Provenance::Embed, Some(min)) => entry.weight.unwrap_or(0.0) >= min,
                    _ => true,
                }
            }
        }
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    /// Load a seed dictionary: TSV `english<TAB>hindi`. Wrong-script or
    /// malformed lines are skipped and reported, duplicates collapse.
    pub fn load_seed(path: impl AsRef<Path>) -> Result<(Self, Vec<Reject>)> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut dict = Self::new();
        let mut rejects = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = idx + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                rejects.push(Reject { line: lineno, reason: "expected `english<TAB>hindi`".into() });
                continue;
            }
            if let Err(reason) = dict.insert(fields[0], fields[1], Provenance::Seed, None) {
                rejects.push(Reject { line: lineno, reason });
            }
        }
        Ok((dict, rejects))
    }

    /// Persist as TSV `english<TAB>hindi<TAB>provenance<TAB>weight`
    /// (weight column empty for seed entries), in insertion order.
    pub fn save_tsv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        for e in &self.entries {
            let weight = e.weight.map(|x| x.to_string()).unwrap_or_default();
            writeln!(w, "{}\t{}\t{}\t{}", e.english, e.hindi, e.provenance.as_str(), weight)
                .map_err(|err| Error::io(path, err))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    /// Load a dictionary saved by [`BilingualDictionary::save_tsv`].
    pub fn load_tsv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut dict = Self::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = idx + 1;
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(Error::parse(
                    path,
                    lineno,
                    "expected `english<TAB>hindi<TAB>provenance<TAB>weight`",
                ));
            }
            let provenance = Provenance::parse(fields[2])
                .ok_or_else(|| Error::parse(path, lineno, format!("bad provenance {:?}", fields[2])))?;
            let weight = if fields[3].is_empty() {
                None
            } else {
                Some(fields[3].parse::<f64>().map_err(|_| {
                    Error::parse(path, lineno, format!("bad weight {:?}", fields[3]))
                })?)
            };
            dict.insert(fields[0], fields[1], provenance, weight)
                .map_err(|reason| Error::parse(path, lineno, reason))?;
        }
        Ok(dict)
    }

    /// For every Hindi token of every pair that the dictionary cannot yet
    /// translate to any token of its paired English sentence, find the
    /// closest in-sentence English word through the cross-lingual mapping
    /// and add it as an EMBED entry when the cosine clears `threshold`.
    /// Returns the extended copy; never removes entries.
    pub fn extend_with_embeddings(
        &self,
        pairs: &[ParallelPair],
        hindi_store: &VectorStore,
        english_store: &VectorStore,
        mapping: &Mapping,
        threshold: f64,
    ) -> Result<Self> {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(Error::InvalidArgument("embed threshold must be in (0, 1]".into()));
        }
        let mut out = self.clone();
        for pair in pairs {
            let en_surfaces: Vec<&str> = pair.en.surfaces();
            for h_tok in &pair.hi.tokens {
                if h_tok.script != Script::Devanagari {
                    continue;
                }
                let h = &h_tok.surface;
                let covered = pair
                    .en
                    .tokens
                    .iter()
                    .any(|e| out.translates(&e.surface, h, None));
                if covered {
                    continue;
                }
                let Some((j, cos)) =
                    closest_in_sentence(mapping, hindi_store, english_store, h, &en_surfaces)
                else {
                    continue;
                };
                if cos < threshold {
                    continue;
                }
                let english = pair.en.tokens[j].surface.to_lowercase();
                if detect_script(&english) != Script::Latin {
                    continue;
                }
                // cannot fail: both scripts checked above
                let _ = out.insert(&english, h, Provenance::Embed, Some(cos));
            }
        }
        Ok(out)
    }

    /// Add alignment-harvested pairs as ALIGN entries weighted by their
    /// translation probability. Existing entries keep their provenance.
    pub fn extend_with_alignments(&self, extracted: &[ExtractedPair]) -> Self {
        let mut out = self.clone();
        for p in extracted {
            let _ = out.insert(&p.english, &p.hindi, Provenance::Align, Some(p.prob));
        }
        out
    }
}
