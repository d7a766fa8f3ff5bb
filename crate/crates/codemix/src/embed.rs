//! Static word embeddings: loading word2vec-style text files, learning an
//! orthogonal cross-lingual mapping between two embedding spaces, and
//! picking the nearest in-sentence translation candidate.
//!
//! The mapping solves the orthogonal Procrustes problem: given paired seed
//! vectors stacked as rows of `X` (source) and `Z` (target), the rotation
//! `W = U Vᵀ` from the SVD of `XᵀZ` minimizes `‖XW − Z‖` over orthogonal
//! matrices.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// An immutable set of unit-normalized word vectors.
///
/// Zero vectors in the input are unusable (they have no direction) and are
/// dropped with a count; duplicate words keep their first occurrence.
#[derive(Debug, Clone)]
pub struct VectorStore {
    dim: usize,
    words: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
    pub dropped_zero: usize,
    pub dropped_duplicate: usize,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cosine similarity of two unit vectors is their dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl VectorStore {
    /// Build a store from `(word, vector)` rows, normalizing each vector.
    pub fn from_rows(rows: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let mut dim = None;
        let mut store = VectorStore {
            dim: 0,
            words: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
            dropped_zero: 0,
            dropped_duplicate: 0,
        };
        for (word, mut vector) in rows {
            let d = *dim.get_or_insert(vector.len());
            if vector.len() != d {
                return Err(Error::DimMismatch { src: d, tgt: vector.len() });
            }
            let n = norm(&vector);
            if n == 0.0 || !n.is_finite() {
                store.dropped_zero += 1;
                continue;
            }
            if store.index.contains_key(&word) {
                store.dropped_duplicate += 1;
                continue;
            }
            for x in &mut vector {
                *x /= n;
            }
            store.index.insert(word.clone(), store.words.len());
            store.words.push(word);
            store.vectors.push(vector);
        }
        store.dim = dim.unwrap_or(0);
        if store.words.is_empty() {
            return Err(Error::InvalidArgument("vector store has no usable rows".into()));
        }
        Ok(store)
    }

    /// Load a word2vec-style text file: an optional `count dim` header
    /// line, then `word v1 v2 ... vd` per line.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let reader = BufReader::new(file);
        let mut rows = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if lineno == 1
                && fields.len() == 2
                && fields[0].parse::<usize>().is_ok()
                && fields[1].parse::<usize>().is_ok()
            {
                continue; // `count dim` header
            }
            if fields.len() < 2 {
                return Err(Error::parse(path, lineno, "expected `word v1 .. vd`"));
            }
            let word = fields[0].to_string();
            let mut vector = Vec::with_capacity(fields.len() - 1);
            for f in &fields[1..] {
                let x: f64 = f
                    .parse()
                    .map_err(|_| Error::parse(path, lineno, format!("bad float {f:?}")))?;
                vector.push(x);
            }
            rows.push((word, vector));
        }
        Self::from_rows(rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Vector lookup: exact surface first, then the lowercased form.
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        if let Some(&i) = self.index.get(word) {
            return Some(&self.vectors[i]);
        }
        let lower = word.to_lowercase();
        if lower != word {
            if let Some(&i) = self.index.get(&lower) {
                return Some(&self.vectors[i]);
            }
        }
        None
    }

    pub fn contains(&self, word: &str) -> bool {
        self.get(word).is_some()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// An orthogonal linear map from one embedding space to another, applied
/// to row vectors as `x · W`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mapping {
    dim: usize,
    w: DMatrix<f64>,
}

const MAPPING_MAGIC: &[u8; 8] = b"CMXMAP01";

impl Mapping {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// Map a source-space vector into the target space.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim, "vector dimension mismatch");
        let mut out = vec![0.0; self.dim];
        for (j, out_j) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (i, &x) in v.iter().enumerate() {
                acc += x * self.w[(i, j)];
            }
            *out_j = acc;
        }
        out
    }

    /// Binary serialization: magic, little-endian u64 dimension, then the
    /// row-major matrix entries as little-endian f64.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut buf = Vec::with_capacity(16 + 8 * self.dim * self.dim);
        buf.extend_from_slice(MAPPING_MAGIC);
        buf.extend_from_slice(&(self.dim as u64).to_le_bytes());
        for i in 0..self.dim {
            for j in 0..self.dim {
                buf.extend_from_slice(&self.w[(i, j)].to_le_bytes());
            }
        }
        file.write_all(&buf).map_err(|e| Error::io(path, e))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
        if bytes.len() < 16 || &bytes[..8] != MAPPING_MAGIC {
            return Err(Error::parse(path, 0, "not a mapping file (bad magic)"));
        }
        let dim = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        let expected = 16 + 8 * dim * dim;
        if bytes.len() != expected {
            return Err(Error::parse(
                path,
                0,
                format!("expected {expected} bytes for dimension {dim}, found {}", bytes.len()),
            ));
        }
        let mut w = DMatrix::zeros(dim, dim);
        let mut offset = 16;
        for i in 0..dim {
            for j in 0..dim {
                w[(i, j)] = f64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap());
                offset += 8;
            }
        }
        Ok(Mapping { dim, w })
    }
}

/// Learn the orthogonal mapping from seed translation pairs. Pairs with
/// either side missing from its store are skipped; fewer usable pairs than
/// the embedding dimension is an error.
pub fn learn_mapping(
    src: &VectorStore,
    tgt: &VectorStore,
    seeds: &[(String, String)],
) -> Result<Mapping> {
    if src.dim() != tgt.dim() {
        return Err(Error::DimMismatch { src: src.dim(), tgt: tgt.dim() });
    }
    let dim = src.dim();
    let mut x_rows: Vec<f64> = Vec::new();
    let mut z_rows: Vec<f64> = Vec::new();
    let mut usable = 0usize;
    for (s, t) in seeds {
        if let (Some(xs), Some(zs)) = (src.get(s), tgt.get(t)) {
            x_rows.extend_from_slice(xs);
            z_rows.extend_from_slice(zs);
            usable += 1;
        }
    }
    if usable < dim {
        return Err(Error::DegenerateSeed { usable, needed: dim });
    }
    let x = DMatrix::from_row_slice(usable, dim, &x_rows);
    let z = DMatrix::from_row_slice(usable, dim, &z_rows);
    let m = x.transpose() * z;
    let svd = m.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let w = u * v_t;
    Ok(Mapping { dim, w })
}

/// Map `word` from the source space and return the index and cosine of
/// the best in-vocabulary candidate token, or `None` when the word or all
/// candidates are out of vocabulary. Ties pick the earliest candidate.
pub fn closest_in_sentence(
    mapping: &Mapping,
    src: &VectorStore,
    tgt: &VectorStore,
    word: &str,
    candidates: &[&str],
) -> Option<(usize, f64)> {
    let v = src.get(word)?;
    let mut mapped = mapping.apply(v);
    let n = norm(&mapped);
    if n == 0.0 || !n.is_finite() {
        return None;
    }
    for x in &mut mapped {
        *x /= n;
    }
    let mut best: Option<(usize, f64)> = None;
    for (j, candidate) in candidates.iter().enumerate() {
        if let Some(t) = tgt.get(candidate) {
            let cos = dot(&mapped, t);
            let better = match best {
                None => true,
                Some((_, b)) => cos > b,
            };
            if better {
                best = Some((j, cos));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
        let a = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
        let qr = a.qr();
        qr.q()
    }

    #[test]
    fn store_normalizes_and_drops() {
        let store = VectorStore::from_rows(vec![
            ("house".into(), vec![3.0, 4.0]),
            ("zero".into(), vec![0.0, 0.0]),
            ("house".into(), vec![1.0, 0.0]),
        ])
        .unwrap();
        assert_eq!(store.len(), 1);
        assert_eq!(store.dropped_zero, 1);
        assert_eq!(store.dropped_duplicate, 1);
        let v = store.get("house").unwrap();
        assert_abs_diff_eq!(v[0], 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(v[1], 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(norm(v), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn lookup_falls_back_to_lowercase() {
        let store = VectorStore::from_rows(vec![("house".into(), vec![1.0, 0.0])]).unwrap();
        assert!(store.get("House").is_some());
        assert!(store.get("boat").is_none());
    }

    #[test]
    fn procrustes_recovers_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let dim = 5;
        let n = 40;
        let r = random_orthogonal(dim, &mut rng);
        let mut src_rows = Vec::new();
        let mut tgt_rows = Vec::new();
        let mut seeds = Vec::new();
        for k in 0..n {
            let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let xm = DMatrix::from_row_slice(1, dim, &x);
            let zm = &xm * &r;
            let z: Vec<f64> = zm.iter().cloned().collect();
            src_rows.push((format!("s{k}"), x));
            tgt_rows.push((format!("t{k}"), z));
            seeds.push((format!("s{k}"), format!("t{k}")));
        }
        let src = VectorStore::from_rows(src_rows).unwrap();
        let tgt = VectorStore::from_rows(tgt_rows).unwrap();
        let mapping = learn_mapping(&src, &tgt, &seeds).unwrap();
        // normalization scales rows but not the direction, so the same
        // rotation is still optimal
        let diff = (mapping.matrix() - &r).norm();
        assert!(diff < 1e-9, "recovered mapping differs by {diff}");
        let gram = mapping.matrix().transpose() * mapping.matrix();
        let eye = DMatrix::<f64>::identity(dim, dim);
        assert!((gram - eye).norm() < 1e-9);
    }

    #[test]
    fn too_few_seeds_is_an_error() {
        let src = VectorStore::from_rows(vec![
            ("a".into(), vec![1.0, 0.0]),
            ("b".into(), vec![0.0, 1.0]),
        ])
        .unwrap();
        let tgt = VectorStore::from_rows(vec![
            ("x".into(), vec![1.0, 0.0]),
            ("y".into(), vec![0.0, 1.0]),
        ])
        .unwrap();
        let seeds = vec![("a".into(), "x".into()), ("missing".into(), "y".into())];
        match learn_mapping(&src, &tgt, &seeds) {
            Err(Error::DegenerateSeed { usable, needed }) => {
                assert_eq!(usable, 1);
                assert_eq!(needed, 2);
            }
            other => panic!("expected DegenerateSeed, got {other:?}"),
        }
    }

    #[test]
    fn mapping_roundtrips_through_file() {
        let src = VectorStore::from_rows(vec![
            ("a".into(), vec![1.0, 0.0]),
            ("b".into(), vec![0.0, 1.0]),
        ])
        .unwrap();
        let tgt = VectorStore::from_rows(vec![
            ("x".into(), vec![0.0, 1.0]),
            ("y".into(), vec![1.0, 0.0]),
        ])
        .unwrap();
        let seeds = vec![("a".into(), "x".into()), ("b".into(), "y".into())];
        let mapping = learn_mapping(&src, &tgt, &seeds).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.bin");
        mapping.save(&path).unwrap();
        let loaded = Mapping::load(&path).unwrap();
        assert_eq!(loaded, mapping);
    }

    #[test]
    fn closest_candidate_ignores_oov() {
        let src = VectorStore::from_rows(vec![
            ("घर".into(), vec![1.0, 0.0]),
            ("पानी".into(), vec![0.0, 1.0]),
        ])
        .unwrap();
        let tgt = VectorStore::from_rows(vec![
            ("house".into(), vec![1.0, 0.0]),
            ("water".into(), vec![0.0, 1.0]),
        ])
        .unwrap();
        let seeds = vec![
            ("घर".into(), "house".into()),
            ("पानी".into(), "water".into()),
        ];
        let mapping = learn_mapping(&src, &tgt, &seeds).unwrap();
        let picked = closest_in_sentence(
            &mapping,
            &src,
            &tgt,
            "घर",
            &["the", "house", "water"],
        )
        .unwrap();
        assert_eq!(picked.0, 1);
        assert!(picked.1 > 0.99);
        assert!(closest_in_sentence(&mapping, &src, &tgt, "सड़क", &["house"]).is_none());
        assert!(closest_in_sentence(&mapping, &src, &tgt, "घर", &["the", "of"]).is_none());
    }

    #[test]
    fn load_accepts_header_and_skips_blank_lines(){
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("vecs.txt");
        std::fs::write(&path, "2 3\nhouse 1 0 0\n\nwater 0 1 0\n").unwrap();
        let store = VectorStore::load(&path).unwrap();
        assert_eq!(store.len(), 2);
        assert_eq!(store.dim(), 3);
    }
}
