//! Genre-stratified train/dev/test splitting.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::conll::{Corpus, Document, SplitLabel};
use crate::error::{Error, Result};

/// Genre used for documents without one.
pub const DEFAULT_GENRE: &str = "novel";

/// The document's genre label, or [`DEFAULT_GENRE`].
pub fn default_genre(doc: &Document) -> String {
    doc.genre.clone().unwrap_or_else(|| DEFAULT_GENRE.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome {
    pub train: Corpus,
    pub dev: Corpus,
    pub test: Corpus,
    /// Genres with fewer documents than splits.
    pub warnings: Vec<String>,
}

impl SplitOutcome {
    pub fn parts(&self) -> [&Corpus; 3] {
        [&self.train, &self.dev, &self.test]
    }
}

/// Per-genre split sizes by largest remainder. Leftover documents go to the
/// splits furthest below their exact share, accumulated over the genres
/// handled so far, so totals stay close to the ratios as well.
pub fn allocate(genre_sizes: &[usize], ratios: [f64; 3]) -> Vec<[usize; 3]> {
    let mut deficit = [0.0f64; 3];
    let mut out = Vec::with_capacity(genre_sizes.len());
    for &n in genre_sizes {
        let exact = ratios.map(|r| r * n as f64);
        let mut sizes = exact.map(|x| (x + 1e-9).floor() as usize);
        let mut left = n - sizes.iter().sum::<usize>();
        let mut order: Vec<usize> = (0..3).collect();
        // priority: cumulative shortfall including this genre's fraction;
        // ties go to the larger ratio, then the earlier split
        order.sort_by(|&a, &b| {
            let pa = deficit[a] + exact[a] - sizes[a] as f64;
            let pb = deficit[b] + exact[b] - sizes[b] as f64;
            pb.partial_cmp(&pa)
                .unwrap()
                .then(ratios[b].partial_cmp(&ratios[a]).unwrap())
                .then(a.cmp(&b))
        });
        for &k in &order {
            if left == 0 {
                break;
            }
            sizes[k] += 1;
            left -= 1;
        }
        for k in 0..3 {
            deficit[k] += exact[k] - sizes[k] as f64;
        }
        out.push(sizes);
    }
    out
}

/// Splits a corpus into train, dev and test with the given ratios,
/// stratified by `genre_of`. Within each genre documents are shuffled with
/// a seeded generator; each split keeps the input document order.
pub fn stratified_split<F>(corpus: &Corpus, ratios: [f64; 3], genre_of: F, seed: u64) -> Result<SplitOutcome>
where
    F: Fn(&Document) -> String,
{
    if ratios.iter().any(|r| !(0.0..=1.0).contains(r)) || (ratios.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "split ratios must be fractions summing to 1, got {ratios:?}"
        )));
    }
    let mut by_genre: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, d) in corpus.documents.iter().enumerate() {
        by_genre.entry(genre_of(d)).or_default().push(i);
    }
    let sizes: Vec<usize> = by_genre.values().map(Vec::len).collect();
    let alloc = allocate(&sizes, ratios);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut label = vec![SplitLabel::Train; corpus.documents.len()];
    let mut warnings = Vec::new();
    for ((genre, docs), sizes) in by_genre.iter().zip(alloc) {
        if docs.len() < 3 {
            warnings.push(format!(
                "genre {genre:?} has {} document(s), fewer than the 3 splits",
                docs.len()
            ));
        }
        let mut shuffled = docs.clone();
        shuffled.shuffle(&mut rng);
        for (k, &i) in shuffled.iter().enumerate() {
            label[i] = if k < sizes[0] {
                SplitLabel::Train
            } else if k < sizes[0] + sizes[1] {
                SplitLabel::Dev
            } else {
                SplitLabel::Test
            };
        }
    }
    let pick = |which: SplitLabel| Corpus {
        documents: corpus
            .documents
            .iter()
            .zip(&label)
            .filter(|(_, &l)| l == which)
            .map(|(d, _)| d.clone())
            .collect(),
        split: Some(which),
    };
    Ok(SplitOutcome {
        train: pick(SplitLabel::Train),
        dev: pick(SplitLabel::Dev),
        test: pick(SplitLabel::Test),
        warnings,
    })
}
