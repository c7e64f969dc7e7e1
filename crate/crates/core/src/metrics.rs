//! Coreference evaluation: mention identification, MUC, B-cubed, CEAFe,
//! LEA and the CoNLL average, with per-document and micro-averaged corpus
//! scores.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use rayon::prelude::*;

use crate::assignment::max_weight_assignment;
use crate::conll::Corpus;
use crate::entity::{Entity, EntitySet, Mention, Span};
use crate::error::{Error, Result};

/// Recall, precision and F1 as fractions in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PRFScore {
    pub recall: f64,
    pub precision: f64,
    pub f1: f64,
}

impl PRFScore {
    pub fn new(recall: f64, precision: f64) -> PRFScore {
        let f1 = if recall + precision == 0.0 {
            0.0
        } else {
            2.0 * recall * precision / (recall + precision)
        };
        PRFScore { recall, precision, f1 }
    }

    /// (R, P, F1) as percentages.
    pub fn percent(&self) -> (f64, f64, f64) {
        (self.recall * 100.0, self.precision * 100.0, self.f1 * 100.0)
    }
}

/// Numerators and denominators of recall and precision. Summing counts
/// over documents gives the micro-average.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Counts {
    pub recall_num: f64,
    pub recall_den: f64,
    pub precision_num: f64,
    pub precision_den: f64,
}

impl Counts {
    /// Scores with 0 for any undefined ratio.
    pub fn score(&self) -> PRFScore {
        let ratio = |n: f64, d: f64| if d == 0.0 { 0.0 } else { n / d };
        PRFScore::new(
            ratio(self.recall_num, self.recall_den),
            ratio(self.precision_num, self.precision_den),
        )
    }

    /// True when recall or precision has a zero denominator.
    pub fn is_degenerate(&self) -> bool {
        self.recall_den == 0.0 || self.precision_den == 0.0
    }
}

impl Add for Counts {
    type Output = Counts;

    fn add(self, o: Counts) -> Counts {
        Counts {
            recall_num: self.recall_num + o.recall_num,
            recall_den: self.recall_den + o.recall_den,
            precision_num: self.precision_num + o.precision_num,
            precision_den: self.precision_den + o.precision_den,
        }
    }
}

impl AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        *self = *self + o;
    }
}

/// Whether entities with a single mention take part in scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SingletonMode {
    #[default]
    Included,
    Excluded,
}

impl FromStr for SingletonMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<SingletonMode> {
        match s {
            "include" | "included" => Ok(SingletonMode::Included),
            "exclude" | "excluded" => Ok(SingletonMode::Excluded),
            _ => Err(Error::InvalidArgument(format!(
                "unknown singleton mode {s:?} (expected include or exclude)"
            ))),
        }
    }
}

impl fmt::Display for SingletonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingletonMode::Included => "included",
            SingletonMode::Excluded => "excluded",
        })
    }
}

/// Whether system mentions were predicted or taken from the gold standard.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MentionMode {
    #[default]
    Predicted,
    Gold,
}

impl fmt::Display for MentionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MentionMode::Predicted => "predicted",
            MentionMode::Gold => "gold",
        })
    }
}

/// Correspondence between gold and system mentions by exact span.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MentionAlignment {
    pub matched: Vec<Span>,
    /// Gold mentions absent from the system output.
    pub missing: Vec<Span>,
    /// System mentions absent from the gold standard.
    pub extra: Vec<Span>,
}

impl MentionAlignment {
    pub fn counts(&self) -> Counts {
        let m = self.matched.len() as f64;
        Counts {
            recall_num: m,
            recall_den: m + self.missing.len() as f64,
            precision_num: m,
            precision_den: m + self.extra.len() as f64,
        }
    }

    pub fn score(&self) -> PRFScore {
        self.counts().score()
    }
}

pub fn align_mentions(gold: &EntitySet, sys: &EntitySet) -> MentionAlignment {
    let g: BTreeSet<Span> = gold.mentions().map(|m| m.span).collect();
    let s: BTreeSet<Span> = sys.mentions().map(|m| m.span).collect();
    MentionAlignment {
        matched: g.intersection(&s).copied().collect(),
        missing: g.difference(&s).copied().collect(),
        extra: s.difference(&g).copied().collect(),
    }
}

/// Sizes of both sides' entities and their non-empty intersections.
struct Overlap {
    key: Vec<usize>,
    response: Vec<usize>,
    /// (key entity, response entity, intersection size)
    cells: Vec<(usize, usize, usize)>,
}

impl Overlap {
    fn new(key: &EntitySet, response: &EntitySet) -> Overlap {
        let index = response.entity_index();
        let mut cells = Vec::new();
        for (k, e) in key.entities().iter().enumerate() {
            let mut per: HashMap<usize, usize> = HashMap::new();
            for m in &e.mentions {
                if let Some(&r) = index.get(&m.span) {
                    *per.entry(r).or_default() += 1;
                }
            }
            let mut row: Vec<(usize, usize)> = per.into_iter().collect();
            row.sort_unstable();
            cells.extend(row.into_iter().map(|(r, n)| (k, r, n)));
        }
        Overlap {
            key: key.entities().iter().map(Entity::len).collect(),
            response: response.entities().iter().map(Entity::len).collect(),
            cells,
        }
    }
}

/// Directional half of a metric: (numerator, denominator) of recall of
/// `response` against `key`. Precision swaps the roles.
fn both_ways<F>(gold: &EntitySet, sys: &EntitySet, half: F) -> Counts
where
    F: Fn(&Overlap, &[usize], &[usize]) -> (f64, f64),
{
    let forward = Overlap::new(gold, sys);
    let (rn, rd) = half(&forward, &forward.key, &forward.response);
    let backward = Overlap::new(sys, gold);
    let (pn, pd) = half(&backward, &backward.key, &backward.response);
    Counts {
        recall_num: rn,
        recall_den: rd,
        precision_num: pn,
        precision_den: pd,
    }
}

pub fn muc_counts(gold: &EntitySet, sys: &EntitySet) -> Counts {
    both_ways(gold, sys, |o, key, _| {
        let mut parts = vec![0usize; key.len()];
        let mut covered = vec![0usize; key.len()];
        for &(k, _, n) in &o.cells {
            parts[k] += 1;
            covered[k] += n;
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, &size) in key.iter().enumerate() {
            // mentions unknown to the response are parts of their own
            let partitions = parts[k] + (size - covered[k]);
            num += (size - partitions) as f64;
            den += (size - 1) as f64;
        }
        (num, den)
    })
}

pub fn b_cubed_counts(gold: &EntitySet, sys: &EntitySet) -> Counts {
    both_ways(gold, sys, |o, key, _| {
        let num = o.cells.iter().map(|&(k, _, n)| (n * n) as f64 / key[k] as f64).sum();
        (num, key.iter().sum::<usize>() as f64)
    })
}

fn phi4(common: usize, a: usize, b: usize) -> f64 {
    2.0 * common as f64 / (a + b) as f64
}

/// Total similarity of the optimal one-to-one entity alignment. Entities
/// that share no mention never contribute, so each connected component of
/// the overlap graph is solved on its own.
fn ceaf_e_similarity(o: &Overlap) -> f64 {
    let nk = o.key.len();
    let mut parent: Vec<usize> = (0..nk + o.response.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(k, r, _) in &o.cells {
        let (a, b) = (find(&mut parent, k), find(&mut parent, nk + r));
        if a != b {
            parent[a] = b;
        }
    }
    let mut components: HashMap<usize, Vec<(usize, usize, usize)>> = HashMap::new();
    for &cell in &o.cells {
        let root = find(&mut parent, cell.0);
        components.entry(root).or_default().push(cell);
    }
    let mut roots: Vec<usize> = components.keys().copied().collect();
    roots.sort_unstable();
    let mut total = 0.0;
    for root in roots {
        let cells = &components[&root];
        if let [(k, r, n)] = cells.as_slice() {
            total += phi4(*n, o.key[*k], o.response[*r]);
            continue;
        }
        let ks: Vec<usize> = cells.iter().map(|c| c.0).collect::<BTreeSet<_>>().into_iter().collect();
        let rs: Vec<usize> = cells.iter().map(|c| c.1).collect::<BTreeSet<_>>().into_iter().collect();
        let kpos: HashMap<usize, usize> = ks.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let rpos: HashMap<usize, usize> = rs.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut w = vec![vec![0.0; rs.len()]; ks.len()];
        for &(k, r, n) in cells {
            w[kpos[&k]][rpos[&r]] = phi4(n, o.key[k], o.response[r]);
        }
        total += max_weight_assignment(&w).1;
    }
    total
}

pub fn ceaf_e_counts(gold: &EntitySet, sys: &EntitySet) -> Counts {
    let o = Overlap::new(gold, sys);
    let total = ceaf_e_similarity(&o);
    Counts {
        recall_num: total,
        recall_den: o.key.len() as f64,
        precision_num: total,
        precision_den: o.response.len() as f64,
    }
}

fn links(n: usize) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

pub fn lea_counts(gold: &EntitySet, sys: &EntitySet) -> Counts {
    both_ways(gold, sys, |o, key, response| {
        let mut resolved = vec![0.0; key.len()];
        for &(k, r, n) in &o.cells {
            resolved[k] += if n == 1 {
                // a self-link is resolved only when both sides are singletons
                if key[k] == 1 && response[r] == 1 {
                    1.0
                } else {
                    0.0
                }
            } else {
                links(n)
            };
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, &size) in key.iter().enumerate() {
            let total = if size == 1 { 1.0 } else { links(size) };
            num += size as f64 * resolved[k] / total;
            den += size as f64;
        }
        (num, den)
    })
}

pub fn muc(gold: &EntitySet, sys: &EntitySet) -> PRFScore {
    muc_counts(gold, sys).score()
}

pub fn b_cubed(gold: &EntitySet, sys: &EntitySet) -> PRFScore {
    b_cubed_counts(gold, sys).score()
}

pub fn ceaf_e(gold: &EntitySet, sys: &EntitySet) -> PRFScore {
    ceaf_e_counts(gold, sys).score()
}

pub fn lea(gold: &EntitySet, sys: &EntitySet) -> PRFScore {
    lea_counts(gold, sys).score()
}

/// Mean of the MUC, B-cubed and CEAFe F1 values.
pub fn conll_score(muc: &PRFScore, b3: &PRFScore, ceafe: &PRFScore) -> f64 {
    (muc.f1 + b3.f1 + ceafe.f1) / 3.0
}

pub fn filter_singletons(entities: &EntitySet) -> EntitySet {
    entities.without_singletons()
}

/// All metric counts for one document.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DocumentCounts {
    pub mention: Counts,
    pub muc: Counts,
    pub b3: Counts,
    pub ceafe: Counts,
    pub lea: Counts,
}

impl Add for DocumentCounts {
    type Output = DocumentCounts;

    fn add(self, o: DocumentCounts) -> DocumentCounts {
        DocumentCounts {
            mention: self.mention + o.mention,
            muc: self.muc + o.muc,
            b3: self.b3 + o.b3,
            ceafe: self.ceafe + o.ceafe,
            lea: self.lea + o.lea,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub mention: PRFScore,
    pub muc: PRFScore,
    pub b3: PRFScore,
    pub ceafe: PRFScore,
    pub lea: PRFScore,
    /// Fraction in [0, 1].
    pub conll: f64,
    /// MUC had no links to score on at least one side.
    pub muc_degenerate: bool,
    pub singleton_mode: SingletonMode,
    pub mention_mode: MentionMode,
    pub counts: DocumentCounts,
}

impl ScoreReport {
    pub fn from_counts(counts: DocumentCounts, singleton_mode: SingletonMode, mention_mode: MentionMode) -> ScoreReport {
        let muc = counts.muc.score();
        let b3 = counts.b3.score();
        let ceafe = counts.ceafe.score();
        ScoreReport {
            mention: counts.mention.score(),
            muc,
            b3,
            ceafe,
            lea: counts.lea.score(),
            conll: conll_score(&muc, &b3, &ceafe),
            muc_degenerate: counts.muc.is_degenerate(),
            singleton_mode,
            mention_mode,
            counts,
        }
    }

    /// (name, score) for the four coreference metrics.
    pub fn metrics(&self) -> [(&'static str, PRFScore); 4] {
        [("muc", self.muc), ("bcub", self.b3), ("ceafe", self.ceafe), ("lea", self.lea)]
    }
}

/// In gold-mention mode the system output may leave gold mentions out
/// (typically unresolved singletons); they are restored as singletons. Any
/// system mention outside the gold set is an error.
fn complete_gold_mentions(gold: &EntitySet, sys: &EntitySet) -> Result<EntitySet> {
    let gold_spans: HashSet<Span> = gold.mentions().map(|m| m.span).collect();
    let extra: Vec<String> = sys
        .mentions()
        .filter(|m| !gold_spans.contains(&m.span))
        .map(|m| m.span.to_string())
        .collect();
    if !extra.is_empty() {
        return Err(Error::InvalidEntities(format!(
            "gold-mention mode, but system mentions {} are not gold mentions",
            extra.join(", ")
        )));
    }
    let sys_spans: HashSet<Span> = sys.mentions().map(|m| m.span).collect();
    let mut entities = sys.entities().to_vec();
    let mut next = entities.iter().map(|e| e.id + 1).max().unwrap_or(0);
    for m in gold.mentions_in_order() {
        if !sys_spans.contains(&m.span) {
            entities.push(Entity::new(next, vec![Mention::clone(m)]));
            next += 1;
        }
    }
    EntitySet::new(entities)
}

pub fn document_counts(
    gold: &EntitySet,
    sys: &EntitySet,
    singleton_mode: SingletonMode,
    mention_mode: MentionMode,
) -> Result<DocumentCounts> {
    let completed;
    let sys = match mention_mode {
        MentionMode::Predicted => sys,
        MentionMode::Gold => {
            completed = complete_gold_mentions(gold, sys)?;
            &completed
        }
    };
    // with gold mentions, mention identification is measured on the full
    // gold set rather than on what survives singleton removal
    let unfiltered_mentions = align_mentions(gold, sys).counts();
    let (g, s) = match singleton_mode {
        SingletonMode::Included => (gold.clone(), sys.clone()),
        SingletonMode::Excluded => (filter_singletons(gold), filter_singletons(sys)),
    };
    let mention = match mention_mode {
        MentionMode::Gold => unfiltered_mentions,
        MentionMode::Predicted => align_mentions(&g, &s).counts(),
    };
    Ok(DocumentCounts {
        mention,
        muc: muc_counts(&g, &s),
        b3: b_cubed_counts(&g, &s),
        ceafe: ceaf_e_counts(&g, &s),
        lea: lea_counts(&g, &s),
    })
}

pub fn score(
    gold: &EntitySet,
    sys: &EntitySet,
    singleton_mode: SingletonMode,
    mention_mode: MentionMode,
) -> Result<ScoreReport> {
    let counts = document_counts(gold, sys, singleton_mode, mention_mode)?;
    Ok(ScoreReport::from_counts(counts, singleton_mode, mention_mode))
}

/// Micro-averaged total and per-document reports, in gold corpus order.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusScore {
    pub total: ScoreReport,
    pub documents: Vec<(String, ScoreReport)>,
}

/// Scores every document of `sys` against the document with the same id
/// and part in `gold`. Both corpora must contain the same documents.
pub fn score_corpus(
    gold: &Corpus,
    sys: &Corpus,
    singleton_mode: SingletonMode,
    mention_mode: MentionMode,
) -> Result<CorpusScore> {
    let mut unmatched: Vec<String> = gold
        .documents
        .iter()
        .filter(|d| sys.get(&d.id, &d.part).is_none())
        .chain(sys.documents.iter().filter(|d| gold.get(&d.id, &d.part).is_none()))
        .map(|d| d.name())
        .collect();
    if !unmatched.is_empty() {
        unmatched.sort();
        unmatched.dedup();
        return Err(Error::UnmatchedDocuments(unmatched));
    }
    let per_doc: Vec<(String, DocumentCounts)> = gold
        .documents
        .par_iter()
        .map(|g| {
            let s = sys.get(&g.id, &g.part).expect("checked above");
            document_counts(&g.entities, &s.entities, singleton_mode, mention_mode).map(|c| (g.name(), c))
        })
        .collect::<Result<_>>()?;
    let total = per_doc.iter().fold(DocumentCounts::default(), |acc, (_, c)| acc + *c);
    Ok(CorpusScore {
        total: ScoreReport::from_counts(total, singleton_mode, mention_mode),
        documents: per_doc
            .into_iter()
            .map(|(name, c)| (name, ScoreReport::from_counts(c, singleton_mode, mention_mode)))
            .collect(),
    })
}
