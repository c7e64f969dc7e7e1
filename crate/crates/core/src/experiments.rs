//! Corpus-level studies: document-length truncation, per-document system
//! comparison, evaluation-condition grids and annotation audits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::conll::{Corpus, Document};
use crate::entity::{MentionType, Span};
use crate::error::{Error, Result};
use crate::metrics::{document_counts, score_corpus, MentionMode, ScoreReport, SingletonMode};
use crate::report::condition_header;
use crate::sieve::normalize_text;
use crate::tags::is_coordinating;

/// Number of leading sentences whose word count is nearest to `fraction`
/// percent of the total. Ties keep fewer sentences; at least one sentence
/// is kept.
pub fn cut_point(sentence_lengths: &[usize], fraction: f64) -> usize {
    let total: usize = sentence_lengths.iter().sum();
    let target = fraction / 100.0 * total as f64;
    let mut best = (f64::INFINITY, sentence_lengths.len());
    let mut words = 0usize;
    for (k, len) in sentence_lengths.iter().enumerate() {
        words += len;
        let d = (words as f64 - target).abs();
        if d < best.0 - 1e-9 {
            best = (d, k + 1);
        }
    }
    best.1.max(1).min(sentence_lengths.len())
}

/// The first `keep` sentences of a document, with entities restricted to
/// the surviving mentions.
pub fn truncate_document(doc: &Document, keep: usize) -> Document {
    let mut out = doc.clone();
    out.sentences.truncate(keep);
    out.paragraph_starts.retain(|&s| s < keep);
    out.entities = doc.entities.retain_mentions(|m| m.span.sentence < keep);
    out
}

fn check_fraction(fraction: f64) -> Result<()> {
    if fraction > 0.0 && fraction <= 100.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "truncation fraction must be in (0, 100], got {fraction}"
        )))
    }
}

/// Cuts gold and system documents at the same sentence boundary.
pub fn truncate_pair(gold: &Document, sys: &Document, fraction: f64) -> Result<(Document, Document)> {
    check_fraction(fraction)?;
    let lengths: Vec<usize> = gold.sentences.iter().map(|s| s.len()).collect();
    let sys_lengths: Vec<usize> = sys.sentences.iter().map(|s| s.len()).collect();
    if lengths != sys_lengths {
        return Err(Error::Mismatch(format!(
            "documents {} and {} differ in sentence structure",
            gold.name(),
            sys.name()
        )));
    }
    let keep = cut_point(&lengths, fraction);
    Ok((truncate_document(gold, keep), truncate_document(sys, keep)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    /// None when either axis has zero variance or there are fewer than two
    /// points.
    pub r: Option<f64>,
    pub n: usize,
}

/// Pearson correlation of (x, y) points.
pub fn length_correlation(points: &[(f64, f64)]) -> CorrelationResult {
    let n = points.len();
    if n < 2 {
        return CorrelationResult { r: None, n };
    }
    let mean = |f: fn(&(f64, f64)) -> f64| points.iter().map(f).sum::<f64>() / n as f64;
    let (mx, my) = (mean(|p| p.0), mean(|p| p.1));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    let scale = sxx.sqrt() * syy.sqrt();
    if sxx <= 1e-12 * (1.0 + mx * mx) * n as f64 || syy <= 1e-24 || scale == 0.0 {
        return CorrelationResult { r: None, n };
    }
    CorrelationResult {
        r: Some((sxy / scale).clamp(-1.0, 1.0)),
        n,
    }
}

/// Scores tracked by the truncation study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StudyMetric {
    Mentions,
    Muc,
    BCubed,
    CeafE,
    Lea,
    Conll,
}

impl StudyMetric {
    pub const ALL: [StudyMetric; 6] = [
        StudyMetric::Mentions,
        StudyMetric::Muc,
        StudyMetric::BCubed,
        StudyMetric::CeafE,
        StudyMetric::Lea,
        StudyMetric::Conll,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StudyMetric::Mentions => "mentions",
            StudyMetric::Muc => "muc",
            StudyMetric::BCubed => "bcub",
            StudyMetric::CeafE => "ceafe",
            StudyMetric::Lea => "lea",
            StudyMetric::Conll => "conll",
        }
    }

    /// The metric's F1 (or the CoNLL score) as a fraction.
    pub fn value(self, r: &ScoreReport) -> f64 {
        match self {
            StudyMetric::Mentions => r.mention.f1,
            StudyMetric::Muc => r.muc.f1,
            StudyMetric::BCubed => r.b3.f1,
            StudyMetric::CeafE => r.ceafe.f1,
            StudyMetric::Lea => r.lea.f1,
            StudyMetric::Conll => r.conll,
        }
    }
}

impl fmt::Display for StudyMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StudyMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<StudyMetric> {
        StudyMetric::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown metric {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationPoint {
    pub doc_id: String,
    /// Percentage of words requested.
    pub fraction: f64,
    /// Words actually kept.
    pub words: usize,
    pub score: ScoreReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncationStudy {
    pub metrics: Vec<StudyMetric>,
    /// Ordered by document (gold order), then fraction.
    pub points: Vec<TruncationPoint>,
    /// Correlation of each metric with the kept word count.
    pub correlations: Vec<(StudyMetric, CorrelationResult)>,
}

/// The default fraction grid: 10, 20, ..., 100.
pub fn default_fractions() -> Vec<f64> {
    (1..=10).map(|i| i as f64 * 10.0).collect()
}

fn pair_documents<'a>(gold: &'a Corpus, sys: &'a Corpus) -> Result<Vec<(&'a Document, &'a Document)>> {
    let mut unmatched: Vec<String> = gold
        .documents
        .iter()
        .filter(|d| sys.get(&d.id, &d.part).is_none())
        .chain(sys.documents.iter().filter(|d| gold.get(&d.id, &d.part).is_none()))
        .map(|d| d.name())
        .collect();
    if !unmatched.is_empty() {
        unmatched.sort();
        return Err(Error::UnmatchedDocuments(unmatched));
    }
    Ok(gold
        .documents
        .iter()
        .map(|g| (g, sys.get(&g.id, &g.part).expect("checked above")))
        .collect())
}

/// Scores every document truncated at every fraction and correlates each
/// metric with the truncated length in words.
pub fn run_truncation_study(
    gold: &Corpus,
    sys: &Corpus,
    fractions: &[f64],
    metrics: &[StudyMetric],
    singleton_mode: SingletonMode,
    mention_mode: MentionMode,
) -> Result<TruncationStudy> {
    for &f in fractions {
        check_fraction(f)?;
    }
    let pairs = pair_documents(gold, sys)?;
    let jobs: Vec<(&Document, &Document, f64)> = pairs
        .iter()
        .flat_map(|&(g, s)| fractions.iter().map(move |&f| (g, s, f)))
        .collect();
    let points = jobs
        .par_iter()
        .map(|&(g, s, f)| {
            let (tg, ts) = truncate_pair(g, s, f)?;
            let counts = document_counts(&tg.entities, &ts.entities, singleton_mode, mention_mode)?;
            Ok(TruncationPoint {
                doc_id: g.name(),
                fraction: f,
                words: tg.token_count(),
                score: ScoreReport::from_counts(counts, singleton_mode, mention_mode),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let correlations = metrics
        .iter()
        .map(|&m| {
            let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.words as f64, m.value(&p.score))).collect();
            (m, length_correlation(&xy))
        })
        .collect();
    Ok(TruncationStudy {
        metrics: metrics.to_vec(),
        points,
        correlations,
    })
}

fn fmt_fraction(f: f64) -> String {
    if f.fract() == 0.0 {
        format!("{f:.0}")
    } else {
        format!("{f}")
    }
}

/// Tab-separated points (doc_id, fraction, words, metric, value in percent)
/// followed by `# correlation` comment lines.
pub fn format_study_tsv(study: &TruncationStudy) -> String {
    let mut out = String::from("doc_id\tfraction\twords\tmetric\tvalue\n");
    for p in &study.points {
        for m in &study.metrics {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{:.2}\n",
                p.doc_id,
                fmt_fraction(p.fraction),
                p.words,
                m,
                m.value(&p.score) * 100.0
            ));
        }
    }
    for (m, c) in &study.correlations {
        match c.r {
            Some(r) => out.push_str(&format!("# correlation\t{m}\tr={r:.4}\tn={}\n", c.n)),
            None => out.push_str(&format!("# correlation\t{m}\tr=undefined (zero variance)\tn={}\n", c.n)),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocumentRow {
    pub doc: String,
    pub system: String,
    pub report: ScoreReport,
    pub best_lea: bool,
    pub best_conll: bool,
}

/// Scores each system on each document; rows are grouped by document (in
/// name order) and flag the best LEA F1 and CoNLL score per document.
pub fn per_document_table(
    gold: &Corpus,
    outputs: &[(String, Corpus)],
    singleton_mode: SingletonMode,
    mention_mode: MentionMode,
) -> Result<Vec<DocumentRow>> {
    let mut by_doc: BTreeMap<String, Vec<DocumentRow>> = BTreeMap::new();
    for (system, sys) in outputs {
        let scored = score_corpus(gold, sys, singleton_mode, mention_mode)?;
        for (doc, report) in scored.documents {
            by_doc.entry(doc.clone()).or_default().push(DocumentRow {
                doc,
                system: system.clone(),
                report,
                best_lea: false,
                best_conll: false,
            });
        }
    }
    let mut rows = Vec::new();
    for (_, mut group) in by_doc {
        let best = |f: fn(&ScoreReport) -> f64, group: &[DocumentRow]| {
            group.iter().map(|r| f(&r.report)).fold(f64::NEG_INFINITY, f64::max)
        };
        let lea = best(|r| r.lea.f1, &group);
        let conll = best(|r| r.conll, &group);
        for r in &mut group {
            r.best_lea = r.report.lea.f1 == lea;
            r.best_conll = r.report.conll == conll;
        }
        rows.extend(group);
    }
    Ok(rows)
}

pub fn format_document_table(rows: &[DocumentRow]) -> String {
    let mut out = String::new();
    if let Some(r) = rows.first() {
        out.push_str(&condition_header(&r.report));
    }
    let dw = rows.iter().map(|r| r.doc.len()).max().unwrap_or(0).max(8);
    let sw = rows.iter().map(|r| r.system.len()).max().unwrap_or(0).max(6);
    out.push_str(&format!(
        "{:<dw$}  {:<sw$}  {:>6} {:>6} {:>6}  {:>6} {:>6} {:>7}  {:>7}\n",
        "Document", "System", "Men R", "Men P", "Men F1", "LEA R", "LEA P", "LEA F1", "CoNLL"
    ));
    let mark = |b: bool| if b { "*" } else { " " };
    for r in rows {
        let p = &r.report;
        out.push_str(&format!(
            "{:<dw$}  {:<sw$}  {:>6.2} {:>6.2} {:>6.2}  {:>6.2} {:>6.2} {:>6.2}{}  {:>6.2}{}\n",
            r.doc,
            r.system,
            p.mention.recall * 100.0,
            p.mention.precision * 100.0,
            p.mention.f1 * 100.0,
            p.lea.recall * 100.0,
            p.lea.precision * 100.0,
            p.lea.f1 * 100.0,
            mark(r.best_lea),
            p.conll * 100.0,
            mark(r.best_conll),
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridCell {
    pub mention_mode: MentionMode,
    pub singleton_mode: SingletonMode,
    pub report: ScoreReport,
}

/// Scores under predicted and gold mentions, with and without singletons.
/// `gold_mention_run` is system output produced from the gold mentions.
pub fn condition_grid(gold: &Corpus, predicted_run: &Corpus, gold_mention_run: &Corpus) -> Result<Vec<GridCell>> {
    let mut cells = Vec::with_capacity(4);
    for (mention_mode, sys) in [(MentionMode::Predicted, predicted_run), (MentionMode::Gold, gold_mention_run)] {
        for singleton_mode in [SingletonMode::Included, SingletonMode::Excluded] {
            let report = score_corpus(gold, sys, singleton_mode, mention_mode)?.total;
            cells.push(GridCell {
                mention_mode,
                singleton_mode,
                report,
            });
        }
    }
    Ok(cells)
}

pub fn format_grid(cells: &[GridCell]) -> String {
    let mut out = format!(
        "{:<9}  {:<10}  {:>7} {:>7} {:>7}  {:>6} {:>6} {:>6}  {:>6}\n",
        "mentions", "singletons", "Men R", "Men P", "Men F1", "LEA R", "LEA P", "LEA F1", "CoNLL"
    );
    for c in cells {
        let r = &c.report;
        out.push_str(&format!(
            "{:<9}  {:<10}  {:>7.2} {:>7.2} {:>7.2}  {:>6.2} {:>6.2} {:>6.2}  {:>6.2}\n",
            c.mention_mode.to_string(),
            c.singleton_mode.to_string(),
            r.mention.recall * 100.0,
            r.mention.precision * 100.0,
            r.mention.f1 * 100.0,
            r.lea.recall * 100.0,
            r.lea.precision * 100.0,
            r.lea.f1 * 100.0,
            r.conll * 100.0,
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuditKind {
    UnlinkedExactMatch,
    SuspiciousBoundary,
}

impl AuditKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AuditKind::UnlinkedExactMatch => "unlinked_exact_match",
            AuditKind::SuspiciousBoundary => "suspicious_boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditFinding {
    pub kind: AuditKind,
    pub doc: String,
    pub mentions: Vec<Span>,
    /// Normalized string or mention text.
    pub text: String,
}

/// Flags pairs of entities containing names or nominals with the same
/// normalized string (each finding cites the first such mention of both),
/// and mentions with a coordinating conjunction after their head.
pub fn audit_annotations(corpus: &Corpus) -> Vec<AuditFinding> {
    let mut out = Vec::new();
    for doc in &corpus.documents {
        let index = doc.entities.entity_index();
        let mut groups: BTreeMap<String, Vec<Span>> = BTreeMap::new();
        for m in doc.entities.mentions_in_order() {
            if m.surface_type == MentionType::Pronoun {
                continue;
            }
            let key = normalize_text(&doc.span_text(&m.span));
            if !key.is_empty() {
                groups.entry(key).or_default().push(m.span);
            }
        }
        for (text, spans) in groups {
            // first mention of each entity carrying the string
            let mut firsts: BTreeMap<usize, Span> = BTreeMap::new();
            for s in spans {
                firsts.entry(index[&s]).or_insert(s);
            }
            let mut firsts: Vec<Span> = firsts.into_values().collect();
            firsts.sort();
            for (i, a) in firsts.iter().enumerate() {
                for b in &firsts[i + 1..] {
                    out.push(AuditFinding {
                        kind: AuditKind::UnlinkedExactMatch,
                        doc: doc.name(),
                        mentions: vec![*a, *b],
                        text: text.clone(),
                    });
                }
            }
        }
        for m in doc.entities.mentions_in_order() {
            let Some(s) = doc.sentences.get(m.span.sentence) else { continue };
            let inside = (m.head.max(m.span.start) + 1..m.span.end)
                .any(|t| s.tokens.get(t).is_some_and(|tok| is_coordinating(&tok.pos, &tok.form)));
            if inside {
                out.push(AuditFinding {
                    kind: AuditKind::SuspiciousBoundary,
                    doc: doc.name(),
                    mentions: vec![m.span],
                    text: doc.span_text(&m.span),
                });
            }
        }
    }
    out
}

pub fn format_audit(findings: &[AuditFinding]) -> String {
    let mut out = String::new();
    for f in findings {
        let spans: Vec<String> = f.mentions.iter().map(Span::to_string).collect();
        out.push_str(&format!("{}\t{}\t{}\t{}\n", f.kind.as_str(), f.doc, spans.join(","), f.text));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conll::{Sentence, Token};
    use crate::entity::{Entity, EntitySet, Mention};
    use crate::mentions::annotate_span;
    use crate::resources::Resources;

    fn words(n: usize) -> Sentence {
        Sentence::new((0..n).map(|i| Token::new(i, "w", "NOUN", "-")).collect()).unwrap()
    }

    #[test]
    fn nearest_boundary() {
        assert_eq!(cut_point(&[10; 10], 42.0), 4);
        assert_eq!(cut_point(&[10; 10], 100.0), 10);
        // 45 is equally far from 40 and 50: the shorter cut wins
        assert_eq!(cut_point(&[10; 10], 45.0), 4);
        assert_eq!(cut_point(&[10; 10], 1.0), 1);
    }

    #[test]
    fn truncation_restricts_entities() {
        let s = |i, t| Span::new(i, t, t);
        let doc = Document::new("d", (0..10).map(|_| words(10)).collect()).with_entities(EntitySet::from_spans(vec![
            vec![s(0, 0), s(1, 0)],
            vec![s(8, 0), s(9, 0)],
        ]));
        let (g, sys) = truncate_pair(&doc, &doc, 42.0).unwrap();
        assert_eq!(g.sentences.len(), 4);
        assert_eq!(sys.sentences.len(), 4);
        assert_eq!(g.entities.len(), 1);
        let (full, _) = truncate_pair(&doc, &doc, 100.0).unwrap();
        assert_eq!(full, doc);
        assert!(truncate_pair(&doc, &doc, 0.0).is_err());
        assert!(truncate_pair(&doc, &doc, 100.5).is_err());
        let other = Document::new("d", vec![words(3)]);
        assert!(truncate_pair(&doc, &other, 50.0).is_err());
    }

    #[test]
    fn pearson() {
        let r = |pts: &[(f64, f64)]| length_correlation(pts).r;
        assert!((r(&[(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap() - 1.0).abs() < 1e-12);
        assert!((r(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]).unwrap() + 1.0).abs() < 1e-12);
        assert!(r(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap().abs() < 1e-12);
        assert_eq!(r(&[(1.0, 5.0), (2.0, 5.0)]), None);
        assert_eq!(r(&[(1.0, 5.0)]), None);
    }

    #[test]
    fn best_rows() {
        let s = |t| Span::new(0, t, t);
        let gold = Corpus::new(vec![Document::new("d", vec![words(6)])
            .with_entities(EntitySet::from_spans(vec![vec![s(0), s(1), s(2)], vec![s(3), s(4)]]))]);
        let good = gold.clone();
        let mut bad = gold.clone();
        bad.documents[0].entities = EntitySet::from_spans(vec![vec![s(0), s(1)], vec![s(2), s(3), s(4)]]);
        let rows = per_document_table(
            &gold,
            &[("bad".into(), bad), ("good".into(), good)],
            SingletonMode::Included,
            MentionMode::Predicted,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert!(!rows[0].best_lea && rows[1].best_lea);
        let only = per_document_table(&gold, &[("x".into(), gold.clone())], SingletonMode::Included, MentionMode::Predicted).unwrap();
        assert!(only[0].best_lea && only[0].best_conll);
        assert!(per_document_table(&gold, &[], SingletonMode::Included, MentionMode::Predicted).unwrap().is_empty());
    }

    #[test]
    fn audits() {
        let sent = Sentence::new(
            ["Amsterdam", "en", "Amsterdam", "burgemeester", "van", "Franeker", "en", "later", "gedeputeerde"]
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    let pos = match *w {
                        "Amsterdam" | "Franeker" => "PROPN",
                        "en" => "CCONJ",
                        "van" => "ADP",
                        "later" => "ADV",
                        _ => "NOUN",
                    };
                    Token::new(i, w, pos, "-")
                })
                .collect(),
        )
        .unwrap();
        let r = Resources::shipped();
        let m = |a, b| annotate_span(&sent, Span::new(0, a, b), r);
        let doc = Document::new("d", vec![sent.clone()]).with_entities(
            EntitySet::new(vec![
                Entity::new(3, vec![m(0, 0)]),
                Entity::new(9, vec![m(2, 2)]),
                Entity::new(4, vec![m(3, 8)]),
            ])
            .unwrap(),
        );
        let found = audit_annotations(&Corpus::new(vec![doc.clone()]));
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].kind, AuditKind::UnlinkedExactMatch);
        assert_eq!(found[0].mentions, vec![Span::new(0, 0, 0), Span::new(0, 2, 2)]);
        assert_eq!(found[1].kind, AuditKind::SuspiciousBoundary);
        assert_eq!(m(3, 8).head, 3);

        let linked = doc.with_entities(EntitySet::new(vec![Entity::new(3, vec![m(0, 0), m(2, 2)])]).unwrap());
        assert!(audit_annotations(&Corpus::new(vec![linked])).is_empty());
        let _ = Mention::from_span(Span::new(0, 0, 0));
    }

    #[test]
    fn grid_with_perfect_output() {
        let s = |t| Span::new(0, t, t);
        let gold = Corpus::new(vec![Document::new("d", vec![words(6)])
            .with_entities(EntitySet::from_spans(vec![vec![s(0), s(1)], vec![s(2)]]))]);
        let cells = condition_grid(&gold, &gold, &gold).unwrap();
        assert_eq!(cells.len(), 4);
        for c in &cells {
            assert_eq!(c.report.conll, 1.0);
            assert_eq!(c.report.mention.f1, 1.0);
        }
        assert!(format_grid(&cells).lines().count() == 5);
    }
}
