//! Error analysis: turns the difference between a system and a gold entity
//! set into a sequence of typed, replayable repairs.
//!
//! Errors are attributed in a fixed order, and the order determines the
//! counts: span errors, extra mentions and entities, conflated entities,
//! divided entities, missing mentions and entities.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::conll::Corpus;
use crate::entity::{Entity, EntitySet, Mention, MentionType, Span};
use crate::error::{Error, Result};

/// Error kinds, in report column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorKind {
    SpanError,
    ConflatedEntities,
    ExtraMention,
    ExtraEntity,
    DividedEntity,
    MissingMention,
    MissingEntity,
}

impl ErrorKind {
    pub const ALL: [ErrorKind; 7] = [
        ErrorKind::SpanError,
        ErrorKind::ConflatedEntities,
        ErrorKind::ExtraMention,
        ErrorKind::ExtraEntity,
        ErrorKind::DividedEntity,
        ErrorKind::MissingMention,
        ErrorKind::MissingEntity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::SpanError => "span_error",
            ErrorKind::ConflatedEntities => "conflated_entities",
            ErrorKind::ExtraMention => "extra_mention",
            ErrorKind::ExtraEntity => "extra_entity",
            ErrorKind::DividedEntity => "divided_entity",
            ErrorKind::MissingMention => "missing_mention",
            ErrorKind::MissingEntity => "missing_entity",
        }
    }

    /// Column heading in the error table.
    pub fn title(self) -> &'static str {
        match self {
            ErrorKind::SpanError => "Span Error",
            ErrorKind::ConflatedEntities => "Conflated Entities",
            ErrorKind::ExtraMention => "Extra Mention",
            ErrorKind::ExtraEntity => "Extra Entity",
            ErrorKind::DividedEntity => "Divided Entity",
            ErrorKind::MissingMention => "Missing Mention",
            ErrorKind::MissingEntity => "Missing Entity",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One error together with the repair that removes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorRecord {
    /// A system mention with the right head but wrong boundaries.
    SpanError { system: Mention, gold: Mention },
    /// A system mention absent from gold, in an entity that has gold mentions.
    ExtraMention { mention: Mention },
    /// A system entity made only of mentions absent from gold.
    ExtraEntity { mentions: Vec<Mention> },
    /// `part` belongs to another gold entity than `rest` but was merged with it.
    Conflated { part: Vec<Mention>, rest: Vec<Mention> },
    /// `part` belongs with `rest` but was kept in a separate entity.
    Divided { part: Vec<Mention>, rest: Vec<Mention> },
    /// A gold mention the system missed; `joins` is a mention of the
    /// entity it belongs to.
    MissingMention { mention: Mention, joins: Span },
    /// A gold entity none of whose mentions the system found.
    MissingEntity { mentions: Vec<Mention> },
}

impl ErrorRecord {
    pub fn kind(&self) -> ErrorKind {
        match self {
            ErrorRecord::SpanError { .. } => ErrorKind::SpanError,
            ErrorRecord::ExtraMention { .. } => ErrorKind::ExtraMention,
            ErrorRecord::ExtraEntity { .. } => ErrorKind::ExtraEntity,
            ErrorRecord::Conflated { .. } => ErrorKind::ConflatedEntities,
            ErrorRecord::Divided { .. } => ErrorKind::DividedEntity,
            ErrorRecord::MissingMention { .. } => ErrorKind::MissingMention,
            ErrorRecord::MissingEntity { .. } => ErrorKind::MissingEntity,
        }
    }

    /// The record's spans as one or two comma-separated groups.
    pub fn span_fields(&self) -> Vec<String> {
        fn join<'a>(ms: impl IntoIterator<Item = &'a Mention>) -> String {
            ms.into_iter().map(|m| m.span.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            ErrorRecord::SpanError { system, gold } => vec![system.span.to_string(), gold.span.to_string()],
            ErrorRecord::ExtraMention { mention } => vec![mention.span.to_string()],
            ErrorRecord::ExtraEntity { mentions } | ErrorRecord::MissingEntity { mentions } => vec![join(mentions)],
            ErrorRecord::Conflated { part, rest } | ErrorRecord::Divided { part, rest } => vec![join(part), join(rest)],
            ErrorRecord::MissingMention { mention, joins } => vec![mention.span.to_string(), joins.to_string()],
        }
    }
}

/// Error counts indexed by [`ErrorKind`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ErrorCounts(pub [usize; 7]);

impl ErrorCounts {
    pub fn get(&self, kind: ErrorKind) -> usize {
        self.0[kind.index()]
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn add(&mut self, other: &ErrorCounts) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErrorLog {
    pub doc: String,
    pub ignore_singletons: bool,
    pub records: Vec<ErrorRecord>,
}

impl ErrorLog {
    pub fn counts(&self) -> ErrorCounts {
        let mut c = ErrorCounts::default();
        for r in &self.records {
            c.0[r.kind().index()] += 1;
        }
        c
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Number of gold mentions the system did not cover after span repair.
    pub fn uncovered_gold_mentions(&self) -> usize {
        self.records
            .iter()
            .map(|r| match r {
                ErrorRecord::MissingMention { .. } => 1,
                ErrorRecord::MissingEntity { mentions } => mentions.len(),
                _ => 0,
            })
            .sum()
    }
}

fn prepare(set: &EntitySet, ignore_singletons: bool) -> EntitySet {
    if ignore_singletons {
        set.without_singletons()
    } else {
        set.clone()
    }
}

fn earliest(ms: &[Mention]) -> Span {
    ms.iter().map(|m| m.span).min().expect("non-empty group")
}

/// Index of the preferred group: most mentions, then earliest mention.
fn largest(groups: &[Vec<Mention>]) -> usize {
    (0..groups.len())
        .max_by(|&a, &b| {
            groups[a]
                .len()
                .cmp(&groups[b].len())
                .then_with(|| earliest(&groups[b]).cmp(&earliest(&groups[a])))
        })
        .expect("at least one group")
}

fn sorted(mut ms: Vec<Mention>) -> Vec<Mention> {
    ms.sort_by_key(|m| m.span);
    ms
}

/// Attributes the difference between `sys` and `gold` to typed errors.
/// With `ignore_singletons`, single-mention entities are removed from both
/// sides first.
pub fn analyze(gold: &EntitySet, sys: &EntitySet, ignore_singletons: bool) -> ErrorLog {
    let gold = prepare(gold, ignore_singletons);
    let sys = prepare(sys, ignore_singletons);
    let gold_index = gold.entity_index();
    let gold_entities = gold.entities();
    let mut records = Vec::new();
    let mut work: Vec<Vec<Mention>> = sys.entities().iter().map(|e| e.mentions.clone()).collect();

    // span errors: same head, different boundaries; paired one-to-one per
    // head token, in document order
    let sys_spans: HashSet<Span> = sys.mentions().map(|m| m.span).collect();
    let mut open_gold: BTreeMap<(usize, usize), Vec<&Mention>> = BTreeMap::new();
    for m in gold.mentions_in_order() {
        if !sys_spans.contains(&m.span) {
            open_gold.entry((m.span.sentence, m.head)).or_default().push(m);
        }
    }
    let mut order: Vec<(usize, usize)> = Vec::new();
    for (ei, e) in work.iter().enumerate() {
        for (mi, _) in e.iter().enumerate() {
            order.push((ei, mi));
        }
    }
    order.sort_by_key(|&(ei, mi)| work[ei][mi].order_key());
    for (ei, mi) in order {
        let m = &work[ei][mi];
        if gold_index.contains_key(&m.span) {
            continue;
        }
        let Some(cands) = open_gold.get_mut(&(m.span.sentence, m.head)) else {
            continue;
        };
        if let Some(pos) = cands.iter().position(|g| g.span.overlaps(&m.span)) {
            let g = cands.remove(pos);
            records.push(ErrorRecord::SpanError {
                system: m.clone(),
                gold: g.clone(),
            });
            work[ei][mi] = g.clone();
        }
    }

    // extra mentions and entities
    let mut kept = Vec::new();
    for e in work {
        let (present, extra): (Vec<Mention>, Vec<Mention>) =
            e.into_iter().partition(|m| gold_index.contains_key(&m.span));
        if present.is_empty() {
            records.push(ErrorRecord::ExtraEntity { mentions: sorted(extra) });
            continue;
        }
        for m in sorted(extra) {
            records.push(ErrorRecord::ExtraMention { mention: m });
        }
        kept.push(present);
    }
    let mut work = kept;

    // conflated: split each system entity along gold entity lines
    let mut split = Vec::new();
    for e in work {
        let mut by_gold: BTreeMap<usize, Vec<Mention>> = BTreeMap::new();
        for m in e {
            by_gold.entry(gold_index[&m.span]).or_default().push(m);
        }
        let mut groups: Vec<Vec<Mention>> = by_gold.into_values().map(sorted).collect();
        groups.sort_by_key(|g| earliest(g));
        let keep = largest(&groups);
        let rest = groups[keep].clone();
        for (i, g) in groups.iter().enumerate() {
            if i != keep {
                records.push(ErrorRecord::Conflated {
                    part: g.clone(),
                    rest: rest.clone(),
                });
            }
        }
        split.extend(groups);
    }
    work = split;

    // divided: merge the pieces of each gold entity into its largest piece
    let mut pieces: BTreeMap<usize, Vec<Vec<Mention>>> = BTreeMap::new();
    for e in work {
        pieces.entry(gold_index[&e[0].span]).or_default().push(e);
    }
    let mut merged: BTreeMap<usize, Vec<Mention>> = BTreeMap::new();
    for (g, mut ps) in pieces {
        ps.sort_by_key(|p| earliest(p));
        let keep = largest(&ps);
        let mut acc = ps[keep].clone();
        for (i, p) in ps.iter().enumerate() {
            if i != keep {
                records.push(ErrorRecord::Divided {
                    part: p.clone(),
                    rest: acc.clone(),
                });
                acc = sorted(acc.into_iter().chain(p.iter().cloned()).collect());
            }
        }
        merged.insert(g, acc);
    }

    // missing mentions and entities
    for (gi, ge) in gold_entities.iter().enumerate() {
        match merged.get(&gi) {
            None => records.push(ErrorRecord::MissingEntity {
                mentions: sorted(ge.mentions.clone()),
            }),
            Some(present) => {
                let have: HashSet<Span> = present.iter().map(|m| m.span).collect();
                let anchor = earliest(present);
                for m in sorted(ge.mentions.clone()) {
                    if !have.contains(&m.span) {
                        records.push(ErrorRecord::MissingMention { mention: m, joins: anchor });
                    }
                }
            }
        }
    }

    ErrorLog {
        doc: String::new(),
        ignore_singletons,
        records,
    }
}

/// Replays a log on the system entities it was computed from, returning
/// the repaired entity set.
pub fn apply(log: &ErrorLog, sys: &EntitySet) -> Result<EntitySet> {
    let sys = prepare(sys, log.ignore_singletons);
    let mut entities: Vec<Vec<Mention>> = sys.entities().iter().map(|e| e.mentions.clone()).collect();
    let missing = |span: &Span| Error::InvalidEntities(format!("error log refers to unknown mention {span}"));
    let locate = |entities: &Vec<Vec<Mention>>, span: &Span| -> Option<(usize, usize)> {
        entities
            .iter()
            .enumerate()
            .find_map(|(ei, e)| e.iter().position(|m| m.span == *span).map(|mi| (ei, mi)))
    };
    for r in &log.records {
        match r {
            ErrorRecord::SpanError { system, gold } => {
                let (ei, mi) = locate(&entities, &system.span).ok_or_else(|| missing(&system.span))?;
                entities[ei][mi] = gold.clone();
            }
            ErrorRecord::ExtraMention { mention } => {
                let (ei, mi) = locate(&entities, &mention.span).ok_or_else(|| missing(&mention.span))?;
                entities[ei].remove(mi);
            }
            ErrorRecord::ExtraEntity { mentions } => {
                for m in mentions {
                    let (ei, mi) = locate(&entities, &m.span).ok_or_else(|| missing(&m.span))?;
                    entities[ei].remove(mi);
                }
            }
            ErrorRecord::Conflated { part, .. } => {
                let mut moved = Vec::new();
                for m in part {
                    let (ei, mi) = locate(&entities, &m.span).ok_or_else(|| missing(&m.span))?;
                    moved.push(entities[ei].remove(mi));
                }
                entities.push(moved);
            }
            ErrorRecord::Divided { part, rest } => {
                let (from, _) = locate(&entities, &part[0].span).ok_or_else(|| missing(&part[0].span))?;
                let (to, _) = locate(&entities, &rest[0].span).ok_or_else(|| missing(&rest[0].span))?;
                if from != to {
                    let moved = std::mem::take(&mut entities[from]);
                    entities[to].extend(moved);
                }
            }
            ErrorRecord::MissingMention { mention, joins } => {
                let (ei, _) = locate(&entities, joins).ok_or_else(|| missing(joins))?;
                entities[ei].push(mention.clone());
            }
            ErrorRecord::MissingEntity { mentions } => entities.push(mentions.clone()),
        }
    }
    EntitySet::new(
        entities
            .into_iter()
            .filter(|e| !e.is_empty())
            .enumerate()
            .map(|(i, ms)| Entity::new(i as u64, ms))
            .collect(),
    )
}

/// Analyzes every document pair of two corpora, in gold order.
pub fn analyze_corpus(gold: &Corpus, sys: &Corpus, ignore_singletons: bool) -> Result<Vec<ErrorLog>> {
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
        .par_iter()
        .map(|g| {
            let s = sys.get(&g.id, &g.part).expect("checked above");
            let mut log = analyze(&g.entities, &s.entities, ignore_singletons);
            log.doc = g.name();
            log
        })
        .collect())
}

pub fn total_counts(logs: &[ErrorLog]) -> ErrorCounts {
    let mut c = ErrorCounts::default();
    for l in logs {
        c.add(&l.counts());
    }
    c
}

/// Missing and extra mention errors by mention type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MentionTypeBreakdown {
    /// Indexed like [`MentionType::ALL`].
    pub missing: [usize; 3],
    pub extra: [usize; 3],
}

fn type_index(t: MentionType) -> usize {
    MentionType::ALL.iter().position(|&x| x == t).expect("listed")
}

/// Counts the mention-level errors (missing and extra mentions) by the
/// surface type of the mention involved.
pub fn breakdown_by_mention_type<'a>(logs: impl IntoIterator<Item = &'a ErrorLog>) -> MentionTypeBreakdown {
    let mut b = MentionTypeBreakdown::default();
    for log in logs {
        for r in &log.records {
            match r {
                ErrorRecord::MissingMention { mention, .. } => b.missing[type_index(mention.surface_type)] += 1,
                ErrorRecord::ExtraMention { mention } => b.extra[type_index(mention.surface_type)] += 1,
                _ => {}
            }
        }
    }
    b
}

/// Which mention types (name, nominal, pronoun) a group contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Composition(pub [bool; 3]);

impl Composition {
    pub fn of(ms: &[Mention]) -> Composition {
        let mut c = [false; 3];
        for m in ms {
            c[type_index(m.surface_type)] = true;
        }
        Composition(c)
    }

    /// Cells as "1+" or "-".
    pub fn cells(&self) -> [&'static str; 3] {
        self.0.map(|b| if b { "1+" } else { "-" })
    }
}

/// A row of the composition grid: (incorrect part, rest of entity).
pub type CompositionRow = (Composition, Composition);

/// The listed grid rows; anything else is reported as "Other".
pub const COMPOSITION_ROWS: [CompositionRow; 8] = {
    const fn c(name: bool, nominal: bool, pronoun: bool) -> Composition {
        Composition([name, nominal, pronoun])
    }
    [
        (c(false, false, true), c(false, true, true)),
        (c(false, false, true), c(true, true, true)),
        (c(false, false, true), c(false, true, false)),
        (c(false, true, false), c(false, true, false)),
        (c(false, true, true), c(false, true, true)),
        (c(false, true, false), c(false, true, true)),
        (c(false, true, true), c(true, true, true)),
        (c(false, false, true), c(false, false, true)),
    ]
};

/// Divided and conflated counts per composition-grid row.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompositionBreakdown {
    /// (divided, conflated) for each of [`COMPOSITION_ROWS`].
    pub rows: [(usize, usize); 8],
    pub other: (usize, usize),
    /// Every observed configuration with its (divided, conflated) counts.
    pub observed: BTreeMap<CompositionRow, (usize, usize)>,
}

impl CompositionBreakdown {
    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }
}

pub fn composition_breakdown<'a>(logs: impl IntoIterator<Item = &'a ErrorLog>) -> CompositionBreakdown {
    let mut b = CompositionBreakdown::default();
    for log in logs {
        for r in &log.records {
            let (part, rest, divided) = match r {
                ErrorRecord::Divided { part, rest } => (part, rest, true),
                ErrorRecord::Conflated { part, rest } => (part, rest, false),
                _ => continue,
            };
            let row = (Composition::of(part), Composition::of(rest));
            let cell = match COMPOSITION_ROWS.iter().position(|r| *r == row) {
                Some(i) => &mut b.rows[i],
                None => &mut b.other,
            };
            let seen = b.observed.entry(row).or_default();
            if divided {
                cell.0 += 1;
                seen.0 += 1;
            } else {
                cell.1 += 1;
                seen.1 += 1;
            }
        }
    }
    b
}

/// Error counts table with one row per labelled group of logs.
pub fn format_error_table(rows: &[(String, ErrorCounts)]) -> String {
    let label_width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(6);
    let mut out = format!("{:<label_width$}", "System");
    for k in ErrorKind::ALL {
        out.push_str(&format!("  {:>w$}", k.title(), w = k.title().len()));
    }
    out.push('\n');
    for (label, c) in rows {
        out.push_str(&format!("{label:<label_width$}"));
        for k in ErrorKind::ALL {
            out.push_str(&format!("  {:>w$}", c.get(k), w = k.title().len()));
        }
        out.push('\n');
    }
    out
}

/// One line per record: kind, document, then the record's span groups.
pub fn format_error_log(logs: &[ErrorLog]) -> String {
    let mut out = String::new();
    for log in logs {
        for r in &log.records {
            out.push_str(r.kind().as_str());
            out.push('\t');
            out.push_str(&log.doc);
            for f in r.span_fields() {
                out.push('\t');
                out.push_str(&f);
            }
            out.push('\n');
        }
    }
    out
}

pub fn format_mention_type_breakdown(b: &MentionTypeBreakdown) -> String {
    let mut out = format!("{:<8}  {:>7}  {:>5}\n", "Type", "Missing", "Extra");
    for (i, t) in MentionType::ALL.iter().enumerate() {
        out.push_str(&format!("{:<8}  {:>7}  {:>5}\n", t.as_str(), b.missing[i], b.extra[i]));
    }
    out
}

pub fn format_composition_breakdown(b: &CompositionBreakdown) -> String {
    let mut out = String::from("Incorrect part (Na No Pr)  Rest of entity (Na No Pr)  Divided  Conflated\n");
    let row = |out: &mut String, inc: [&str; 3], rest: [&str; 3], (d, c): (usize, usize)| {
        out.push_str(&format!(
            "{:<25}  {:<25}  {:>7}  {:>9}\n",
            inc.join(" "),
            rest.join(" "),
            d,
            c
        ));
    };
    for (i, (inc, rest)) in COMPOSITION_ROWS.iter().enumerate() {
        row(&mut out, inc.cells(), rest.cells(), b.rows[i]);
    }
    out.push_str(&format!("{:<25}  {:<25}  {:>7}  {:>9}\n", "Other", "", b.other.0, b.other.1));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: usize) -> Span {
        Span::new(0, i, i)
    }

    fn set(clusters: &[&[usize]]) -> EntitySet {
        EntitySet::from_spans(clusters.iter().map(|c| c.iter().map(|&i| s(i)).collect::<Vec<_>>()))
    }

    fn kinds(log: &ErrorLog) -> Vec<ErrorKind> {
        log.records.iter().map(ErrorRecord::kind).collect()
    }

    fn replays(gold: &EntitySet, sys: &EntitySet, ignore: bool) {
        let log = analyze(gold, sys, ignore);
        let fixed = apply(&log, sys).unwrap();
        assert!(fixed.same_partition(&prepare(gold, ignore)), "{log:?}");
    }

    #[test]
    fn divided_and_conflated() {
        let log = analyze(&set(&[&[0, 1, 2]]), &set(&[&[0, 1], &[2]]), false);
        assert_eq!(kinds(&log), vec![ErrorKind::DividedEntity]);
        let log = analyze(&set(&[&[0, 1], &[2, 3]]), &set(&[&[0, 1, 2, 3]]), true);
        assert_eq!(kinds(&log), vec![ErrorKind::ConflatedEntities]);
        replays(&set(&[&[0, 1, 2]]), &set(&[&[0, 1], &[2]]), false);
        replays(&set(&[&[0, 1], &[2, 3]]), &set(&[&[0, 1, 2, 3]]), true);
    }

    #[test]
    fn ignoring_singletons_turns_divisions_into_missing_mentions() {
        let log = analyze(&set(&[&[0, 1, 2]]), &set(&[&[0, 1], &[2]]), true);
        assert_eq!(kinds(&log), vec![ErrorKind::MissingMention]);
        replays(&set(&[&[0, 1, 2]]), &set(&[&[0, 1], &[2]]), true);
    }

    #[test]
    fn span_error_needs_same_head() {
        // gold "de man" (0-1), system "de man die lachte" (0-3), head "man"
        let gm = |a, b| Mention::from_span(Span::new(0, a, b)).with_head(1);
        let gold = EntitySet::new(vec![Entity::new(0, vec![gm(0, 1), Mention::from_span(s(6))])]).unwrap();
        let sys = EntitySet::new(vec![Entity::new(0, vec![gm(0, 3), Mention::from_span(s(6))])]).unwrap();
        let log = analyze(&gold, &sys, true);
        assert_eq!(kinds(&log), vec![ErrorKind::SpanError]);
        assert!(apply(&log, &sys).unwrap().same_partition(&gold));

        // a different head is an extra plus a missing mention
        let other = Mention::from_span(Span::new(0, 0, 3)).with_head(3);
        let sys = EntitySet::new(vec![Entity::new(0, vec![other, Mention::from_span(s(6))])]).unwrap();
        let log = analyze(&gold, &sys, true);
        assert_eq!(kinds(&log), vec![ErrorKind::ExtraMention, ErrorKind::MissingMention]);
    }

    #[test]
    fn extra_and_missing_entities() {
        let log = analyze(&set(&[&[0, 1]]), &set(&[&[2, 3]]), true);
        assert_eq!(kinds(&log), vec![ErrorKind::ExtraEntity, ErrorKind::MissingEntity]);
        replays(&set(&[&[0, 1]]), &set(&[&[2, 3]]), true);
    }

    #[test]
    fn identity_is_error_free() {
        let g = set(&[&[0, 1], &[2], &[3, 4, 5]]);
        assert!(analyze(&g, &g, true).is_empty());
        assert!(analyze(&g, &g, false).is_empty());
    }

    #[test]
    fn mention_type_breakdown() {
        let pron = |i| Mention::from_span(s(i)).with_type(MentionType::Pronoun);
        let nom = |i| Mention::from_span(s(i)).with_type(MentionType::Nominal);
        let log = ErrorLog {
            doc: "d".into(),
            ignore_singletons: true,
            records: vec![
                ErrorRecord::MissingMention { mention: pron(1), joins: s(0) },
                ErrorRecord::MissingMention { mention: pron(2), joins: s(0) },
                ErrorRecord::ExtraMention { mention: nom(3) },
            ],
        };
        let b = breakdown_by_mention_type([&log]);
        assert_eq!(b.missing, [0, 0, 2]);
        assert_eq!(b.extra, [0, 1, 0]);
        assert_eq!(breakdown_by_mention_type([&ErrorLog::default()]), MentionTypeBreakdown::default());
        let divided = analyze(&set(&[&[0, 1, 2, 3]]), &set(&[&[0, 1], &[2, 3]]), true);
        assert_eq!(breakdown_by_mention_type([&divided]), MentionTypeBreakdown::default());
    }

    #[test]
    fn composition_rows() {
        let m = |i, t| Mention::from_span(s(i)).with_type(t);
        use MentionType::*;
        let gold = EntitySet::new(vec![Entity::new(0, vec![m(0, Nominal), m(1, Pronoun), m(2, Pronoun)])]).unwrap();
        let sys = EntitySet::new(vec![
            Entity::new(0, vec![m(0, Nominal), m(1, Pronoun)]),
            Entity::new(1, vec![m(2, Pronoun)]),
        ])
        .unwrap();
        let log = analyze(&gold, &sys, false);
        let b = composition_breakdown([&log]);
        assert_eq!(b.rows[0], (1, 0));
        assert_eq!(b.other, (0, 0));

        let names = EntitySet::new(vec![
            Entity::new(0, vec![m(0, Name), m(1, Name)]),
            Entity::new(1, vec![m(2, Name), m(3, Name)]),
        ])
        .unwrap();
        let merged = EntitySet::new(vec![Entity::new(0, vec![m(0, Name), m(1, Name), m(2, Name), m(3, Name)])]).unwrap();
        let b = composition_breakdown([&analyze(&names, &merged, true)]);
        assert_eq!(b.other, (0, 1));
        assert!(composition_breakdown([&ErrorLog::default()]).is_empty());
    }

    #[test]
    fn table_columns_in_order() {
        let t = format_error_table(&[("sys".into(), ErrorCounts([1, 2, 3, 4, 5, 6, 7]))]);
        let header = t.lines().next().unwrap();
        let pos: Vec<usize> = ErrorKind::ALL.iter().map(|k| header.find(k.title()).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(t.lines().nth(1).unwrap().split_whitespace().eq(["sys", "1", "2", "3", "4", "5", "6", "7"]));
    }
}
