//! Dataset statistics over gold annotations.

use crate::conll::Corpus;
use crate::entity::MentionType;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StatsReport {
    pub n_documents: usize,
    pub n_sentences: usize,
    pub n_tokens: usize,
    pub sents_per_doc: f64,
    pub avg_sent_len: f64,
    pub n_mentions: usize,
    pub n_entities: usize,
    pub mentions_per_token: f64,
    pub mentions_per_entity: f64,
    pub entities_per_token: f64,
    pub pct_pronouns: f64,
    pub pct_nominal: f64,
    pub pct_names: f64,
    pub n_pronouns: usize,
    pub n_nominal: usize,
    pub n_names: usize,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Counts over the gold mentions and entities of a corpus, singletons
/// included.
pub fn corpus_stats(corpus: &Corpus) -> StatsReport {
    let mut r = StatsReport {
        n_documents: corpus.documents.len(),
        ..StatsReport::default()
    };
    for d in &corpus.documents {
        r.n_sentences += d.sentences.len();
        r.n_tokens += d.token_count();
        r.n_entities += d.entities.len();
        for m in d.entities.mentions() {
            r.n_mentions += 1;
            match m.surface_type {
                MentionType::Pronoun => r.n_pronouns += 1,
                MentionType::Nominal => r.n_nominal += 1,
                MentionType::Name => r.n_names += 1,
            }
        }
    }
    r.sents_per_doc = ratio(r.n_sentences, r.n_documents);
    r.avg_sent_len = ratio(r.n_tokens, r.n_sentences);
    r.mentions_per_token = ratio(r.n_mentions, r.n_tokens);
    r.mentions_per_entity = ratio(r.n_mentions, r.n_entities);
    r.entities_per_token = ratio(r.n_entities, r.n_tokens);
    r.pct_pronouns = 100.0 * ratio(r.n_pronouns, r.n_mentions);
    r.pct_nominal = 100.0 * ratio(r.n_nominal, r.n_mentions);
    r.pct_names = 100.0 * ratio(r.n_names, r.n_mentions);
    r
}

/// Integer with thousands separators above 9999, as in the usual
/// dataset tables.
fn count(n: usize) -> String {
    let s = n.to_string();
    if n < 10_000 {
        return s;
    }
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

impl StatsReport {
    /// (row label, table cell, key, raw value) for every reported statistic.
    /// Ratios carry 2 decimals and percentages 1.
    pub fn rows(&self) -> Vec<(&'static str, String, &'static str, String)> {
        let r2 = |x: f64| format!("{x:.2}");
        let r1 = |x: f64| format!("{x:.1}");
        vec![
            ("documents", count(self.n_documents), "n_documents", self.n_documents.to_string()),
            ("sentences", count(self.n_sentences), "n_sentences", self.n_sentences.to_string()),
            ("tokens", count(self.n_tokens), "n_tokens", self.n_tokens.to_string()),
            ("sents per doc", r2(self.sents_per_doc), "sents_per_doc", r2(self.sents_per_doc)),
            ("avg sent len", r2(self.avg_sent_len), "avg_sent_len", r2(self.avg_sent_len)),
            ("mentions", count(self.n_mentions), "n_mentions", self.n_mentions.to_string()),
            ("entities", count(self.n_entities), "n_entities", self.n_entities.to_string()),
            ("mentions/tokens", r2(self.mentions_per_token), "mentions_per_token", r2(self.mentions_per_token)),
            ("mentions/entities", r2(self.mentions_per_entity), "mentions_per_entity", r2(self.mentions_per_entity)),
            ("entities/tokens", r2(self.entities_per_token), "entities_per_token", r2(self.entities_per_token)),
            ("% pronouns", r1(self.pct_pronouns), "pct_pronouns", r1(self.pct_pronouns)),
            ("% nominal", r1(self.pct_nominal), "pct_nominal", r1(self.pct_nominal)),
            ("% names", r1(self.pct_names), "pct_names", r1(self.pct_names)),
        ]
    }
}

/// Aligned table with one column per labelled corpus.
pub fn format_stats_table(columns: &[(String, StatsReport)]) -> String {
    let rows: Vec<Vec<(&str, String, &str, String)>> = columns.iter().map(|(_, r)| r.rows()).collect();
    let label_width = "mentions/entities".len();
    let widths: Vec<usize> = columns
        .iter()
        .zip(&rows)
        .map(|((name, _), rs)| rs.iter().map(|r| r.1.len()).max().unwrap_or(0).max(name.len()))
        .collect();
    let mut out = format!("{:<label_width$}", "");
    for ((name, _), w) in columns.iter().zip(&widths) {
        out.push_str(&format!("  {name:>w$}"));
    }
    out.push('\n');
    let n_rows = rows.first().map_or(0, Vec::len);
    for i in 0..n_rows {
        out.push_str(&format!("{:<label_width$}", rows[0][i].0));
        for (rs, w) in rows.iter().zip(&widths) {
            out.push_str(&format!("  {:>w$}", rs[i].1));
        }
        out.push('\n');
    }
    out
}

/// One `key<TAB>value` line per statistic, keys prefixed by the label when
/// several corpora are reported.
pub fn format_stats_tsv(columns: &[(String, StatsReport)]) -> String {
    let mut out = String::new();
    for (name, r) in columns {
        for (_, _, key, value) in r.rows() {
            if columns.len() > 1 {
                out.push_str(&format!("{name}.{key}\t{value}\n"));
            } else {
                out.push_str(&format!("{key}\t{value}\n"));
            }
        }
    }
    out
}
