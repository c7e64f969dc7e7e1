//! Plain-text and key-value renderings of score reports.

use crate::metrics::{PRFScore, ScoreReport};

fn pct(x: f64) -> String {
    format!("{:.2}", x * 100.0)
}

/// Header lines naming the evaluation conditions.
pub fn condition_header(report: &ScoreReport) -> String {
    format!(
        "# singleton_mode: {}\n# mention_mode: {}\n",
        report.singleton_mode, report.mention_mode
    )
}

const GROUPS: [&str; 6] = ["Mentions", "MUC", "B3", "CEAFe", "LEA", "CoNLL"];

fn groups(r: &ScoreReport) -> [PRFScore; 5] {
    [r.mention, r.muc, r.b3, r.ceafe, r.lea]
}

/// Aligned table, one row per labelled report: R/P/F1 for mentions and
/// each metric, then the CoNLL score. All rows must share their conditions;
/// the header names them.
pub fn format_score_table(rows: &[(String, ScoreReport)]) -> String {
    let mut out = String::new();
    if let Some((_, first)) = rows.first() {
        out.push_str(&condition_header(first));
    }
    let label_width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(6);
    let cell = 6;
    let group_width = 3 * cell + 2;
    out.push_str(&format!("{:<label_width$}", ""));
    for g in &GROUPS[..5] {
        out.push_str(&format!("  {g:^group_width$}"));
    }
    out.push_str(&format!("  {:>cell$}\n", GROUPS[5]));
    out.push_str(&format!("{:<label_width$}", "System"));
    for _ in 0..5 {
        out.push_str(&format!("  {:>cell$} {:>cell$} {:>cell$}", "R", "P", "F1"));
    }
    out.push_str(&format!("  {:>cell$}\n", ""));
    for (label, r) in rows {
        out.push_str(&format!("{label:<label_width$}"));
        for s in groups(r) {
            out.push_str(&format!(
                "  {:>cell$} {:>cell$} {:>cell$}",
                pct(s.recall),
                pct(s.precision),
                pct(s.f1)
            ));
        }
        out.push_str(&format!("  {:>cell$}", pct(r.conll)));
        if r.muc_degenerate {
            out.push_str("  (MUC undefined: no multi-mention entities)");
        }
        out.push('\n');
    }
    out
}

/// `key<TAB>value` lines; scores are percentages with 2 decimals.
pub fn format_score_tsv(report: &ScoreReport) -> String {
    let mut out = format!(
        "singleton_mode\t{}\nmention_mode\t{}\n",
        report.singleton_mode, report.mention_mode
    );
    let named = [
        ("mentions", report.mention),
        ("muc", report.muc),
        ("bcub", report.b3),
        ("ceafe", report.ceafe),
        ("lea", report.lea),
    ];
    for (name, s) in named {
        out.push_str(&format!(
            "{name}_recall\t{}\n{name}_precision\t{}\n{name}_f1\t{}\n",
            pct(s.recall),
            pct(s.precision),
            pct(s.f1)
        ));
    }
    out.push_str(&format!("conll\t{}\n", pct(report.conll)));
    out.push_str(&format!("muc_degenerate\t{}\n", report.muc_degenerate));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entity::{EntitySet, Span};
    use crate::metrics::{score, MentionMode, SingletonMode};

    fn running() -> ScoreReport {
        let s = |i| Span::new(0, i, i);
        let gold = EntitySet::from_spans(vec![vec![s(0), s(1), s(2)]]);
        let sys = EntitySet::from_spans(vec![vec![s(0), s(1)], vec![s(2)]]);
        score(&gold, &sys, SingletonMode::Included, MentionMode::Predicted).unwrap()
    }

    #[test]
    fn tsv_values() {
        let t = format_score_tsv(&running());
        for line in ["muc_f1\t66.67", "bcub_f1\t71.43", "ceafe_f1\t53.33", "lea_f1\t44.44", "conll\t63.81", "singleton_mode\tincluded"] {
            assert!(t.lines().any(|l| l == line), "{line} missing from\n{t}");
        }
    }

    #[test]
    fn table_has_conditions_and_columns() {
        let t = format_score_table(&[("sys".into(), running())]);
        assert!(t.starts_with("# singleton_mode: included\n# mention_mode: predicted\n"));
        for g in GROUPS {
            assert!(t.contains(g));
        }
        let row = t.lines().last().unwrap();
        assert!(row.starts_with("sys"));
        assert!(row.trim_end().ends_with("63.81"));
    }
}
