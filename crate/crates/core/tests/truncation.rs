use sievecoref::experiments::{format_study_tsv, run_truncation_study, truncate_pair, StudyMetric};
use sievecoref::metrics::{score_corpus, MentionMode, SingletonMode};
use sievecoref::synth::{truncation_fixture, ErrorPattern};

fn lea_r(pattern: ErrorPattern) -> f64 {
    let (gold, sys) = truncation_fixture(pattern);
    let fr: Vec<f64> = (1..=10).map(|i| i as f64 * 10.0).collect();
    let study = run_truncation_study(&gold, &sys, &fr, &StudyMetric::ALL, SingletonMode::Included, MentionMode::Predicted).unwrap();
    let (_, c) = study.correlations.iter().find(|(m, _)| *m == StudyMetric::Lea).unwrap();
    c.r.unwrap()
}

#[test]
fn full_fraction_matches_untruncated() {
    for pattern in [ErrorPattern::Tail, ErrorPattern::Uniform] {
        let (gold, sys) = truncation_fixture(pattern);
        for sm in [SingletonMode::Included, SingletonMode::Excluded] {
            let study = run_truncation_study(&gold, &sys, &[100.0], &StudyMetric::ALL, sm, MentionMode::Predicted).unwrap();
            let whole = score_corpus(&gold, &sys, sm, MentionMode::Predicted).unwrap();
            for p in &study.points {
                let (_, r) = whole.documents.iter().find(|(d, _)| *d == p.doc_id).unwrap();
                assert_eq!(&p.score, r);
            }
        }
        for (g, s) in gold.documents.iter().zip(&sys.documents) {
            let (tg, ts) = truncate_pair(g, s, 100.0).unwrap();
            assert_eq!((&tg, &ts), (g, s));
        }
    }
}

#[test]
fn tail_errors_correlate_negatively() {
    let r = lea_r(ErrorPattern::Tail);
    assert!(r < -0.5, "r = {r}");
}

#[test]
fn uniform_errors_do_not_correlate() {
    let r = lea_r(ErrorPattern::Uniform);
    assert!(r.abs() < 0.3, "r = {r}");
}

#[test]
fn tsv_layout() {
    let (gold, sys) = truncation_fixture(ErrorPattern::Tail);
    let study = run_truncation_study(&gold, &sys, &[50.0, 100.0], &[StudyMetric::Lea, StudyMetric::Conll], SingletonMode::Included, MentionMode::Predicted).unwrap();
    let tsv = format_study_tsv(&study);
    let mut lines = tsv.lines();
    assert_eq!(lines.next(), Some("doc_id\tfraction\twords\tmetric\tvalue"));
    assert_eq!(tsv.lines().filter(|l| !l.starts_with('#')).count(), 1 + gold.len() * 2 * 2);
    assert!(tsv.contains("# correlation\tlea\tr="));
    assert!(tsv.contains("# correlation\tconll\tr="));
}
