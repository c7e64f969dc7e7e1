//! Length/score correlation on the constructed fixtures: errors in document
//! tails versus errors spread uniformly.

use sievecoref::experiments::{run_truncation_study, StudyMetric};
use sievecoref::metrics::{MentionMode, SingletonMode};
use sievecoref::synth::{truncation_fixture, ErrorPattern};

fn main() -> sievecoref::Result<()> {
    let fractions: Vec<f64> = (1..=10).map(|i| i as f64 * 10.0).collect();
    for pattern in [ErrorPattern::Tail, ErrorPattern::Uniform] {
        let (gold, sys) = truncation_fixture(pattern);
        let study = run_truncation_study(&gold, &sys, &fractions, &[StudyMetric::Lea, StudyMetric::Conll], SingletonMode::Included, MentionMode::Predicted)?;
        for (metric, c) in &study.correlations {
            let r = c.r.map_or("undefined".to_string(), |r| format!("{r:.3}"));
            println!("{pattern:?} errors: {metric} vs words, r = {r} over {} points", c.n);
        }
    }
    Ok(())
}
