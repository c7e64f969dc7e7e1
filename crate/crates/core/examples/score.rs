//! Scores the running example (gold {a,b,c}, system {a,b},{c}) with and
//! without singletons, or two CoNLL files given as arguments.
//!
//! cargo run --example score -- [gold.conll sys.conll]

use std::env;

use sievecoref::metrics::{score, score_corpus, MentionMode, SingletonMode};
use sievecoref::report::format_score_table;
use sievecoref::{parse_conll_str, EntitySet, Span};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    for mode in [SingletonMode::Included, SingletonMode::Excluded] {
        let report = if let [g, s] = args.as_slice() {
            let gold = parse_conll_str(&std::fs::read_to_string(g)?)?;
            let sys = parse_conll_str(&std::fs::read_to_string(s)?)?;
            score_corpus(&gold, &sys, mode, MentionMode::Predicted)?.total
        } else {
            let m = |i| Span::new(0, i, i);
            let gold = EntitySet::from_spans(vec![vec![m(0), m(1), m(2)]]);
            let sys = EntitySet::from_spans(vec![vec![m(0), m(1)], vec![m(2)]]);
            score(&gold, &sys, mode, MentionMode::Predicted)?
        };
        println!("{}", format_score_table(&[("system".to_string(), report)]));
    }
    Ok(())
}
