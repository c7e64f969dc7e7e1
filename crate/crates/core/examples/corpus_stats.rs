//! Corpus statistics table for one or more CoNLL files (defaults to the
//! bundled synthetic corpus).
//!
//! cargo run --example corpus_stats -- [file.conll ...]

use std::env;

use sievecoref::stats::{corpus_stats, format_stats_table};
use sievecoref::synth::BUNDLED_SYNTHETIC_CONLL;
use sievecoref::{parse_conll_str, Result};

fn main() -> Result<()> {
    let mut columns = Vec::new();
    for path in env::args().skip(1) {
        let corpus = parse_conll_str(&std::fs::read_to_string(&path)?)?;
        columns.push((path, corpus_stats(&corpus)));
    }
    if columns.is_empty() {
        columns.push(("synthetic".to_string(), corpus_stats(&parse_conll_str(BUNDLED_SYNTHETIC_CONLL)?)));
    }
    print!("{}", format_stats_table(&columns));
    Ok(())
}
