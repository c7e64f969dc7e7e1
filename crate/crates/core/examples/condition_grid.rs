//! Scores the resolver on the synthetic corpus under predicted and gold
//! mentions, with and without singletons, plus a per-document comparison
//! against the no-sieve baseline.

use sievecoref::experiments::{condition_grid, format_document_table, format_grid, per_document_table};
use sievecoref::metrics::{MentionMode, SingletonMode};
use sievecoref::sieve::{resolve_corpus, SieveConfig};
use sievecoref::synth::bundled_synthetic;
use sievecoref::Resources;

fn main() -> sievecoref::Result<()> {
    let gold = bundled_synthetic();
    let r = Resources::shipped();
    let predicted = resolve_corpus(&gold, &SieveConfig::default(), r, false)?;
    let with_gold = resolve_corpus(&gold, &SieveConfig::default(), r, true)?;
    print!("{}", format_grid(&condition_grid(&gold, &predicted, &with_gold)?));
    println!();
    let baseline = resolve_corpus(&gold, &SieveConfig::none(), r, false)?;
    let rows = per_document_table(
        &gold,
        &[("sieves".to_string(), predicted), ("none".to_string(), baseline)],
        SingletonMode::Excluded,
        MentionMode::Predicted,
    )?;
    print!("{}", format_document_table(&rows));
    Ok(())
}
