//! Writes the bundled synthetic corpus (or a custom-sized one) as CoNLL.
//!
//! cargo run --example synth -- [out.conll] [documents sentences seed]

use std::env;
use std::fs;

use sievecoref::synth::{bundled_synthetic, synthetic_corpus};
use sievecoref::write_conll_string;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().skip(1).collect();
    let corpus = match args.as_slice() {
        [_, docs, sents, seed] => synthetic_corpus(seed.parse()?, docs.parse()?, sents.parse()?),
        _ => bundled_synthetic(),
    };
    let text = write_conll_string(&corpus)?;
    match args.first() {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}
