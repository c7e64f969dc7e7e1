//! Annotation audit of a CoNLL file (defaults to the bundled synthetic
//! corpus, whose coordinations show up as suspicious boundaries).

use std::env;

use sievecoref::experiments::{audit_annotations, format_audit};
use sievecoref::synth::BUNDLED_SYNTHETIC_CONLL;
use sievecoref::parse_conll_str;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => BUNDLED_SYNTHETIC_CONLL.to_string(),
    };
    let findings = audit_annotations(&parse_conll_str(&text)?);
    print!("{}", format_audit(&findings));
    eprintln!("{} finding(s)", findings.len());
    Ok(())
}
