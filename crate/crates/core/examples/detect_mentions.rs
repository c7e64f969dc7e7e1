//! Mention candidates from parse trees under both boundary schemes.

use sievecoref::conll::{Document, Sentence, Token};
use sievecoref::mentions::{detect_mentions, Scheme};
use sievecoref::Resources;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // "De burgemeester van Franeker , die ik gisteren zag , lachte ."
    let rows = [
        ("De", "DET", "(TOP(S(NP(NP*"),
        ("burgemeester", "NOUN", "*"),
        ("van", "ADP", "(PP*"),
        ("Franeker", "PROPN", "(NP*)))"),
        (",", "PUNCT", "*"),
        ("die", "PRON", "(SBAR(NP*)"),
        ("ik", "PRON", "(S(NP*)"),
        ("gisteren", "ADV", "*"),
        ("zag", "VERB", "*))"),
        (",", "PUNCT", "*)"),
        ("lachte", "VERB", "*"),
        (".", "PUNCT", "*))"),
    ];
    let tokens = rows.iter().enumerate().map(|(i, (f, p, b))| Token::new(i, f, p, b)).collect();
    let sentence = Sentence::new(tokens).map_err(|(i, m)| format!("token {i}: {m}"))?;
    let doc = Document::new("example", vec![sentence]);
    for scheme in [Scheme::Riddle, Scheme::Sonar] {
        println!("{scheme}:");
        for m in detect_mentions(&doc, scheme, Resources::shipped())? {
            println!(
                "  {:<8} {:<8} head={:<14} referring={:<5} {}",
                m.span.to_string(),
                m.surface_type.as_str(),
                doc.sentences[0].tokens[m.head].form,
                m.referring,
                doc.span_text(&m.span)
            );
        }
    }
    Ok(())
}
