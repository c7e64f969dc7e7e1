//! Quotation detection with speaker and addressee attribution.

use sievecoref::mentions::detect_mentions;
use sievecoref::quotes::detect_quotes;
use sievecoref::synth::bundled_synthetic;
use sievecoref::Resources;

fn main() -> sievecoref::Result<()> {
    let corpus = bundled_synthetic();
    let doc = &corpus.documents[0];
    let r = Resources::shipped();
    let mentions = detect_mentions(doc, Default::default(), r)?;
    for q in detect_quotes(doc, &mentions, r) {
        let who = |i: Option<usize>| i.map_or("?".to_string(), |i| doc.span_text(&mentions[i].span));
        println!(
            "sentence {:>2} tokens {}..{}: speaker {}, addressee {}",
            q.open.0,
            q.open.1,
            q.close.1,
            who(q.speaker),
            who(q.addressee)
        );
    }
    Ok(())
}
