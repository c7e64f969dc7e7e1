//! Genre-stratified 80/10/10 split of the synthetic corpus, with the first
//! three stories labelled as a second genre.

use sievecoref::split::{default_genre, stratified_split};
use sievecoref::synth::bundled_synthetic;
use sievecoref::Result;

fn main() -> Result<()> {
    let mut corpus = bundled_synthetic();
    for d in corpus.documents.iter_mut().take(3) {
        d.genre = Some("news".into());
    }
    let out = stratified_split(&corpus, [0.8, 0.1, 0.1], default_genre, 7)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for (name, part) in ["train", "dev", "test"].iter().zip(out.parts()) {
        let ids: Vec<String> = part.documents.iter().map(|d| format!("{} ({})", d.id, default_genre(d))).collect();
        println!("{name:<5} {}", ids.join(", "));
    }
    Ok(())
}
