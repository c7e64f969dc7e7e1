//! Resolves a short Dutch story and prints its chains, with the entity
//! count after every sieve pass.

use sievecoref::mentions::detect_mentions;
use sievecoref::sieve::{resolve_traced, SieveConfig};
use sievecoref::{parse_conll_str, Resources};

const STORY: &str = "#begin document (story); part 000
story 000 0 Marie PROPN (TOP(S(NP*) - - - - (PER) -
story 000 1 las VERB * - - - - * -
story 000 2 de DET (NP* - - - - * -
story 000 3 brief NOUN *) - - - - * -
story 000 4 . PUNCT *)) - - - - * -

story 000 0 \" PUNCT (TOP(S* - - - - * -
story 000 1 Ik PRON (S(NP*) - - - - * -
story 000 2 ga VERB * - - - - * -
story 000 3 naar ADP (PP* - - - - * -
story 000 4 Delft PROPN (NP*)) - - - - (LOC) -
story 000 5 , PUNCT *) - - - - * -
story 000 6 \" PUNCT * - - - - * -
story 000 7 zei VERB * - - - - * -
story 000 8 zij PRON (NP*) - - - - * -
story 000 9 . PUNCT *)) - - - - * -

story 000 0 De DET (TOP(S(NP* - - - - * -
story 000 1 brief NOUN *) - - - - * -
story 000 2 bleef VERB * - - - - * -
story 000 3 liggen VERB * - - - - * -
story 000 4 . PUNCT *)) - - - - * -

#end document
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = parse_conll_str(STORY)?;
    let doc = &corpus.documents[0];
    let r = Resources::shipped();
    let mentions = detect_mentions(doc, Default::default(), r)?;
    let (entities, trace) = resolve_traced(doc, &mentions, &SieveConfig::default(), r);
    println!("entities: {} initially", trace.initial);
    for (sieve, count) in &trace.passes {
        println!("  after {sieve:<20} {count}");
    }
    for e in entities.entities() {
        let texts: Vec<String> = e.mentions.iter().map(|m| format!("{} [{}]", doc.span_text(&m.span), m.span)).collect();
        println!("{}: {}", e.id, texts.join(" | "));
    }
    Ok(())
}
