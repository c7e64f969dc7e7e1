//! Deterministic generated corpora: a small Dutch-like narrative corpus
//! with parse trees, named entities and dialogue, fuzzed documents for
//! format round trips, and score fixtures for the truncation study.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conll::{Corpus, Document, Sentence, Token};
use crate::entity::{Entity, EntitySet, Mention, Span};
use crate::mentions::annotate_span;
use crate::resources::Resources;

/// Seed of the bundled synthetic corpus.
pub const SYNTHETIC_SEED: u64 = 2024;

const CHARACTERS: [(&str, bool); 8] = [
    ("Jan", true),
    ("Pieter", true),
    ("Kees", true),
    ("Willem", true),
    ("Marie", false),
    ("Anna", false),
    ("Els", false),
    ("Sophie", false),
];
const PLACES: [&str; 5] = ["Amsterdam", "Utrecht", "Leiden", "Delft", "Haarlem"];
const OBJECTS: [(&str, &str); 6] = [
    ("het", "boek"),
    ("de", "brief"),
    ("de", "auto"),
    ("het", "huis"),
    ("de", "tuin"),
    ("de", "deur"),
];
const TRANSITIVE: [&str; 5] = ["las", "zag", "zocht", "vond", "kocht"];
const MOTION: [&str; 3] = ["ging", "reed", "liep"];
const SPEECH: [&str; 3] = ["zei", "vroeg", "riep"];

/// One token under construction: form, POS, tree bit, NER bit.
type Row = (String, &'static str, String, String);

struct Builder {
    rows: Vec<Row>,
    /// (start, end, referent)
    mentions: Vec<(usize, usize, String)>,
}

impl Builder {
    fn new() -> Builder {
        Builder { rows: Vec::new(), mentions: Vec::new() }
    }

    fn push(&mut self, form: &str, pos: &'static str, bit: &str) -> usize {
        self.push_ner(form, pos, bit, "*")
    }

    fn push_ner(&mut self, form: &str, pos: &'static str, bit: &str, ner: &str) -> usize {
        self.rows.push((form.to_string(), pos, bit.to_string(), ner.to_string()));
        self.rows.len() - 1
    }

    fn mention(&mut self, start: usize, end: usize, referent: &str) {
        self.mentions.push((start, end, referent.to_string()));
    }

    fn sentence(&self) -> Sentence {
        let tokens = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, (f, p, b, n))| Token::new(i, f, p, b).with_ner(n))
            .collect();
        Sentence::new(tokens).expect("generated trees are well formed")
    }
}

struct Story<'r> {
    rng: ChaCha8Rng,
    cast: Vec<(&'static str, bool)>,
    places: Vec<&'static str>,
    objects: Vec<(&'static str, &'static str)>,
    last_character: Option<usize>,
    resources: &'r Resources,
}

impl Story<'_> {
    fn pick_character(&mut self) -> usize {
        let i = self.rng.gen_range(0..self.cast.len());
        self.last_character = Some(i);
        i
    }

    fn name(&mut self, b: &mut Builder, i: usize, bit: &str) {
        let (name, _) = self.cast[i];
        let t = b.push_ner(name, "PROPN", bit, "(PER)");
        b.mention(t, t, name);
    }

    fn object(&mut self, b: &mut Builder, open: &str, close: &str) {
        let (det, noun) = *self.objects.choose(&mut self.rng).expect("objects");
        let s = b.push(det, "DET", &format!("{open}*"));
        let e = b.push(noun, "NOUN", &format!("*{close}"));
        b.mention(s, e, noun);
    }

    fn pronoun(&mut self, b: &mut Builder, bit: &str) -> bool {
        let Some(i) = self.last_character else { return false };
        let (name, masc) = self.cast[i];
        let t = b.push(if masc { "hij" } else { "zij" }, "PRON", bit);
        b.mention(t, t, name);
        true
    }

    /// "Jan las de brief ."
    fn transitive(&mut self, b: &mut Builder) {
        let c = self.pick_character();
        self.name(b, c, "(TOP(S(NP*)");
        let v = *TRANSITIVE.choose(&mut self.rng).expect("verbs");
        b.push(v, "VERB", "*");
        self.object(b, "(NP", ")");
        b.push(".", "PUNCT", "*))");
    }

    /// "hij ging naar Leiden ." or, without an antecedent, with a name.
    fn motion(&mut self, b: &mut Builder) {
        if !self.pronoun(b, "(TOP(S(NP*)") {
            let c = self.pick_character();
            self.name(b, c, "(TOP(S(NP*)");
        }
        let v = *MOTION.choose(&mut self.rng).expect("verbs");
        b.push(v, "VERB", "*");
        b.push("naar", "ADP", "(PP*");
        let place = *self.places.choose(&mut self.rng).expect("places");
        let t = b.push_ner(place, "PROPN", "(NP*))", "(LOC)");
        b.mention(t, t, place);
        b.push(".", "PUNCT", "*))");
    }

    /// "de auto stond in de tuin ."
    fn location(&mut self, b: &mut Builder) {
        self.object(b, "(TOP(S(NP", ")");
        b.push("stond", "VERB", "*");
        b.push("in", "ADP", "(PP*");
        self.object(b, "(NP", "))");
        b.push(".", "PUNCT", "*))");
    }

    /// '" Ik zie de brief , " zei Marie .'
    fn speech(&mut self, b: &mut Builder) {
        let c = self.pick_character();
        let (name, _) = self.cast[c];
        b.push("\"", "PUNCT", "(TOP(S*");
        let ik = b.push("Ik", "PRON", "(S(NP*)");
        b.mention(ik, ik, name);
        b.push("zie", "VERB", "*");
        self.object(b, "(NP", ")");
        b.push(",", "PUNCT", "*)");
        b.push("\"", "PUNCT", "*");
        let v = *SPEECH.choose(&mut self.rng).expect("verbs");
        b.push(v, "VERB", "*");
        self.name(b, c, "(NP*)");
        b.push(".", "PUNCT", "*))");
        self.last_character = Some(c);
    }

    /// "Jan en Marie praatten ."
    fn coordination(&mut self, b: &mut Builder) {
        let a = self.rng.gen_range(0..self.cast.len());
        let mut c = self.rng.gen_range(0..self.cast.len() - 1);
        if c >= a {
            c += 1;
        }
        self.name(b, a, "(TOP(S(NP(NP*)");
        b.push("en", "CCONJ", "*");
        self.name(b, c, "(NP*))");
        let group = format!("{}+{}", self.cast[a].0, self.cast[c].0);
        b.mention(0, 2, &group);
        b.push("praatten", "VERB", "*");
        b.push(".", "PUNCT", "*))");
        self.last_character = Some(c);
    }

    fn document(&mut self, id: &str, sentences: usize) -> Document {
        let mut built = Vec::with_capacity(sentences);
        let mut chains: BTreeMap<String, Vec<Span>> = BTreeMap::new();
        for si in 0..sentences {
            let mut b = Builder::new();
            match self.rng.gen_range(0..10) {
                0..=2 => self.transitive(&mut b),
                3..=4 => self.motion(&mut b),
                5 => self.location(&mut b),
                6..=8 => self.speech(&mut b),
                _ => self.coordination(&mut b),
            }
            for (s, e, r) in &b.mentions {
                chains.entry(r.clone()).or_default().push(Span::new(si, *s, *e));
            }
            built.push(b.sentence());
        }
        let mut doc = Document::new(id, built);
        doc.paragraph_starts = (0..sentences).step_by(5).collect();
        let mut clusters: Vec<Vec<Span>> = chains.into_values().collect();
        clusters.sort_by_key(|c| c[0]);
        let entities = clusters
            .into_iter()
            .enumerate()
            .map(|(i, spans)| {
                let mentions = spans
                    .into_iter()
                    .map(|sp| annotate_span(&doc.sentences[sp.sentence], sp, self.resources))
                    .collect();
                Entity::new(i as u64, mentions)
            })
            .collect();
        doc.entities = EntitySet::new(entities).expect("generated mentions are distinct");
        doc
    }
}

/// A seeded narrative corpus of `documents` × `sentences_per_doc`
/// sentences with gold entities. Each document has its own small cast, so
/// names, objects and places repeat within a document.
pub fn synthetic_corpus(seed: u64, documents: usize, sentences_per_doc: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut docs = Vec::with_capacity(documents);
    for d in 0..documents {
        let mut cast = CHARACTERS.to_vec();
        cast.shuffle(&mut rng);
        cast.truncate(3);
        let mut places = PLACES.to_vec();
        places.shuffle(&mut rng);
        places.truncate(2);
        let mut objects = OBJECTS.to_vec();
        objects.shuffle(&mut rng);
        objects.truncate(3);
        let mut story = Story {
            rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            cast,
            places,
            objects,
            last_character: None,
            resources: Resources::shipped(),
        };
        docs.push(story.document(&format!("synth/story_{d:02}"), sentences_per_doc));
    }
    Corpus::new(docs)
}

/// The bundled corpus: 10 documents of 20 sentences.
pub fn bundled_synthetic() -> Corpus {
    synthetic_corpus(SYNTHETIC_SEED, 10, 20)
}

/// Text of the bundled corpus as shipped in `data/synthetic_200.conll`.
pub const BUNDLED_SYNTHETIC_CONLL: &str = include_str!("../data/synthetic_200.conll");

/// Non-crossing spans inside `lo..=hi`, with nesting and adjacency. When
/// `strict` the whole range itself is never produced.
fn nested_spans(rng: &mut ChaCha8Rng, lo: usize, hi: usize, depth: usize, strict: bool, out: &mut Vec<(usize, usize)>) {
    let mut p = lo;
    while p <= hi {
        if rng.gen_bool(0.35) {
            p += 1;
            continue;
        }
        let max_len = (hi - p + 1).min(5);
        let mut len = rng.gen_range(1..=max_len);
        if strict && p == lo && len == hi - lo + 1 {
            if len == 1 {
                p += 1;
                continue;
            }
            len -= 1;
        }
        let end = p + len - 1;
        out.push((p, end));
        if len > 1 && depth < 3 {
            nested_spans(rng, p, end, depth + 1, true, out);
        }
        p = end + 1;
    }
}

fn tree_bits(n: usize, spans: &[(usize, usize)]) -> Vec<String> {
    let mut bits = Vec::with_capacity(n);
    for t in 0..n {
        let mut bit = String::new();
        if t == 0 {
            bit.push_str("(TOP");
        }
        let mut ends: Vec<usize> = spans.iter().filter(|s| s.0 == t && s.1 > t).map(|s| s.1).collect();
        ends.sort_by(|a, b| b.cmp(a));
        bit.push_str(&"(NP".repeat(ends.len()));
        bit.push_str(if spans.contains(&(t, t)) { "(NP*)" } else { "*" });
        let closes = spans.iter().filter(|s| s.1 == t && s.0 < t).count();
        bit.push_str(&")".repeat(closes));
        if t + 1 == n {
            bit.push(')');
        }
        bits.push(bit);
    }
    bits
}

/// A random valid document: nested and adjacent mentions, parse trees
/// over those spans, named entities and paragraph breaks.
pub fn fuzz_document(rng: &mut ChaCha8Rng, id: &str) -> Document {
    const WORDS: [(&str, &str); 10] = [
        ("de", "DET"),
        ("man", "NOUN"),
        ("Jan", "PROPN"),
        ("zij", "PRON"),
        ("huis", "NOUN"),
        ("en", "CCONJ"),
        ("liep", "VERB"),
        ("in", "ADP"),
        (",", "PUNCT"),
        ("Delft", "PROPN"),
    ];
    let n_sent = rng.gen_range(1..=5);
    let mut sentences = Vec::with_capacity(n_sent);
    let mut all_spans = Vec::new();
    for si in 0..n_sent {
        let n = rng.gen_range(1..=12);
        let mut spans = Vec::new();
        nested_spans(rng, 0, n - 1, 0, false, &mut spans);
        let with_tree = rng.gen_bool(0.7);
        let bits = if with_tree { tree_bits(n, &spans) } else { vec!["-".to_string(); n] };
        let mut tokens: Vec<Token> = (0..n)
            .map(|i| {
                let (f, p) = WORDS[rng.gen_range(0..WORDS.len())];
                Token::new(i, f, p, &bits[i])
            })
            .collect();
        if n >= 2 && rng.gen_bool(0.4) {
            let s = rng.gen_range(0..n - 1);
            tokens[s].ner_bit = "(PER*".to_string();
            tokens[s + 1].ner_bit = "*)".to_string();
        }
        sentences.push(Sentence::new(tokens).expect("generated trees are well formed"));
        all_spans.extend(spans.into_iter().map(|(s, e)| Span::new(si, s, e)));
    }
    let n_entities = rng.gen_range(1..=all_spans.len().max(1));
    let mut clusters: Vec<Vec<Span>> = vec![Vec::new(); n_entities];
    for sp in all_spans {
        clusters[rng.gen_range(0..n_entities)].push(sp);
    }
    clusters.retain(|c| !c.is_empty());
    let mut doc = Document::new(id, sentences);
    doc.part = format!("{:03}", rng.gen_range(0..3));
    doc.paragraph_starts = (0..n_sent).filter(|&i| i == 0 || rng.gen_bool(0.3)).collect();
    let entities = clusters
        .into_iter()
        .enumerate()
        .map(|(i, spans)| {
            let ms = spans
                .into_iter()
                .map(|sp| annotate_span(&doc.sentences[sp.sentence], sp, Resources::shipped()))
                .collect();
            Entity::new(rng.gen_range(0..1000) * 100 + i as u64, ms)
        })
        .collect();
    doc.entities = EntitySet::new(entities).expect("generated spans are distinct");
    doc
}

/// Where a truncation fixture places its system errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorPattern {
    /// Every entity at or after a fixed sentence is split, so longer
    /// documents accumulate more errors.
    Tail,
    /// Each entity is split with probability 1/3 wherever it occurs.
    Uniform,
}

/// Sentence from which tail errors start.
pub const TAIL_START: usize = 12;

/// Gold and system corpora of documents with 10 to 40 sentences of eight
/// tokens. Each sentence holds two gold entities of two mentions each; the
/// system splits the entities selected by `pattern`.
pub fn truncation_fixture(pattern: ErrorPattern) -> (Corpus, Corpus) {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut gold_docs = Vec::new();
    let mut sys_docs = Vec::new();
    for (d, n) in (10usize..=40).enumerate() {
        let sentences: Vec<Sentence> = (0..n)
            .map(|_| Sentence::new((0..8).map(|i| Token::new(i, "w", "X", "-")).collect()).expect("flat sentence"))
            .collect();
        let doc = Document::new(&format!("fixture_{d:02}"), sentences);
        let mut gold = Vec::new();
        let mut sys = Vec::new();
        for si in 0..n {
            for first in [1, 4] {
                let spans = vec![Span::new(si, first, first), Span::new(si, first + 1, first + 1)];
                let wrong = match pattern {
                    ErrorPattern::Tail => si >= TAIL_START,
                    ErrorPattern::Uniform => rng.gen_bool(1.0 / 3.0),
                };
                gold.push(spans.clone());
                if wrong {
                    sys.extend(spans.into_iter().map(|s| vec![s]));
                } else {
                    sys.push(spans);
                }
            }
        }
        let set = |cs: Vec<Vec<Span>>| {
            EntitySet::from_mentions(cs.into_iter().map(|c| c.into_iter().map(Mention::from_span).collect::<Vec<_>>()))
                .expect("distinct spans")
        };
        gold_docs.push(doc.with_entities(set(gold)));
        sys_docs.push(doc.with_entities(set(sys)));
    }
    (Corpus::new(gold_docs), Corpus::new(sys_docs))
}
