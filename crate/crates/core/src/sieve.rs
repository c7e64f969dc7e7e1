//! Entity-centric multi-pass coreference resolution. Every mention starts
//! as its own entity; each sieve in turn may merge entities, high-precision
//! rules first.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::conll::{Corpus, Document};
use crate::entity::{Entity, EntitySet, Mention, MentionType, Span};
use crate::error::{Error, Result};
use crate::features::{compatible, EntityFeatures, Number, Person};
use crate::mentions::{detect_mentions, Scheme};
use crate::quotes::{detect_quotes, QuoteSpan};
use crate::resources::Resources;
use crate::tags::PosClass;
use crate::tree::{function_tags, LabelCategory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sieve {
    ExactMatch,
    PreciseConstructs,
    StrictHeadMatch,
    RelaxedHeadMatch,
    ProperHeadMatch,
    PronounResolution,
}

impl Sieve {
    /// The catalogue in its default order.
    pub const ALL: [Sieve; 6] = [
        Sieve::ExactMatch,
        Sieve::PreciseConstructs,
        Sieve::StrictHeadMatch,
        Sieve::RelaxedHeadMatch,
        Sieve::ProperHeadMatch,
        Sieve::PronounResolution,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Sieve::ExactMatch => "exact_match",
            Sieve::PreciseConstructs => "precise_constructs",
            Sieve::StrictHeadMatch => "strict_head_match",
            Sieve::RelaxedHeadMatch => "relaxed_head_match",
            Sieve::ProperHeadMatch => "proper_head_match",
            Sieve::PronounResolution => "pronoun_resolution",
        }
    }
}

impl fmt::Display for Sieve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Sieve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sieve> {
        Sieve::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown sieve {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    /// Enabled sieves, applied in this order.
    pub sieves: Vec<Sieve>,
    pub scheme: Scheme,
    /// Link second-person pronouns in a quote to its addressee.
    pub link_addressees: bool,
    /// Sentences searched for a third-person pronoun antecedent, counting
    /// the pronoun's own sentence.
    pub pronoun_window: usize,
    /// Sentences searched back by relaxed head matching.
    pub relaxed_window: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            sieves: Sieve::ALL.to_vec(),
            scheme: Scheme::default(),
            link_addressees: true,
            pronoun_window: 3,
            relaxed_window: 5,
        }
    }
}

impl SieveConfig {
    /// No sieves: every mention stays a singleton.
    pub fn none() -> SieveConfig {
        SieveConfig {
            sieves: Vec::new(),
            ..SieveConfig::default()
        }
    }

    /// Reads the config format: one sieve name per line in application
    /// order (or `none`), plus optional `scheme=`, `addressees=`,
    /// `pronoun_window=` and `relaxed_window=` lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<SieveConfig> {
        let mut config = SieveConfig::none();
        let mut seen = HashSet::new();
        let err = |n: usize, msg: String| Error::Config(format!("sieve config line {}: {msg}", n + 1));
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line == "none" {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                let value = value.trim();
                match key.trim() {
                    "scheme" => config.scheme = value.parse().map_err(|e: Error| err(n, e.to_string()))?,
                    "addressees" => {
                        config.link_addressees = match value {
                            "yes" | "true" | "on" => true,
                            "no" | "false" | "off" => false,
                            _ => return Err(err(n, format!("expected yes or no, got {value:?}"))),
                        }
                    }
                    "pronoun_window" | "relaxed_window" => {
                        let v: usize = value
                            .parse()
                            .ok()
                            .filter(|&v| v > 0)
                            .ok_or_else(|| err(n, format!("expected a positive integer, got {value:?}")))?;
                        if key.trim() == "pronoun_window" {
                            config.pronoun_window = v;
                        } else {
                            config.relaxed_window = v;
                        }
                    }
                    other => return Err(err(n, format!("unknown setting {other:?}"))),
                }
                continue;
            }
            let sieve: Sieve = line.parse().map_err(|e: Error| err(n, e.to_string()))?;
            if !seen.insert(sieve) {
                return Err(err(n, format!("sieve {sieve} listed twice")));
            }
            config.sieves.push(sieve);
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<SieveConfig> {
        SieveConfig::parse(&std::fs::read_to_string(path)?)
    }

    /// The config in the file format read by [`SieveConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.sieves.is_empty() {
            out.push_str("none\n");
        }
        for s in &self.sieves {
            out.push_str(s.as_str());
            out.push('\n');
        }
        out.push_str(&format!(
            "scheme={}\naddressees={}\npronoun_window={}\nrelaxed_window={}\n",
            self.scheme,
            if self.link_addressees { "yes" } else { "no" },
            self.pronoun_window,
            self.relaxed_window
        ));
        out
    }
}

const DETERMINERS: &[&str] = &[
    "de", "het", "een", "'t", "'n", "die", "dat", "deze", "dit", "the", "a", "an",
];

/// Lowercased text with leading determiners removed and whitespace
/// collapsed.
pub fn normalize_text(text: &str) -> String {
    let lower = text.to_lowercase();
    let mut words: Vec<&str> = lower.split_whitespace().collect();
    let skip = words.iter().take_while(|w| DETERMINERS.contains(w)).count();
    words.drain(..skip);
    words.join(" ")
}

const COPULAS: &[&str] = &[
    "is", "was", "ben", "bent", "zijn", "waren", "wordt", "werd", "blijkt", "bleek", "heet", "heette", "lijkt", "leek",
];

/// Entities under construction: a union-find forest over mention indices.
struct Chains {
    parent: Vec<usize>,
    members: Vec<Vec<usize>>,
    features: Vec<EntityFeatures>,
}

impl Chains {
    fn new(mentions: &[Mention]) -> Chains {
        Chains {
            parent: (0..mentions.len()).collect(),
            members: (0..mentions.len()).map(|i| vec![i]).collect(),
            features: mentions.iter().map(|m| EntityFeatures::of(&m.features)).collect(),
        }
    }

    fn root(&self, mut i: usize) -> usize {
        while self.parent[i] != i {
            i = self.parent[i];
        }
        i
    }

    fn same(&self, a: usize, b: usize) -> bool {
        self.root(a) == self.root(b)
    }

    /// Merges the entities of `a` and `b` unless their accumulated features
    /// conflict. Returns whether they are now one entity.
    fn merge(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.root(a), self.root(b));
        if ra == rb {
            return true;
        }
        if !self.features[ra].admits(&self.features[rb]) {
            return false;
        }
        let (keep, gone) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[gone] = keep;
        let moved = std::mem::take(&mut self.members[gone]);
        let mut all = std::mem::take(&mut self.members[keep]);
        all.extend(moved);
        all.sort_unstable();
        self.members[keep] = all;
        self.features[keep] = self.features[keep].merged(&self.features[gone]);
        true
    }

    fn entity(&self, i: usize) -> &[usize] {
        &self.members[self.root(i)]
    }

    fn is_first(&self, i: usize) -> bool {
        self.entity(i)[0] == i
    }

    fn count(&self) -> usize {
        (0..self.parent.len()).filter(|&i| self.parent[i] == i).count()
    }
}

/// Per-mention data the sieves look at repeatedly.
struct Context<'a> {
    doc: &'a Document,
    mentions: &'a [Mention],
    text: Vec<String>,
    head_word: Vec<String>,
    content: Vec<HashSet<String>>,
    modifiers: Vec<HashSet<String>>,
    subject: Vec<bool>,
    quotes: Vec<QuoteSpan>,
    quote_of: Vec<Option<usize>>,
}

impl<'a> Context<'a> {
    fn new(doc: &'a Document, mentions: &'a [Mention], resources: &Resources) -> Context<'a> {
        let token = |m: &Mention, t: usize| &doc.sentences[m.span.sentence].tokens[t];
        let word = |m: &Mention, t: usize| {
            let tok = token(m, t);
            tok.lemma().unwrap_or(&tok.form).to_lowercase()
        };
        let quotes = detect_quotes(doc, mentions, resources);
        Context {
            doc,
            mentions,
            text: mentions.iter().map(|m| doc.span_text(&m.span)).collect(),
            head_word: mentions.iter().map(|m| word(m, m.head)).collect(),
            content: mentions
                .iter()
                .map(|m| {
                    (m.span.start..=m.span.end)
                        .filter(|&t| {
                            matches!(
                                PosClass::of(&token(m, t).pos),
                                PosClass::Noun | PosClass::ProperNoun | PosClass::Adjective | PosClass::Numeral
                            )
                        })
                        .map(|t| word(m, t))
                        .collect()
                })
                .collect(),
            modifiers: mentions
                .iter()
                .map(|m| {
                    (m.span.start..m.head.max(m.span.start))
                        .filter(|&t| {
                            matches!(
                                PosClass::of(&token(m, t).pos),
                                PosClass::Noun | PosClass::ProperNoun | PosClass::Adjective | PosClass::Numeral
                            )
                        })
                        .map(|t| word(m, t))
                        .collect()
                })
                .collect(),
            subject: mentions.iter().map(|m| is_subject(doc, m, resources)).collect(),
            quote_of: mentions
                .iter()
                .map(|m| quotes.iter().position(|q| q.contains(&m.span)))
                .collect(),
            quotes,
        }
    }

    fn is_pronoun(&self, i: usize) -> bool {
        self.mentions[i].surface_type == MentionType::Pronoun
    }

    fn nested(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.mentions[a].span, &self.mentions[b].span);
        x.contains(y) || y.contains(x)
    }
}

/// Subject test: a function tag marking subjects, or the first noun phrase
/// directly under a clause node. Without a parse, a mention at the start of
/// its sentence.
fn is_subject(doc: &Document, m: &Mention, resources: &Resources) -> bool {
    let sentence = &doc.sentences[m.span.sentence];
    let Some(tree) = sentence.tree.as_ref() else {
        return m.span.start == 0;
    };
    let Some(node) = tree.node_for_span(m.span.start, m.span.end) else {
        return false;
    };
    let n = tree.node(node);
    if function_tags(&n.label)
        .iter()
        .any(|t| matches!(t.to_ascii_lowercase().as_str(), "su" | "sbj" | "subj" | "nsubj"))
    {
        return true;
    }
    let Some(parent) = n.parent else { return false };
    let p = tree.node(parent);
    if resources.labels.category(&p.label) != LabelCategory::Clause {
        return false;
    }
    p.children
        .iter()
        .find(|&&c| {
            let c = tree.node(c);
            resources.labels.category(&c.label) == LabelCategory::NounPhrase
                || (c.is_leaf() && PosClass::of(&c.label) == PosClass::Pronoun)
        })
        .is_some_and(|&c| c == node)
}

fn exact_match(ctx: &Context, chains: &mut Chains) {
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, m) in ctx.mentions.iter().enumerate() {
        if ctx.is_pronoun(i) || !m.referring {
            continue;
        }
        let key = normalize_text(&ctx.text[i]);
        if !key.is_empty() {
            groups.entry(key).or_default().push(i);
        }
    }
    for group in groups.values() {
        for k in 1..group.len() {
            for &i in &group[..k] {
                if chains.merge(i, group[k]) {
                    break;
                }
            }
        }
    }
}

fn precise_constructs(ctx: &Context, chains: &mut Chains, resources: &Resources) {
    let mut by_span: HashMap<Span, usize> = HashMap::new();
    for (i, m) in ctx.mentions.iter().enumerate() {
        by_span.entry(m.span).or_insert(i);
    }
    // longest mention starting / ending at a position
    let starting = |s: usize, t: usize| {
        (0..ctx.mentions.len())
            .filter(|&i| ctx.mentions[i].span.sentence == s && ctx.mentions[i].span.start == t)
            .max_by_key(|&i| ctx.mentions[i].span.end)
    };
    let ending = |s: usize, t: usize| {
        (0..ctx.mentions.len())
            .filter(|&i| ctx.mentions[i].span.sentence == s && ctx.mentions[i].span.end == t)
            .min_by_key(|&i| ctx.mentions[i].span.start)
    };
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (si, sentence) in ctx.doc.sentences.iter().enumerate() {
        let forms: Vec<String> = sentence.tokens.iter().map(|t| t.form.to_lowercase()).collect();
        match sentence.tree.as_ref() {
            Some(tree) => {
                for id in tree.preorder() {
                    let n = tree.node(id);
                    if n.is_leaf() || resources.labels.category(&n.label) != LabelCategory::NounPhrase {
                        continue;
                    }
                    let kids: Vec<_> = n.children.iter().map(|&c| tree.node(c)).collect();
                    let is_np = |k: &crate::tree::Node| {
                        resources.labels.category(&k.label) == LabelCategory::NounPhrase
                    };
                    let comma = |k: &crate::tree::Node| k.is_leaf() && forms[k.start] == ",";
                    let shaped = (kids.len() == 3 || (kids.len() == 4 && comma(kids[3])))
                        && is_np(kids[0])
                        && comma(kids[1])
                        && is_np(kids[2]);
                    if shaped {
                        let a = by_span.get(&Span::new(si, kids[0].start, kids[0].end));
                        let b = by_span.get(&Span::new(si, kids[2].start, kids[2].end));
                        if let (Some(&a), Some(&b)) = (a, b) {
                            pairs.push((a, b));
                        }
                    }
                    // treebanks that mark appositions with a function tag
                    for (k, kid) in kids.iter().enumerate() {
                        let app = function_tags(&kid.label).iter().any(|t| t.eq_ignore_ascii_case("app"));
                        if app && k > 0 {
                            let a = by_span.get(&Span::new(si, kids[0].start, kids[0].end));
                            let b = by_span.get(&Span::new(si, kid.start, kid.end));
                            if let (Some(&a), Some(&b)) = (a, b) {
                                pairs.push((a, b));
                            }
                        }
                    }
                }
            }
            None => {
                for t in 1..forms.len() {
                    if forms[t] != "," {
                        continue;
                    }
                    let (Some(a), Some(b)) = (ending(si, t - 1), starting(si, t + 1)) else {
                        continue;
                    };
                    let after = ctx.mentions[b].span.end + 1;
                    let closed = after >= forms.len() || matches!(forms[after].as_str(), "," | "." | "!" | "?");
                    let named = ctx.mentions[a].surface_type == MentionType::Name
                        || ctx.mentions[b].surface_type == MentionType::Name;
                    if closed && named {
                        pairs.push((a, b));
                    }
                }
            }
        }
        for t in 1..forms.len().saturating_sub(1) {
            if !COPULAS.contains(&forms[t].as_str()) {
                continue;
            }
            if let (Some(a), Some(b)) = (ending(si, t - 1), starting(si, t + 1)) {
                if !ctx.is_pronoun(b) && ctx.mentions[a].referring {
                    pairs.push((a, b));
                }
            }
        }
    }
    for (a, b) in pairs {
        if ctx.is_pronoun(a) && ctx.is_pronoun(b) {
            continue;
        }
        if !compatible(&ctx.mentions[a].features, &ctx.mentions[b].features) {
            continue;
        }
        chains.merge(a, b);
    }
}

/// Head words of the non-pronominal mentions of `i`'s entity.
fn entity_heads<'c>(ctx: &'c Context, chains: &Chains, i: usize) -> HashSet<&'c str> {
    chains
        .entity(i)
        .iter()
        .filter(|&&x| !ctx.is_pronoun(x))
        .map(|&x| ctx.head_word[x].as_str())
        .collect()
}

fn entity_content<'c>(ctx: &'c Context, chains: &Chains, i: usize) -> HashSet<&'c str> {
    chains
        .entity(i)
        .iter()
        .flat_map(|&x| ctx.content[x].iter().map(String::as_str))
        .collect()
}

/// Runs `accept` for the first mention of each non-pronominal entity against
/// preceding non-pronominal mentions, closest first, merging on the first
/// acceptable candidate.
fn head_pass<F>(ctx: &Context, chains: &mut Chains, window: Option<usize>, accept: F)
where
    F: Fn(&Context, &Chains, usize, usize) -> bool,
{
    for j in 0..ctx.mentions.len() {
        if ctx.is_pronoun(j) || !ctx.mentions[j].referring || !chains.is_first(j) {
            continue;
        }
        let sj = ctx.mentions[j].span.sentence;
        for i in (0..j).rev() {
            let mi = &ctx.mentions[i];
            if window.is_some_and(|w| mi.span.sentence + w < sj) {
                break;
            }
            if ctx.is_pronoun(i) || !mi.referring || chains.same(i, j) || ctx.nested(i, j) {
                continue;
            }
            if accept(ctx, chains, i, j) && chains.merge(i, j) {
                break;
            }
        }
    }
}

fn strict_head_match(ctx: &Context, chains: &mut Chains) {
    head_pass(ctx, chains, None, |ctx, chains, i, j| {
        entity_heads(ctx, chains, i).contains(ctx.head_word[j].as_str())
            && entity_content(ctx, chains, j).is_subset(&entity_content(ctx, chains, i))
            && ctx.modifiers[j].is_subset(&ctx.modifiers[i])
    });
}

fn relaxed_head_match(ctx: &Context, chains: &mut Chains, window: usize) {
    head_pass(ctx, chains, Some(window.saturating_sub(1)), |ctx, chains, i, j| {
        entity_heads(ctx, chains, i).contains(ctx.head_word[j].as_str())
    });
}

fn proper_head_match(ctx: &Context, chains: &mut Chains) {
    // location names and numbers inside a name span distinguish referents
    let markers = |m: &Mention| -> HashSet<String> {
        let s = &ctx.doc.sentences[m.span.sentence];
        (m.span.start..=m.span.end)
            .filter(|&t| {
                PosClass::of(&s.tokens[t].pos) == PosClass::Numeral
                    || s.ner_type_at(t).is_some_and(|l| l.to_ascii_uppercase().starts_with("LOC"))
                        && t != m.head
            })
            .map(|t| s.tokens[t].form.to_lowercase())
            .collect()
    };
    head_pass(ctx, chains, None, |ctx, _, i, j| {
        let (mi, mj) = (&ctx.mentions[i], &ctx.mentions[j]);
        mi.surface_type == MentionType::Name
            && mj.surface_type == MentionType::Name
            && ctx.head_word[i] == ctx.head_word[j]
            && markers(mj).is_subset(&markers(mi))
    });
}

fn pronoun_resolution(ctx: &Context, chains: &mut Chains, config: &SieveConfig) {
    let n = ctx.mentions.len();
    for j in 0..n {
        let mj = &ctx.mentions[j];
        if !ctx.is_pronoun(j) || !mj.referring {
            continue;
        }
        let quote = ctx.quote_of[j];
        let same_voice = |i: usize| {
            ctx.is_pronoun(i)
                && ctx.mentions[i].features.person == mj.features.person
                && ctx.mentions[i].features.number == mj.features.number
                && ctx.quote_of[i] == quote
        };
        match mj.features.person {
            Person::First => {
                let bound = quote.and_then(|q| ctx.quotes[q].speaker);
                if let (Some(s), true) = (bound, mj.features.number != Number::Pl) {
                    chains.merge(s, j);
                } else if let Some(i) = (0..j).rev().find(|&i| same_voice(i)) {
                    chains.merge(i, j);
                }
            }
            Person::Second => {
                let bound = quote.and_then(|q| ctx.quotes[q].addressee).filter(|_| config.link_addressees);
                if let Some(a) = bound {
                    chains.merge(a, j);
                } else if let Some(i) = (0..j).rev().find(|&i| same_voice(i) && quote.is_some()) {
                    chains.merge(i, j);
                }
            }
            _ => {
                let sj = mj.span.sentence;
                let lo = sj.saturating_sub(config.pronoun_window.saturating_sub(1));
                let mut candidates: Vec<usize> = (0..j)
                    .filter(|&i| {
                        let mi = &ctx.mentions[i];
                        mi.span.sentence >= lo
                            && mi.referring
                            && (mi.span.sentence < sj || mi.span.end < mj.span.start)
                            && !(ctx.is_pronoun(i) && matches!(mi.features.person, Person::First | Person::Second))
                    })
                    .collect();
                // closest sentence first; within a sentence subjects first,
                // then the closest mention
                candidates.sort_by_key(|&i| {
                    let m = &ctx.mentions[i];
                    (
                        std::cmp::Reverse(m.span.sentence),
                        !ctx.subject[i],
                        std::cmp::Reverse(m.span.end),
                        std::cmp::Reverse(m.span.start),
                    )
                });
                for i in candidates {
                    if chains.same(i, j) {
                        break;
                    }
                    if compatible(&ctx.mentions[i].features, &mj.features) && chains.merge(i, j) {
                        break;
                    }
                }
            }
        }
    }
}

/// Entity counts before resolution and after each pass.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Trace {
    pub initial: usize,
    pub passes: Vec<(Sieve, usize)>,
}

impl Trace {
    /// True when no pass increased the entity count.
    pub fn is_monotone(&self) -> bool {
        let mut prev = self.initial;
        self.passes.iter().all(|&(_, c)| {
            let ok = c <= prev;
            prev = c;
            ok
        })
    }
}

/// Resolves coreference among `mentions` of `document`.
pub fn resolve(document: &Document, mentions: &[Mention], config: &SieveConfig, resources: &Resources) -> EntitySet {
    resolve_traced(document, mentions, config, resources).0
}

/// Like [`resolve`], also reporting the entity count after every pass.
pub fn resolve_traced(
    document: &Document,
    mentions: &[Mention],
    config: &SieveConfig,
    resources: &Resources,
) -> (EntitySet, Trace) {
    let mut ordered: Vec<Mention> = mentions.to_vec();
    ordered.sort_by_key(|m| (m.order_key(), m.span.end));
    ordered.dedup_by_key(|m| m.span);
    let ctx = Context::new(document, &ordered, resources);
    let mut chains = Chains::new(&ordered);
    let mut trace = Trace {
        initial: chains.count(),
        passes: Vec::new(),
    };
    for &sieve in &config.sieves {
        match sieve {
            Sieve::ExactMatch => exact_match(&ctx, &mut chains),
            Sieve::PreciseConstructs => precise_constructs(&ctx, &mut chains, resources),
            Sieve::StrictHeadMatch => strict_head_match(&ctx, &mut chains),
            Sieve::RelaxedHeadMatch => relaxed_head_match(&ctx, &mut chains, config.relaxed_window),
            Sieve::ProperHeadMatch => proper_head_match(&ctx, &mut chains),
            Sieve::PronounResolution => pronoun_resolution(&ctx, &mut chains, config),
        }
        trace.passes.push((sieve, chains.count()));
    }
    let mut entities = Vec::new();
    for i in 0..ordered.len() {
        if chains.root(i) == i {
            let ms = chains.members[i].iter().map(|&k| ordered[k].clone()).collect();
            entities.push(Entity::new(entities.len() as u64, ms));
        }
    }
    let set = EntitySet::new(entities).expect("mentions are deduplicated by span");
    (set, trace)
}

/// Detects mentions under the configured scheme and resolves them.
pub fn resolve_document(document: &Document, config: &SieveConfig, resources: &Resources) -> Result<Document> {
    let mentions = detect_mentions(document, config.scheme, resources)?;
    Ok(document.with_entities(resolve(document, &mentions, config, resources)))
}

/// Resolves the gold mentions of a document, discarding the gold links.
pub fn resolve_gold_mentions(document: &Document, config: &SieveConfig, resources: &Resources) -> Document {
    let mentions: Vec<Mention> = document.entities.mentions().cloned().collect();
    document.with_entities(resolve(document, &mentions, config, resources))
}

/// Resolves every document, in parallel, keeping corpus order.
pub fn resolve_corpus(corpus: &Corpus, config: &SieveConfig, resources: &Resources, gold_mentions: bool) -> Result<Corpus> {
    let documents = corpus
        .documents
        .par_iter()
        .map(|d| {
            if gold_mentions {
                Ok(resolve_gold_mentions(d, config, resources))
            } else {
                resolve_document(d, config, resources)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus {
        documents,
        split: corpus.split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conll::{parse_conll_str, Sentence, Token};
    use crate::features::Gender;

    fn sentence(rows: &[(&str, &str, &str)]) -> Sentence {
        Sentence::new(rows.iter().enumerate().map(|(i, (f, p, b))| Token::new(i, f, p, b)).collect()).unwrap()
    }

    fn run(doc: &Document) -> EntitySet {
        resolve_document(doc, &SieveConfig::default(), Resources::shipped()).unwrap().entities
    }

    fn linked(set: &EntitySet, doc: &Document, a: &str, b: &str) -> bool {
        set.entities().iter().any(|e| {
            let texts: Vec<String> = e.mentions.iter().map(|m| doc.span_text(&m.span)).collect();
            texts.iter().any(|t| t == a) && texts.iter().any(|t| t == b) && (a != b || texts.iter().filter(|t| *t == a).count() > 1)
        })
    }

    #[test]
    fn exact_match_links_repeated_names() {
        let doc = Document::new(
            "d",
            vec![
                sentence(&[("Amsterdam", "PROPN", "(TOP(S(NP*)"), ("sliep", "VERB", "*"), (".", "PUNCT", "*))")]),
                sentence(&[("Ik", "PRON", "(TOP(S(NP*)"), ("zag", "VERB", "*"), ("Amsterdam", "PROPN", "(NP*)"), (".", "PUNCT", "*))")]),
            ],
        );
        let set = run(&doc);
        assert!(linked(&set, &doc, "Amsterdam", "Amsterdam"));
    }

    #[test]
    fn agreement_blocks_pronoun_links() {
        let doc = Document::new(
            "d",
            vec![
                sentence(&[("het", "DET", "(TOP(S(NP*"), ("boek", "NOUN", "*)"), ("viel", "VERB", "*"), (".", "PUNCT", "*))")]),
                sentence(&[("hij", "PRON", "(TOP(S(NP*)"), ("lachte", "VERB", "*"), (".", "PUNCT", "*))")]),
            ],
        );
        let set = run(&doc);
        assert_eq!(set.len(), 2);
        let boek = Resources::shipped().lexicon.get("boek").unwrap();
        assert_eq!(boek.gender, Gender::Neuter);
    }

    #[test]
    fn pronoun_links_to_compatible_subject() {
        let doc = Document::new(
            "d",
            vec![
                sentence(&[("de", "DET", "(TOP(S(NP*"), ("man", "NOUN", "*)"), ("las", "VERB", "*"), ("het", "DET", "(NP*"), ("boek", "NOUN", "*)"), (".", "PUNCT", "*))")]),
                sentence(&[("hij", "PRON", "(TOP(S(NP*)"), ("lachte", "VERB", "*"), (".", "PUNCT", "*))")]),
            ],
        );
        let set = run(&doc);
        assert!(linked(&set, &doc, "de man", "hij"));
        assert!(!linked(&set, &doc, "het boek", "hij"));
    }

    #[test]
    fn appositive() {
        let doc = Document::new(
            "d",
            vec![sentence(&[
                ("Jan", "PROPN", "(TOP(S(NP(NP*)"),
                (",", "PUNCT", "*"),
                ("de", "DET", "(NP*"),
                ("burgemeester", "NOUN", "*)"),
                (",", "PUNCT", "*)"),
                ("lachte", "VERB", "*"),
                (".", "PUNCT", "*))"),
            ])],
        );
        let set = run(&doc);
        assert!(linked(&set, &doc, "Jan", "de burgemeester"));
        // without a parse the token pattern applies
        let flat = Document::new(
            "d",
            vec![sentence(&[("Jan", "PROPN", "-"), (",", "PUNCT", "-"), ("de", "DET", "-"), ("burgemeester", "NOUN", "-"), (",", "PUNCT", "-"), ("lachte", "VERB", "-")])],
        );
        let ms = vec![
            crate::mentions::annotate_span(&flat.sentences[0], Span::new(0, 0, 0), Resources::shipped()),
            crate::mentions::annotate_span(&flat.sentences[0], Span::new(0, 2, 3), Resources::shipped()),
        ];
        let set = resolve(&flat, &ms, &SieveConfig::default(), Resources::shipped());
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn predicate_nominative() {
        let doc = Document::new(
            "d",
            vec![sentence(&[
                ("Jan", "PROPN", "(TOP(S(NP*)"),
                ("is", "VERB", "*"),
                ("de", "DET", "(NP*"),
                ("burgemeester", "NOUN", "*)"),
                (".", "PUNCT", "*))"),
            ])],
        );
        assert!(linked(&run(&doc), &doc, "Jan", "de burgemeester"));
    }

    #[test]
    fn quotes_bind_first_person_to_speaker() {
        let text = "#begin document (q); part 000\n\
q 0 0 \" PUNCT (TOP(S* - - - - * -\n\
q 0 1 ik PRON (NP*) - - - - * -\n\
q 0 2 kom VERB * - - - - * -\n\
q 0 3 , PUNCT * - - - - * -\n\
q 0 4 \" PUNCT * - - - - * -\n\
q 0 5 zei VERB * - - - - * -\n\
q 0 6 Marie PROPN (NP*) - - - - (PER) -\n\
q 0 7 . PUNCT *)) - - - - * -\n\
\n#end document\n";
        let corpus = parse_conll_str(text).unwrap();
        let doc = &corpus.documents[0];
        let set = run(doc);
        assert!(linked(&set, doc, "ik", "Marie"));
    }

    #[test]
    fn no_sieves_means_singletons_and_passes_are_monotone() {
        let doc = Document::new(
            "d",
            vec![
                sentence(&[("Jan", "PROPN", "(TOP(S(NP*)"), ("sliep", "VERB", "*"), (".", "PUNCT", "*))")]),
                sentence(&[("Jan", "PROPN", "(TOP(S(NP*)"), ("en", "CCONJ", "*"), ("hij", "PRON", "(NP*)"), (".", "PUNCT", "*))")]),
            ],
        );
        let none = resolve_document(&doc, &SieveConfig::none(), Resources::shipped()).unwrap();
        assert!(none.entities.entities().iter().all(|e| e.len() == 1));
        let ms = detect_mentions(&doc, Scheme::Riddle, Resources::shipped()).unwrap();
        let (set, trace) = resolve_traced(&doc, &ms, &SieveConfig::default(), Resources::shipped());
        assert!(trace.is_monotone());
        assert_eq!(trace.passes.last().unwrap().1, set.len());
        assert_eq!(set.mention_count(), ms.len());
        let again = resolve(&doc, &ms, &SieveConfig::default(), Resources::shipped());
        assert_eq!(set, again);
        assert!(resolve(&doc, &[], &SieveConfig::default(), Resources::shipped()).is_empty());
    }

    #[test]
    fn config_format() {
        let c = SieveConfig::parse("# ablation\nexact_match\npronoun_resolution\nscheme=sonar\naddressees=no\n").unwrap();
        assert_eq!(c.sieves, vec![Sieve::ExactMatch, Sieve::PronounResolution]);
        assert_eq!(c.scheme, Scheme::Sonar);
        assert!(!c.link_addressees);
        assert_eq!(SieveConfig::parse(&c.to_text()).unwrap(), c);
        assert_eq!(SieveConfig::parse("none\n").unwrap().sieves, vec![]);
        assert!(SieveConfig::parse("bogus_sieve").is_err());
        assert!(SieveConfig::parse("exact_match\nexact_match").is_err());
        assert!(SieveConfig::parse("pronoun_window=0").is_err());
        assert_eq!(SieveConfig::parse(&SieveConfig::default().to_text()).unwrap(), SieveConfig::default());
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_text("De  Burgemeester"), "burgemeester");
        assert_eq!(normalize_text("het"), "");
        assert_eq!(normalize_text("Amsterdam"), "amsterdam");
    }
}
