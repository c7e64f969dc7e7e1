//! Mention detection over constituency trees: NP constituents, pronouns and
//! named-entity spans, with heads, minimal spans, and annotation-scheme
//! specific boundaries.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::conll::{Document, Sentence};
use crate::entity::{Entity, EntitySet, Mention, MentionType, Span};
use crate::error::{Error, Result};
use crate::features::{assign_features, is_pronoun_token};
use crate::pleonastic::is_pleonastic;
use crate::resources::Resources;
use crate::tags::PosClass;
use crate::tree::{LabelCategory, LabelMap, NodeId, ParseTree};

/// Annotation scheme the output should follow.
///
/// `Sonar` keeps automatically extracted markables, non-referring ones
/// included, with full-constituent boundaries. `Riddle` keeps referring
/// expressions only and cuts trailing relative clauses off the boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheme {
    #[default]
    Riddle,
    Sonar,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scheme> {
        match s.to_ascii_lowercase().as_str() {
            "riddle" | "riddlecoref" => Ok(Scheme::Riddle),
            "sonar" | "sonar1" | "sonar-1" => Ok(Scheme::Sonar),
            _ => Err(Error::InvalidArgument(format!("unknown scheme {s:?} (expected riddle or sonar)"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Riddle => "riddle",
            Scheme::Sonar => "sonar",
        })
    }
}

/// Head token of a constituent, and whether the last-token fallback was used.
///
/// The head is the rightmost nominal preterminal among the node's
/// children. Without one, the search continues in the leftmost NP child,
/// then over all nominal tokens before any prepositional or relative-clause
/// child.
pub fn head_of(tree: &ParseTree, node: NodeId, sentence: &Sentence, labels: &LabelMap) -> (usize, bool) {
    let n = tree.node(node);
    if let Some(tok) = n.token {
        return (tok, false);
    }
    let nominal = |tok: usize| PosClass::of(&sentence.tokens[tok].pos).is_nominal();
    if let Some(tok) = n
        .children
        .iter()
        .rev()
        .filter_map(|&c| tree.node(c).token)
        .find(|&t| nominal(t))
    {
        return (tok, false);
    }
    if let Some(&np) = n
        .children
        .iter()
        .find(|&&c| !tree.node(c).is_leaf() && labels.category(&tree.node(c).label) == LabelCategory::NounPhrase)
    {
        return head_of(tree, np, sentence, labels);
    }
    let cutoff = n
        .children
        .iter()
        .find(|&&c| {
            matches!(
                labels.category(&tree.node(c).label),
                LabelCategory::PrepPhrase | LabelCategory::RelativeClause
            ) && !tree.node(c).is_leaf()
        })
        .map(|&c| tree.node(c).start)
        .unwrap_or(n.end + 1);
    if let Some(tok) = (n.start..cutoff).rev().find(|&t| nominal(t)) {
        return (tok, false);
    }
    (n.end, true)
}

/// Head of a bare token range, for spans without a matching constituent:
/// the last nominal token before the first post-nominal adposition,
/// conjunction, punctuation, verb or relative pronoun.
pub fn head_of_tokens(sentence: &Sentence, start: usize, end: usize) -> (usize, bool) {
    let mut head = None;
    for i in start..=end.min(sentence.len().saturating_sub(1)) {
        let class = PosClass::of(&sentence.tokens[i].pos);
        if head.is_some() {
            let stop = matches!(
                class,
                PosClass::Adposition | PosClass::Conjunction | PosClass::Punctuation | PosClass::Verb
            ) || (class == PosClass::Pronoun
                && head.map(|h: usize| PosClass::of(&sentence.tokens[h].pos) != PosClass::Pronoun) == Some(true));
            if stop {
                break;
            }
        }
        if class.is_nominal() {
            head = Some(i);
        }
    }
    match head {
        Some(h) => (h, false),
        None => (end, true),
    }
}

fn strip_trailing(
    tree: &ParseTree,
    node: NodeId,
    head: usize,
    labels: &LabelMap,
    strip: &[LabelCategory],
) -> (usize, usize) {
    let n = tree.node(node);
    let children = &n.children;
    let head_child = children
        .iter()
        .position(|&c| tree.node(c).start <= head && head <= tree.node(c).end);
    let Some(hc) = head_child else {
        return (n.start, n.end);
    };
    let mut last = children.len() - 1;
    while last > hc {
        let c = tree.node(children[last]);
        let cat = labels.category(&c.label);
        let is_punct = c.is_leaf() && PosClass::of(&c.label) == PosClass::Punctuation;
        if (strip.contains(&cat) && !c.is_leaf()) || is_punct {
            last -= 1;
        } else {
            break;
        }
    }
    // keep trailing punctuation only when something after the head survives
    if last == hc {
        return (n.start, tree.node(children[hc]).end);
    }
    (n.start, tree.node(children[last]).end)
}

/// Span without trailing relative clauses and post-head prepositional
/// modifiers. Always contains the head.
pub fn minimal_span(tree: &ParseTree, node: NodeId, sentence: &Sentence, labels: &LabelMap) -> (usize, usize) {
    let n = tree.node(node);
    if n.is_leaf() {
        return (n.start, n.end);
    }
    let (head, _) = head_of(tree, node, sentence, labels);
    let head_child = n
        .children
        .iter()
        .copied()
        .find(|&c| tree.node(c).start <= head && head <= tree.node(c).end);
    if let Some(hc) = head_child {
        if !tree.node(hc).is_leaf() && labels.category(&tree.node(hc).label) == LabelCategory::NounPhrase {
            let (_, end) = minimal_span(tree, hc, sentence, labels);
            return (n.start, end);
        }
    }
    strip_trailing(
        tree,
        node,
        head,
        labels,
        &[LabelCategory::RelativeClause, LabelCategory::PrepPhrase],
    )
}

/// Span without trailing relative clauses only.
pub fn span_without_relative(tree: &ParseTree, node: NodeId, sentence: &Sentence, labels: &LabelMap) -> (usize, usize) {
    let n = tree.node(node);
    if n.is_leaf() {
        return (n.start, n.end);
    }
    let (head, _) = head_of(tree, node, sentence, labels);
    strip_trailing(tree, node, head, labels, &[LabelCategory::RelativeClause])
}

/// Name, nominal or pronoun, from the head token.
pub fn classify_mention_type(mention: &Mention, sentence: &Sentence) -> Result<MentionType> {
    let tok = sentence.tokens.get(mention.head).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "head index {} out of range for sentence of {} tokens",
            mention.head,
            sentence.len()
        ))
    })?;
    let class = PosClass::of(&tok.pos);
    if class == PosClass::Pronoun || (class == PosClass::Unknown && is_pronoun_token(&tok.form, &tok.pos)) {
        return Ok(MentionType::Pronoun);
    }
    if class == PosClass::ProperNoun || sentence.ner_type_at(mention.head).is_some() {
        return Ok(MentionType::Name);
    }
    Ok(MentionType::Nominal)
}

/// Fills in head, boundaries, type, features and text for a span, using the
/// constituent with exactly that span when the sentence has a parse.
pub fn annotate_span(sentence: &Sentence, span: Span, resources: &Resources) -> Mention {
    let node = sentence.tree.as_ref().and_then(|t| t.node_for_span(span.start, span.end).map(|n| (t, n)));
    annotate(sentence, span, node, resources)
}

fn annotate(sentence: &Sentence, span: Span, node: Option<(&ParseTree, NodeId)>, resources: &Resources) -> Mention {
    let labels = &resources.labels;
    let (head, fallback, min, trimmed) = match node {
        Some((tree, id)) => {
            let (head, fallback) = head_of(tree, id, sentence, labels);
            let min = minimal_span(tree, id, sentence, labels);
            let trimmed = span_without_relative(tree, id, sentence, labels);
            (head, fallback, min, trimmed)
        }
        None => {
            let (head, fallback) = head_of_tokens(sentence, span.start, span.end);
            (head, fallback, (span.start, head.max(span.start)), (span.start, span.end))
        }
    };
    let mut m = Mention {
        span,
        min_span: Span::new(span.sentence, min.0, min.1),
        head,
        head_fallback: fallback,
        surface_type: MentionType::Nominal,
        features: Default::default(),
        text: sentence.text(span.start, span.end),
        referring: true,
        constituent_span: span,
        trimmed_span: Span::new(span.sentence, trimmed.0, trimmed.1),
    };
    m.surface_type = classify_mention_type(&m, sentence).unwrap_or(MentionType::Nominal);
    m.features = assign_features(&m, sentence, &resources.lexicon);
    m
}

/// Candidate mentions of a document, ordered by sentence, start, then
/// longer spans first, with boundaries and filtering of `scheme`.
pub fn detect_mentions(document: &Document, scheme: Scheme, resources: &Resources) -> Result<Vec<Mention>> {
    let mut all = Vec::new();
    for (si, sentence) in document.sentences.iter().enumerate() {
        let tree = sentence.tree.as_ref().ok_or_else(|| Error::MissingParse {
            doc: document.name(),
            sentence: si,
        })?;
        all.extend(sentence_candidates(si, sentence, tree, resources));
    }
    Ok(apply_scheme(all, scheme))
}

fn sentence_candidates(si: usize, sentence: &Sentence, tree: &ParseTree, resources: &Resources) -> Vec<Mention> {
    let mut found: BTreeMap<(usize, usize), Mention> = BTreeMap::new();
    for id in tree.preorder() {
        let n = tree.node(id);
        if n.is_leaf() || resources.labels.category(&n.label) != LabelCategory::NounPhrase {
            continue;
        }
        let key = (n.start, n.end);
        if found.contains_key(&key) {
            continue;
        }
        let m = annotate(sentence, Span::new(si, n.start, n.end), Some((tree, id)), resources);
        let head_tok = &sentence.tokens[m.head];
        if m.head_fallback && !PosClass::of(&head_tok.pos).is_nominal() {
            continue;
        }
        // "zijn" as verb, "het" as article: an NP that is just such a token is no mention
        if n.start == n.end && !PosClass::of(&head_tok.pos).is_nominal() {
            continue;
        }
        found.insert(key, m);
    }
    for (i, tok) in sentence.tokens.iter().enumerate() {
        if !is_pronoun_token(&tok.form, &tok.pos) || found.contains_key(&(i, i)) {
            continue;
        }
        let node = tree.leaf(i).map(|l| (tree, l));
        found.insert((i, i), annotate(sentence, Span::new(si, i, i), node, resources));
    }
    for (start, end, _) in sentence.ner_spans() {
        if found.contains_key(&(start, end)) {
            continue;
        }
        let node = tree.node_for_span(start, end).map(|n| (tree, n));
        let mut m = annotate(sentence, Span::new(si, start, end), node, resources);
        if m.head_fallback || !(start..=end).contains(&m.head) {
            m.head = end;
        }
        m.surface_type = MentionType::Name;
        m.features = assign_features(&m, sentence, &resources.lexicon);
        found.insert((start, end), m);
    }
    let mut out: Vec<Mention> = found.into_values().collect();
    for m in &mut out {
        if m.surface_type == MentionType::Pronoun {
            m.referring = !is_pleonastic(sentence, m.head, &resources.pleonastic, resources.pleonastic_policy);
        }
    }
    out
}

fn scheme_span(m: &Mention, scheme: Scheme) -> Span {
    match scheme {
        Scheme::Riddle => m.trimmed_span,
        Scheme::Sonar => m.constituent_span,
    }
}

/// Applies scheme boundaries and filtering to a mention list, dropping
/// mentions whose adjusted span duplicates an earlier one.
pub fn apply_scheme(mentions: Vec<Mention>, scheme: Scheme) -> Vec<Mention> {
    let mut sorted = mentions;
    sorted.sort_by_key(|m| m.order_key());
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(sorted.len());
    for mut m in sorted {
        if scheme == Scheme::Riddle && !m.referring {
            continue;
        }
        m.span = scheme_span(&m, scheme);
        if seen.insert(m.span) {
            out.push(m);
        }
    }
    out.sort_by_key(|m| m.order_key());
    out
}

/// Adapts system output to an annotation scheme. Mentions are adjusted and
/// filtered as in [`apply_scheme`]; entities follow their mentions, and
/// entities left without mentions are removed.
pub fn scheme_filter(mentions: &[Mention], entities: &EntitySet, scheme: Scheme) -> (Vec<Mention>, EntitySet) {
    let kept = apply_scheme(mentions.to_vec(), scheme);
    let by_original: HashMap<Span, &Mention> = {
        let mut map = HashMap::new();
        let mut sorted: Vec<&Mention> = mentions.iter().collect();
        sorted.sort_by_key(|m| m.order_key());
        let kept_spans: HashSet<Span> = kept.iter().map(|m| m.span).collect();
        let mut used = HashSet::new();
        for m in sorted {
            if scheme == Scheme::Riddle && !m.referring {
                continue;
            }
            let adjusted = scheme_span(m, scheme);
            if kept_spans.contains(&adjusted) && used.insert(adjusted) {
                map.insert(m.span, m);
            }
        }
        map
    };
    let mut new_entities = Vec::new();
    for e in entities.entities() {
        let ms: Vec<Mention> = e
            .mentions
            .iter()
            .filter_map(|m| by_original.get(&m.span))
            .map(|m| {
                let mut m = (*m).clone();
                m.span = scheme_span(&m, scheme);
                m
            })
            .collect();
        if !ms.is_empty() {
            new_entities.push(Entity::new(e.id, ms));
        }
    }
    let set = EntitySet::new(new_entities).expect("filtering preserves the partition");
    (kept, set)
}
