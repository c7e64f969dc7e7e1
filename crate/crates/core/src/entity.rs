//! Mentions and the entity partitions built over them.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::features::AgreementFeatures;

/// A token range inside one sentence; `end` is inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(sentence: usize, start: usize, end: usize) -> Span {
        debug_assert!(start <= end);
        Span { sentence, start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.sentence == other.sentence && self.start <= other.start && other.end <= self.end
    }

    pub fn contains_token(&self, sentence: usize, token: usize) -> bool {
        self.sentence == sentence && self.start <= token && token <= self.end
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.sentence == other.sentence && self.start <= other.end && other.start <= self.end
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}", self.sentence, self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MentionType {
    Name,
    Nominal,
    Pronoun,
}

impl MentionType {
    pub const ALL: [MentionType; 3] = [MentionType::Name, MentionType::Nominal, MentionType::Pronoun];

    pub fn as_str(self) -> &'static str {
        match self {
            MentionType::Name => "name",
            MentionType::Nominal => "nominal",
            MentionType::Pronoun => "pronoun",
        }
    }
}

impl fmt::Display for MentionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A (candidate) mention.
///
/// `span` holds the active boundaries. `constituent_span` and
/// `trimmed_span` keep the full constituent and the constituent without
/// trailing relative clauses, so an annotation scheme can pick either one
/// after detection. `min_span` further drops post-head prepositional
/// modifiers and always contains `head`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mention {
    pub span: Span,
    pub min_span: Span,
    /// Token index of the head within the sentence.
    pub head: usize,
    /// Head could not be found on a nominal token; the last token was used.
    pub head_fallback: bool,
    pub surface_type: MentionType,
    pub features: AgreementFeatures,
    pub text: String,
    /// False for non-referring expressions such as pleonastic pronouns.
    pub referring: bool,
    pub constituent_span: Span,
    pub trimmed_span: Span,
}

impl Mention {
    /// A bare mention carrying only a span; the head is the last token.
    pub fn from_span(span: Span) -> Mention {
        Mention {
            span,
            min_span: span,
            head: span.end,
            head_fallback: true,
            surface_type: MentionType::Nominal,
            features: AgreementFeatures::default(),
            text: String::new(),
            referring: true,
            constituent_span: span,
            trimmed_span: span,
        }
    }

    pub fn with_type(mut self, ty: MentionType) -> Mention {
        self.surface_type = ty;
        self
    }

    pub fn with_head(mut self, head: usize) -> Mention {
        self.head = head;
        self.head_fallback = false;
        self
    }

    /// Document order: sentence, start, then longer spans first.
    pub fn order_key(&self) -> (usize, usize, std::cmp::Reverse<usize>) {
        (self.span.sentence, self.span.start, std::cmp::Reverse(self.span.end))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub id: u64,
    pub mentions: Vec<Mention>,
}

impl Entity {
    pub fn new(id: u64, mentions: Vec<Mention>) -> Entity {
        Entity { id, mentions }
    }

    pub fn len(&self) -> usize {
        self.mentions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mentions.is_empty()
    }

    pub fn spans(&self) -> impl Iterator<Item = Span> + '_ {
        self.mentions.iter().map(|m| m.span)
    }
}

/// A partition of mentions into entities. Every span occurs at most once and
/// no entity is empty.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntitySet {
    entities: Vec<Entity>,
}

impl EntitySet {
    pub fn empty() -> EntitySet {
        EntitySet::default()
    }

    pub fn new(entities: Vec<Entity>) -> Result<EntitySet> {
        let mut seen_spans = HashSet::new();
        let mut seen_ids = HashSet::new();
        for e in &entities {
            if e.mentions.is_empty() {
                return Err(Error::InvalidEntities(format!("entity {} has no mentions", e.id)));
            }
            if !seen_ids.insert(e.id) {
                return Err(Error::InvalidEntities(format!("duplicate entity id {}", e.id)));
            }
            for m in &e.mentions {
                if !seen_spans.insert(m.span) {
                    return Err(Error::InvalidEntities(format!(
                        "mention {} occurs more than once",
                        m.span
                    )));
                }
            }
        }
        let mut set = EntitySet { entities };
        set.canonicalize();
        Ok(set)
    }

    /// Builds a set from span clusters; entity ids are the cluster indices.
    ///
    /// Panics if a span occurs twice or a cluster is empty.
    pub fn from_spans<I, C>(clusters: I) -> EntitySet
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = Span>,
    {
        let entities = clusters
            .into_iter()
            .enumerate()
            .map(|(i, c)| Entity::new(i as u64, c.into_iter().map(Mention::from_span).collect()))
            .collect();
        EntitySet::new(entities).expect("clusters form a partition")
    }

    /// Builds a set from mention clusters, numbering entities from 0.
    pub fn from_mentions<I>(clusters: I) -> Result<EntitySet>
    where
        I: IntoIterator<Item = Vec<Mention>>,
    {
        EntitySet::new(
            clusters
                .into_iter()
                .filter(|c| !c.is_empty())
                .enumerate()
                .map(|(i, c)| Entity::new(i as u64, c))
                .collect(),
        )
    }

    fn canonicalize(&mut self) {
        for e in &mut self.entities {
            e.mentions.sort_by_key(|m| m.span);
        }
        self.entities.sort_by_key(|e| e.id);
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn into_entities(self) -> Vec<Entity> {
        self.entities
    }

    /// Number of entities.
    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn mention_count(&self) -> usize {
        self.entities.iter().map(Entity::len).sum()
    }

    pub fn mentions(&self) -> impl Iterator<Item = &Mention> {
        self.entities.iter().flat_map(|e| e.mentions.iter())
    }

    /// Mentions in document order.
    pub fn mentions_in_order(&self) -> Vec<&Mention> {
        let mut ms: Vec<&Mention> = self.mentions().collect();
        ms.sort_by_key(|m| m.order_key());
        ms
    }

    pub fn mention(&self, span: &Span) -> Option<&Mention> {
        self.mentions().find(|m| m.span == *span)
    }

    /// Span → position of its entity in `entities()`.
    pub fn entity_index(&self) -> HashMap<Span, usize> {
        let mut map = HashMap::with_capacity(self.mention_count());
        for (i, e) in self.entities.iter().enumerate() {
            for m in &e.mentions {
                map.insert(m.span, i);
            }
        }
        map
    }

    /// Clusters of spans, each sorted, ordered by entity id.
    pub fn clusters(&self) -> Vec<Vec<Span>> {
        self.entities.iter().map(|e| e.spans().collect()).collect()
    }

    /// The partition as a canonical value, ignoring ids and mention metadata.
    pub fn partition(&self) -> BTreeSet<Vec<Span>> {
        self.clusters().into_iter().collect()
    }

    pub fn same_partition(&self, other: &EntitySet) -> bool {
        self.partition() == other.partition()
    }

    /// Drops entities with a single mention.
    pub fn without_singletons(&self) -> EntitySet {
        EntitySet {
            entities: self.entities.iter().filter(|e| e.len() > 1).cloned().collect(),
        }
    }

    /// Keeps the mentions matching `keep`; entities left empty disappear.
    pub fn retain_mentions<F>(&self, mut keep: F) -> EntitySet
    where
        F: FnMut(&Mention) -> bool,
    {
        let entities = self
            .entities
            .iter()
            .filter_map(|e| {
                let mentions: Vec<Mention> = e.mentions.iter().filter(|m| keep(m)).cloned().collect();
                (!mentions.is_empty()).then(|| Entity::new(e.id, mentions))
            })
            .collect();
        EntitySet { entities }
    }

    /// Applies `f` to every mention in place.
    pub fn map_mentions<F>(&mut self, mut f: F)
    where
        F: FnMut(&mut Mention),
    {
        for e in &mut self.entities {
            for m in &mut e.mentions {
                f(m);
            }
        }
    }

    /// Renumbers entities 0.. in order of their first mention.
    pub fn renumbered(&self) -> EntitySet {
        let mut entities = self.entities.clone();
        entities.sort_by_key(|e| e.mentions.iter().map(|m| m.order_key()).min());
        for (i, e) in entities.iter_mut().enumerate() {
            e.id = i as u64;
        }
        let mut set = EntitySet { entities };
        set.canonicalize();
        set
    }
}
