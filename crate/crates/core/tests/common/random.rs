//! Seeded random entity sets for property checks.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sievecoref::{Entity, EntitySet, Mention, Span};

/// A random entity set over up to `max` mentions drawn from short spans in
/// two sentences, with heads inside each span.
pub fn random_set(rng: &mut ChaCha8Rng, max: usize) -> EntitySet {
    let mut spans: Vec<Span> = Vec::new();
    for s in 0..2 {
        for a in 0..5 {
            for b in a..(a + 3).min(5) {
                spans.push(Span::new(s, a, b));
            }
        }
    }
    spans.shuffle(rng);
    let n = rng.gen_range(0..=max);
    let labels = rng.gen_range(1..=4u64);
    let mut clusters: Vec<Vec<Mention>> = vec![Vec::new(); labels as usize];
    for sp in spans.into_iter().take(n) {
        let head = rng.gen_range(sp.start..=sp.end);
        clusters[rng.gen_range(0..labels as usize)].push(Mention::from_span(sp).with_head(head));
    }
    EntitySet::new(
        clusters
            .into_iter()
            .filter(|c| !c.is_empty())
            .enumerate()
            .map(|(i, c)| Entity::new(i as u64 * 7 + 3, c))
            .collect(),
    )
    .unwrap()
}

