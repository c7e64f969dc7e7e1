//! Direct speech: quotation spans with heuristic speaker and addressee
//! attribution.

use crate::conll::Document;
use crate::entity::{Mention, MentionType, Span};
use crate::features::{Animacy, Person};
use crate::resources::Resources;
use crate::tags::PosClass;

/// A token position: (sentence, token).
pub type Position = (usize, usize);

/// A quotation from its opening mark to its closing mark (or the last token
/// it covers when unterminated). Speaker and addressee are indices into the
/// mention slice given to [`detect_quotes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuoteSpan {
    pub open: Position,
    pub close: Position,
    pub terminated: bool,
    pub speaker: Option<usize>,
    pub addressee: Option<usize>,
}

impl QuoteSpan {
    /// True when the span lies strictly between the quotation marks.
    pub fn contains(&self, span: &Span) -> bool {
        let inside = |p: Position| p > self.open && (p < self.close || (!self.terminated && p == self.close));
        inside((span.sentence, span.start)) && inside((span.sentence, span.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mark {
    Open,
    Close,
    /// Straight or same-glyph marks: opens when outside, closes when inside.
    Toggle,
}

fn mark(form: &str) -> Option<Mark> {
    match form {
        "\"" | "\u{201C}" | "\u{201D}" => Some(Mark::Toggle),
        "\u{201E}" | "\u{00AB}" | "``" => Some(Mark::Open),
        "\u{00BB}" | "''" => Some(Mark::Close),
        _ => None,
    }
}

/// Raw quotation ranges, before attribution.
fn quote_ranges(document: &Document) -> Vec<(Position, Position, bool)> {
    let mut out = Vec::new();
    let mut open: Option<Position> = None;
    let has_paragraphs = !document.paragraph_starts.is_empty();
    for (si, s) in document.sentences.iter().enumerate() {
        for (ti, tok) in s.tokens.iter().enumerate() {
            match (mark(&tok.form), open) {
                (Some(Mark::Open), None) | (Some(Mark::Toggle), None) => open = Some((si, ti)),
                (Some(Mark::Close), Some(o)) | (Some(Mark::Toggle), Some(o)) => {
                    out.push((o, (si, ti), true));
                    open = None;
                }
                _ => {}
            }
        }
        if let Some(o) = open {
            // unterminated quotes end with their paragraph, or with their
            // sentence when there is no paragraph information
            let ends = if has_paragraphs { document.paragraph_ends_at(si) } else { true };
            if ends && !s.is_empty() {
                out.push((o, (si, s.len() - 1), false));
                open = None;
            }
        }
    }
    out
}

fn inside_any(ranges: &[(Position, Position, bool)], p: Position) -> bool {
    ranges.iter().any(|&(o, c, _)| p >= o && p <= c)
}

/// Tokens of the framing clause: after the closing mark up to the next
/// quotation or sentence end; failing a speech verb there, the stretch
/// before the opening mark in its sentence.
fn framing_candidates(
    document: &Document,
    ranges: &[(Position, Position, bool)],
    q: usize,
) -> Vec<Vec<Position>> {
    let (open, close, _) = ranges[q];
    let mut after = Vec::new();
    let s = &document.sentences[close.0];
    for ti in close.1 + 1..s.len() {
        if mark(&s.tokens[ti].form).is_some() {
            break;
        }
        after.push((close.0, ti));
    }
    let mut before = Vec::new();
    for ti in (0..open.1).rev() {
        if inside_any(ranges, (open.0, ti)) {
            break;
        }
        before.push((open.0, ti));
    }
    before.reverse();
    vec![after, before]
}

fn is_animate(m: &Mention) -> bool {
    m.features.animacy == Animacy::Animate
        || (m.surface_type == MentionType::Name && m.features.animacy != Animacy::Inanimate)
        || (m.surface_type == MentionType::Pronoun && m.features.person != Person::Unknown)
}

/// Finds quotations and attributes each one to a speaker and an addressee.
///
/// The speaker is the mention closest to a speech verb in the framing
/// clause. The addressee is the object of "tegen" in the framing clause, a
/// vocative name at the edge of the quote, or else the most recent animate
/// mention before the quote other than the speaker. A quote without a
/// framing speaker that directly follows another quote continues the
/// dialogue: its speaker is the previous addressee (or the other recent
/// speaker) and its addressee the previous speaker.
pub fn detect_quotes(document: &Document, mentions: &[Mention], resources: &Resources) -> Vec<QuoteSpan> {
    let ranges = quote_ranges(document);
    let mut quotes: Vec<QuoteSpan> = Vec::with_capacity(ranges.len());
    let mention_at = |p: Position| -> Option<usize> {
        mentions
            .iter()
            .enumerate()
            .filter(|(_, m)| m.span.sentence == p.0 && m.span.start == p.1)
            .max_by_key(|(_, m)| m.span.end)
            .map(|(i, _)| i)
    };
    let outside = |m: &Mention| !inside_any(&ranges, (m.span.sentence, m.span.start));
    for (qi, &(open, close, terminated)) in ranges.iter().enumerate() {
        let mut quote = QuoteSpan {
            open,
            close,
            terminated,
            speaker: None,
            addressee: None,
        };
        for frame in framing_candidates(document, &ranges, qi) {
            let verb = frame.iter().copied().find(|&(si, ti)| {
                let tok = &document.sentences[si].tokens[ti];
                resources.is_speech_verb(&tok.form)
                    || tok.lemma().is_some_and(|l| resources.is_speech_verb(l))
            });
            let Some(verb) = verb else { continue };
            quote.speaker = mentions
                .iter()
                .enumerate()
                .filter(|(_, m)| outside(m) && frame.contains(&(m.span.sentence, m.span.start)))
                .filter(|(_, m)| m.surface_type != MentionType::Pronoun || m.features.person != Person::Second)
                .min_by_key(|(_, m)| {
                    let d = (m.span.start as isize - verb.1 as isize).unsigned_abs();
                    // prefer the subject after an inverted verb on ties
                    (d, m.span.start < verb.1, std::cmp::Reverse(m.span.end))
                })
                .map(|(i, _)| i);
            quote.addressee = frame
                .iter()
                .position(|&(si, ti)| document.sentences[si].tokens[ti].form.eq_ignore_ascii_case("tegen"))
                .and_then(|k| frame.get(k + 1).copied())
                .and_then(mention_at);
            break;
        }

        if quote.addressee.is_none() {
            quote.addressee = vocative(document, mentions, &quote);
        }

        if quote.speaker.is_none() {
            if let Some(prev) = quotes.last() {
                let adjacent = open.0 <= prev.close.0 + 1;
                if adjacent {
                    quote.speaker = prev.addressee.or_else(|| {
                        let prev_text = prev.speaker.map(|s| mentions[s].text.to_lowercase());
                        quotes
                            .iter()
                            .rev()
                            .filter_map(|q| q.speaker)
                            .find(|&s| Some(mentions[s].text.to_lowercase()) != prev_text)
                    });
                    if quote.addressee.is_none() {
                        quote.addressee = prev.speaker;
                    }
                }
            }
        }

        if quote.addressee.is_none() {
            let speaker_text = quote.speaker.map(|s| mentions[s].text.to_lowercase());
            quote.addressee = mentions
                .iter()
                .enumerate()
                .filter(|(_, m)| (m.span.sentence, m.span.end) < open && outside(m))
                .filter(|(i, m)| {
                    Some(*i) != quote.speaker
                        && Some(m.text.to_lowercase()) != speaker_text
                        && m.surface_type != MentionType::Pronoun
                        && is_animate(m)
                })
                .map(|(i, _)| i)
                .next_back();
        }
        quotes.push(quote);
    }
    quotes
}

/// A name directly after the opening mark or before the closing mark,
/// separated from the rest of the quote by a comma.
fn vocative(document: &Document, mentions: &[Mention], quote: &QuoteSpan) -> Option<usize> {
    let is_comma = |si: usize, ti: usize| {
        document.sentences[si]
            .tokens
            .get(ti)
            .is_some_and(|t| t.form == "," || (PosClass::of(&t.pos) == PosClass::Punctuation && t.form == ","))
    };
    mentions.iter().position(|m| {
        if m.surface_type != MentionType::Name || !quote.contains(&m.span) {
            return false;
        }
        let at_start = (m.span.sentence, m.span.start) == (quote.open.0, quote.open.1 + 1)
            && is_comma(m.span.sentence, m.span.end + 1);
        let at_end = quote.terminated
            && (m.span.sentence, m.span.end + 1) == quote.close
            && m.span.start > 0
            && is_comma(m.span.sentence, m.span.start - 1);
        at_start || at_end
    })
}
