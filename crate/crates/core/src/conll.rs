//! Reading and writing CoNLL-2012 coreference files.
//!
//! Two column layouts are accepted. The full layout has at least twelve
//! columns: document id, part, token index, form, POS, parse bit, lemma,
//! frameset, sense, speaker, named entities, zero or more predicate
//! argument columns and the coreference column last. The short layout has
//! five to seven columns: id, part, index, form, then optionally POS and
//! parse bit, with coreference last. Output always uses the full layout.
//!
//! A `# newpar` comment inside a document marks the start of a paragraph.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::entity::{Entity, EntitySet, Span};
use crate::error::{Error, Result};
use crate::mentions;
use crate::resources::Resources;
use crate::tree::ParseTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub form: String,
    pub pos: String,
    pub parse_bit: String,
    pub ner_bit: String,
    /// Lemma, frameset, sense and speaker columns followed by any predicate
    /// argument columns. Always at least four entries (`-` when absent).
    pub extra: Vec<String>,
}

impl Token {
    pub fn new(index: usize, form: &str, pos: &str, parse_bit: &str) -> Token {
        Token {
            index,
            form: form.to_string(),
            pos: pos.to_string(),
            parse_bit: parse_bit.to_string(),
            ner_bit: "*".to_string(),
            extra: vec!["-".to_string(); 4],
        }
    }

    pub fn with_ner(mut self, ner_bit: &str) -> Token {
        self.ner_bit = ner_bit.to_string();
        self
    }

    pub fn lemma(&self) -> Option<&str> {
        self.extra.first().map(String::as_str).filter(|l| *l != "-" && *l != "_")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub tree: Option<ParseTree>,
}

impl Sentence {
    /// Builds a sentence, recovering the parse tree from the parse bits.
    pub fn new(tokens: Vec<Token>) -> std::result::Result<Sentence, (usize, String)> {
        let tree = ParseTree::from_bits(tokens.iter().map(|t| (t.pos.as_str(), t.parse_bit.as_str())))?;
        Ok(Sentence { tokens, tree })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn forms(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.form.as_str()).collect()
    }

    /// Surface text of a token range (inclusive), space separated.
    pub fn text(&self, start: usize, end: usize) -> String {
        let end = end.min(self.tokens.len().saturating_sub(1));
        self.tokens[start.min(end)..=end]
            .iter()
            .map(|t| t.form.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Named-entity spans `(start, end, label)` from the NER column.
    /// Malformed brackets are ignored.
    pub fn ner_spans(&self) -> Vec<(usize, usize, String)> {
        let mut out = Vec::new();
        let mut open: Option<(usize, String)> = None;
        for (i, t) in self.tokens.iter().enumerate() {
            let bit = t.ner_bit.as_str();
            if let Some(rest) = bit.strip_prefix('(') {
                let label = rest.trim_end_matches(')').trim_end_matches('*').trim_end_matches(')');
                if bit.ends_with(')') {
                    out.push((i, i, label.to_string()));
                    open = None;
                } else {
                    open = Some((i, label.to_string()));
                }
            } else if bit.ends_with(')') {
                if let Some((s, label)) = open.take() {
                    out.push((s, i, label));
                }
            }
        }
        out
    }

    /// NER label of the span containing a token, if any.
    pub fn ner_type_at(&self, token: usize) -> Option<String> {
        self.ner_spans()
            .into_iter()
            .find(|(s, e, _)| *s <= token && token <= *e)
            .map(|(_, _, l)| l)
    }
}

/// One `#begin document` block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub part: String,
    pub genre: Option<String>,
    pub sentences: Vec<Sentence>,
    /// Sentence indices that start a paragraph (from `# newpar`).
    pub paragraph_starts: Vec<usize>,
    /// Entities encoded by the coreference column.
    pub entities: EntitySet,
}

impl Document {
    pub fn new(id: &str, sentences: Vec<Sentence>) -> Document {
        Document {
            id: id.to_string(),
            part: "000".to_string(),
            genre: None,
            sentences,
            paragraph_starts: Vec::new(),
            entities: EntitySet::empty(),
        }
    }

    /// Short display name: the id, plus the part when it is not zero.
    pub fn name(&self) -> String {
        if self.part.trim_start_matches('0').is_empty() {
            self.id.clone()
        } else {
            format!("{}#{}", self.id, self.part)
        }
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn with_entities(&self, entities: EntitySet) -> Document {
        Document { entities, ..self.clone() }
    }

    /// Surface text of a span.
    pub fn span_text(&self, span: &Span) -> String {
        self.sentences
            .get(span.sentence)
            .map(|s| s.text(span.start, span.end))
            .unwrap_or_default()
    }

    /// True when sentence `i` ends a paragraph.
    pub fn paragraph_ends_at(&self, i: usize) -> bool {
        i + 1 >= self.sentences.len() || self.paragraph_starts.contains(&(i + 1))
    }

    /// Coreference column values, one per token, in canonical bracket order:
    /// closing brackets (innermost first), single-token spans, then opening
    /// brackets (outermost first).
    pub fn coref_bits(&self) -> Result<Vec<Vec<String>>> {
        let mut starts: Vec<Vec<Vec<(usize, u64)>>> = Vec::new();
        let mut singles: Vec<Vec<Vec<u64>>> = Vec::new();
        let mut ends: Vec<Vec<Vec<(usize, u64)>>> = Vec::new();
        for s in &self.sentences {
            starts.push(vec![Vec::new(); s.len()]);
            singles.push(vec![Vec::new(); s.len()]);
            ends.push(vec![Vec::new(); s.len()]);
        }
        let werr = |message: String| Error::Write { doc: self.name(), message };
        let mut by_id: HashMap<u64, Vec<Span>> = HashMap::new();
        for e in self.entities.entities() {
            for m in &e.mentions {
                let sp = m.span;
                let len = self.sentences.get(sp.sentence).map(Sentence::len).unwrap_or(0);
                if sp.end >= len || sp.start > sp.end {
                    return Err(werr(format!("mention {sp} outside its sentence")));
                }
                by_id.entry(e.id).or_default().push(sp);
                if sp.start == sp.end {
                    singles[sp.sentence][sp.start].push(e.id);
                } else {
                    starts[sp.sentence][sp.start].push((sp.end, e.id));
                    ends[sp.sentence][sp.end].push((sp.start, e.id));
                }
            }
        }
        for (id, spans) in &by_id {
            for a in spans {
                for b in spans {
                    let crossing = a.sentence == b.sentence
                        && a.start < b.start
                        && b.start <= a.end
                        && a.end < b.end;
                    if crossing {
                        return Err(werr(format!(
                            "entity {id} has crossing mentions {a} and {b}, which the bracket notation cannot encode"
                        )));
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(self.sentences.len());
        for (si, s) in self.sentences.iter().enumerate() {
            let mut row = Vec::with_capacity(s.len());
            for ti in 0..s.len() {
                let mut parts = Vec::new();
                let mut closes = ends[si][ti].clone();
                closes.sort_by(|a, b| b.cmp(a));
                parts.extend(closes.iter().map(|(_, id)| format!("{id})")));
                let mut single = singles[si][ti].clone();
                single.sort_unstable();
                parts.extend(single.iter().map(|id| format!("({id})")));
                let mut opens = starts[si][ti].clone();
                opens.sort_by(|a, b| b.cmp(a));
                parts.extend(opens.iter().map(|(_, id)| format!("({id}")));
                row.push(parts);
            }
            out.push(row.into_iter().map(|p| if p.is_empty() { "-".to_string() } else { p.join("|") }).collect());
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitLabel {
    Train,
    Dev,
    Test,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub split: Option<SplitLabel>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Corpus {
        Corpus { documents, split: None }
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn get(&self, id: &str, part: &str) -> Option<&Document> {
        self.documents.iter().find(|d| d.id == id && d.part == part)
    }

    /// Checks that (id, part) pairs are unique.
    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for d in &self.documents {
            if !seen.insert((d.id.as_str(), d.part.as_str())) {
                return Err(Error::DuplicateDocument(d.name()));
            }
        }
        Ok(())
    }
}

struct DocBuilder {
    id: String,
    part: String,
    sentences: Vec<Sentence>,
    paragraph_starts: Vec<usize>,
    pending: Vec<(Token, String, usize)>,
    mentions: BTreeMap<u64, Vec<Span>>,
}

impl DocBuilder {
    fn err(&self, token: usize, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            doc: self.id.clone(),
            sentence: self.sentences.len(),
            token,
            line,
            message: message.into(),
        }
    }

    fn finish_sentence(&mut self) -> Result<()> {
        if self.pending.is_empty() {
            return Ok(());
        }
        let rows = std::mem::take(&mut self.pending);
        let si = self.sentences.len();
        let mut open: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
        for (ti, (_, bit, line)) in rows.iter().enumerate() {
            if bit == "-" || bit == "_" {
                continue;
            }
            for part in bit.split('|') {
                let (opens, body) = match part.strip_prefix('(') {
                    Some(rest) => (true, rest),
                    None => (false, part),
                };
                let (closes, body) = match body.strip_suffix(')') {
                    Some(rest) => (true, rest),
                    None => (false, body),
                };
                if !opens && !closes {
                    return Err(self.err(ti, *line, format!("malformed coreference bit {part:?}")));
                }
                let id: u64 = body
                    .parse()
                    .map_err(|_| self.err(ti, *line, format!("non-numeric entity id {body:?}")))?;
                match (opens, closes) {
                    (true, true) => self.mentions.entry(id).or_default().push(Span::new(si, ti, ti)),
                    (true, false) => open.entry(id).or_default().push((ti, *line)),
                    _ => {
                        let (start, _) = open.get_mut(&id).and_then(Vec::pop).ok_or_else(|| {
                            self.err(ti, *line, format!("closing bracket for entity {id} without opening"))
                        })?;
                        self.mentions.entry(id).or_default().push(Span::new(si, start, ti));
                    }
                }
            }
        }
        if let Some((id, (ti, line))) = open
            .iter()
            .filter_map(|(id, v)| v.first().map(|x| (*id, *x)))
            .min_by_key(|(_, (ti, _))| *ti)
        {
            return Err(self.err(ti, line, format!("bracket for entity {id} is never closed")));
        }
        let first_line = rows[0].2;
        let tokens: Vec<Token> = rows.into_iter().map(|(t, _, _)| t).collect();
        let sentence = Sentence::new(tokens).map_err(|(ti, msg)| self.err(ti, first_line + ti, msg))?;
        self.sentences.push(sentence);
        Ok(())
    }

    fn finish(mut self, resources: &Resources, line: usize) -> Result<Document> {
        self.finish_sentence()?;
        let mut entities = Vec::new();
        for (id, spans) in std::mem::take(&mut self.mentions) {
            let mentions = spans
                .into_iter()
                .map(|sp| mentions::annotate_span(&self.sentences[sp.sentence], sp, resources))
                .collect();
            entities.push(Entity::new(id, mentions));
        }
        let entities = EntitySet::new(entities).map_err(|e| Error::Parse {
            doc: self.id.clone(),
            sentence: 0,
            token: 0,
            line,
            message: e.to_string(),
        })?;
        Ok(Document {
            id: self.id,
            part: self.part,
            genre: None,
            sentences: self.sentences,
            paragraph_starts: self.paragraph_starts,
            entities,
        })
    }
}

fn parse_begin(line: &str) -> Option<(String, String)> {
    let rest = line.strip_prefix("#begin document")?.trim();
    if let Some(inner) = rest.strip_prefix('(') {
        let close = inner.find(')')?;
        let id = inner[..close].to_string();
        let tail = inner[close + 1..].trim().trim_start_matches(';').trim();
        let part = tail.strip_prefix("part").map(|p| p.trim().to_string()).unwrap_or_else(|| "000".into());
        Some((id, if part.is_empty() { "000".into() } else { part }))
    } else {
        let mut it = rest.splitn(2, ';');
        let id = it.next()?.trim().to_string();
        let part = it
            .next()
            .and_then(|t| t.trim().strip_prefix("part").map(|p| p.trim().to_string()))
            .unwrap_or_else(|| "000".into());
        Some((id, part))
    }
}

/// Parses a CoNLL-2012 stream using the shipped resources for mention
/// annotation.
pub fn parse_conll<R: BufRead>(input: R) -> Result<Corpus> {
    parse_conll_with(input, Resources::shipped())
}

pub fn parse_conll_str(input: &str) -> Result<Corpus> {
    parse_conll(input.as_bytes())
}

pub fn parse_conll_with<R: BufRead>(input: R, resources: &Resources) -> Result<Corpus> {
    let mut documents: Vec<Document> = Vec::new();
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut current: Option<DocBuilder> = None;
    let mut lineno = 0;
    for line in input.lines() {
        lineno += 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.starts_with("#begin document") {
            if let Some(doc) = &current {
                return Err(doc.err(0, lineno, "nested #begin document"));
            }
            let (id, part) = parse_begin(trimmed).ok_or_else(|| Error::Parse {
                doc: String::new(),
                sentence: 0,
                token: 0,
                line: lineno,
                message: format!("malformed document header {trimmed:?}"),
            })?;
            if !seen.insert((id.clone(), part.clone())) {
                return Err(Error::DuplicateDocument(id));
            }
            current = Some(DocBuilder {
                id,
                part,
                sentences: Vec::new(),
                paragraph_starts: Vec::new(),
                pending: Vec::new(),
                mentions: BTreeMap::new(),
            });
            continue;
        }
        if trimmed.starts_with("#end document") {
            let doc = current.take().ok_or_else(|| Error::Parse {
                doc: String::new(),
                sentence: 0,
                token: 0,
                line: lineno,
                message: "#end document without #begin document".into(),
            })?;
            documents.push(doc.finish(resources, lineno)?);
            continue;
        }
        let Some(doc) = current.as_mut() else {
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            return Err(Error::Parse {
                doc: String::new(),
                sentence: 0,
                token: 0,
                line: lineno,
                message: "token line outside a document".into(),
            });
        };
        if trimmed.is_empty() {
            doc.finish_sentence()?;
            continue;
        }
        if trimmed.starts_with('#') {
            if trimmed == "# newpar" || trimmed.starts_with("# newpar ") {
                doc.finish_sentence()?;
                let next = doc.sentences.len();
                if !doc.paragraph_starts.contains(&next) {
                    doc.paragraph_starts.push(next);
                }
            }
            continue;
        }
        let cols: Vec<&str> = trimmed.split_whitespace().collect();
        let ti = doc.pending.len();
        let n = cols.len();
        let token = if n >= 12 {
            let mut extra: Vec<String> = cols[6..10].iter().map(|s| s.to_string()).collect();
            extra.extend(cols[11..n - 1].iter().map(|s| s.to_string()));
            Token {
                index: ti,
                form: cols[3].to_string(),
                pos: cols[4].to_string(),
                parse_bit: cols[5].to_string(),
                ner_bit: cols[10].to_string(),
                extra,
            }
        } else if (5..=7).contains(&n) {
            Token {
                index: ti,
                form: cols[3].to_string(),
                pos: if n >= 6 { cols[4].to_string() } else { "-".to_string() },
                parse_bit: if n >= 7 { cols[5].to_string() } else { "-".to_string() },
                ner_bit: "*".to_string(),
                extra: vec!["-".to_string(); 4],
            }
        } else {
            return Err(doc.err(ti, lineno, format!("unsupported column count {n}")));
        };
        if let Ok(idx) = cols[2].parse::<usize>() {
            if idx != ti {
                return Err(doc.err(ti, lineno, format!("token index {idx} where {ti} was expected")));
            }
        }
        doc.pending.push((token, cols[n - 1].to_string(), lineno));
    }
    if let Some(doc) = current {
        return Err(doc.err(0, lineno, "document is never closed with #end document"));
    }
    Ok(Corpus::new(documents))
}

/// Serializes a corpus in the full CoNLL-2012 layout.
pub fn write_conll<W: Write>(corpus: &Corpus, mut out: W) -> Result<()> {
    out.write_all(write_conll_string(corpus)?.as_bytes())?;
    Ok(())
}

pub fn write_conll_string(corpus: &Corpus) -> Result<String> {
    let mut s = String::new();
    for doc in &corpus.documents {
        write_document(doc, &mut s)?;
    }
    Ok(s)
}

pub fn write_document(doc: &Document, s: &mut String) -> Result<()> {
    let bits = doc.coref_bits()?;
    let _ = writeln!(s, "#begin document ({}); part {}", doc.id, doc.part);
    for (si, sent) in doc.sentences.iter().enumerate() {
        if doc.paragraph_starts.contains(&si) {
            s.push_str("# newpar\n");
        }
        for (ti, t) in sent.tokens.iter().enumerate() {
            let _ = write!(s, "{}\t{}\t{}\t{}\t{}\t{}", doc.id, doc.part, ti, t.form, t.pos, t.parse_bit);
            for i in 0..4 {
                let _ = write!(s, "\t{}", t.extra.get(i).map(String::as_str).unwrap_or("-"));
            }
            let _ = write!(s, "\t{}", t.ner_bit);
            for arg in t.extra.iter().skip(4) {
                let _ = write!(s, "\t{arg}");
            }
            let _ = writeln!(s, "\t{}", bits[si][ti]);
        }
        s.push('\n');
    }
    s.push_str("#end document\n");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(lines: &[&str]) -> String {
        let mut s = String::from("#begin document (d1); part 000\n");
        for l in lines {
            s.push_str(l);
            s.push('\n');
        }
        s.push_str("\n#end document\n");
        s
    }

    #[test]
    fn two_token_mention() {
        let c = parse_conll_str(&doc(&["d1 0 0 de DET (NP* (0", "d1 0 1 man NOUN *) 0)"])).unwrap();
        let d = &c.documents[0];
        assert_eq!(d.entities.clusters(), vec![vec![Span::new(0, 0, 1)]]);
        assert_eq!(d.sentences[0].tree.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn nested_single_token_mention() {
        let c = parse_conll_str(&doc(&[
            "d1 0 0 Jan PROPN * (0)|(1",
            "d1 0 1 zelf ADV * -",
            "d1 0 2 kwam VERB * 1)",
        ]))
        .unwrap();
        let set = &c.documents[0].entities;
        assert_eq!(set.entities()[0].id, 0);
        assert_eq!(set.clusters(), vec![vec![Span::new(0, 0, 0)], vec![Span::new(0, 0, 2)]]);
    }

    #[test]
    fn errors() {
        let unclosed = parse_conll_str(&doc(&["d1 0 0 de DET * (0", "d1 0 1 man NOUN * -"]));
        match unclosed {
            Err(Error::Parse { doc, sentence, token, .. }) => {
                assert_eq!((doc.as_str(), sentence, token), ("d1", 0, 0));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_conll_str(&doc(&["d1 0 0 de DET * 0)"])).is_err());
        assert!(parse_conll_str(&doc(&["d1 0 0 de DET * (x)"])).is_err());
        assert!(parse_conll_str(&doc(&["d1 0 0 de DET * (0)|(0)"])).is_err());
        let twice = format!("{}{}", doc(&["d1 0 0 a N * -"]), doc(&["d1 0 0 b N * -"]));
        assert!(matches!(parse_conll_str(&twice), Err(Error::DuplicateDocument(_))));
        assert!(parse_conll_str("#begin document (x); part 000\nx 0 0 a N * -\n").is_err());
    }

    #[test]
    fn write_and_reparse() {
        let input = doc(&[
            "d1 0 0 Jan PROPN * (0)",
            "d1 0 1 zag VERB * -",
            "d1 0 2 Jan PROPN * (0)",
        ]);
        let c = parse_conll_str(&input).unwrap();
        let out = write_conll_string(&c).unwrap();
        assert_eq!(out.matches("(0)").count(), 2);
        assert_eq!(parse_conll_str(&out).unwrap(), c);
        assert_eq!(write_conll_string(&Corpus::default()).unwrap(), "");
    }

    #[test]
    fn short_and_full_layouts_agree() {
        let short = doc(&["d1 0 0 Jan (0)"]);
        let full = doc(&["d1 0 0 Jan - - - - - - * (0)"]);
        assert_eq!(parse_conll_str(&short).unwrap(), parse_conll_str(&full).unwrap());
    }

    #[test]
    fn crossing_same_entity_spans_cannot_be_written() {
        let c = parse_conll_str(&doc(&["d1 0 0 a N * -", "d1 0 1 b N * -", "d1 0 2 c N * -"])).unwrap();
        let mut d = c.documents[0].clone();
        d.entities = EntitySet::from_spans(vec![vec![Span::new(0, 0, 1), Span::new(0, 1, 2)]]);
        assert!(matches!(d.coref_bits(), Err(Error::Write { .. })));
    }

    #[test]
    fn paragraphs_and_ner() {
        let input = "#begin document (p); part 001\n# newpar\np 1 0 Jan PROPN * - - - - (PER) -\n\n# newpar\np 1 0 Amsterdam PROPN * - - - - (LOC* -\np 1 1 Noord PROPN * - - - - *) -\n\n#end document\n";
        let c = parse_conll_str(input).unwrap();
        let d = &c.documents[0];
        assert_eq!(d.paragraph_starts, vec![0, 1]);
        assert_eq!(d.part, "001");
        assert_eq!(d.sentences[1].ner_spans(), vec![(0, 1, "LOC".to_string())]);
        assert_eq!(d.sentences[0].ner_type_at(0).as_deref(), Some("PER"));
        let again = parse_conll_str(&write_conll_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
    }
}
