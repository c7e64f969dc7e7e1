//! Non-referring uses of the neuter pronoun `het`.
//!
//! Constructions come from a pattern list (weather verbs, clefts, fixed
//! expressions). A `het` outside any listed construction is ambiguous; the
//! default policy treats it as non-referring, since there are no rules for
//! recognising its referring uses.

use crate::conll::Sentence;
use crate::error::{Error, Result};

pub const DEFAULT_PLEONASTIC: &str = include_str!("../data/pleonastic.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PleonasticPolicy {
    /// Any `het` pronoun counts as pleonastic.
    #[default]
    AmbiguousIsPleonastic,
    /// Only `het` inside a listed construction counts as pleonastic.
    ListedOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Element {
    Slot,
    Any,
    Gap,
    Words(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    elements: Vec<Element>,
}

impl Pattern {
    pub fn parse(line: &str) -> Result<Pattern> {
        let elements: Vec<Element> = line
            .split_whitespace()
            .map(|w| match w {
                "HET" => Element::Slot,
                "*" => Element::Any,
                "..." => Element::Gap,
                _ => Element::Words(w.split('|').map(|x| x.to_lowercase()).collect()),
            })
            .collect();
        if elements.iter().filter(|e| **e == Element::Slot).count() != 1 {
            return Err(Error::Config(format!("pleonastic pattern {line:?} needs exactly one HET")));
        }
        Ok(Pattern { elements })
    }

    /// True when the pattern matches with its slot on token `at`.
    pub fn matches(&self, forms: &[String], at: usize) -> bool {
        (0..=at).any(|start| self.match_from(0, start, forms, at))
    }

    fn match_from(&self, el: usize, pos: usize, forms: &[String], at: usize) -> bool {
        let Some(e) = self.elements.get(el) else {
            return true;
        };
        match e {
            Element::Gap => (pos..=forms.len()).any(|p| self.match_from(el + 1, p, forms, at)),
            _ if pos >= forms.len() => false,
            Element::Slot => pos == at && self.match_from(el + 1, pos + 1, forms, at),
            Element::Any => self.match_from(el + 1, pos + 1, forms, at),
            Element::Words(ws) => ws.contains(&forms[pos]) && self.match_from(el + 1, pos + 1, forms, at),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PleonasticList {
    patterns: Vec<Pattern>,
}

impl PleonasticList {
    pub fn shipped() -> PleonasticList {
        PleonasticList::parse(DEFAULT_PLEONASTIC).expect("shipped pleonastic list is valid")
    }

    pub fn parse(text: &str) -> Result<PleonasticList> {
        let patterns = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(Pattern::parse)
            .collect::<Result<_>>()?;
        Ok(PleonasticList { patterns })
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// True when token `at` sits in a listed construction.
    pub fn listed(&self, sentence: &Sentence, at: usize) -> bool {
        let forms: Vec<String> = sentence.tokens.iter().map(|t| t.form.to_lowercase()).collect();
        self.patterns.iter().any(|p| p.matches(&forms, at))
    }
}

pub fn is_neuter_pronoun(form: &str) -> bool {
    matches!(form.to_lowercase().as_str(), "het" | "'t")
}

/// Decides whether the pronoun at token `at` is non-referring.
pub fn is_pleonastic(sentence: &Sentence, at: usize, list: &PleonasticList, policy: PleonasticPolicy) -> bool {
    let Some(tok) = sentence.tokens.get(at) else {
        return false;
    };
    if !is_neuter_pronoun(&tok.form) {
        return false;
    }
    list.listed(sentence, at) || policy == PleonasticPolicy::AmbiguousIsPleonastic
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conll::Token;

    fn sent(words: &[&str]) -> Sentence {
        Sentence::new(words.iter().enumerate().map(|(i, w)| Token::new(i, w, "-", "-")).collect()).unwrap()
    }

    #[test]
    fn weather_and_cleft() {
        let list = PleonasticList::shipped();
        assert!(list.listed(&sent(&["Het", "regent", "."]), 0));
        assert!(list.listed(&sent(&["Regent", "het", "nog", "?"]), 1));
        assert!(list.listed(&sent(&["Het", "is", "Jan", "die", "lachte", "."]), 0));
        assert!(!list.listed(&sent(&["Het", "boek", "ligt", "hier", "."]), 0));
        assert!(!list.listed(&sent(&["Hij", "las", "het", "."]), 2));
    }

    #[test]
    fn policies() {
        let list = PleonasticList::shipped();
        let s = sent(&["Hij", "las", "het", "."]);
        assert!(is_pleonastic(&s, 2, &list, PleonasticPolicy::AmbiguousIsPleonastic));
        assert!(!is_pleonastic(&s, 2, &list, PleonasticPolicy::ListedOnly));
        assert!(!is_pleonastic(&s, 0, &list, PleonasticPolicy::AmbiguousIsPleonastic));
        let rain = sent(&["Het", "regent"]);
        assert!(is_pleonastic(&rain, 0, &list, PleonasticPolicy::ListedOnly));
    }

    #[test]
    fn pattern_syntax() {
        assert!(Pattern::parse("regent").is_err());
        assert!(Pattern::parse("HET HET").is_err());
        let p = Pattern::parse("* HET ... dat").unwrap();
        let forms: Vec<String> = ["is", "het", "zo", "dat"].iter().map(|s| s.to_string()).collect();
        assert!(p.matches(&forms, 1));
        assert!(!p.matches(&forms, 0));
    }
}
