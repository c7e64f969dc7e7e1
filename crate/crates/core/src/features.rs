//! Agreement features (gender, number, animacy, person) and the rules for
//! deciding whether two mentions may refer to the same entity.
//!
//! Dutch third person pronouns may follow either grammatical or biological
//! gender, so an animate neuter noun (`het meisje`) agrees with `het` as
//! well as with `zij`/`haar` or `hij`.

use std::collections::HashMap;
use std::fmt;

use crate::conll::Sentence;
use crate::entity::{Mention, MentionType};
use crate::error::{Error, Result};
use crate::tags::{is_coordinating, is_plural_tag, PosClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Gender {
    Masc,
    Fem,
    Neuter,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Number {
    Sg,
    Pl,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Animacy {
    Animate,
    Inanimate,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Person {
    First,
    Second,
    Third,
    #[default]
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AgreementFeatures {
    pub gender: Gender,
    pub number: Number,
    pub animacy: Animacy,
    pub person: Person,
}

impl AgreementFeatures {
    pub const UNKNOWN: AgreementFeatures = AgreementFeatures {
        gender: Gender::Unknown,
        number: Number::Unknown,
        animacy: Animacy::Unknown,
        person: Person::Unknown,
    };

    pub fn new(gender: Gender, number: Number, animacy: Animacy, person: Person) -> Self {
        AgreementFeatures { gender, number, animacy, person }
    }
}

impl fmt::Display for AgreementFeatures {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}/{:?}/{:?}", self.gender, self.number, self.animacy, self.person)
    }
}

fn known_conflict<T: PartialEq>(a: T, b: T, unknown: T) -> bool {
    a != unknown && b != unknown && a != b
}

/// Two feature bundles agree when no field holds two distinct known values.
///
/// Gender has one exception: a neuter bundle marked animate agrees with a
/// masculine or feminine one.
pub fn compatible(a: &AgreementFeatures, b: &AgreementFeatures) -> bool {
    if known_conflict(a.number, b.number, Number::Unknown)
        || known_conflict(a.animacy, b.animacy, Animacy::Unknown)
        || known_conflict(a.person, b.person, Person::Unknown)
    {
        return false;
    }
    if known_conflict(a.gender, b.gender, Gender::Unknown) {
        let animate_neuter = |x: &AgreementFeatures, y: &AgreementFeatures| {
            x.gender == Gender::Neuter
                && x.animacy == Animacy::Animate
                && matches!(y.gender, Gender::Masc | Gender::Fem)
        };
        return animate_neuter(a, b) || animate_neuter(b, a);
    }
    true
}

const MASC: u8 = 1;
const FEM: u8 = 2;
const NEUTER: u8 = 4;

/// Features accumulated over the mentions of an entity: the set of known
/// values asserted by any member. Person is not accumulated because it
/// shifts with the speaker inside quoted speech.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EntityFeatures {
    genders: u8,
    singular: bool,
    plural: bool,
    animate: bool,
    inanimate: bool,
}

impl EntityFeatures {
    pub fn of(f: &AgreementFeatures) -> EntityFeatures {
        let mut e = EntityFeatures::default();
        e.add(f);
        e
    }

    pub fn add(&mut self, f: &AgreementFeatures) {
        self.genders |= match f.gender {
            Gender::Masc => MASC,
            Gender::Fem => FEM,
            Gender::Neuter => NEUTER,
            Gender::Unknown => 0,
        };
        match f.number {
            Number::Sg => self.singular = true,
            Number::Pl => self.plural = true,
            Number::Unknown => {}
        }
        match f.animacy {
            Animacy::Animate => self.animate = true,
            Animacy::Inanimate => self.inanimate = true,
            Animacy::Unknown => {}
        }
    }

    pub fn merged(&self, other: &EntityFeatures) -> EntityFeatures {
        EntityFeatures {
            genders: self.genders | other.genders,
            singular: self.singular || other.singular,
            plural: self.plural || other.plural,
            animate: self.animate || other.animate,
            inanimate: self.inanimate || other.inanimate,
        }
    }

    /// No hard conflict: not both singular and plural, not both animate and
    /// inanimate, and at most one gender except neuter alongside masculine
    /// or feminine for animate entities.
    pub fn is_consistent(&self) -> bool {
        if (self.singular && self.plural) || (self.animate && self.inanimate) {
            return false;
        }
        match self.genders {
            0 | MASC | FEM | NEUTER => true,
            g if g == NEUTER | MASC || g == NEUTER | FEM => self.animate,
            _ => false,
        }
    }

    pub fn admits(&self, other: &EntityFeatures) -> bool {
        self.merged(other).is_consistent()
    }
}

/// Closed-class table of Dutch personal, possessive and reflexive pronouns.
pub fn pronoun_features(form: &str) -> Option<AgreementFeatures> {
    use Animacy::Animate;
    use Gender::{Fem, Masc, Neuter};
    use Number::{Pl, Sg};
    use Person::*;
    let f = |g, n, a, p| Some(AgreementFeatures::new(g, n, a, p));
    match form.to_lowercase().as_str() {
        "ik" | "mij" | "me" | "mijn" | "m'n" | "mezelf" | "mijzelf" => f(Gender::Unknown, Sg, Animate, First),
        "wij" | "we" | "ons" | "onze" | "onszelf" => f(Gender::Unknown, Pl, Animate, First),
        "jij" | "je" | "jou" | "jouw" | "jezelf" | "jouzelf" => f(Gender::Unknown, Sg, Animate, Second),
        "u" | "uw" | "uzelf" => f(Gender::Unknown, Number::Unknown, Animate, Second),
        "jullie" => f(Gender::Unknown, Pl, Animate, Second),
        "hij" | "hem" | "zijn" | "z'n" | "hemzelf" => f(Masc, Sg, Animate, Third),
        // number stays open: singular "she" or plural "they"
        "zij" | "ze" => f(Fem, Number::Unknown, Animacy::Unknown, Third),
        "haar" | "d'r" | "haarzelf" => f(Fem, Sg, Animacy::Unknown, Third),
        "hen" | "hun" | "henzelf" => f(Gender::Unknown, Pl, Animacy::Unknown, Third),
        "het" | "'t" => f(Neuter, Sg, Animacy::Unknown, Third),
        "zich" | "zichzelf" => f(Gender::Unknown, Number::Unknown, Animacy::Unknown, Third),
        _ => None,
    }
}

/// Pronoun forms that double as another word class ("zijn" = to be,
/// "het" = article, "haar" = hair). Without a POS tag they are not treated
/// as pronouns.
pub fn is_ambiguous_pronoun_form(form: &str) -> bool {
    matches!(form.to_lowercase().as_str(), "zijn" | "het" | "haar" | "'t")
}

/// True when a token is a referential pronoun: a form in the closed class
/// whose POS tag is pronominal, or untagged and unambiguous.
pub fn is_pronoun_token(form: &str, pos: &str) -> bool {
    if pronoun_features(form).is_none() {
        return false;
    }
    match PosClass::of(pos) {
        PosClass::Pronoun => true,
        PosClass::Unknown => !is_ambiguous_pronoun_form(form),
        _ => false,
    }
}

/// Noun lexicon mapping lowercased nouns to gender, number and animacy.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: HashMap<String, AgreementFeatures>,
}

pub const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.txt");

impl Lexicon {
    pub fn shipped() -> Lexicon {
        Lexicon::parse(DEFAULT_LEXICON).expect("shipped lexicon is valid")
    }

    pub fn parse(text: &str) -> Result<Lexicon> {
        let mut entries = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Config(format!("lexicon line {}: {line:?}", lineno + 1));
            if cols.len() != 4 {
                return Err(bad());
            }
            let gender = match cols[1] {
                "masc" => Gender::Masc,
                "fem" => Gender::Fem,
                "neuter" => Gender::Neuter,
                "unknown" => Gender::Unknown,
                _ => return Err(bad()),
            };
            let number = match cols[2] {
                "sg" => Number::Sg,
                "pl" => Number::Pl,
                "unknown" => Number::Unknown,
                _ => return Err(bad()),
            };
            let animacy = match cols[3] {
                "animate" => Animacy::Animate,
                "inanimate" => Animacy::Inanimate,
                "unknown" => Animacy::Unknown,
                _ => return Err(bad()),
            };
            entries.insert(
                cols[0].to_lowercase(),
                AgreementFeatures::new(gender, number, animacy, Person::Third),
            );
        }
        Ok(Lexicon { entries })
    }

    pub fn get(&self, word: &str) -> Option<&AgreementFeatures> {
        self.entries.get(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Derives agreement features for a mention from its head token.
pub fn assign_features(mention: &Mention, sentence: &Sentence, lexicon: &Lexicon) -> AgreementFeatures {
    let Some(head) = sentence.tokens.get(mention.head) else {
        return AgreementFeatures::UNKNOWN;
    };
    match mention.surface_type {
        MentionType::Pronoun => pronoun_features(&head.form).unwrap_or_default(),
        MentionType::Name => {
            let mut f = AgreementFeatures::UNKNOWN;
            match sentence.ner_type_at(mention.head).as_deref().map(ner_class) {
                Some(NerClass::Person) => {
                    f.animacy = Animacy::Animate;
                    f.number = Number::Sg;
                    f.person = Person::Third;
                }
                Some(NerClass::Location) => {
                    f.animacy = Animacy::Inanimate;
                    f.number = Number::Sg;
                    f.person = Person::Third;
                }
                Some(NerClass::Organization) => f.person = Person::Third,
                _ => {}
            }
            if is_coordination(mention, sentence) {
                f.number = Number::Pl;
                f.gender = Gender::Unknown;
            }
            f
        }
        MentionType::Nominal => {
            let mut f = lexicon
                .get(&head.form)
                .or_else(|| head.lemma().and_then(|l| lexicon.get(l)))
                .copied()
                .unwrap_or_default();
            if is_plural_tag(&head.pos) {
                f.number = Number::Pl;
                f.gender = Gender::Unknown;
            }
            if is_coordination(mention, sentence) {
                f.number = Number::Pl;
                f.gender = Gender::Unknown;
            }
            f
        }
    }
}

/// A coordinating conjunction between two nominal tokens inside the span.
fn is_coordination(mention: &Mention, sentence: &Sentence) -> bool {
    let end = mention.span.end.min(sentence.tokens.len().saturating_sub(1));
    let toks = &sentence.tokens[mention.span.start.min(end)..=end];
    (1..toks.len().saturating_sub(1)).any(|i| {
        is_coordinating(&toks[i].pos, &toks[i].form)
            && toks[..i].iter().any(|x| PosClass::of(&x.pos).is_nominal())
            && toks[i + 1..].iter().any(|x| PosClass::of(&x.pos).is_nominal())
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NerClass {
    Person,
    Location,
    Organization,
    Misc,
}

pub fn ner_class(label: &str) -> NerClass {
    match label.to_ascii_uppercase().as_str() {
        "PER" | "PERSON" | "B-PER" | "I-PER" => NerClass::Person,
        "LOC" | "GPE" | "LOCATION" | "FAC" => NerClass::Location,
        "ORG" | "ORGANIZATION" | "NORP" => NerClass::Organization,
        _ => NerClass::Misc,
    }
}
