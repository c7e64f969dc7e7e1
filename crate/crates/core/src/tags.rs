//! Coarse part-of-speech classes over the tagsets commonly found in Dutch
//! CoNLL files: CGN/Lassy (`N(soort,ev,...)`), Alpino short tags (`noun`,
//! `name`), Universal Dependencies (`NOUN`, `PROPN`) and Penn (`NN`, `NNP`).

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PosClass {
    Noun,
    ProperNoun,
    Pronoun,
    Determiner,
    Adjective,
    Verb,
    Numeral,
    Conjunction,
    Adposition,
    Adverb,
    Punctuation,
    Other,
    /// No tag given (`-` or `_`).
    Unknown,
}

impl PosClass {
    pub fn of(tag: &str) -> PosClass {
        let tag = tag.trim();
        if tag.is_empty() || tag == "-" || tag == "_" {
            return PosClass::Unknown;
        }
        let base = tag
            .split(['(', '|', '['])
            .next()
            .unwrap_or(tag);
        // CGN / Lassy: the prefix before the parenthesis is decisive.
        if tag.contains('(') {
            let lower = tag.to_ascii_lowercase();
            return match base {
                "N" if lower.starts_with("n(eigen") => PosClass::ProperNoun,
                "N" => PosClass::Noun,
                "SPEC" if lower.contains("deeleigen") => PosClass::ProperNoun,
                "VNW" if lower.contains(",det") || lower.contains("(bez") => {
                    // possessives are pronominal; demonstrative determiners are not
                    if lower.contains("(bez") {
                        PosClass::Pronoun
                    } else {
                        PosClass::Determiner
                    }
                }
                "VNW" => PosClass::Pronoun,
                "LID" => PosClass::Determiner,
                "ADJ" => PosClass::Adjective,
                "WW" => PosClass::Verb,
                "TW" => PosClass::Numeral,
                "VG" => PosClass::Conjunction,
                "VZ" => PosClass::Adposition,
                "BW" => PosClass::Adverb,
                "LET" => PosClass::Punctuation,
                // Alpino long tags: noun(de,count,sg), name('PER'), ...
                "noun" => PosClass::Noun,
                "name" | "proper_name" => PosClass::ProperNoun,
                "pronoun" | "pron" => PosClass::Pronoun,
                "determiner" | "det" => PosClass::Determiner,
                "adjective" | "adj" => PosClass::Adjective,
                "verb" => PosClass::Verb,
                "number" | "num" => PosClass::Numeral,
                "conj" | "vg" => PosClass::Conjunction,
                "preposition" | "prep" => PosClass::Adposition,
                "adverb" | "adv" => PosClass::Adverb,
                "punct" => PosClass::Punctuation,
                _ => PosClass::Other,
            };
        }
        match base {
            "NOUN" | "NN" | "NNS" | "noun" | "N" => PosClass::Noun,
            "PROPN" | "NNP" | "NNPS" | "name" | "SPEC" => PosClass::ProperNoun,
            "PRON" | "PRP" | "PRP$" | "pron" | "pronoun" | "VNW" => PosClass::Pronoun,
            "DET" | "DT" | "det" | "LID" | "WDT" | "PDT" => PosClass::Determiner,
            "ADJ" | "JJ" | "JJR" | "JJS" | "adj" => PosClass::Adjective,
            "VERB" | "AUX" | "VB" | "VBD" | "VBG" | "VBN" | "VBP" | "VBZ" | "MD" | "verb"
            | "WW" => PosClass::Verb,
            "NUM" | "CD" | "num" | "TW" => PosClass::Numeral,
            "CCONJ" | "SCONJ" | "CC" | "vg" | "VG" | "comp" => PosClass::Conjunction,
            "ADP" | "IN" | "prep" | "VZ" => PosClass::Adposition,
            "ADV" | "RB" | "adv" | "BW" => PosClass::Adverb,
            "PUNCT" | "punct" | "LET" | "." | "," | ":" | "``" | "''" => PosClass::Punctuation,
            _ => PosClass::Other,
        }
    }

    pub fn is_nominal(self) -> bool {
        matches!(self, PosClass::Noun | PosClass::ProperNoun | PosClass::Pronoun)
    }
}

/// True when the tag itself marks plural number.
pub fn is_plural_tag(tag: &str) -> bool {
    let lower = tag.to_ascii_lowercase();
    tag == "NNS"
        || tag == "NNPS"
        || lower.contains(",mv")
        || lower.contains("number=plur")
        || lower.contains(",pl)")
        || lower.contains(",pl,")
}

/// True when the tag marks a coordinating conjunction.
pub fn is_coordinating(tag: &str, form: &str) -> bool {
    let lower = tag.to_ascii_lowercase();
    if lower.starts_with("vg(neven") || tag == "CCONJ" || tag == "CC" {
        return true;
    }
    PosClass::of(tag) == PosClass::Conjunction
        && !lower.starts_with("vg(onder")
        && tag != "SCONJ"
        && matches!(form.to_lowercase().as_str(), "en" | "of" | "maar" | "noch")
}
