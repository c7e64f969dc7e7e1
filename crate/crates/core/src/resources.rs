//! Word lists and maps shipped with the crate. Every list can be replaced
//! by a user-supplied file with the same format.

use std::collections::HashSet;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::features::Lexicon;
use crate::pleonastic::{PleonasticList, PleonasticPolicy};
use crate::tree::LabelMap;

pub const DEFAULT_SPEECH_VERBS: &str = include_str!("../data/speech_verbs.txt");

#[derive(Debug, Clone)]
pub struct Resources {
    pub labels: LabelMap,
    pub lexicon: Lexicon,
    pub pleonastic: PleonasticList,
    pub pleonastic_policy: PleonasticPolicy,
    pub speech_verbs: HashSet<String>,
}

impl Default for Resources {
    fn default() -> Self {
        Resources {
            labels: LabelMap::default(),
            lexicon: Lexicon::shipped(),
            pleonastic: PleonasticList::shipped(),
            pleonastic_policy: PleonasticPolicy::default(),
            speech_verbs: parse_word_list(DEFAULT_SPEECH_VERBS),
        }
    }
}

impl Resources {
    /// Process-wide copy of the shipped resources.
    pub fn shipped() -> &'static Resources {
        static SHIPPED: OnceLock<Resources> = OnceLock::new();
        SHIPPED.get_or_init(Resources::default)
    }

    pub fn is_speech_verb(&self, form: &str) -> bool {
        self.speech_verbs.contains(&form.to_lowercase())
    }

    pub fn load_labels(&mut self, path: &Path) -> Result<()> {
        self.labels = LabelMap::parse(&read(path)?)?;
        Ok(())
    }

    pub fn load_lexicon(&mut self, path: &Path) -> Result<()> {
        self.lexicon = Lexicon::parse(&read(path)?)?;
        Ok(())
    }

    pub fn load_pleonastic(&mut self, path: &Path) -> Result<()> {
        self.pleonastic = PleonasticList::parse(&read(path)?)?;
        Ok(())
    }

    pub fn load_speech_verbs(&mut self, path: &Path) -> Result<()> {
        self.speech_verbs = parse_word_list(&read(path)?);
        Ok(())
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// One lowercased word per line; `#` starts a comment.
pub fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect()
}
