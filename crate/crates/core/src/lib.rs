//! Rule-based coreference resolution for Dutch, with CoNLL-2012 I/O,
//! evaluation metrics, error analysis and corpus experiments.

pub mod analysis;
pub mod assignment;
pub mod cli;
pub mod conll;
pub mod entity;
pub mod error;
pub mod experiments;
pub mod features;
pub mod mentions;
pub mod metrics;
pub mod pleonastic;
pub mod quotes;
pub mod report;
pub mod resources;
pub mod sieve;
pub mod split;
pub mod stats;
pub mod synth;
pub mod tags;
pub mod tree;

pub use conll::{parse_conll, parse_conll_str, write_conll, write_conll_string, Corpus, Document, Sentence, Token};
pub use entity::{Entity, EntitySet, Mention, MentionType, Span};
pub use error::{Error, Result};
pub use resources::Resources;
