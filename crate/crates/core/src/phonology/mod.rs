//! Declarative phonological knowledge: segment inventory, syllable roles,
//! syllabification and the monotonic process constraints attached to lexicon
//! entries.

pub mod inventory;
pub mod processes;
pub mod syllable;

pub use inventory::{Segment, SegmentInventory, SecondaryGesture, SecondaryPolicy, VowelLength};
pub use processes::{build_word, final_devoicing, voiced_in_onset, WordProblem};
pub use syllable::{syllabify, PhonWord, Syllable, SyllableRole};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PhonologyError {
    #[error("unknown segment id `{0}`")]
    UnknownSegment(String),
    #[error("empty word")]
    EmptyWord,
    #[error("unsyllabifiable: word contains no vowel")]
    NoVowel,
    #[error("boundary item `{0}` may only appear word-initially or word-finally")]
    BoundaryInside(String),
    #[error("duplicate segment id or alias `{0}`")]
    DuplicateSegment(String),
    #[error("the lattice does not define the required type `{0}`")]
    MissingType(String),
    #[error("segment `{seg}`: {msg}")]
    InvalidSegment { seg: String, msg: String },
}
