//! Controlled-English layer: tokenizer with part-of-speech markers,
//! an exact grammar for the supported sentence fragment, and the
//! translation from fragment derivations to first-order logic.
//!
//! Sentences outside the fragment are not errors; they surface as
//! [`CoverageFailure`] values that feed the coverage metric.

pub mod grammar;
pub mod semantics;

pub use grammar::{parse_fragment, CoverageFailure, Derivation};
pub use semantics::{to_fol, SentenceSem};

use thiserror::Error;

/// Part-of-speech marker prefix carried by a token ("n:", "a:", "p:").
/// Marked tokens are accepted in the corresponding grammar slot even
/// when the lexicon does not know the word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PosMarker {
    None,
    Noun,
    Adjective,
    Proper,
}

/// One token of controlled-English input. `surface` preserves the
/// original spelling (marker stripped); `lemma` is the lowercased form
/// used by the grammar and semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AceToken {
    pub surface: String,
    pub marker: PosMarker,
    pub lemma: String,
}

impl AceToken {
    fn new(surface: &str, marker: PosMarker) -> AceToken {
        AceToken {
            surface: surface.to_string(),
            marker,
            lemma: surface.to_lowercase(),
        }
    }

    /// The possessive-clitic token produced by splitting "John's".
    pub fn possessive() -> AceToken {
        AceToken::new("'s", PosMarker::None)
    }

    pub fn is_possessive(&self) -> bool {
        self.lemma == "'s"
    }

    /// Sentence-final punctuation of the fragment.
    pub fn is_terminator(&self) -> bool {
        self.lemma == "."
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TokenizeError {
    #[error("POS marker {marker:?} with no word attached")]
    EmptyMarker { marker: String },
}

/// Split whitespace-separated text into [`AceToken`]s: strip POS
/// markers, split possessive "'s" and trailing punctuation into their
/// own tokens, and lowercase everything for the `lemma` field.
pub fn tokenize_ace(text: &str) -> Result<Vec<AceToken>, TokenizeError> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let (marker, rest) = if let Some(r) = chunk.strip_prefix("n:") {
            (PosMarker::Noun, r)
        } else if let Some(r) = chunk.strip_prefix("a:") {
            (PosMarker::Adjective, r)
        } else if let Some(r) = chunk.strip_prefix("p:") {
            (PosMarker::Proper, r)
        } else {
            (PosMarker::None, chunk)
        };
        if marker != PosMarker::None && rest.is_empty() {
            return Err(TokenizeError::EmptyMarker {
                marker: chunk.to_string(),
            });
        }
        if rest.is_empty() {
            continue;
        }

        // Peel sentence punctuation off the right edge ("runs." or
        // "rains,"), keeping each mark as its own token.
        let mut word = rest;
        let mut punct: Vec<&str> = Vec::new();
        while let Some(last) = word.chars().last() {
            if matches!(last, '.' | '!' | '?' | ',' | ';' | ':') && word.len() > 1 {
                punct.push(&word[word.len() - last.len_utf8()..]);
                word = &word[..word.len() - last.len_utf8()];
            } else {
                break;
            }
        }

        if let Some(stem) = word.strip_suffix("'s") {
            if !stem.is_empty() {
                out.push(AceToken::new(stem, marker));
                out.push(AceToken::possessive());
            } else {
                out.push(AceToken::new(word, marker));
            }
        } else if !word.is_empty() {
            out.push(AceToken::new(word, marker));
        }
        for p in punct.into_iter().rev() {
            out.push(AceToken::new(p, PosMarker::None));
        }
    }
    Ok(out)
}
