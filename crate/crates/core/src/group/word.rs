//! Letters, words and their text form.
//!
//! A word is written as space-separated generator labels, with a `^-1`
//! suffix marking an inverse letter. The identity is written `e`.

use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse, packed as `gen << 1 | inverse`.
///
/// The derived order puts `a < a^-1 < b < b^-1 < ...`, which is the letter
/// order used for every shortlex comparison in the crate.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u16);

impl Letter {
    pub const fn new(generator: usize, inverse: bool) -> Self {
        Letter(((generator as u16) << 1) | inverse as u16)
    }

    pub const fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub const fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub const fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Same letter with its generator index shifted by `offset`.
    pub const fn shifted(self, offset: usize) -> Self {
        Letter::new(self.generator() + offset, self.is_inverse())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.generator())
        } else {
            write!(f, "g{}", self.generator())
        }
    }
}

pub type Word = Vec<Letter>;

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inverse()).collect()
}

/// Shortlex comparison: shorter first, then lexicographic by letter order.
pub fn shortlex_cmp(a: &[Letter], b: &[Letter]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

pub const IDENTITY_TEXT: &str = "e";

/// Labels of the positive generators of a group, in generator order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    labels: Vec<String>,
}

impl Alphabet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            validate_label(l)?;
            if labels[..i].contains(l) {
                return Err(Error::spec(format!("duplicate generator label `{l}`")));
            }
        }
        if labels.len() > (u16::MAX >> 1) as usize {
            return Err(Error::spec("too many generators"));
        }
        Ok(Alphabet { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        let mut word = Word::new();
        for token in text.split_whitespace() {
            if token == IDENTITY_TEXT {
                continue;
            }
            let (label, inverse) = match token.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (token, false),
            };
            let g = self
                .index_of(label)
                .ok_or_else(|| Error::input(format!("unknown generator `{label}` in `{text}`")))?;
            word.push(Letter::new(g, inverse));
        }
        Ok(word)
    }

    pub fn format(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return IDENTITY_TEXT.to_string();
        }
        let mut out = String::new();
        for (i, l) in word.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&self.labels[l.generator()]);
            if l.is_inverse() {
                out.push_str("^-1");
            }
        }
        out
    }
}

fn validate_label(label: &str) -> Result<()> {
    let ok = !label.is_empty()
        && label != IDENTITY_TEXT
        && !label.contains('^')
        && !label.chars().any(char::is_whitespace);
    if ok {
        Ok(())
    } else {
        Err(Error::spec(format!("invalid generator label `{label}`")))
    }
}
