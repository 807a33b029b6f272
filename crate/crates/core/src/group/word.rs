use std::fmt;

use crate::error::{Error, Result};
use crate::graph::HalfEdgeColor;

/// A freely reduced word in the free group on generators `1..=ℓ`, with
/// `(j,+)` standing for generator `j` and `(j,-)` for its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<HalfEdgeColor>);

impl Word {
    /// Freely reduces `letters`.
    pub fn new(letters: impl IntoIterator<Item = HalfEdgeColor>) -> Self {
        let mut out: Vec<HalfEdgeColor> = Vec::new();
        for c in letters {
            if out.last() == Some(&c.inverse()) {
                out.pop();
            } else {
                out.push(c);
            }
        }
        Word(out)
    }

    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(j: usize) -> Self {
        Word(vec![HalfEdgeColor::plus(j)])
    }

    pub fn letters(&self) -> &[HalfEdgeColor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|c| c.inverse()).collect())
    }

    /// The reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Self {
        Word::new(self.0.iter().chain(&other.0).copied())
    }

    /// Parses letters `a, b, …` with inverses written `a⁻¹`, `a^-1` or `A`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("not a word: {s:?}"));
        let mut letters = Vec::new();
        let mut rest = s.trim();
        if rest == "1" || rest == "e" {
            return Ok(Word::identity());
        }
        while let Some(ch) = rest.chars().next() {
            rest = &rest[ch.len_utf8()..];
            let index = match ch {
                'a'..='z' => ch as usize - 'a' as usize + 1,
                'A'..='Z' => ch as usize - 'A' as usize + 1,
                _ => return Err(bad()),
            };
            let mut inverted = ch.is_ascii_uppercase();
            for suffix in ["⁻¹", "^-1"] {
                if let Some(r) = rest.strip_prefix(suffix) {
                    inverted = !inverted;
                    rest = r;
                }
            }
            letters.push(if inverted {
                HalfEdgeColor::minus(index)
            } else {
                HalfEdgeColor::plus(index)
            });
        }
        Ok(Word::new(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for c in &self.0 {
            if c.index <= 26 {
                write!(f, "{}", (b'a' + (c.index - 1) as u8) as char)?;
            } else {
                write!(f, "g{}", c.index)?;
            }
            if c.sign == crate::graph::Sign::Minus {
                write!(f, "⁻¹")?;
            }
        }
        Ok(())
    }
}
