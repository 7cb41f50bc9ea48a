//! Braid words: a small text grammar and evaluation under the
//! representation.
//!
//! A word is a whitespace-separated list of tokens `g` or `g^k`, with
//! `g ∈ {s1, s2, S, J, A12, A23, A13}` and `k` a nonzero integer. The
//! derived generators expand into standard generators while parsing:
//!
//! | token | expansion          |
//! |-------|--------------------|
//! | `S`   | `s1 s1 s2`         |
//! | `J`   | `s1 s2`            |
//! | `A12` | `s1 s1`            |
//! | `A23` | `s2 s2`            |
//! | `A13` | `s2 s1 s1 s2^-1`   |
//!
//! so a parsed word only contains `s1` and `s2` letters. `g^-k` expands to
//! the inverse of the expansion, repeated `k` times.

use std::fmt;

use thiserror::Error;

use super::build::{build_specialized, pure_braid_images, sigma_images};
use super::params::ARSpecialization;
use super::RepError;
use crate::linalg::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Sigma1,
    Sigma2,
    S,
    J,
    A12,
    A23,
    A13,
}

impl Generator {
    pub fn token(self) -> &'static str {
        match self {
            Generator::Sigma1 => "s1",
            Generator::Sigma2 => "s2",
            Generator::S => "S",
            Generator::J => "J",
            Generator::A12 => "A12",
            Generator::A23 => "A23",
            Generator::A13 => "A13",
        }
    }

    fn from_token(t: &str) -> Option<Self> {
        Some(match t {
            "s1" => Generator::Sigma1,
            "s2" => Generator::Sigma2,
            "S" => Generator::S,
            "J" => Generator::J,
            "A12" => Generator::A12,
            "A23" => Generator::A23,
            "A13" => Generator::A13,
            _ => return None,
        })
    }

    /// Expansion into standard-generator letters.
    pub fn expansion(self) -> Vec<Letter> {
        use Generator::*;
        let l = |g, e| Letter {
            generator: g,
            exponent: e,
        };
        match self {
            Sigma1 | Sigma2 => vec![l(self, 1)],
            S => vec![l(Sigma1, 1), l(Sigma1, 1), l(Sigma2, 1)],
            J => vec![l(Sigma1, 1), l(Sigma2, 1)],
            A12 => vec![l(Sigma1, 1), l(Sigma1, 1)],
            A23 => vec![l(Sigma2, 1), l(Sigma2, 1)],
            A13 => vec![l(Sigma2, 1), l(Sigma1, 1), l(Sigma1, 1), l(Sigma2, -1)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub exponent: i32,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.generator.token())
        } else {
            write!(f, "{}^{}", self.generator.token(), self.exponent)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BraidWord {
    pub letters: Vec<Letter>,
}

impl BraidWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    generator: l.generator,
                    exponent: -l.exponent,
                })
                .collect(),
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BraidWord {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_braid_word(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown generator {0:?}")]
    UnknownToken(String),
    #[error("zero exponent")]
    ZeroExponent,
    #[error("malformed exponent {0:?}")]
    MalformedExponent(String),
}

/// Parse failure; `position` is the character offset of the token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

pub fn parse_braid_word(text: &str) -> Result<BraidWord, ParseError> {
    let mut letters = Vec::new();
    let mut chars = text.char_indices().peekable();
    let char_pos = |byte: usize| text[..byte].chars().count();
    while let Some(&(start, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        let mut end = start;
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            end = i + c.len_utf8();
            chars.next();
        }
        let token = &text[start..end];
        let position = char_pos(start);
        let err = |kind| ParseError { position, kind };
        let (name, exp) = match token.split_once('^') {
            Some((name, exp)) => (name, Some(exp)),
            None => (token, None),
        };
        let generator = Generator::from_token(name)
            .ok_or_else(|| err(ParseErrorKind::UnknownToken(name.to_string())))?;
        let exponent = match exp {
            None => 1,
            Some(e) => {
                let digits = e.strip_prefix(['-', '+']).unwrap_or(e);
                if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                    return Err(err(ParseErrorKind::MalformedExponent(e.to_string())));
                }
                let k: i32 = e
                    .parse()
                    .map_err(|_| err(ParseErrorKind::MalformedExponent(e.to_string())))?;
                if k == 0 {
                    return Err(err(ParseErrorKind::ZeroExponent));
                }
                k
            }
        };
        match generator {
            Generator::Sigma1 | Generator::Sigma2 => letters.push(Letter {
                generator,
                exponent,
            }),
            _ => {
                let block = BraidWord {
                    letters: generator.expansion(),
                };
                let block = if exponent > 0 { block } else { block.inverse() };
                for _ in 0..exponent.unsigned_abs() {
                    letters.extend_from_slice(&block.letters);
                }
            }
        }
    }
    Ok(BraidWord { letters })
}

fn power(m: &CMatrix, inv: &CMatrix, k: i32) -> Result<CMatrix, RepError> {
    let base = if k >= 0 { m } else { inv };
    let mut e = k.unsigned_abs();
    let mut acc = CMatrix::identity(m.rows());
    let mut sq = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&sq)?;
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul(&sq)?;
        }
    }
    Ok(acc)
}

/// Ordered product of the letter images.
pub fn evaluate_word(word: &BraidWord, spec: &ARSpecialization) -> Result<CMatrix, RepError> {
    let (s1, s2) = sigma_images(spec)?;
    let (u, v) = build_specialized(spec);
    let mut pure = None;
    let mut acc = CMatrix::identity(3);
    for l in &word.letters {
        let m = match l.generator {
            Generator::Sigma1 => s1.clone(),
            Generator::Sigma2 => s2.clone(),
            Generator::S => u.clone(),
            Generator::J => v.clone(),
            g => {
                if pure.is_none() {
                    pure = Some(pure_braid_images(spec)?);
                }
                let (a12, a23, a13) = pure.as_ref().expect("just set");
                match g {
                    Generator::A12 => a12.clone(),
                    Generator::A23 => a23.clone(),
                    _ => a13.clone(),
                }
            }
        };
        let inv = m.inverse()?;
        acc = acc.mul(&power(&m, &inv, l.exponent)?)?;
    }
    Ok(acc)
}
