//! Words in finite-rank free groups.
//!
//! A [`Word`] is always freely reduced and carries the rank of the alphabet it
//! lives over. Rank-2 words use the generator names `x`, `y` (inverses `X`,
//! `Y`); any other rank uses `g0`, `g1`, ... (inverses `G0`, `G1`, ...).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator index {generator} out of range for rank {rank}")]
    GeneratorOutOfRange { generator: usize, rank: usize },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown generator `{name}` at byte {position} for rank {rank}")]
    UnknownGenerator {
        name: String,
        position: usize,
        rank: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub sign: Sign,
}

impl Letter {
    pub const fn new(generator: usize, sign: Sign) -> Self {
        Letter { generator, sign }
    }

    pub const fn pos(generator: usize) -> Self {
        Letter::new(generator, Sign::Plus)
    }

    pub const fn neg(generator: usize) -> Self {
        Letter::new(generator, Sign::Minus)
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.generator, self.sign.flip())
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.sign != other.sign
    }
}

/// Maximal run of one generator inside a reduced word, `generator^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syllable {
    pub generator: usize,
    pub exponent: i64,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// Freely reduce `raw` with a single stack pass.
    pub fn reduce<I>(raw: I, rank: usize) -> Result<Self, WordError>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in raw {
            if letter.generator >= rank {
                return Err(WordError::GeneratorOutOfRange {
                    generator: letter.generator,
                    rank,
                });
            }
            match stack.last() {
                Some(&top) if top.cancels(letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Ok(Word {
            rank,
            letters: stack,
        })
    }

    /// `generator^exponent` as a word.
    pub fn power_of(generator: usize, exponent: i64, rank: usize) -> Result<Self, WordError> {
        let sign = if exponent < 0 { Sign::Minus } else { Sign::Plus };
        let count = exponent.unsigned_abs() as usize;
        Word::reduce(std::iter::repeat_n(Letter::new(generator, sign), count), rank)
    }

    pub fn generator(generator: usize, rank: usize) -> Result<Self, WordError> {
        Word::power_of(generator, 1, rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Result<Word, WordError> {
        if self.rank != other.rank {
            return Err(WordError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        // Both operands are reduced, so cancellation only happens at the seam.
        let mut overlap = 0;
        let (a, b) = (&self.letters, &other.letters);
        while overlap < a.len()
            && overlap < b.len()
            && a[a.len() - 1 - overlap].cancels(b[overlap])
        {
            overlap += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * overlap);
        letters.extend_from_slice(&a[..a.len() - overlap]);
        letters.extend_from_slice(&b[overlap..]);
        Ok(Word {
            rank: self.rank,
            letters,
        })
    }

    /// Product of several words of one rank, left to right.
    pub fn product<'a, I>(rank: usize, words: I) -> Result<Word, WordError>
    where
        I: IntoIterator<Item = &'a Word>,
    {
        words
            .into_iter()
            .try_fold(Word::identity(rank), |acc, w| acc.multiply(w))
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut out = Word::identity(self.rank);
        for _ in 0..exponent.unsigned_abs() {
            out = out.multiply(&base).expect("same rank");
        }
        out
    }

    /// `left * self * right`.
    pub fn conjugate_by(&self, left: &Word, right: &Word) -> Result<Word, WordError> {
        left.multiply(self)?.multiply(right)
    }

    /// The same letters viewed over a larger alphabet.
    pub fn embed(&self, rank: usize) -> Result<Word, WordError> {
        if rank < self.rank {
            if let Some(l) = self.letters.iter().find(|l| l.generator >= rank) {
                return Err(WordError::GeneratorOutOfRange {
                    generator: l.generator,
                    rank,
                });
            }
        }
        Ok(Word {
            rank,
            letters: self.letters.clone(),
        })
    }

    pub fn syllables(&self) -> Vec<Syllable> {
        let mut out: Vec<Syllable> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some(s) if s.generator == l.generator => s.exponent += l.sign.as_i64(),
                _ => out.push(Syllable {
                    generator: l.generator,
                    exponent: l.sign.as_i64(),
                }),
            }
        }
        out
    }

    /// Sub-word of letters `range`, which is reduced because `self` is.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters[range].to_vec(),
        }
    }

    pub fn parse(text: &str, rank: usize) -> Result<Word, WordError> {
        parse_word(text, rank)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        let tokens: Vec<String> = self
            .syllables()
            .iter()
            .map(|s| {
                let name = generator_name(s.generator, self.rank, s.exponent < 0);
                match s.exponent.unsigned_abs() {
                    1 => name,
                    k => format!("{name}^{k}"),
                }
            })
            .collect();
        tokens.join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}]({})", self.rank, self.to_text())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

/// Deserialization assumes the rank-2 alphabet.
impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Word::parse(&text, 2).map_err(serde::de::Error::custom)
    }
}

pub fn generator_name(generator: usize, rank: usize, inverse: bool) -> String {
    if rank == 2 {
        match (generator, inverse) {
            (0, false) => "x".into(),
            (0, true) => "X".into(),
            (1, false) => "y".into(),
            _ => "Y".into(),
        }
    } else if inverse {
        format!("G{generator}")
    } else {
        format!("g{generator}")
    }
}

fn parse_word(text: &str, rank: usize) -> Result<Word, WordError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let mut raw: Vec<Letter> = Vec::new();
    while pos < bytes.len() {
        let c = bytes[pos];
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let start = pos;
        let (generator, inverse) = match c {
            b'e' => {
                pos += 1;
                (None, false)
            }
            b'x' | b'X' | b'y' | b'Y' if rank == 2 => {
                pos += 1;
                let g = if c.eq_ignore_ascii_case(&b'x') { 0 } else { 1 };
                (Some(g), c.is_ascii_uppercase())
            }
            b'g' | b'G' if rank != 2 => {
                pos += 1;
                let digits_start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if digits_start == pos {
                    return Err(WordError::Syntax {
                        position: pos,
                        message: "expected generator index after `g`".into(),
                    });
                }
                let idx: usize = text[digits_start..pos].parse().map_err(|_| WordError::Syntax {
                    position: digits_start,
                    message: "generator index too large".into(),
                })?;
                if idx >= rank {
                    return Err(WordError::UnknownGenerator {
                        name: text[start..pos].to_string(),
                        position: start,
                        rank,
                    });
                }
                (Some(idx), c == b'G')
            }
            _ if c.is_ascii_alphabetic() => {
                let mut end = pos + 1;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                return Err(WordError::UnknownGenerator {
                    name: text[start..end].to_string(),
                    position: start,
                    rank,
                });
            }
            _ => {
                return Err(WordError::Syntax {
                    position: pos,
                    message: format!("unexpected character `{}`", c as char),
                })
            }
        };

        let mut exponent: i64 = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let num_start = pos;
            if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                pos += 1;
            }
            let digits_start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if digits_start == pos {
                return Err(WordError::Syntax {
                    position: pos,
                    message: "expected integer exponent after `^`".into(),
                });
            }
            exponent = text[num_start..pos].parse().map_err(|_| WordError::Syntax {
                position: num_start,
                message: "exponent out of range".into(),
            })?;
        }

        if let Some(g) = generator {
            let signed = if inverse { -exponent } else { exponent };
            let sign = if signed < 0 { Sign::Minus } else { Sign::Plus };
            raw.extend(std::iter::repeat_n(Letter::new(g, sign), signed.unsigned_abs() as usize));
        }
    }
    Word::reduce(raw, rank)
}

/// Shorthand for rank-2 words in tests and builders; panics on bad input.
pub fn w2(text: &str) -> Word {
    Word::parse(text, 2).unwrap_or_else(|e| panic!("bad word literal {text:?}: {e}"))
}
