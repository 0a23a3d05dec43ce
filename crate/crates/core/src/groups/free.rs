//! Reduced words in a free group.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse, stored as `±(index + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i32", into = "i32")]
pub struct Letter(i32);

impl Letter {
    pub fn generator(index: usize) -> Self {
        Letter(index as i32 + 1)
    }

    pub fn new(index: usize, inverse: bool) -> Self {
        let l = Letter::generator(index);
        if inverse {
            l.inverse()
        } else {
            l
        }
    }

    pub fn from_signed(value: i32) -> Option<Self> {
        (value != 0).then_some(Letter(value))
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn index(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position of this letter in the ordered generating set
    /// `a, a⁻¹, b, b⁻¹, …`.
    pub fn slot(self) -> usize {
        2 * self.index() + usize::from(self.is_inverse())
    }

    pub fn from_slot(slot: usize) -> Self {
        Letter::new(slot / 2, slot % 2 == 1)
    }
}

impl TryFrom<i32> for Letter {
    type Error = String;
    fn try_from(value: i32) -> std::result::Result<Self, String> {
        Letter::from_signed(value).ok_or_else(|| "letter index 0 is not allowed".to_string())
    }
}

impl From<Letter> for i32 {
    fn from(l: Letter) -> i32 {
        l.0
    }
}

impl fmt::Display for Letter {
    /// `a, b, c, …` for generators and `A, B, C, …` for their inverses;
    /// ranks above 26 fall back to `x27`/`X27`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index();
        if i < 26 {
            let base = if self.is_inverse() { b'A' } else { b'a' };
            write!(f, "{}", (base + i as u8) as char)
        } else if self.is_inverse() {
            write!(f, "X{}", i + 1)
        } else {
            write!(f, "x{}", i + 1)
        }
    }
}

/// A freely reduced word: no letter is adjacent to its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<Letter>", into = "Vec<Letter>")]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl From<Vec<Letter>> for FreeWord {
    fn from(letters: Vec<Letter>) -> Self {
        FreeWord::from_letters(letters)
    }
}

impl From<FreeWord> for Vec<Letter> {
    fn from(w: FreeWord) -> Self {
        w.letters
    }
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn letter(l: Letter) -> Self {
        FreeWord { letters: vec![l] }
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = FreeWord::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Builds a word from signed indices (`1` = a, `-1` = a⁻¹, `2` = b, …).
    pub fn from_signed(indices: &[i32]) -> Result<Self> {
        indices
            .iter()
            .map(|&i| Letter::from_signed(i).ok_or_else(|| Error::invalid("letter index 0 in word")))
            .collect::<Result<Vec<_>>>()
            .map(FreeWord::from_letters)
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

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Largest generator index used, plus one.
    pub fn rank_used(&self) -> usize {
        self.letters.iter().map(|l| l.index() + 1).max().unwrap_or(0)
    }

    /// Right-multiplies by one letter, cancelling at the seam.
    pub fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&l.inverse()) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let overlap =
            self.letters.iter().rev().zip(&other.letters).take_while(|(a, b)| **a == b.inverse()).count();
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * overlap);
        letters.extend_from_slice(&self.letters[..self.len() - overlap]);
        letters.extend_from_slice(&other.letters[overlap..]);
        FreeWord { letters }
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Prefix of length `n` (a vertex on the geodesic from e).
    pub fn prefix(&self, n: usize) -> FreeWord {
        FreeWord { letters: self.letters[..n].to_vec() }
    }

    /// Uniformly random reduced word of exactly `len` letters over `rank`
    /// generators.
    pub fn random<R: Rng + ?Sized>(rank: usize, len: usize, rng: &mut R) -> FreeWord {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for _ in 0..len {
            let l = match letters.last() {
                None => Letter::from_slot(rng.random_range(0..2 * rank)),
                Some(prev) => {
                    // skip the cancelling slot
                    let forbidden = prev.inverse().slot();
                    let mut s = rng.random_range(0..2 * rank - 1);
                    if s >= forbidden {
                        s += 1;
                    }
                    Letter::from_slot(s)
                }
            };
            letters.push(l);
        }
        FreeWord { letters }
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for FreeWord {
    type Err = Error;

    /// Parses `e`, or letters `a`–`z` (generators) and `A`–`Z` (inverses).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(FreeWord::identity());
        }
        s.chars()
            .map(|c| match c {
                'a'..='z' => Ok(Letter::new((c as u8 - b'a') as usize, false)),
                'A'..='Z' => Ok(Letter::new((c as u8 - b'A') as usize, true)),
                _ => Err(Error::invalid(format!("bad letter {c:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(FreeWord::from_letters)
    }
}
